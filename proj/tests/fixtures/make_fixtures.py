#!/usr/bin/env python3
"""Writes the small hand-checkable dry-run corpus used by the acceptance suite.

Vectors are 2-D sentence vectors. state sits at (+1, 0), non-state at
(-1, 0), and classes dropped by the default policy at (0, 1). One state
utterance per marked language sits at (-1, 0), so it is always predicted as
the non-state class: that single error is what the expected counts encode.
"""
import json

rows = []  # (id, lang, domain, label, vector)

def add(lang, domain, label, n, vec, tag):
    dom = "cap" if domain == "captions" else "wiki"
    for i in range(n):
        rows.append((f"{lang}-{dom}-{tag}{i:02d}", lang, domain, label, vec))

# Mono-lingual captions, German: 19 + 1 mislabeled state, 20 atelic, 3 telic.
add("de", "captions", "state", 19, (1.0, 0.0), "s")
add("de", "captions", "state", 1, (-1.0, 0.0), "x")
add("de", "captions", "atelic", 20, (-1.0, 0.0), "a")
add("de", "captions", "telic", 3, (0.0, 1.0), "t")
# Mono-lingual Wikipedia, German: 10 state, 10 telic, 2 atelic.
add("de", "wikipedia", "state", 10, (1.0, 0.0), "s")
add("de", "wikipedia", "telic", 10, (-1.0, 0.0), "t")
add("de", "wikipedia", "atelic", 2, (0.0, 1.0), "a")
# Cross-lingual captions: fa clean, tr with one mislabeled state.
add("fa", "captions", "state", 4, (1.0, 0.0), "s")
add("fa", "captions", "atelic", 4, (-1.0, 0.0), "a")
add("fa", "captions", "telic", 1, (0.0, 1.0), "t")
add("tr", "captions", "state", 4, (1.0, 0.0), "s")
add("tr", "captions", "state", 1, (-1.0, 0.0), "x")
add("tr", "captions", "atelic", 4, (-1.0, 0.0), "a")
add("tr", "captions", "telic", 1, (0.0, 1.0), "t")

with open("dryrun.jsonl", "w") as f:
    for id_, lang, domain, label, _ in rows:
        f.write(json.dumps({"id": id_, "language": lang, "domain": domain,
                            "tokens": ["tok-" + id_], "label": label},
                           separators=(",", ":")) + "\n")
with open("dryrun.tsv", "w") as f:
    f.write("2\n")
    for id_, *_, vec in rows:
        f.write(f"{id_}\t{vec[0]} {vec[1]}\n")
