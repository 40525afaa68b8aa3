// Copyright 2026 The Lexaspect Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sample usage:
//   lexaspect gen-synthetic --seed 42 --out-corpus syn.jsonl --out-vectors syn.tsv
//   lexaspect crossval --corpus syn.jsonl --vectors syn.tsv --mode lookup \
//       --language de --domain captions --k 10 --seed 42
//   lexaspect zeroshot --corpus syn.jsonl --vectors syn.tsv --mode lookup \
//       --language de --domain captions

#include <iostream>
#include <string>
#include <vector>

#include "lexaspect/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lexaspect::cli::run(args, std::cout, std::cerr);
}
