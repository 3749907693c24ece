// cmem/token_table.hpp

// Copyright 2026  The cmem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CMEM_TOKEN_TABLE_HPP_
#define CMEM_TOKEN_TABLE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cmem/tensor.hpp"

namespace cmem {

// Fixed per-word vectors. Default dimension 13.
struct TokenTable {
  std::size_t dim = 13;
  std::string source;  // "synthetic" or the file it was loaded from
  std::map<std::string, std::vector<Scalar>> rows;
};

// The thirteen words used by the corpora: "zero".."nine", then the colors.
std::vector<std::string> default_vocab();

// Seeded unit-norm random rows, deterministic in (vocab order, dim, seed).
TokenTable synth_token_table(const std::vector<std::string>& vocab,
                             std::size_t dim, std::uint64_t seed);

// Text format: one line per token, "<token> <v0> <v1> ...". Dimensions must
// agree across lines; duplicates are rejected.
TokenTable load_token_table(const std::filesystem::path& path);

// Concatenates table rows in token order: [len(tokens) * dim]. Unknown
// tokens are named in the error.
Tensor embed_text(const std::vector<std::string>& tokens,
                  const TokenTable& table);

}  // namespace cmem

#endif  // CMEM_TOKEN_TABLE_HPP_
