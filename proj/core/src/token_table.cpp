// cmem/token_table.cpp

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

#include "cmem/token_table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cmem/common.hpp"
#include "cmem/dataset.hpp"
#include "cmem/rng.hpp"

namespace cmem {

std::vector<std::string> default_vocab() {
  std::vector<std::string> vocab;
  for (int d = 0; d <= 9; ++d) vocab.push_back(digit_name(d));
  for (int c = 0; c < kNumColors; ++c) vocab.push_back(color_name(c));
  return vocab;
}

TokenTable synth_token_table(const std::vector<std::string>& vocab,
                             std::size_t dim, std::uint64_t seed) {
  CMEM_CHECK(!vocab.empty()) << "token table: empty vocabulary";
  CMEM_CHECK(dim > 0) << "token table: dimension must be positive";
  TokenTable table;
  table.dim = dim;
  table.source = "synthetic";
  Rng rng(derive_seed(seed, "token_table"));
  for (const std::string& token : vocab) {
    CMEM_CHECK(!table.rows.count(token))
        << "token table: duplicate token \"" << token << "\"";
    std::vector<Scalar> row(dim);
    Scalar norm2 = 0;
    for (Scalar& v : row) {
      v = rng.normal();
      norm2 += v * v;
    }
    CMEM_CHECK(norm2 > 0) << "token table: degenerate draw";
    const Scalar inv = 1.0 / std::sqrt(norm2);
    for (Scalar& v : row) v *= inv;
    table.rows.emplace(token, std::move(row));
  }
  return table;
}

TokenTable load_token_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  CMEM_CHECK(in.good()) << "token table: cannot open " << path.string();
  TokenTable table;
  table.dim = 0;
  table.source = path.string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;  // blank line
    std::vector<Scalar> row;
    Scalar v;
    while (ls >> v) row.push_back(v);
    CMEM_CHECK(!ls.fail() || ls.eof())
        << "token table: bad number on line " << lineno << " of "
        << path.string();
    CMEM_CHECK(!row.empty()) << "token table: token \"" << token
                             << "\" has no values (line " << lineno << ")";
    if (table.dim == 0) table.dim = row.size();
    CMEM_CHECK(row.size() == table.dim)
        << "token table: line " << lineno << " has " << row.size()
        << " values, expected " << table.dim;
    CMEM_CHECK(!table.rows.count(token))
        << "token table: duplicate token \"" << token << "\" (line " << lineno
        << ")";
    table.rows.emplace(std::move(token), std::move(row));
  }
  CMEM_CHECK(!table.rows.empty()) << "token table: " << path.string()
                                  << " holds no rows";
  return table;
}

Tensor embed_text(const std::vector<std::string>& tokens,
                  const TokenTable& table) {
  CMEM_CHECK(!tokens.empty()) << "embed_text: empty token list";
  Tensor out({tokens.size() * table.dim});
  std::size_t at = 0;
  for (const std::string& token : tokens) {
    auto it = table.rows.find(token);
    CMEM_CHECK(it != table.rows.end())
        << "embed_text: token \"" << token << "\" not in table ("
        << table.source << ")";
    for (Scalar v : it->second) out[at++] = v;
  }
  return out;
}

}  // namespace cmem
