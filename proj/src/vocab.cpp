//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/vocab.h"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rxpj {

Vocab::Vocab() {
  add(kPad);
  add(kUnk);
}

Vocab Vocab::build(const std::vector<TokenSequence> &streams,
                   std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto &seq: streams)
    for (const auto &tok: seq)
      ++counts[tok];

  std::vector<std::pair<std::string, std::size_t>> ordered;
  for (auto &[tok, c]: counts)
    if (c >= min_count && tok != kPad && tok != kUnk)
      ordered.emplace_back(tok, c);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto &a, const auto &b) {
                     return a.second > b.second;
                   });

  Vocab v;
  for (const auto &[tok, c]: ordered)
    v.add(tok);
  return v;
}

TokenId Vocab::add(std::string_view token) {
  auto [it, inserted] = ids_.try_emplace(std::string(token),
                                         static_cast<TokenId>(tokens_.size()));
  if (inserted)
    tokens_.emplace_back(token);
  return it->second;
}

TokenId Vocab::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

std::vector<TokenId> Vocab::encode(const TokenSequence &seq) const {
  std::vector<TokenId> out;
  out.reserve(seq.size());
  for (const auto &tok: seq)
    out.push_back(id(tok));
  return out;
}

} // namespace rxpj
