//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_VOCAB_H_
#define RXPJ_VOCAB_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rxpj/model.h"
#include "rxpj/smiles_text.h"

namespace rxpj {

// Dense token ids; <PAD> is 0 and <UNK> is 1.
class Vocab {
public:
  static constexpr std::string_view kPad = "<PAD>";
  static constexpr std::string_view kUnk = "<UNK>";

  Vocab();

  // Tokens seen at least min_count times, ordered by descending count then
  // by token text.
  static Vocab build(const std::vector<TokenSequence> &streams,
                     std::size_t min_count = 1);

  // Appends a token if new; returns its id.
  TokenId add(std::string_view token);

  TokenId id(std::string_view token) const;
  const std::string &token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  std::vector<TokenId> encode(const TokenSequence &seq) const;

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

} // namespace rxpj

#endif // RXPJ_VOCAB_H_
