//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_RSD_H_
#define RXPJ_RSD_H_

#include <cstddef>
#include <string>
#include <vector>

#include "rxpj/smiles_text.h"

namespace rxpj {

// Edit applied to one source position.
enum class RsdOp {
  kNop,      // `_`: token kept
  kReplace,  // AR: token replaced by `replacement`
  kRemove,   // RR: token deleted
};

// One slot of a reaction symbol distance. Besides its own edit, a slot may
// carry an AD insertion that is emitted right before the position. The
// trailing sentinel slot has no source token and only ever holds an
// insertion (or nothing).
struct RsdTag {
  RsdOp op = RsdOp::kNop;
  std::string replacement;
  TokenSequence inserted;

  bool has_insertion() const { return !inserted.empty(); }
  bool operator==(const RsdTag &) const = default;
};

struct RsdSequence {
  std::vector<RsdTag> tags;  // source_len + 1 slots
  std::size_t source_len = 0;
  std::size_t target_len = 0;

  // Edit count: one per AR/RR plus one per inserted token.
  std::size_t cost() const;
};

// Token-level Levenshtein distance with unit costs.
std::size_t edit_distance(const TokenSequence &source,
                          const TokenSequence &target);

// Minimal edit script from source to target. Traceback prefers, at every
// cell, match > AR > RR > AD; insertions before the same position are merged
// in target order.
RsdSequence generate_rsd(const TokenSequence &source,
                         const TokenSequence &target);

// Replays the tags over `source`. Throws LengthMismatch when the sequence was
// built for a different source length.
TokenSequence apply_rsd(const TokenSequence &source, const RsdSequence &rsd);

// One vocabulary token per slot: `_`, `RR`, `AR:<tok>`, `AD:<toks>`. A slot
// with both an insertion and its own edit becomes `AD:<toks>|RR` or
// `AD:<toks>|AR:<tok>`.
TokenSequence rsd_tokens(const RsdSequence &rsd);

} // namespace rxpj

#endif // RXPJ_RSD_H_
