//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_SMILES_TEXT_H_
#define RXPJ_SMILES_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace rxpj {

using TokenSequence = std::vector<std::string>;

// A reaction in `reactants>reagents>products` form, molecules split on '.'.
// Reactants and products are never empty; reagents may be.
struct RawReaction {
  std::vector<std::string> reactants;
  std::vector<std::string> reagents;
  std::vector<std::string> products;

  bool operator==(const RawReaction &) const = default;
};

// Throws MalformedReaction unless the text has exactly two '>' separators and
// non-empty reactant and product groups.
RawReaction parse_reaction(std::string_view text);

std::string render_reaction(const RawReaction &r);

// Molecules of one group joined with '.'.
std::string join_group(const std::vector<std::string> &molecules);

// Removes `:<n>` atom-map suffixes from bracket atoms. A bracket atom left
// holding only an organic-subset element and an optional hydrogen count is
// unwrapped to the bare symbol (`[CH2:3]` -> `C`). Aromatic n/p/b keep their
// brackets when they carry hydrogens, since `[nH]` is not the same atom as
// `n`. Throws UnbalancedBrackets.
std::string strip_atom_maps(std::string_view molecule);

// Atom-wise tokens. Outside brackets, Cl and Br are single tokens and every
// other character is its own token. Inside brackets, an uppercase letter plus
// an optional lowercase letter forms one element token; everything else is a
// single character.
TokenSequence tokenize_atomwise(std::string_view molecule);

// Strips atom maps from every molecule and sorts each group. Idempotent.
RawReaction normalize_reaction(const RawReaction &r);

std::string join_tokens(const TokenSequence &tokens, std::string_view sep = "");

} // namespace rxpj

#endif // RXPJ_SMILES_TEXT_H_
