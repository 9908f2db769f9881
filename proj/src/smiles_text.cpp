//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/smiles_text.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "rxpj/errors.h"

namespace rxpj {
namespace {
std::vector<std::string> split_group(std::string_view group) {
  std::vector<std::string> molecules;
  if (group.empty())
    return molecules;

  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = group.find('.', begin);
    std::string_view mol = group.substr(begin, dot - begin);
    if (mol.empty())
      throw MalformedReaction("empty molecule in group '" + std::string(group)
                              + "'");
    molecules.emplace_back(mol);
    if (dot == std::string_view::npos)
      break;
    begin = dot + 1;
  }
  return molecules;
}

bool is_upper(char c) {
  return std::isupper(static_cast<unsigned char>(c)) != 0;
}

bool is_lower(char c) {
  return std::islower(static_cast<unsigned char>(c)) != 0;
}

bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

constexpr std::array<std::string_view, 10> kAliphaticOrganic = {
  "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I",
};

constexpr std::array<std::string_view, 6> kAromaticOrganic = {
  "b", "c", "n", "o", "p", "s",
};

// Bracket body (without the brackets and maps) -> bare symbol, or empty when
// the atom must stay bracketed.
std::string_view unwrap_target(std::string_view body) {
  std::size_t sym_len = 0;
  if (body.size() >= 2 && (body.substr(0, 2) == "Cl" || body.substr(0, 2) == "Br"))
    sym_len = 2;
  else if (!body.empty())
    sym_len = 1;
  else
    return { };

  std::string_view symbol = body.substr(0, sym_len);
  const bool aliphatic = std::find(kAliphaticOrganic.begin(),
                                   kAliphaticOrganic.end(), symbol)
                         != kAliphaticOrganic.end();
  const bool aromatic = std::find(kAromaticOrganic.begin(),
                                  kAromaticOrganic.end(), symbol)
                        != kAromaticOrganic.end();
  if (!aliphatic && !aromatic)
    return { };

  std::string_view rest = body.substr(sym_len);
  if (!rest.empty()) {
    if (rest[0] != 'H')
      return { };
    for (char c: rest.substr(1))
      if (!is_digit(c))
        return { };
    if (aromatic && symbol != "c")
      return { };
  }
  return symbol;
}
} // namespace

RawReaction parse_reaction(std::string_view text) {
  const std::size_t first = text.find('>');
  const std::size_t second = first == std::string_view::npos
                                 ? std::string_view::npos
                                 : text.find('>', first + 1);
  if (first == std::string_view::npos || second == std::string_view::npos
      || text.find('>', second + 1) != std::string_view::npos)
    throw MalformedReaction("expected exactly two '>' separators in '"
                            + std::string(text) + "'");

  RawReaction r;
  r.reactants = split_group(text.substr(0, first));
  r.reagents = split_group(text.substr(first + 1, second - first - 1));
  r.products = split_group(text.substr(second + 1));
  if (r.reactants.empty())
    throw MalformedReaction("empty reactant group in '" + std::string(text)
                            + "'");
  if (r.products.empty())
    throw MalformedReaction("empty product group in '" + std::string(text)
                            + "'");
  return r;
}

std::string join_group(const std::vector<std::string> &molecules) {
  std::string out;
  for (std::size_t i = 0; i < molecules.size(); ++i) {
    if (i > 0)
      out += '.';
    out += molecules[i];
  }
  return out;
}

std::string render_reaction(const RawReaction &r) {
  return join_group(r.reactants) + '>' + join_group(r.reagents) + '>'
         + join_group(r.products);
}

std::string strip_atom_maps(std::string_view molecule) {
  std::string out;
  out.reserve(molecule.size());

  std::size_t i = 0;
  while (i < molecule.size()) {
    const char c = molecule[i];
    if (c == ']')
      throw UnbalancedBrackets("unmatched ']' in '" + std::string(molecule)
                               + "'");
    if (c != '[') {
      out += c;
      ++i;
      continue;
    }

    const std::size_t close = molecule.find(']', i + 1);
    const std::size_t nested = molecule.find('[', i + 1);
    if (close == std::string_view::npos
        || (nested != std::string_view::npos && nested < close))
      throw UnbalancedBrackets("unterminated '[' in '" + std::string(molecule)
                               + "'");

    std::string body;
    std::string_view inner = molecule.substr(i + 1, close - i - 1);
    for (std::size_t k = 0; k < inner.size(); ++k) {
      if (inner[k] == ':' && k + 1 < inner.size() && is_digit(inner[k + 1])) {
        ++k;
        while (k + 1 < inner.size() && is_digit(inner[k + 1]))
          ++k;
        continue;
      }
      body += inner[k];
    }

    std::string_view bare = unwrap_target(body);
    if (bare.empty()) {
      out += '[';
      out += body;
      out += ']';
    } else {
      out += bare;
    }
    i = close + 1;
  }
  return out;
}

TokenSequence tokenize_atomwise(std::string_view molecule) {
  TokenSequence tokens;
  tokens.reserve(molecule.size());

  bool in_bracket = false;
  std::size_t i = 0;
  while (i < molecule.size()) {
    const char c = molecule[i];
    std::size_t len = 1;
    if (in_bracket) {
      if (c == ']')
        in_bracket = false;
      else if (is_upper(c) && i + 1 < molecule.size() && is_lower(molecule[i + 1]))
        len = 2;
    } else if (c == '[') {
      in_bracket = true;
    } else if (i + 1 < molecule.size()
               && ((c == 'C' && molecule[i + 1] == 'l')
                   || (c == 'B' && molecule[i + 1] == 'r'))) {
      len = 2;
    }
    tokens.emplace_back(molecule.substr(i, len));
    i += len;
  }
  return tokens;
}

RawReaction normalize_reaction(const RawReaction &r) {
  auto normalize_group = [](const std::vector<std::string> &group) {
    std::vector<std::string> out;
    out.reserve(group.size());
    for (const auto &mol: group)
      out.push_back(strip_atom_maps(mol));
    std::sort(out.begin(), out.end());
    return out;
  };

  RawReaction n;
  n.reactants = normalize_group(r.reactants);
  n.reagents = normalize_group(r.reagents);
  n.products = normalize_group(r.products);
  return n;
}

std::string join_tokens(const TokenSequence &tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0)
      out += sep;
    out += tokens[i];
  }
  return out;
}

} // namespace rxpj
