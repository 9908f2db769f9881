//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_TESTS_SYNTHETIC_H_
#define RXPJ_TESTS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rxpj::synth {

// Template reactions in the style of patent extracts: amide coupling,
// esterification, Suzuki coupling, Williamson ether, Boc removal, nitro
// reduction and reductive amination, with occasional reagents. Distinct
// strings, deterministic for a seed.
std::vector<std::string> reactions(std::size_t n, std::uint64_t seed,
                                   bool with_reagents = true);

// Molecule strings from the same building blocks.
std::vector<std::string> molecules(std::size_t n, std::uint64_t seed);

// Random strings over the SMILES alphabet with balanced brackets; not
// necessarily chemistry.
std::string random_smiles_text(std::mt19937_64 &rng, std::size_t max_atoms);

// Adds `:k` atom maps to every atom of a molecule written with explicit
// bracket atoms where needed. Only handles the organic subset.
std::string add_atom_maps(const std::string &molecule, int &next_map);

} // namespace rxpj::synth

#endif // RXPJ_TESTS_SYNTHETIC_H_
