//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_HASH_H_
#define RXPJ_HASH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace rxpj {

// 64-bit FNV-1a; stable across platforms, used for provenance records and
// deterministic tie-breaking.
constexpr std::uint64_t fnv1a(std::string_view data,
                              std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (char c: data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Hex FNV-1a of a file's bytes. Throws IoError.
std::string file_digest(const std::filesystem::path &path);

std::string hex64(std::uint64_t v);

} // namespace rxpj

#endif // RXPJ_HASH_H_
