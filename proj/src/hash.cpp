//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/hash.h"

#include <array>
#include <cstdio>
#include <fstream>

#include "rxpj/errors.h"

namespace rxpj {

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf { };
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf.data(), 16);
}

std::string file_digest(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open " + path.string());
  std::uint64_t h = fnv1a({ });
  std::array<char, 1 << 16> buf;
  while (is) {
    is.read(buf.data(), buf.size());
    h = fnv1a(std::string_view(buf.data(), static_cast<std::size_t>(is.gcount())),
              h);
  }
  return hex64(h);
}

} // namespace rxpj
