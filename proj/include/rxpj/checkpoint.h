//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_CHECKPOINT_H_
#define RXPJ_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "rxpj/judge.h"

namespace rxpj {

// Binary layout, all integers little-endian:
//
//   "RXPJ"                    4 bytes
//   format version            u32 (kCheckpointVersion)
//   total file size           u64
//   header length             u32, then that many bytes of UTF-8 text,
//                             one key=value per line: dims, feature
//                             switches, threshold, free-form metadata
//                             (`meta.<key>`), the vocabulary (`vocab.<id>`)
//                             and the lexicon (`lexicon.<n>=<word>\t<g>`)
//   tensor count              u32
//   per tensor                u32 name length, name, u32 rank (always 2),
//                             u32 rows, u32 cols, rows*cols f32 row-major
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Artifacts artifacts;
  // Config echo, source paths and provenance hashes; keys without `meta.`.
  std::vector<std::pair<std::string, std::string>> metadata;
};

void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt);

// Validates magic, version, byte count and tensor shapes. Throws IoError
// when the file cannot be read and CheckpointError when it is malformed.
Checkpoint load_checkpoint(const std::filesystem::path &path);

std::string metadata_value(const Checkpoint &ckpt, const std::string &key,
                           const std::string &fallback = "");

} // namespace rxpj

#endif // RXPJ_CHECKPOINT_H_
