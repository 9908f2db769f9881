//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/rsd.h"

#include <algorithm>
#include <string>
#include <vector>

#include "rxpj/errors.h"

namespace rxpj {

std::size_t RsdSequence::cost() const {
  std::size_t c = 0;
  for (const auto &t: tags) {
    c += t.inserted.size();
    if (t.op != RsdOp::kNop)
      ++c;
  }
  return c;
}

std::size_t edit_distance(const TokenSequence &source,
                          const TokenSequence &target) {
  const std::size_t m = target.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j)
    prev[j] = j;

  for (std::size_t i = 1; i <= source.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = prev[j - 1]
                               + (source[i - 1] == target[j - 1] ? 0 : 1);
      cur[j] = std::min({ diag, prev[j] + 1, cur[j - 1] + 1 });
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

RsdSequence generate_rsd(const TokenSequence &source,
                         const TokenSequence &target) {
  const std::size_t n = source.size(), m = target.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> d((n + 1) * w);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t & {
    return d[i * w + j];
  };

  for (std::size_t j = 0; j <= m; ++j)
    at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1)
                               + (source[i - 1] == target[j - 1] ? 0 : 1);
      at(i, j) = std::min({ diag, at(i - 1, j) + 1, at(i, j - 1) + 1 });
    }
  }

  RsdSequence rsd;
  rsd.source_len = n;
  rsd.target_len = m;
  rsd.tags.resize(n + 1);

  // Insertions are discovered back to front; collected reversed per slot.
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && source[i - 1] == target[j - 1]
        && here == at(i - 1, j - 1)) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && here == at(i - 1, j - 1) + 1) {
      rsd.tags[i - 1].op = RsdOp::kReplace;
      rsd.tags[i - 1].replacement = target[j - 1];
      --i;
      --j;
    } else if (i > 0 && here == at(i - 1, j) + 1) {
      rsd.tags[i - 1].op = RsdOp::kRemove;
      --i;
    } else {
      rsd.tags[i].inserted.push_back(target[j - 1]);
      --j;
    }
  }
  for (auto &t: rsd.tags)
    std::reverse(t.inserted.begin(), t.inserted.end());
  return rsd;
}

TokenSequence apply_rsd(const TokenSequence &source, const RsdSequence &rsd) {
  if (rsd.source_len != source.size()
      || rsd.tags.size() != source.size() + 1)
    throw LengthMismatch("RSD built for " + std::to_string(rsd.source_len)
                         + " tokens applied to "
                         + std::to_string(source.size()));

  TokenSequence out;
  out.reserve(rsd.target_len);
  for (std::size_t i = 0; i <= source.size(); ++i) {
    const RsdTag &t = rsd.tags[i];
    out.insert(out.end(), t.inserted.begin(), t.inserted.end());
    if (i == source.size())
      break;
    switch (t.op) {
    case RsdOp::kNop:
      out.push_back(source[i]);
      break;
    case RsdOp::kReplace:
      out.push_back(t.replacement);
      break;
    case RsdOp::kRemove:
      break;
    }
  }
  return out;
}

TokenSequence rsd_tokens(const RsdSequence &rsd) {
  TokenSequence out;
  out.reserve(rsd.tags.size());
  for (const auto &t: rsd.tags) {
    std::string tok;
    if (t.has_insertion())
      tok = "AD:" + join_tokens(t.inserted);

    std::string own;
    switch (t.op) {
    case RsdOp::kNop:
      break;
    case RsdOp::kReplace:
      own = "AR:" + t.replacement;
      break;
    case RsdOp::kRemove:
      own = "RR";
      break;
    }

    if (tok.empty())
      tok = own.empty() ? "_" : own;
    else if (!own.empty())
      tok += '|' + own;
    out.push_back(std::move(tok));
  }
  return out;
}

} // namespace rxpj
