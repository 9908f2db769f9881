//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_TESTS_GRADCHECK_H_
#define RXPJ_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rxpj/model.h"

namespace rxpj::gradcheck {

struct Result {
  double max_rel_error = 0;
  std::string worst;  // tensor(row,col)
  std::size_t checked = 0;
};

// Random tiny batch: ids in [1, vocab), a few out-of-range ids (read as
// <UNK>) and some sequences longer than max_len.
inline std::vector<EncodedExample> random_batch(const ModelDims &dims,
                                                std::size_t n,
                                                std::mt19937_64 &rng) {
  std::uniform_int_distribution<TokenId> id(1, static_cast<TokenId>(dims.vocab) - 1);
  std::uniform_int_distribution<std::size_t> len(0, dims.max_len + 2);
  auto seq = [&] {
    std::vector<TokenId> s(len(rng));
    for (auto &t: s)
      t = rng() % 11 == 0 ? static_cast<TokenId>(dims.vocab + 3) : id(rng);
    return s;
  };
  std::vector<EncodedExample> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].reactant = seq();
    out[k].product = seq();
    out[k].rsd = seq();
    if (out[k].reactant.empty())
      out[k].reactant.push_back(id(rng));
    out[k].label = static_cast<double>(k % 2);
  }
  return out;
}

// |a - n| / max(|a| + |n|, floor), central differences with `step`.
inline Result check(const ModelParams<double> &params,
                    const std::vector<EncodedExample> &batch,
                    double step = 1e-4, double floor = 1e-7) {
  ModelParams<double> grads = ModelParams<double>::zeros(params.dims);
  loss_and_gradient<double>(batch, params, grads);

  std::vector<Mat<double> *> g;
  grads.for_each([&](const std::string &, Mat<double> &m) { g.push_back(&m); });

  Result r;
  ModelParams<double> p = params;
  std::size_t k = 0;
  p.for_each([&](const std::string &name, Mat<double> &m) {
    const Mat<double> &gm = *g[k++];
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index row = 0; row < m.rows(); ++row) {
        if (name == "embedding" && row == kPadId)
          continue;
        const double keep = m(row, c);
        m(row, c) = keep + step;
        const double up = batch_loss<double>(batch, p);
        m(row, c) = keep - step;
        const double down = batch_loss<double>(batch, p);
        m(row, c) = keep;
        const double num = (up - down) / (2 * step);
        const double ana = gm(row, c);
        const double rel = std::abs(ana - num)
                           / std::max(std::abs(ana) + std::abs(num), floor);
        ++r.checked;
        if (rel > r.max_rel_error) {
          r.max_rel_error = rel;
          r.worst = name + "(" + std::to_string(row) + "," + std::to_string(c)
                    + ")";
        }
      }
  });
  return r;
}

} // namespace rxpj::gradcheck

#endif // RXPJ_TESTS_GRADCHECK_H_
