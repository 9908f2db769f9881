//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rxpj/errors.h"

namespace rxpj {
namespace {
std::vector<Mat<float> *> tensors(ModelParams<float> &p) {
  std::vector<Mat<float> *> out;
  p.for_each([&out](const std::string &, Mat<float> &m) { out.push_back(&m); });
  return out;
}

void zero(ModelParams<float> &p) {
  for (Mat<float> *m: tensors(p))
    m->setZero();
}
} // namespace

Adam::Adam(const ModelParams<float> &shape, const TrainOptions &opts)
    : opts_(opts), m_(ModelParams<float>::zeros(shape.dims)),
      v_(ModelParams<float>::zeros(shape.dims)) { }

void Adam::step(ModelParams<float> &params, ModelParams<float> &grads) {
  const auto ps = tensors(params), gs = tensors(grads), ms = tensors(m_),
             vs = tensors(v_);

  if (opts_.clip_norm > 0) {
    double sq = 0;
    for (const Mat<float> *g: gs)
      sq += static_cast<double>(g->cast<double>().squaredNorm());
    const double norm = std::sqrt(sq);
    if (norm > opts_.clip_norm) {
      const auto scale = static_cast<float>(opts_.clip_norm / norm);
      for (Mat<float> *g: gs)
        *g *= scale;
    }
  }

  ++t_;
  const double b1 = opts_.beta1, b2 = opts_.beta2;
  const auto c1 = static_cast<float>(1.0 / (1.0 - std::pow(b1, t_)));
  const auto c2 = static_cast<float>(1.0 / (1.0 - std::pow(b2, t_)));
  const auto lr = static_cast<float>(opts_.learning_rate);
  const auto eps = static_cast<float>(opts_.adam_epsilon);

  for (std::size_t k = 0; k < ps.size(); ++k) {
    auto m = ms[k]->array();
    auto v = vs[k]->array();
    const auto g = gs[k]->array();
    m = static_cast<float>(b1) * m + static_cast<float>(1 - b1) * g;
    v = static_cast<float>(b2) * v + static_cast<float>(1 - b2) * g * g;
    ps[k]->array() -= lr * (m * c1) / ((v * c2).sqrt() + eps);
  }
  if (params.embedding.rows() > 0)
    params.embedding.row(kPadId).setZero();
}

double accuracy(std::span<const EncodedExample> data,
                const ModelParams<float> &params, double threshold) {
  if (data.empty())
    return 0.0;
  std::size_t correct = 0;
  for (const auto &ex: data) {
    const bool pred = predict_probability(ex, params) >= threshold;
    correct += pred == (ex.label >= 0.5) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainResult train(const std::vector<EncodedExample> &train_set,
                  const std::vector<EncodedExample> &dev_set,
                  ModelParams<float> init, const TrainOptions &opts,
                  const EpochCallback &on_epoch) {
  TrainResult result;
  result.params = init;
  ModelParams<float> params = std::move(init);
  ModelParams<float> grads = ModelParams<float>::zeros(params.dims);
  Adam adam(params, opts);

  std::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t { 0 });

  const std::size_t bs = std::max<std::size_t>(1, opts.batch_size);
  double best_dev = std::numeric_limits<double>::infinity();
  std::vector<EncodedExample> batch;
  batch.reserve(bs);

  for (std::size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      batch.clear();
      for (std::size_t k = start; k < std::min(order.size(), start + bs); ++k)
        batch.push_back(train_set[order[k]]);

      zero(grads);
      loss_sum += loss_and_gradient<float>(batch, params, grads);
      ++batches;
      adam.step(params, grads);
      if (!params.all_finite())
        throw NonFiniteGradient("parameters became non-finite at epoch "
                                + std::to_string(epoch));
    }

    EpochStats st;
    st.epoch = epoch;
    st.train_loss = batches > 0 ? loss_sum / static_cast<double>(batches) : 0;
    if (opts.track_train_accuracy)
      st.train_accuracy = accuracy(train_set, params, opts.threshold);
    if (!dev_set.empty()) {
      st.dev_loss = batch_loss<float>(dev_set, params);
      st.dev_accuracy = accuracy(dev_set, params, opts.threshold);
      if (std::isnan(st.dev_loss))
        throw DivergedTraining("dev loss is NaN at epoch "
                               + std::to_string(epoch));
      if (st.dev_loss < best_dev) {
        best_dev = st.dev_loss;
        result.params = params;
        result.best_epoch = epoch;
      }
    } else {
      result.params = params;
      result.best_epoch = epoch;
    }

    result.history.push_back(st);
    if (on_epoch)
      on_epoch(st);
  }
  return result;
}

} // namespace rxpj
