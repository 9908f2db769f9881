//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_TRAINER_H_
#define RXPJ_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rxpj/model.h"

namespace rxpj {

struct TrainOptions {
  std::size_t epochs = 30;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  double clip_norm = 5.0;  // <= 0 disables clipping
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 1;
  double threshold = 0.5;  // for the accuracies in the history
  bool track_train_accuracy = true;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0;  // mean of the minibatch losses
  double train_accuracy = 0;
  double dev_loss = 0;
  double dev_accuracy = 0;
};

struct TrainResult {
  ModelParams<float> params;  // best-dev parameters
  std::vector<EpochStats> history;
  std::size_t best_epoch = 0;
};

// Adaptive-moment optimizer with global-norm clipping.
class Adam {
public:
  Adam(const ModelParams<float> &shape, const TrainOptions &opts);

  void step(ModelParams<float> &params, ModelParams<float> &grads);
  std::size_t steps() const { return t_; }

private:
  TrainOptions opts_;
  ModelParams<float> m_, v_;
  std::size_t t_ = 0;
};

double accuracy(std::span<const EncodedExample> data,
                const ModelParams<float> &params, double threshold = 0.5);

using EpochCallback = std::function<void(const EpochStats &)>;

// Minibatch training from `init`. The dev set selects the returned
// parameters (lowest dev loss, earliest epoch on ties); with an empty dev set
// the final parameters are returned. Throws NonFiniteGradient, or
// DivergedTraining when the dev loss becomes NaN.
TrainResult train(const std::vector<EncodedExample> &train_set,
                  const std::vector<EncodedExample> &dev_set,
                  ModelParams<float> init, const TrainOptions &opts,
                  const EpochCallback &on_epoch = { });

} // namespace rxpj

#endif // RXPJ_TRAINER_H_
