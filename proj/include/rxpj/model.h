//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_MODEL_H_
#define RXPJ_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rxpj {

using TokenId = std::int32_t;
constexpr TokenId kPadId = 0;
constexpr TokenId kUnkId = 1;

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

struct ModelDims {
  std::size_t vocab = 2;
  std::size_t embed = 64;    // d
  std::size_t hidden = 128;  // H
  std::size_t max_len = 100; // h

  bool operator==(const ModelDims &) const = default;
};

// Gate order everywhere: input, forget, output, cell candidate.
enum Gate : std::size_t { kInput = 0, kForget = 1, kOutput = 2, kCell = 3 };
inline constexpr std::array<const char *, 4> kGateNames = { "i", "f", "u", "c" };

template <class T>
struct LstmWeights {
  std::array<Mat<T>, 4> wx;  // H x 2d
  std::array<Mat<T>, 4> wh;  // H x H
  std::array<Mat<T>, 4> b;   // H x 1
};

// One BiLSTM. Both Siamese branches read this storage.
template <class T>
struct BranchWeights {
  LstmWeights<T> fwd;
  LstmWeights<T> bwd;
};

template <class T>
struct ModelParams {
  ModelDims dims;
  Mat<T> embedding;  // V x d, row kPadId pinned to zero
  BranchWeights<T> branch;
  Mat<T> mlp_w;      // 2H x 4H
  Mat<T> mlp_b;      // 2H x 1
  Mat<T> out_w;      // 1 x 2H
  Mat<T> out_b;      // 1 x 1

  static ModelParams zeros(const ModelDims &dims);
  // Embedding rows U(-0.05, 0.05); recurrent and head weights
  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)); forget-gate bias 1.
  static ModelParams random(const ModelDims &dims, std::uint64_t seed);

  // Side 0 and side 1 of the Siamese pair.
  BranchWeights<T> &siamese_branch(int /*side*/) { return branch; }
  const BranchWeights<T> &siamese_branch(int /*side*/) const { return branch; }

  // Visits every tensor with a stable name, in a fixed order.
  template <class F>
  void for_each(F &&f);
  template <class F>
  void for_each(F &&f) const;

  std::size_t parameter_count() const;
  bool all_finite() const;

  template <class U>
  ModelParams<U> cast() const;
};

// Input to one branch: column t is the fused 2d-vector for position t.
// Masked-out columns are never read.
template <class T>
struct BranchInput {
  Mat<T> values;                   // 2d x h
  std::vector<std::uint8_t> mask;  // h flags
};

struct Prediction {
  double probability = 0.5;
  bool label = false;
};

// d x h matrix of embedding rows. Sequences longer than h are cut at the
// tail, shorter ones are zero-filled. Ids outside the table read as <UNK>.
template <class T>
Mat<T> embed(std::span<const TokenId> ids, const Mat<T> &embedding,
             std::size_t max_len);

// Stacks seq_emb over rsd_emb; the mask covers positions where either
// sequence has a token. Throws ShapeMismatch.
template <class T>
BranchInput<T> fuse(const Mat<T> &seq_emb, const Mat<T> &rsd_emb,
                    std::size_t seq_len, std::size_t rsd_len);

template <class T>
struct StepState {
  Vec<T> i, f, u, g, c, h;
};

template <class T>
StepState<T> lstm_step(const Vec<T> &x, const Vec<T> &h_prev,
                       const Vec<T> &c_prev, const LstmWeights<T> &w);

// Final forward state concatenated with the final backward state (2H).
template <class T>
Vec<T> bilstm(const BranchInput<T> &input, const BranchWeights<T> &w);

template <class T>
T sigmoid(T x);

// Raw MLP output for a pair of branch inputs.
template <class T>
T forward_logit(const BranchInput<T> &m1, const BranchInput<T> &m2,
                const ModelParams<T> &params);

template <class T>
Prediction forward(const BranchInput<T> &m1, const BranchInput<T> &m2,
                   const ModelParams<T> &params, double threshold = 0.5);

inline constexpr double kBceEpsilon = 1e-7;

double bce_loss(double y_hat, double y);
double bce_loss(std::span<const double> y_hat, std::span<const double> y);

// Token ids of one training/inference example.
struct EncodedExample {
  std::vector<TokenId> reactant;
  std::vector<TokenId> product;
  std::vector<TokenId> rsd;
  double label = 0;
};

template <class T>
std::pair<BranchInput<T>, BranchInput<T>>
branch_inputs(const EncodedExample &ex, const ModelParams<T> &params);

template <class T>
double predict_probability(const EncodedExample &ex,
                           const ModelParams<T> &params);

// Mean BCE over the batch and its exact gradient, accumulated into `grads`
// (which must have the same shapes as params). The <PAD> embedding row
// gradient is always zero. Throws NonFiniteGradient.
template <class T>
double loss_and_gradient(std::span<const EncodedExample> batch,
                         const ModelParams<T> &params, ModelParams<T> &grads);

template <class T>
double batch_loss(std::span<const EncodedExample> batch,
                  const ModelParams<T> &params);

// ---------------------------------------------------------------------------

template <class T>
template <class F>
void ModelParams<T>::for_each(F &&f) {
  f(std::string("embedding"), embedding);
  for (int dir = 0; dir < 2; ++dir) {
    LstmWeights<T> &w = dir == 0 ? branch.fwd : branch.bwd;
    const std::string prefix = dir == 0 ? "lstm.fwd." : "lstm.bwd.";
    for (std::size_t g = 0; g < 4; ++g) {
      f(prefix + "wx_" + kGateNames[g], w.wx[g]);
      f(prefix + "wh_" + kGateNames[g], w.wh[g]);
      f(prefix + "b_" + kGateNames[g], w.b[g]);
    }
  }
  f(std::string("mlp.w"), mlp_w);
  f(std::string("mlp.b"), mlp_b);
  f(std::string("out.w"), out_w);
  f(std::string("out.b"), out_b);
}

template <class T>
template <class F>
void ModelParams<T>::for_each(F &&f) const {
  const_cast<ModelParams<T> *>(this)->for_each(
      [&f](const std::string &name, Mat<T> &m) {
        f(name, static_cast<const Mat<T> &>(m));
      });
}

template <class T>
template <class U>
ModelParams<U> ModelParams<T>::cast() const {
  ModelParams<U> out = ModelParams<U>::zeros(dims);
  std::vector<const Mat<T> *> src;
  for_each([&](const std::string &, const Mat<T> &m) { src.push_back(&m); });
  std::size_t k = 0;
  out.for_each([&](const std::string &, Mat<U> &m) {
    m = src[k++]->template cast<U>();
  });
  return out;
}

} // namespace rxpj

#endif // RXPJ_MODEL_H_
