//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/model.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rxpj/errors.h"

namespace rxpj {
namespace {
template <class T>
void fill_uniform(Mat<T> &m, double limit, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      m(r, c) = static_cast<T>(dist(rng));
}

TokenId resolve_id(TokenId id, std::size_t vocab) {
  if (id < 0 || static_cast<std::size_t>(id) >= vocab)
    return vocab > static_cast<std::size_t>(kUnkId) ? kUnkId : kPadId;
  return id;
}

// Per-direction activations, one column per processed step.
template <class T>
struct DirectionTrace {
  std::vector<Eigen::Index> positions;
  Mat<T> i, f, u, g, c, h;
};

template <class T>
DirectionTrace<T> run_direction(const BranchInput<T> &input,
                                const LstmWeights<T> &w, bool reverse) {
  DirectionTrace<T> tr;
  const auto h_len = static_cast<Eigen::Index>(input.mask.size());
  for (Eigen::Index k = 0; k < h_len; ++k) {
    const Eigen::Index t = reverse ? h_len - 1 - k : k;
    if (input.mask[t] != 0)
      tr.positions.push_back(t);
  }

  const Eigen::Index hidden = w.wh[0].rows();
  const auto steps = static_cast<Eigen::Index>(tr.positions.size());
  tr.i.resize(hidden, steps);
  tr.f.resize(hidden, steps);
  tr.u.resize(hidden, steps);
  tr.g.resize(hidden, steps);
  tr.c.resize(hidden, steps);
  tr.h.resize(hidden, steps);

  Vec<T> h_prev = Vec<T>::Zero(hidden), c_prev = Vec<T>::Zero(hidden);
  Vec<T> a(hidden);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const auto x = input.values.col(tr.positions[k]);

    a.noalias() = w.wx[kInput] * x;
    a.noalias() += w.wh[kInput] * h_prev;
    a += w.b[kInput];
    tr.i.col(k) = a.unaryExpr([](T v) { return sigmoid(v); });

    a.noalias() = w.wx[kForget] * x;
    a.noalias() += w.wh[kForget] * h_prev;
    a += w.b[kForget];
    tr.f.col(k) = a.unaryExpr([](T v) { return sigmoid(v); });

    a.noalias() = w.wx[kOutput] * x;
    a.noalias() += w.wh[kOutput] * h_prev;
    a += w.b[kOutput];
    tr.u.col(k) = a.unaryExpr([](T v) { return sigmoid(v); });

    a.noalias() = w.wx[kCell] * x;
    a.noalias() += w.wh[kCell] * h_prev;
    a += w.b[kCell];
    tr.g.col(k) = a.array().tanh();

    tr.c.col(k) = tr.f.col(k).cwiseProduct(c_prev)
                  + tr.i.col(k).cwiseProduct(tr.g.col(k));
    tr.h.col(k) = tr.c.col(k).array().tanh().matrix().cwiseProduct(
        tr.u.col(k));

    h_prev = tr.h.col(k);
    c_prev = tr.c.col(k);
  }
  return tr;
}

template <class T>
Vec<T> final_state(const DirectionTrace<T> &tr, Eigen::Index hidden) {
  if (tr.positions.empty())
    return Vec<T>::Zero(hidden);
  return tr.h.col(tr.h.cols() - 1);
}

// Backpropagates dh_last through one direction; accumulates weight gradients
// and input-column gradients.
template <class T>
void backprop_direction(const BranchInput<T> &input, const LstmWeights<T> &w,
                        const DirectionTrace<T> &tr, const Vec<T> &dh_last,
                        LstmWeights<T> &gw, Mat<T> &dinput) {
  const Eigen::Index hidden = w.wh[0].rows();
  const auto steps = static_cast<Eigen::Index>(tr.positions.size());
  if (steps == 0)
    return;

  Vec<T> dh = dh_last, dc = Vec<T>::Zero(hidden);
  Vec<T> dh_prev(hidden), zeros = Vec<T>::Zero(hidden);
  std::array<Vec<T>, 4> da;
  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    const auto x = input.values.col(tr.positions[k]);
    const Vec<T> h_prev = k > 0 ? Vec<T>(tr.h.col(k - 1)) : zeros;
    const Vec<T> c_prev = k > 0 ? Vec<T>(tr.c.col(k - 1)) : zeros;
    const auto i = tr.i.col(k).array();
    const auto f = tr.f.col(k).array();
    const auto u = tr.u.col(k).array();
    const auto g = tr.g.col(k).array();
    const Eigen::Array<T, Eigen::Dynamic, 1> tc = tr.c.col(k).array().tanh();

    const Eigen::Array<T, Eigen::Dynamic, 1> du = dh.array() * tc;
    dc.array() += dh.array() * u * (T(1) - tc * tc);

    da[kInput] = (dc.array() * g * i * (T(1) - i)).matrix();
    da[kForget] = (dc.array() * c_prev.array() * f * (T(1) - f)).matrix();
    da[kOutput] = (du * u * (T(1) - u)).matrix();
    da[kCell] = (dc.array() * i * (T(1) - g * g)).matrix();

    dh_prev.setZero();
    auto dx = dinput.col(tr.positions[k]);
    for (std::size_t q = 0; q < 4; ++q) {
      gw.wx[q].noalias() += da[q] * x.transpose();
      gw.wh[q].noalias() += da[q] * h_prev.transpose();
      gw.b[q] += da[q];
      dx.noalias() += w.wx[q].transpose() * da[q];
      dh_prev.noalias() += w.wh[q].transpose() * da[q];
    }

    dc = (dc.array() * f).matrix();
    dh = dh_prev;
  }
}

template <class T>
struct ForwardCache {
  BranchInput<T> m1, m2;
  DirectionTrace<T> f1, b1, f2, b2;
  Vec<T> z, a;
  T logit = 0;
};

template <class T>
ForwardCache<T> forward_cached(const EncodedExample &ex,
                               const ModelParams<T> &params) {
  ForwardCache<T> fc;
  std::tie(fc.m1, fc.m2) = branch_inputs(ex, params);
  const auto &br = params.branch;
  fc.f1 = run_direction(fc.m1, br.fwd, false);
  fc.b1 = run_direction(fc.m1, br.bwd, true);
  fc.f2 = run_direction(fc.m2, br.fwd, false);
  fc.b2 = run_direction(fc.m2, br.bwd, true);

  const auto hidden = static_cast<Eigen::Index>(params.dims.hidden);
  fc.z.resize(4 * hidden);
  fc.z << final_state(fc.f1, hidden), final_state(fc.b1, hidden),
      final_state(fc.f2, hidden), final_state(fc.b2, hidden);
  fc.a = (params.mlp_w * fc.z + params.mlp_b).array().tanh();
  fc.logit = (params.out_w * fc.a)(0, 0) + params.out_b(0, 0);
  return fc;
}

template <class T>
void scatter_embedding(const Mat<T> &dinput, std::span<const TokenId> seq,
                       std::span<const TokenId> rsd, std::size_t vocab,
                       Mat<T> &gemb) {
  const Eigen::Index d = gemb.cols();
  const auto h = static_cast<std::size_t>(dinput.cols());
  for (std::size_t t = 0; t < std::min(h, seq.size()); ++t) {
    const TokenId id = resolve_id(seq[t], vocab);
    gemb.row(id) += dinput.col(t).head(d).transpose();
  }
  for (std::size_t t = 0; t < std::min(h, rsd.size()); ++t) {
    const TokenId id = resolve_id(rsd[t], vocab);
    gemb.row(id) += dinput.col(t).tail(d).transpose();
  }
}
} // namespace

template <class T>
T sigmoid(T x) {
  if (x >= T(0))
    return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <class T>
ModelParams<T> ModelParams<T>::zeros(const ModelDims &dims) {
  const auto v = static_cast<Eigen::Index>(dims.vocab);
  const auto d = static_cast<Eigen::Index>(dims.embed);
  const auto h = static_cast<Eigen::Index>(dims.hidden);

  ModelParams p;
  p.dims = dims;
  p.embedding = Mat<T>::Zero(v, d);
  for (LstmWeights<T> *w: { &p.branch.fwd, &p.branch.bwd }) {
    for (std::size_t g = 0; g < 4; ++g) {
      w->wx[g] = Mat<T>::Zero(h, 2 * d);
      w->wh[g] = Mat<T>::Zero(h, h);
      w->b[g] = Mat<T>::Zero(h, 1);
    }
  }
  p.mlp_w = Mat<T>::Zero(2 * h, 4 * h);
  p.mlp_b = Mat<T>::Zero(2 * h, 1);
  p.out_w = Mat<T>::Zero(1, 2 * h);
  p.out_b = Mat<T>::Zero(1, 1);
  return p;
}

template <class T>
ModelParams<T> ModelParams<T>::random(const ModelDims &dims,
                                      std::uint64_t seed) {
  ModelParams p = zeros(dims);
  std::mt19937_64 rng(seed);

  fill_uniform(p.embedding, 0.05, rng);
  if (p.embedding.rows() > 0)
    p.embedding.row(kPadId).setZero();

  const double lstm_lim = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
  for (LstmWeights<T> *w: { &p.branch.fwd, &p.branch.bwd }) {
    for (std::size_t g = 0; g < 4; ++g) {
      fill_uniform(w->wx[g], lstm_lim, rng);
      fill_uniform(w->wh[g], lstm_lim, rng);
    }
    w->b[kForget].setConstant(T(1));
  }
  fill_uniform(p.mlp_w, 1.0 / std::sqrt(4.0 * dims.hidden), rng);
  fill_uniform(p.out_w, 1.0 / std::sqrt(2.0 * dims.hidden), rng);
  return p;
}

template <class T>
std::size_t ModelParams<T>::parameter_count() const {
  std::size_t n = 0;
  for_each([&n](const std::string &, const Mat<T> &m) {
    n += static_cast<std::size_t>(m.size());
  });
  return n;
}

template <class T>
bool ModelParams<T>::all_finite() const {
  bool ok = true;
  for_each([&ok](const std::string &, const Mat<T> &m) {
    ok = ok && m.allFinite();
  });
  return ok;
}

template <class T>
Mat<T> embed(std::span<const TokenId> ids, const Mat<T> &embedding,
             std::size_t max_len) {
  const auto vocab = static_cast<std::size_t>(embedding.rows());
  Mat<T> out = Mat<T>::Zero(embedding.cols(),
                            static_cast<Eigen::Index>(max_len));
  const std::size_t n = std::min(ids.size(), max_len);
  for (std::size_t t = 0; t < n; ++t)
    out.col(static_cast<Eigen::Index>(t))
        = embedding.row(resolve_id(ids[t], vocab)).transpose();
  return out;
}

template <class T>
BranchInput<T> fuse(const Mat<T> &seq_emb, const Mat<T> &rsd_emb,
                    std::size_t seq_len, std::size_t rsd_len) {
  if (seq_emb.rows() != rsd_emb.rows() || seq_emb.cols() != rsd_emb.cols())
    throw ShapeMismatch("cannot fuse " + std::to_string(seq_emb.rows()) + "x"
                        + std::to_string(seq_emb.cols()) + " with "
                        + std::to_string(rsd_emb.rows()) + "x"
                        + std::to_string(rsd_emb.cols()));

  BranchInput<T> in;
  in.values.resize(2 * seq_emb.rows(), seq_emb.cols());
  in.values << seq_emb, rsd_emb;

  const auto h = static_cast<std::size_t>(seq_emb.cols());
  const std::size_t valid = std::min(h, std::max(seq_len, rsd_len));
  in.mask.assign(h, 0);
  std::fill_n(in.mask.begin(), valid, std::uint8_t { 1 });
  return in;
}

template <class T>
StepState<T> lstm_step(const Vec<T> &x, const Vec<T> &h_prev,
                       const Vec<T> &c_prev, const LstmWeights<T> &w) {
  auto gate = [&](std::size_t q) -> Vec<T> {
    return w.wx[q] * x + w.wh[q] * h_prev + w.b[q];
  };
  auto sig = [](T v) { return sigmoid(v); };

  StepState<T> s;
  s.i = gate(kInput).unaryExpr(sig);
  s.f = gate(kForget).unaryExpr(sig);
  s.u = gate(kOutput).unaryExpr(sig);
  s.g = gate(kCell).array().tanh();
  s.c = s.f.cwiseProduct(c_prev) + s.i.cwiseProduct(s.g);
  s.h = s.c.array().tanh().matrix().cwiseProduct(s.u);
  return s;
}

template <class T>
Vec<T> bilstm(const BranchInput<T> &input, const BranchWeights<T> &w) {
  const Eigen::Index hidden = w.fwd.wh[0].rows();
  Vec<T> out(2 * hidden);
  out << final_state(run_direction(input, w.fwd, false), hidden),
      final_state(run_direction(input, w.bwd, true), hidden);
  return out;
}

template <class T>
T forward_logit(const BranchInput<T> &m1, const BranchInput<T> &m2,
                const ModelParams<T> &params) {
  const BranchWeights<T> &left = params.siamese_branch(0);
  const BranchWeights<T> &right = params.siamese_branch(1);
  Vec<T> z(4 * static_cast<Eigen::Index>(params.dims.hidden));
  z << bilstm(m1, left), bilstm(m2, right);
  const Vec<T> a = (params.mlp_w * z + params.mlp_b).array().tanh();
  return (params.out_w * a)(0, 0) + params.out_b(0, 0);
}

template <class T>
Prediction forward(const BranchInput<T> &m1, const BranchInput<T> &m2,
                   const ModelParams<T> &params, double threshold) {
  Prediction p;
  p.probability = static_cast<double>(sigmoid(forward_logit(m1, m2, params)));
  p.label = p.probability >= threshold;
  return p;
}

double bce_loss(double y_hat, double y) {
  const double p = std::clamp(y_hat, kBceEpsilon, 1.0 - kBceEpsilon);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

double bce_loss(std::span<const double> y_hat, std::span<const double> y) {
  if (y_hat.size() != y.size())
    throw ShapeMismatch("prediction and label counts differ");
  if (y_hat.empty())
    return 0.0;
  double sum = 0;
  for (std::size_t k = 0; k < y.size(); ++k)
    sum += bce_loss(y_hat[k], y[k]);
  return sum / static_cast<double>(y.size());
}

template <class T>
std::pair<BranchInput<T>, BranchInput<T>>
branch_inputs(const EncodedExample &ex, const ModelParams<T> &params) {
  const std::size_t h = params.dims.max_len;
  const Mat<T> rsd = embed<T>(ex.rsd, params.embedding, h);
  return {
    fuse<T>(embed<T>(ex.reactant, params.embedding, h), rsd,
            ex.reactant.size(), ex.rsd.size()),
    fuse<T>(embed<T>(ex.product, params.embedding, h), rsd, ex.product.size(),
            ex.rsd.size()),
  };
}

template <class T>
double predict_probability(const EncodedExample &ex,
                           const ModelParams<T> &params) {
  auto [m1, m2] = branch_inputs(ex, params);
  return static_cast<double>(sigmoid(forward_logit(m1, m2, params)));
}

template <class T>
double batch_loss(std::span<const EncodedExample> batch,
                  const ModelParams<T> &params) {
  if (batch.empty())
    return 0.0;
  double sum = 0;
  for (const auto &ex: batch)
    sum += bce_loss(predict_probability(ex, params), ex.label);
  return sum / static_cast<double>(batch.size());
}

template <class T>
double loss_and_gradient(std::span<const EncodedExample> batch,
                         const ModelParams<T> &params, ModelParams<T> &grads) {
  if (batch.empty())
    return 0.0;

  const T scale = T(1) / static_cast<T>(batch.size());
  const auto hidden = static_cast<Eigen::Index>(params.dims.hidden);
  double loss = 0;

  for (const auto &ex: batch) {
    const ForwardCache<T> fc = forward_cached(ex, params);
    const T y = sigmoid(fc.logit);
    const double yd = static_cast<double>(y);
    loss += bce_loss(yd, ex.label);

    // Outside the clamp the loss is flat, so the gradient vanishes there.
    if (yd < kBceEpsilon || yd > 1.0 - kBceEpsilon)
      continue;
    const T dlogit = (y - static_cast<T>(ex.label)) * scale;

    grads.out_b(0, 0) += dlogit;
    grads.out_w.noalias() += dlogit * fc.a.transpose();
    const Vec<T> dpre = (params.out_w.transpose() * dlogit).array()
                        * (T(1) - fc.a.array() * fc.a.array());
    grads.mlp_w.noalias() += dpre * fc.z.transpose();
    grads.mlp_b += dpre;
    const Vec<T> dz = params.mlp_w.transpose() * dpre;

    Mat<T> d1 = Mat<T>::Zero(fc.m1.values.rows(), fc.m1.values.cols());
    Mat<T> d2 = Mat<T>::Zero(fc.m2.values.rows(), fc.m2.values.cols());
    const auto &br = params.branch;
    backprop_direction(fc.m1, br.fwd, fc.f1, Vec<T>(dz.segment(0, hidden)),
                       grads.branch.fwd, d1);
    backprop_direction(fc.m1, br.bwd, fc.b1,
                       Vec<T>(dz.segment(hidden, hidden)), grads.branch.bwd,
                       d1);
    backprop_direction(fc.m2, br.fwd, fc.f2,
                       Vec<T>(dz.segment(2 * hidden, hidden)),
                       grads.branch.fwd, d2);
    backprop_direction(fc.m2, br.bwd, fc.b2,
                       Vec<T>(dz.segment(3 * hidden, hidden)),
                       grads.branch.bwd, d2);

    scatter_embedding<T>(d1, ex.reactant, ex.rsd, params.dims.vocab,
                         grads.embedding);
    scatter_embedding<T>(d2, ex.product, ex.rsd, params.dims.vocab,
                         grads.embedding);
  }

  if (grads.embedding.rows() > 0)
    grads.embedding.row(kPadId).setZero();
  if (!grads.all_finite())
    throw NonFiniteGradient("gradient contains NaN or Inf");
  return loss / static_cast<double>(batch.size());
}

#define RXPJ_INSTANTIATE(T)                                                    \
  template struct ModelParams<T>;                                              \
  template T sigmoid<T>(T);                                                    \
  template Mat<T> embed<T>(std::span<const TokenId>, const Mat<T> &,           \
                           std::size_t);                                       \
  template BranchInput<T> fuse<T>(const Mat<T> &, const Mat<T> &, std::size_t, \
                                  std::size_t);                                \
  template StepState<T> lstm_step<T>(const Vec<T> &, const Vec<T> &,           \
                                     const Vec<T> &, const LstmWeights<T> &);  \
  template Vec<T> bilstm<T>(const BranchInput<T> &, const BranchWeights<T> &); \
  template T forward_logit<T>(const BranchInput<T> &, const BranchInput<T> &,  \
                              const ModelParams<T> &);                         \
  template Prediction forward<T>(const BranchInput<T> &,                       \
                                 const BranchInput<T> &,                       \
                                 const ModelParams<T> &, double);              \
  template std::pair<BranchInput<T>, BranchInput<T>> branch_inputs<T>(         \
      const EncodedExample &, const ModelParams<T> &);                         \
  template double predict_probability<T>(const EncodedExample &,               \
                                         const ModelParams<T> &);              \
  template double batch_loss<T>(std::span<const EncodedExample>,               \
                                const ModelParams<T> &);                       \
  template double loss_and_gradient<T>(std::span<const EncodedExample>,        \
                                       const ModelParams<T> &,                 \
                                       ModelParams<T> &)

RXPJ_INSTANTIATE(float);
RXPJ_INSTANTIATE(double);

#undef RXPJ_INSTANTIATE

} // namespace rxpj
