//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_EVALUATION_H_
#define RXPJ_EVALUATION_H_

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

namespace rxpj {

struct ScoredLabel {
  double probability = 0;
  int label = 0;  // gold, 1 positive / 0 negative
};

// Rows are gold classes, columns predictions: TP FN / FP TN.
struct ConfusionCounts {
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0;

  std::size_t total() const { return tp + fn + fp + tn; }
  bool operator==(const ConfusionCounts &) const = default;
};

// A prediction is positive iff probability >= threshold.
ConfusionCounts confusion(std::span<const ScoredLabel> preds,
                          double threshold);

struct ClassMetrics {
  double precision = 0, recall = 0, f1 = 0;
  // Set when the corresponding denominator was zero (value reported as 0).
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

struct EvalReport {
  ConfusionCounts counts;
  double threshold = 0.5;
  double accuracy = 0;
  ClassMetrics positive;
  ClassMetrics negative;  // same formulas with the class roles swapped
};

// Throws EmptyEvaluation for an empty confusion matrix.
EvalReport metrics(const ConfusionCounts &c, double threshold = 0.5);

struct RocPoint {
  double fpr = 0, tpr = 0;
  double threshold = 0;  // score at which this point is reached
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1)
  double auc = 0;
};

// Sweeps the distinct scores from high to low; tied scores move as one
// step. Trapezoidal AUC. Throws SingleClassEvaluation.
RocCurve roc_auc(std::span<const ScoredLabel> preds);

struct SweepTable {
  std::vector<EvalReport> rows;
  std::size_t best = 0;  // highest accuracy, lowest threshold on ties
};

// Thresholds k/steps for k = 1..steps (steps = 10 gives 0.1, 0.2, ..., 1.0).
SweepTable threshold_sweep(std::span<const ScoredLabel> preds,
                           std::size_t steps = 10);

// key=value lines.
void write_metrics_kv(std::ostream &os, const EvalReport &r);
// fpr<TAB>tpr<TAB>threshold with a header row.
void write_roc_tsv(std::ostream &os, const RocCurve &roc);
// One row per threshold with a header row.
void write_sweep_tsv(std::ostream &os, const SweepTable &table);

} // namespace rxpj

#endif // RXPJ_EVALUATION_H_
