//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/evaluation.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "rxpj/errors.h"
#include "rxpj/number_format.h"

namespace rxpj {
namespace {
double ratio(std::size_t num, std::size_t den, bool &degenerate) {
  degenerate = den == 0;
  return degenerate ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics class_metrics(std::size_t tp, std::size_t fn, std::size_t fp) {
  ClassMetrics m;
  m.precision = ratio(tp, tp + fp, m.precision_degenerate);
  m.recall = ratio(tp, tp + fn, m.recall_degenerate);
  const double s = m.precision + m.recall;
  m.f1_degenerate = s == 0.0;
  m.f1 = m.f1_degenerate ? 0.0 : 2 * m.precision * m.recall / s;
  return m;
}
} // namespace

ConfusionCounts confusion(std::span<const ScoredLabel> preds,
                          double threshold) {
  ConfusionCounts c;
  for (const auto &p: preds) {
    const bool pos = p.probability >= threshold;
    if (p.label == 1)
      ++(pos ? c.tp : c.fn);
    else
      ++(pos ? c.fp : c.tn);
  }
  return c;
}

EvalReport metrics(const ConfusionCounts &c, double threshold) {
  if (c.total() == 0)
    throw EmptyEvaluation("no predictions to evaluate");
  EvalReport r;
  r.counts = c;
  r.threshold = threshold;
  r.accuracy = static_cast<double>(c.tp + c.tn)
               / static_cast<double>(c.total());
  r.positive = class_metrics(c.tp, c.fn, c.fp);
  r.negative = class_metrics(c.tn, c.fp, c.fn);
  return r;
}

RocCurve roc_auc(std::span<const ScoredLabel> preds) {
  std::size_t pos = 0, neg = 0;
  for (const auto &p: preds)
    ++(p.label == 1 ? pos : neg);
  if (pos == 0 || neg == 0)
    throw SingleClassEvaluation("ROC needs both positive and negative labels");

  std::vector<ScoredLabel> sorted(preds.begin(), preds.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto &a, const auto &b) {
                     return a.probability > b.probability;
                   });

  RocCurve roc;
  roc.points.push_back({ 0.0, 0.0, std::numeric_limits<double>::infinity() });
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double score = sorted[i].probability;
    while (i < sorted.size() && sorted[i].probability == score) {
      ++(sorted[i].label == 1 ? tp : fp);
      ++i;
    }
    const RocPoint prev = roc.points.back();
    RocPoint pt { static_cast<double>(fp) / static_cast<double>(neg),
                  static_cast<double>(tp) / static_cast<double>(pos), score };
    roc.auc += (pt.fpr - prev.fpr) * (pt.tpr + prev.tpr) / 2.0;
    roc.points.push_back(pt);
  }
  return roc;
}

SweepTable threshold_sweep(std::span<const ScoredLabel> preds,
                           std::size_t steps) {
  SweepTable t;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double th = static_cast<double>(k) / static_cast<double>(steps);
    t.rows.push_back(metrics(confusion(preds, th), th));
    if (t.rows.back().accuracy > t.rows[t.best].accuracy)
      t.best = t.rows.size() - 1;
  }
  return t;
}

void write_metrics_kv(std::ostream &os, const EvalReport &r) {
  os << "threshold=" << format_number(r.threshold) << '\n'
     << "count=" << r.counts.total() << '\n'
     << "tp=" << r.counts.tp << '\n'
     << "fn=" << r.counts.fn << '\n'
     << "fp=" << r.counts.fp << '\n'
     << "tn=" << r.counts.tn << '\n'
     << "accuracy=" << format_number(r.accuracy) << '\n';
  auto cls = [&os](const char *prefix, const ClassMetrics &m) {
    os << prefix << ".precision=" << format_number(m.precision) << '\n'
       << prefix << ".recall=" << format_number(m.recall) << '\n'
       << prefix << ".f1=" << format_number(m.f1) << '\n'
       << prefix << ".degenerate="
       << (m.precision_degenerate || m.recall_degenerate || m.f1_degenerate
               ? 1
               : 0)
       << '\n';
  };
  cls("positive", r.positive);
  cls("negative", r.negative);
}

void write_roc_tsv(std::ostream &os, const RocCurve &roc) {
  os << "fpr\ttpr\tthreshold\n";
  for (const auto &p: roc.points)
    os << format_number(p.fpr) << '\t' << format_number(p.tpr) << '\t'
       << format_number(p.threshold) << '\n';
}

void write_sweep_tsv(std::ostream &os, const SweepTable &table) {
  os << "threshold\taccuracy\tpositive.precision\tpositive.recall\t"
        "positive.f1\tnegative.precision\tnegative.recall\tnegative.f1\t"
        "tp\tfn\tfp\ttn\n";
  for (const auto &r: table.rows)
    os << format_number(r.threshold) << '\t' << format_number(r.accuracy)
       << '\t' << format_number(r.positive.precision) << '\t'
       << format_number(r.positive.recall) << '\t'
       << format_number(r.positive.f1) << '\t'
       << format_number(r.negative.precision) << '\t'
       << format_number(r.negative.recall) << '\t'
       << format_number(r.negative.f1) << '\t' << r.counts.tp << '\t' << r.counts.fn << '\t'
       << r.counts.fp << '\t' << r.counts.tn << '\n';
}

} // namespace rxpj
