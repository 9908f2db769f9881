//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_EXPERIMENT_H_
#define RXPJ_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rxpj/datasets.h"
#include "rxpj/evaluation.h"
#include "rxpj/judge.h"

namespace rxpj {

std::vector<ScoredLabel> score(const std::vector<LabeledReaction> &records,
                               const Artifacts &artifacts);

struct ExperimentCell {
  std::string name;
  std::vector<LabeledReaction> train, dev, test;
  JudgeConfig config;
};

struct CellOutcome {
  std::string name;
  bool ok = false;
  std::string error;  // `<kind>: <message>` when !ok
  EvalReport report;
  std::optional<RocCurve> roc;  // absent when the test set has one class
  std::filesystem::path dir;
};

struct Manifest {
  std::string experiment;
  std::vector<CellOutcome> cells;
};

// Full model, then without RSD, without DLG words, without both.
std::vector<ExperimentCell> ablation_grid(const DatasetSplit &data,
                                          const JudgeConfig &base);

inline const std::vector<double> kIncrementalRatios = {
  0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0,
};

// One cell per ratio: `data.train` plus the leading share of `pool`, tested
// on `test`.
std::vector<ExperimentCell>
incremental_grid(const DatasetSplit &data,
                 const std::vector<LabeledReaction> &pool,
                 const std::vector<LabeledReaction> &test,
                 const JudgeConfig &base,
                 const std::vector<double> &ratios = kIncrementalRatios);

// Seeded 1:1 split of an outside dataset into incremental pool and test set.
std::pair<std::vector<LabeledReaction>, std::vector<LabeledReaction>>
split_half(std::vector<LabeledReaction> records, std::uint64_t seed);

// Trains and evaluates every cell in order. A failing cell is recorded and
// the remaining cells still run. Each cell writes
// `<report_root>/<experiment>/<cell>/metrics.kv` and `roc.tsv`, plus a
// `manifest.tsv` for the experiment. An empty grid touches nothing.
Manifest run_experiment(const std::string &experiment,
                        const std::vector<ExperimentCell> &cells,
                        const std::filesystem::path &report_root);

} // namespace rxpj

#endif // RXPJ_EXPERIMENT_H_
