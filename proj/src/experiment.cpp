//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/experiment.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rxpj/errors.h"
#include "rxpj/number_format.h"

namespace rxpj {
namespace {
std::string ratio_name(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ratio_%.1f", r);
  return buf;
}

void write_file(const std::filesystem::path &path, auto &&writer) {
  std::ofstream os(path, std::ios::trunc);
  if (!os)
    throw IoError("cannot write " + path.string());
  writer(os);
}
} // namespace

std::vector<ScoredLabel> score(const std::vector<LabeledReaction> &records,
                               const Artifacts &artifacts) {
  std::vector<ScoredLabel> out;
  out.reserve(records.size());
  for (const auto &r: records)
    out.push_back({ predict(r.reaction, artifacts).probability, r.label });
  return out;
}

std::vector<ExperimentCell> ablation_grid(const DatasetSplit &data,
                                          const JudgeConfig &base) {
  struct Variant {
    const char *name;
    bool rsd, dlg;
  };
  static constexpr Variant kVariants[] = {
    { "full", true, true },
    { "no_rsd", false, true },
    { "no_dlg", true, false },
    { "no_rsd_no_dlg", false, false },
  };

  std::vector<ExperimentCell> cells;
  for (const auto &v: kVariants) {
    ExperimentCell c { v.name, data.train, data.dev, data.test, base };
    c.config.features.use_rsd = v.rsd;
    c.config.features.use_dlg = v.dlg;
    cells.push_back(std::move(c));
  }
  return cells;
}

std::vector<ExperimentCell>
incremental_grid(const DatasetSplit &data,
                 const std::vector<LabeledReaction> &pool,
                 const std::vector<LabeledReaction> &test,
                 const JudgeConfig &base, const std::vector<double> &ratios) {
  std::vector<ExperimentCell> cells;
  for (double r: ratios)
    cells.push_back({ ratio_name(r), incremental_mix(data.train, pool, r),
                      data.dev, test, base });
  return cells;
}

std::pair<std::vector<LabeledReaction>, std::vector<LabeledReaction>>
split_half(std::vector<LabeledReaction> records, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(records.begin(), records.end(), rng);
  const auto half = static_cast<std::ptrdiff_t>(records.size() / 2);
  return { std::vector<LabeledReaction>(records.begin(), records.begin() + half),
           std::vector<LabeledReaction>(records.begin() + half,
                                        records.end()) };
}

Manifest run_experiment(const std::string &experiment,
                        const std::vector<ExperimentCell> &cells,
                        const std::filesystem::path &report_root) {
  Manifest manifest;
  manifest.experiment = experiment;
  if (cells.empty())
    return manifest;

  const std::filesystem::path root = report_root / experiment;
  std::filesystem::create_directories(root);

  for (const auto &cell: cells) {
    CellOutcome out;
    out.name = cell.name;
    out.dir = root / cell.name;
    try {
      std::filesystem::create_directories(out.dir);
      const FitResult fitted = fit(to_examples(cell.train),
                                   to_examples(cell.dev), cell.config);
      const auto scored = score(cell.test, fitted.artifacts);
      out.report = metrics(confusion(scored, cell.config.threshold),
                           cell.config.threshold);
      try {
        out.roc = roc_auc(scored);
      } catch (const SingleClassEvaluation &) {
      }

      write_file(out.dir / "metrics.kv", [&](std::ostream &os) {
        write_metrics_kv(os, out.report);
        os << "train_size=" << cell.train.size() << '\n'
           << "test_size=" << cell.test.size() << '\n'
           << "best_epoch=" << fitted.best_epoch << '\n'
           << "use_rsd=" << (cell.config.features.use_rsd ? 1 : 0) << '\n'
           << "use_dlg=" << (cell.config.features.use_dlg ? 1 : 0) << '\n';
        if (out.roc)
          os << "auc=" << format_number(out.roc->auc) << '\n';
      });
      write_file(out.dir / "roc.tsv", [&](std::ostream &os) {
        if (out.roc)
          write_roc_tsv(os, *out.roc);
        else
          os << "fpr\ttpr\tthreshold\n";
      });
      out.ok = true;
    } catch (const Error &e) {
      out.error = e.kind() + ": " + e.what();
    } catch (const std::exception &e) {
      out.error = std::string("Error: ") + e.what();
    }
    manifest.cells.push_back(std::move(out));
  }

  write_file(root / "manifest.tsv", [&](std::ostream &os) {
    os << "cell\tstatus\taccuracy\tauc\terror\n";
    for (const auto &c: manifest.cells) {
      os << c.name << '\t' << (c.ok ? "ok" : "failed") << '\t';
      if (c.ok)
        os << format_number(c.report.accuracy);
      os << '\t';
      if (c.roc)
        os << format_number(c.roc->auc);
      os << '\t' << c.error << '\n';
    }
  });
  return manifest;
}

} // namespace rxpj
