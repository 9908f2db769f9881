//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_COMMANDS_H_
#define RXPJ_COMMANDS_H_

#include <cstddef>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rxpj/config.h"
#include "rxpj/datasets.h"

namespace rxpj {

// Subcommand bodies behind the `rxpj` tool. They throw on failure;
// exit_code() and error_line() turn the exception into the process result.

struct PrepareOptions {
  std::vector<std::string> inputs;
  LabelMode label_mode = LabelMode::kColumn;
  std::vector<std::string> negatives;  // bare reactions, all negative
  std::string out_dir;
};

// Writes train.tsv, dev.tsv, test.tsv and manifest.kv under out_dir.
void cmd_prepare(const PrepareOptions &opts, const Config &config,
                 std::ostream &log);

struct LexiconBuildOptions {
  std::string train;
  std::string out;
};

// Writes the lexicon TSV and `<out>.provenance`.
void cmd_lexicon_build(const LexiconBuildOptions &opts, const Config &config,
                       std::ostream &log);

struct LexiconApplyOptions {
  std::string lexicon;
  std::vector<std::string> molecules;  // SMILES strings
};

// One line per molecule: the words separated by single spaces.
void cmd_lexicon_apply(const LexiconApplyOptions &opts, const Config &config,
                       std::ostream &out);

struct GenNegativesOptions {
  std::string positives;
  LabelMode label_mode = LabelMode::kColumn;
  std::vector<std::string> known;  // extra known-positive files
  std::string rules;
  std::string lexicon;
  std::string out;
  std::optional<std::size_t> cap;  // overrides negatives_cap
  bool no_swap = false;
  bool no_removal = false;
};

void cmd_gen_negatives(const GenNegativesOptions &opts, const Config &config,
                       std::ostream &log);

// Three TAB-separated rows: reactant tokens, tags, produced tokens. The
// last column is the end-of-sequence slot.
void cmd_rsd(const std::string &reaction, std::ostream &out);

struct TrainCmdOptions {
  std::string train, dev;
  std::string lexicon;  // optional, built from train when empty
  std::string out;
  std::string history;  // optional per-epoch TSV
  std::string config_path;
};

void cmd_train(const TrainCmdOptions &opts, const Config &config,
               std::ostream &log);

struct PredictOptions {
  std::string model;
  std::vector<std::string> reactions;
  std::string input;  // file with one reaction per line
  std::optional<double> threshold;
};

// `probability<TAB>label` per reaction.
void cmd_predict(const PredictOptions &opts, std::ostream &out);

struct EvaluateOptions {
  std::string model;
  std::string test;
  std::optional<double> threshold;
  std::string sweep_out;  // empty: no sweep
  std::string roc_out;
  std::string metrics_out;  // empty: metrics go to `out`
};

void cmd_evaluate(const EvaluateOptions &opts, std::ostream &out);

struct ExperimentOptions {
  std::string name;
  std::string grid;   // ablation, incremental or none
  std::string pool;   // outside labeled dataset for the incremental grid
  std::vector<double> ratios = { 0.1, 0.2, 0.3, 0.4, 0.5,
                                 0.6, 0.7, 0.8, 0.9, 1.0 };
};

void cmd_experiment(const ExperimentOptions &opts, const Config &config,
                    std::ostream &log);

// 2 for IoError and EmptyCorpus, 3 for ConfigError, 1 otherwise.
int exit_code(const std::exception &e);

// `error<TAB>kind<TAB>message` on one line.
std::string error_line(const std::exception &e);

} // namespace rxpj

#endif // RXPJ_COMMANDS_H_
