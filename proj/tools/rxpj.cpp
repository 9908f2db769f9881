//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rxpj/commands.h"
#include "rxpj/config.h"
#include "rxpj/errors.h"

using namespace rxpj;

namespace {
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("--config", c.config_path, "key=value config file");
  cmd->add_option("--seed", c.seed, "random seed (overrides config and RXPJ_SEED)");
  cmd->add_option("--set", c.overrides, "config override key=value (repeatable)");
}

// Config file, then RXPJ_SEED, then --set, then --seed.
Config resolve(const Common &c) {
  Config cfg = c.config_path.empty() ? Config { } : load_config(c.config_path);
  apply_environment(cfg);
  for (const auto &kv: c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed)
    cfg.judge.train.seed = *c.seed;
  return cfg;
}

LabelMode label_mode_of(const std::string &s) { return parse_label_mode(s); }
} // namespace

int main(int argc, char **argv) {
  CLI::App app { "Reaction practicality judge" };
  app.require_subcommand(1);

  Common common;
  std::string label_mode = "column";

  PrepareOptions prep;
  auto *prepare = app.add_subcommand("prepare", "normalize, deduplicate and split a corpus");
  add_common(prepare, common);
  prepare->add_option("--input,-i", prep.inputs, "reaction corpus file(s)")->required();
  prepare->add_option("--negatives", prep.negatives, "failed reactions, one per line");
  prepare->add_option("--out,-o", prep.out_dir, "output directory")->required();
  prepare->add_option("--label-mode", label_mode, "column, positive or negative");

  auto *lexicon = app.add_subcommand("lexicon", "build or apply a DLG lexicon");
  lexicon->require_subcommand(1);
  LexiconBuildOptions lbuild;
  auto *lex_build = lexicon->add_subcommand("build", "build a lexicon from a training split");
  add_common(lex_build, common);
  lex_build->add_option("--train", lbuild.train, "training split")->required();
  lex_build->add_option("--out,-o", lbuild.out, "lexicon TSV")->required();
  LexiconApplyOptions lapply;
  auto *lex_apply = lexicon->add_subcommand("apply", "segment molecules with a lexicon");
  add_common(lex_apply, common);
  lex_apply->add_option("--lexicon,-l", lapply.lexicon, "lexicon TSV")->required();
  lex_apply->add_option("molecules", lapply.molecules, "SMILES strings")->required();

  GenNegativesOptions gneg;
  std::optional<std::size_t> cap;
  auto *gen = app.add_subcommand("gen-negatives", "generate rule-based negative reactions");
  add_common(gen, common);
  gen->add_option("--positives,-p", gneg.positives, "positive reactions")->required();
  gen->add_option("--known", gneg.known, "additional known-positive files");
  gen->add_option("--rules", gneg.rules, "rewrite rule file");
  gen->add_option("--lexicon,-l", gneg.lexicon, "lexicon for first-word grouping");
  gen->add_option("--out,-o", gneg.out, "output file")->required();
  gen->add_option("--cap", cap, "maximum number of negatives");
  gen->add_option("--label-mode", label_mode, "column, positive or negative");
  gen->add_flag("--no-swap", gneg.no_swap, "disable the reactant swap rule");
  gen->add_flag("--no-removal", gneg.no_removal, "disable the reactant removal rule");

  std::string rsd_reaction;
  auto *rsd = app.add_subcommand("rsd", "show the reactant-to-product edit tags");
  rsd->add_option("reaction", rsd_reaction, "reaction SMILES")->required();

  TrainCmdOptions tr;
  auto *train = app.add_subcommand("train", "train a model");
  add_common(train, common);
  train->add_option("--train", tr.train, "training split (default: train_path)");
  train->add_option("--dev", tr.dev, "dev split (default: dev_path)");
  train->add_option("--lexicon,-l", tr.lexicon, "prebuilt lexicon (default: lexicon_path)");
  train->add_option("--out,-o", tr.out, "checkpoint path (default: model_path)");
  train->add_option("--history", tr.history, "per-epoch TSV");

  PredictOptions pr;
  auto *predict = app.add_subcommand("predict", "score reactions");
  predict->add_option("--model,-m", pr.model, "checkpoint")->required();
  predict->add_option("--input,-i", pr.input, "file with one reaction per line");
  predict->add_option("--threshold", pr.threshold, "decision threshold");
  predict->add_option("reactions", pr.reactions, "reaction SMILES");

  EvaluateOptions ev;
  auto *evaluate = app.add_subcommand("evaluate", "evaluate a model on a labeled split");
  evaluate->add_option("--model,-m", ev.model, "checkpoint")->required();
  evaluate->add_option("--test", ev.test, "labeled split")->required();
  evaluate->add_option("--threshold", ev.threshold, "decision threshold");
  evaluate->add_option("--sweep", ev.sweep_out, "write the 0.1..1.0 threshold sweep TSV here");
  evaluate->add_option("--roc-out", ev.roc_out, "write ROC points TSV here");
  evaluate->add_option("--out,-o", ev.metrics_out, "write metrics here instead of stdout");

  ExperimentOptions ex;
  auto *experiment = app.add_subcommand("experiment", "run an ablation or incremental grid");
  add_common(experiment, common);
  experiment->add_option("--name", ex.name, "experiment name")->required();
  experiment->add_option("--grid", ex.grid, "ablation, incremental or none")->required();
  experiment->add_option("--pool", ex.pool, "outside labeled set, split 1:1 into pool and test");
  experiment->add_option("--ratios", ex.ratios, "incremental ratios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error\tConfigError\t" << e.what() << '\n';
    return 3;
  }

  try {
    if (*prepare) {
      prep.label_mode = label_mode_of(label_mode);
      cmd_prepare(prep, resolve(common), std::cerr);
    } else if (*lex_build) {
      cmd_lexicon_build(lbuild, resolve(common), std::cerr);
    } else if (*lex_apply) {
      cmd_lexicon_apply(lapply, resolve(common), std::cout);
    } else if (*gen) {
      gneg.label_mode = label_mode_of(label_mode);
      gneg.cap = cap;
      cmd_gen_negatives(gneg, resolve(common), std::cerr);
    } else if (*rsd) {
      cmd_rsd(rsd_reaction, std::cout);
    } else if (*train) {
      tr.config_path = common.config_path;
      cmd_train(tr, resolve(common), std::cerr);
    } else if (*predict) {
      cmd_predict(pr, std::cout);
    } else if (*evaluate) {
      cmd_evaluate(ev, std::cout);
    } else if (*experiment) {
      cmd_experiment(ex, resolve(common), std::cerr);
    }
  } catch (const std::exception &e) {
    std::cout.flush();
    std::cerr << error_line(e) << '\n';
    return exit_code(e);
  }
  return 0;
}
