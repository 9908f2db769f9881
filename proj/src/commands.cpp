//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rxpj/checkpoint.h"
#include "rxpj/errors.h"
#include "rxpj/number_format.h"
#include "rxpj/evaluation.h"
#include "rxpj/experiment.h"
#include "rxpj/hash.h"
#include "rxpj/rsd.h"

namespace fs = std::filesystem;

namespace rxpj {
namespace {
std::ofstream open_out(const fs::path &path) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc | std::ios::binary);
  if (!os)
    throw IoError("cannot write " + path.string());
  return os;
}

void finish(std::ofstream &os, const fs::path &path) {
  os.close();
  if (!os)
    throw IoError("failed writing " + path.string());
}

std::vector<LabeledReaction> load_labeled(const std::string &path,
                                          std::ostream &log,
                                          LabelMode mode = LabelMode::kColumn) {
  if (path.empty())
    throw ConfigError("missing dataset path");
  LoadResult r = load_corpus(path, mode);
  if (r.malformed > 0)
    log << "warning\t" << path << "\t" << r.malformed
        << " malformed lines skipped\n";
  return std::move(r.records);
}

Lexicon load_lexicon_file(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot open lexicon " + path);
  return Lexicon::load(is);
}

std::size_t count_label(const std::vector<LabeledReaction> &rs, int label) {
  return static_cast<std::size_t>(
      std::count_if(rs.begin(), rs.end(),
                    [label](const auto &r) { return r.label == label; }));
}

std::string read_kv(const fs::path &path, const std::string &key) {
  std::ifstream is(path);
  std::string line;
  while (std::getline(is, line))
    if (line.starts_with(key + "="))
      return line.substr(key.size() + 1);
  return { };
}

std::string cell_text(const TokenSequence &toks) {
  std::string s;
  for (const auto &t: toks)
    s += t;
  return s;
}
} // namespace

void cmd_prepare(const PrepareOptions &opts, const Config &config,
                 std::ostream &log) {
  if (opts.inputs.empty())
    throw ConfigError("prepare needs at least one input");
  if (opts.out_dir.empty())
    throw ConfigError("prepare needs an output directory");

  std::vector<LabeledReaction> all;
  std::size_t malformed = 0;
  std::vector<std::pair<std::string, std::string>> manifest;
  manifest.emplace_back("seed", std::to_string(config.seed()));

  auto ingest = [&](const std::string &path, LabelMode mode,
                    RecordSource source, const std::string &tag,
                    std::size_t idx) {
    LoadResult r = load_corpus(path, mode, source);
    malformed += r.malformed;
    for (const auto &w: r.warnings)
      log << "warning\t" << path << "\t" << w << '\n';
    const std::string prefix = tag + "." + std::to_string(idx);
    manifest.emplace_back(prefix + ".path", path);
    manifest.emplace_back(prefix + ".digest", file_digest(path));
    manifest.emplace_back(prefix + ".records", std::to_string(r.records.size()));
    manifest.emplace_back(prefix + ".malformed", std::to_string(r.malformed));
    all.insert(all.end(), std::make_move_iterator(r.records.begin()),
               std::make_move_iterator(r.records.end()));
  };
  for (std::size_t i = 0; i < opts.inputs.size(); ++i)
    ingest(opts.inputs[i], opts.label_mode, RecordSource::kCorpus, "input", i);
  for (std::size_t i = 0; i < opts.negatives.size(); ++i)
    ingest(opts.negatives[i], LabelMode::kNegative, RecordSource::kRealFailed,
           "negatives", i);

  if (all.empty())
    throw EmptyCorpus("no valid reactions in the inputs");

  const std::size_t loaded = all.size();
  DedupResult dd = deduplicate(all);
  const DatasetSplit parts = split(dd.records, config.seed());

  manifest.emplace_back("records.loaded", std::to_string(loaded));
  manifest.emplace_back("records.malformed", std::to_string(malformed));
  manifest.emplace_back("records.duplicates", std::to_string(dd.duplicates));
  manifest.emplace_back("records.conflicts", std::to_string(dd.conflicts));
  manifest.emplace_back("records.unique", std::to_string(dd.records.size()));

  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  const std::pair<const char *, const std::vector<LabeledReaction> *> files[] = {
    { "train", &parts.train }, { "dev", &parts.dev }, { "test", &parts.test }
  };
  for (const auto &[name, rs]: files) {
    const fs::path p = out / (std::string(name) + ".tsv");
    write_records(p, *rs);
    const std::string n(name);
    manifest.emplace_back(n + ".count", std::to_string(rs->size()));
    manifest.emplace_back(n + ".positive", std::to_string(count_label(*rs, 1)));
    manifest.emplace_back(n + ".negative", std::to_string(count_label(*rs, 0)));
    manifest.emplace_back(n + ".digest", file_digest(p));
  }

  const fs::path mpath = out / "manifest.kv";
  auto os = open_out(mpath);
  for (const auto &[k, v]: manifest)
    os << k << '=' << v << '\n';
  finish(os, mpath);
  log << "prepare\tunique=" << dd.records.size()
      << "\ttrain=" << parts.train.size() << "\tdev=" << parts.dev.size()
      << "\ttest=" << parts.test.size() << '\n';
}

void cmd_lexicon_build(const LexiconBuildOptions &opts, const Config &config,
                       std::ostream &log) {
  if (opts.out.empty())
    throw ConfigError("lexicon build needs an output path");
  const auto records = load_labeled(opts.train, log);
  std::vector<RawReaction> reactions;
  reactions.reserve(records.size());
  for (const auto &r: records)
    reactions.push_back(r.reaction);
  const Lexicon lex = build_reaction_lexicon(reactions, config.judge.lexicon);

  auto os = open_out(opts.out);
  lex.save(os);
  finish(os, opts.out);

  const fs::path prov = opts.out + ".provenance";
  auto ps = open_out(prov);
  ps << "train_path=" << opts.train << '\n'
     << "train_digest=" << file_digest(opts.train) << '\n'
     << "lexicon_digest=" << file_digest(opts.out) << '\n'
     << "max_n=" << config.judge.lexicon.max_n << '\n'
     << "min_count=" << config.judge.lexicon.min_count << '\n'
     << "threshold=" << config.judge.lexicon.threshold << '\n';
  finish(ps, prov);
  log << "lexicon\tentries=" << lex.size()
      << "\tmulti_token=" << lex.multi_token_count() << '\n';
}

void cmd_lexicon_apply(const LexiconApplyOptions &opts, const Config &config,
                       std::ostream &out) {
  const Lexicon lex = load_lexicon_file(opts.lexicon);
  for (const auto &mol: opts.molecules) {
    const auto seg = segment(tokenize_atomwise(strip_atom_maps(mol)), lex,
                             config.judge.features.segment_mode);
    for (std::size_t i = 0; i < seg.words.size(); ++i)
      out << (i ? " " : "") << seg.words[i];
    out << '\n';
  }
}

void cmd_gen_negatives(const GenNegativesOptions &opts, const Config &config,
                       std::ostream &log) {
  if (opts.out.empty())
    throw ConfigError("gen-negatives needs an output path");
  auto positives = load_labeled(opts.positives, log, opts.label_mode);
  std::erase_if(positives, [](const auto &r) { return r.label != 1; });

  KnownPositiveIndex known = build_index(positives);
  for (const auto &path: opts.known)
    for (const auto &r: load_labeled(path, log))
      if (r.label == 1)
        known.insert(r.key());

  NegativeRules rules;
  rules.reactant_swap = !opts.no_swap;
  rules.reactant_removal = !opts.no_removal;
  const std::string rules_path =
      opts.rules.empty() ? config.rules_path : opts.rules;
  if (!rules_path.empty())
    rules.rewrites = load_rules(fs::path(rules_path));

  const std::string lex_path =
      opts.lexicon.empty() ? config.lexicon_path : opts.lexicon;
  const Lexicon lex = lex_path.empty() ? Lexicon { } : load_lexicon_file(lex_path);

  const auto negs = generate_negatives(positives, rules, known,
                                       opts.cap.value_or(config.negatives_cap),
                                       lex);
  write_records(fs::path(opts.out), negs);
  log << "gen-negatives\tpositives=" << positives.size()
      << "\tnegatives=" << negs.size() << '\n';
}

void cmd_rsd(const std::string &reaction, std::ostream &out) {
  const RawReaction norm = normalize_reaction(parse_reaction(reaction));
  const TokenSequence src = group_tokens(norm.reactants);
  const TokenSequence tgt = group_tokens(norm.products);
  const RsdSequence rsd = generate_rsd(src, tgt);
  const TokenSequence tags = rsd_tokens(rsd);

  std::vector<std::string> produced;
  for (std::size_t i = 0; i < rsd.tags.size(); ++i) {
    const RsdTag &t = rsd.tags[i];
    std::string cell = cell_text(t.inserted);
    if (i < src.size()) {
      if (t.op == RsdOp::kNop)
        cell += src[i];
      else if (t.op == RsdOp::kReplace)
        cell += t.replacement;
    }
    produced.push_back(cell.empty() ? "-" : cell);
  }

  for (std::size_t i = 0; i <= src.size(); ++i)
    out << (i ? "\t" : "") << (i < src.size() ? src[i] : "$");
  out << '\n';
  for (std::size_t i = 0; i < tags.size(); ++i)
    out << (i ? "\t" : "") << tags[i];
  out << '\n';
  for (std::size_t i = 0; i < produced.size(); ++i)
    out << (i ? "\t" : "") << produced[i];
  out << '\n';
}

void cmd_train(const TrainCmdOptions &opts, const Config &config,
               std::ostream &log) {
  const std::string train_path = opts.train.empty() ? config.train_path : opts.train;
  const std::string dev_path = opts.dev.empty() ? config.dev_path : opts.dev;
  const std::string out_path = opts.out.empty() ? config.model_path : opts.out;
  const std::string lex_path =
      opts.lexicon.empty() ? config.lexicon_path : opts.lexicon;
  if (out_path.empty())
    throw ConfigError("train needs an output model path");

  const auto train_set = to_examples(load_labeled(train_path, log));
  const auto dev_set = dev_path.empty()
                           ? std::vector<LabeledExample> { }
                           : to_examples(load_labeled(dev_path, log));
  if (train_set.empty())
    throw EmptyCorpus("training set is empty");

  const std::string train_digest = file_digest(train_path);
  if (!lex_path.empty()) {
    const std::string prov =
        read_kv(lex_path + ".provenance", "train_digest");
    if (!prov.empty() && prov != train_digest)
      log << "warning\tlexicon " << lex_path
          << " was built from a different training file\n";
  }

  auto on_epoch = [&log](const EpochStats &s) {
    log << "epoch\t" << s.epoch << "\ttrain_loss=" << s.train_loss
        << "\ttrain_acc=" << s.train_accuracy << "\tdev_loss=" << s.dev_loss
        << "\tdev_acc=" << s.dev_accuracy << '\n';
  };
  const FitResult fitted =
      lex_path.empty() || !config.judge.features.use_dlg
          ? fit(train_set, dev_set, config.judge, on_epoch)
          : fit(train_set, dev_set, config.judge, load_lexicon_file(lex_path),
                on_epoch);

  Checkpoint ckpt;
  ckpt.artifacts = fitted.artifacts;
  auto &meta = ckpt.metadata;
  for (const auto &[k, v]: config_echo(config))
    meta.emplace_back("config." + k, v);
  meta.emplace_back("config_path", opts.config_path);
  meta.emplace_back("train_path", train_path);
  meta.emplace_back("train_digest", train_digest);
  meta.emplace_back("dev_path", dev_path);
  meta.emplace_back("dev_digest", dev_path.empty() ? "" : file_digest(dev_path));
  meta.emplace_back("lexicon_path", lex_path);
  meta.emplace_back("lexicon_digest",
                    lex_path.empty() ? "" : file_digest(lex_path));
  meta.emplace_back("vocab_size", std::to_string(fitted.artifacts.vocab.size()));
  meta.emplace_back("best_epoch", std::to_string(fitted.best_epoch));
  meta.emplace_back("epochs_run", std::to_string(fitted.history.size()));
  save_checkpoint(out_path, ckpt);

  if (!opts.history.empty()) {
    auto hs = open_out(opts.history);
    hs << "epoch\ttrain_loss\ttrain_accuracy\tdev_loss\tdev_accuracy\n";
    for (const auto &s: fitted.history)
      hs << s.epoch << '\t' << format_number(s.train_loss) << '\t'
         << format_number(s.train_accuracy) << '\t'
         << format_number(s.dev_loss) << '\t'
         << format_number(s.dev_accuracy) << '\n';
    finish(hs, opts.history);
  }
  log << "train\tbest_epoch=" << fitted.best_epoch << "\tmodel=" << out_path
      << '\n';
}

void cmd_predict(const PredictOptions &opts, std::ostream &out) {
  Checkpoint ckpt = load_checkpoint(opts.model);
  if (opts.threshold)
    ckpt.artifacts.threshold = *opts.threshold;

  std::vector<std::string> reactions = opts.reactions;
  if (!opts.input.empty()) {
    std::ifstream is(opts.input);
    if (!is)
      throw IoError("cannot open " + opts.input);
    std::string line;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string first;
      if (ls >> first)
        reactions.push_back(first);
    }
  }
  for (const auto &r: reactions) {
    const Prediction p = predict(std::string_view(r), ckpt.artifacts);
    out << format_number(p.probability) << '\t' << p.label << '\n';
  }
}

void cmd_evaluate(const EvaluateOptions &opts, std::ostream &out) {
  Checkpoint ckpt = load_checkpoint(opts.model);
  const double th = opts.threshold.value_or(ckpt.artifacts.threshold);
  std::ostringstream sink;
  const auto scored = score(load_labeled(opts.test, sink), ckpt.artifacts);
  const EvalReport report = metrics(confusion(scored, th), th);

  if (opts.metrics_out.empty()) {
    write_metrics_kv(out, report);
  } else {
    auto os = open_out(opts.metrics_out);
    write_metrics_kv(os, report);
    finish(os, opts.metrics_out);
  }
  if (!opts.roc_out.empty()) {
    const RocCurve roc = roc_auc(scored);
    auto os = open_out(opts.roc_out);
    write_roc_tsv(os, roc);
    finish(os, opts.roc_out);
    out << "auc=" << format_number(roc.auc) << '\n';
  }
  if (!opts.sweep_out.empty()) {
    const SweepTable table = threshold_sweep(scored, 10);
    auto os = open_out(opts.sweep_out);
    write_sweep_tsv(os, table);
    finish(os, opts.sweep_out);
    out << "sweep.best_threshold="
        << format_number(table.rows[table.best].threshold) << '\n';
  }
}

void cmd_experiment(const ExperimentOptions &opts, const Config &config,
                    std::ostream &log) {
  if (opts.name.empty())
    throw ConfigError("experiment needs a name");
  std::vector<ExperimentCell> cells;
  if (opts.grid == "ablation" || opts.grid == "incremental") {
    DatasetSplit data;
    data.seed = config.seed();
    data.train = load_labeled(config.train_path, log);
    data.dev = config.dev_path.empty() ? std::vector<LabeledReaction> { }
                                       : load_labeled(config.dev_path, log);
    if (opts.grid == "ablation") {
      data.test = load_labeled(config.test_path, log);
      cells = ablation_grid(data, config.judge);
    } else {
      if (opts.pool.empty())
        throw ConfigError("incremental grid needs --pool");
      auto [pool, test] = split_half(load_labeled(opts.pool, log), config.seed());
      cells = incremental_grid(data, pool, test, config.judge, opts.ratios);
    }
  } else if (opts.grid != "none") {
    throw ConfigError("unknown grid '" + opts.grid + "'");
  }

  const Manifest m = run_experiment(opts.name, cells, config.report_dir);
  std::size_t failed = 0;
  for (const auto &c: m.cells) {
    log << "cell\t" << c.name << '\t' << (c.ok ? "ok" : "failed");
    if (c.ok)
      log << "\taccuracy=" << c.report.accuracy;
    else
      log << '\t' << c.error;
    log << '\n';
    failed += c.ok ? 0 : 1;
  }
  if (failed > 0)
    throw Error("CellFailed", std::to_string(failed) + " of "
                                  + std::to_string(m.cells.size())
                                  + " cells failed");
}

int exit_code(const std::exception &e) {
  if (dynamic_cast<const IoError *>(&e) || dynamic_cast<const EmptyCorpus *>(&e))
    return 2;
  if (dynamic_cast<const ConfigError *>(&e))
    return 3;
  if (dynamic_cast<const fs::filesystem_error *>(&e))
    return 2;
  return 1;
}

std::string error_line(const std::exception &e) {
  std::string kind = "Error";
  if (const auto *re = dynamic_cast<const Error *>(&e))
    kind = re->kind();
  else if (dynamic_cast<const fs::filesystem_error *>(&e))
    kind = "IoError";
  std::string msg = e.what();
  std::replace_if(msg.begin(), msg.end(),
                  [](char c) { return c == '\n' || c == '\t' || c == '\r'; },
                  ' ');
  return "error\t" + kind + "\t" + msg;
}

} // namespace rxpj
