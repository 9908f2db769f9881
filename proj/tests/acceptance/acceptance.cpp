//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Criterion ids given on the command line restrict the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.h"
#include "oracles.h"
#include "rxpj/commands.h"
#include "rxpj/datasets.h"
#include "rxpj/dlg.h"
#include "rxpj/errors.h"
#include "rxpj/evaluation.h"
#include "rxpj/hash.h"
#include "rxpj/judge.h"
#include "rxpj/model.h"
#include "rxpj/rsd.h"
#include "rxpj/smiles_text.h"
#include "rxpj/trainer.h"
#include "synthetic.h"
#include "toy_task.h"

using namespace rxpj;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// 1. Tokenizer round trip on random and corpus molecule strings.
Outcome tokenizer_round_trip() {
  std::mt19937_64 rng(101);
  std::vector<std::string> inputs;
  for (int k = 0; k < 10000; ++k)
    inputs.push_back(synth::random_smiles_text(rng, 40));
  std::vector<std::string> corpus;
  for (const auto &r: synth::reactions(600, 102, true)) {
    const RawReaction raw = parse_reaction(r);
    for (const auto *side: { &raw.reactants, &raw.reagents, &raw.products })
      corpus.insert(corpus.end(), side->begin(), side->end());
  }
  std::shuffle(corpus.begin(), corpus.end(), rng);
  corpus.resize(std::min<std::size_t>(corpus.size(), 1000));
  int next_map = 1;
  for (std::size_t k = 0; k < corpus.size(); k += 2)
    corpus[k] = synth::add_atom_maps(corpus[k], next_map);
  const std::size_t corpus_count = corpus.size();
  inputs.insert(inputs.end(), corpus.begin(), corpus.end());

  const auto t0 = Clock::now();
  std::size_t ok = 0;
  for (const auto &s: inputs)
    ok += join_tokens(tokenize_atomwise(s)) == s;
  const double secs = seconds_since(t0);
  return { ok == inputs.size() && corpus_count == 1000 && secs < 5.0,
           fmt("%zu/%zu round trips (%zu corpus), %.3f s (limit 5 s)", ok,
               inputs.size(), corpus_count, secs) };
}

// 2. DLG score against the literal replacement oracle.
Outcome dlg_oracle() {
  std::mt19937_64 rng(202);
  double worst = 0;
  int cases = 0;
  while (cases < 500) {
    const int alphabet = 2 + static_cast<int>(rng() % 5);
    const std::size_t nseq = 1 + rng() % 4;
    std::vector<TokenSequence> seqs(nseq);
    std::size_t symbols = 0;
    for (auto &s: seqs) {
      const std::size_t len = 1 + rng() % 49;
      for (std::size_t i = 0; i < len; ++i)
        s.push_back(std::string(1, static_cast<char>('a' + rng() % alphabet)));
      symbols += len + 1;
    }
    if (symbols > 200)
      continue;
    const auto &src = seqs[rng() % nseq];
    const std::size_t len = 1 + rng() % std::min<std::size_t>(5, src.size());
    const std::size_t at = rng() % (src.size() - len + 1);
    const TokenSequence cand(src.begin() + static_cast<long>(at),
                             src.begin() + static_cast<long>(at + len));
    const double got = dlg_score(Corpus(seqs), cand);
    worst = std::max(worst, std::abs(got - oracle::literal_dlg(seqs, cand)));
    ++cases;
  }
  return { worst <= 1e-9, fmt("%d cases, max |diff| %.3g bits (limit 1e-9)", cases, worst) };
}

// 3. Tokenization fixture on a map-stripped epoxide ether reaction.
Outcome tokenization_fixture() {
  const std::string expected = "Cl C C 1 C O 1 . N # C c 1 c c c c c 1 O";
  const RawReaction r =
      parse_reaction("ClCC1CO1.N#Cc1ccccc1O>N1CCCCC1>N#Cc1ccccc1OCC1CO1");
  const std::string got = join_tokens(group_tokens(r.reactants), " ");
  const std::string mapped =
      "[C:1]([C:3]1[CH:8]=[CH:7][CH:6]=[CH:5][C:4]=1[OH:9])#[N:2]."
      "[CH2:10]([CH:12]1[O:14][CH2:13]1)Cl";
  const std::string stripped = strip_atom_maps(mapped);
  const bool maps_gone = stripped.find(':') == std::string::npos
                         && stripped.find('[') == std::string::npos;
  return { got == expected && maps_gone,
           "got '" + got + "'; mapped input strips to '" + stripped + "'" };
}

// 4. RSD replay and minimality.
Outcome rsd_replay() {
  std::mt19937_64 rng(404);
  const std::vector<std::string> alphabet = { "C", "c", "O", "N", "1", "(", ")", "=", "Cl" };
  std::size_t replay_ok = 0, count_ok = 0;
  const std::size_t n = 10000;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t a = rng() % 51, b = rng() % 51;
    const std::size_t sigma = 1 + rng() % alphabet.size();
    TokenSequence s, t;
    for (std::size_t i = 0; i < a; ++i)
      s.push_back(alphabet[rng() % sigma]);
    if (k % 2 == 0) {
      t = s;
      for (int e = static_cast<int>(rng() % 6); e > 0; --e) {
        const std::size_t pos = t.empty() ? 0 : rng() % (t.size() + 1);
        switch (rng() % 3) {
        case 0: t.insert(t.begin() + static_cast<long>(pos), alphabet[rng() % sigma]); break;
        case 1: if (pos < t.size()) t.erase(t.begin() + static_cast<long>(pos)); break;
        default: if (pos < t.size()) t[pos] = alphabet[rng() % sigma];
        }
      }
      if (t.size() > 50)
        t.resize(50);
    } else {
      for (std::size_t i = 0; i < b; ++i)
        t.push_back(alphabet[rng() % sigma]);
    }
    const RsdSequence rsd = generate_rsd(s, t);
    replay_ok += apply_rsd(s, rsd) == t;
    count_ok += rsd.cost() == oracle::edit_distance(s, t)
                && rsd.cost() == edit_distance(s, t);
  }
  return { replay_ok == n && count_ok == n,
           fmt("replay %zu/%zu, non-NOP count == edit distance %zu/%zu", replay_ok, n,
               count_ok, n) };
}

// 5. Gradient check on the tiny model.
Outcome gradient_check() {
  ModelDims dims;
  dims.vocab = 9;
  dims.embed = 3;
  dims.hidden = 4;
  dims.max_len = 6;
  const auto t0 = Clock::now();
  double worst = 0;
  std::string where;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed * 7919);
    const auto params = ModelParams<double>::random(dims, seed);
    const auto r = gradcheck::check(params, gradcheck::random_batch(dims, 4, rng), 1e-4);
    if (r.max_rel_error > worst) {
      worst = r.max_rel_error;
      where = "seed " + std::to_string(seed) + " " + r.worst;
    }
  }
  const double secs = seconds_since(t0);
  return { worst < 1e-4 && secs < 60.0,
           fmt("max relative error %.3g at %s (limit 1e-4), %.2f s (limit 60 s)", worst,
               where.c_str(), secs) };
}

// 6. Extending the padding leaves the prediction unchanged.
Outcome masking_invariance() {
  ModelDims dims;
  dims.vocab = 30;
  dims.embed = 5;
  dims.hidden = 6;
  dims.max_len = 12;
  std::mt19937_64 rng(606);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    auto params = ModelParams<double>::random(dims, static_cast<std::uint64_t>(k));
    EncodedExample ex;
    for (auto *seq: { &ex.reactant, &ex.product, &ex.rsd })
      for (std::size_t i = 1 + rng() % dims.max_len; i > 0; --i)
        seq->push_back(static_cast<TokenId>(1 + rng() % (dims.vocab - 1)));
    const double base = predict_probability(ex, params);
    for (std::size_t extra: { 1u, 7u, 50u }) {
      params.dims.max_len = dims.max_len + extra;
      worst = std::max(worst, std::abs(predict_probability(ex, params) - base));
    }
  }
  return { worst < 1e-12, fmt("100 inputs, max |delta y| %.3g (limit 1e-12)", worst) };
}

// 7. Marker-token task is learnable.
Outcome toy_task() {
  const auto data = toy::marker_task(2000, 20, 707);
  const std::vector<EncodedExample> tr(data.begin(), data.begin() + 1400);
  const std::vector<EncodedExample> dev(data.begin() + 1400, data.begin() + 1600);
  const std::vector<EncodedExample> held(data.begin() + 1600, data.end());
  ModelDims dims;
  dims.vocab = 20;
  dims.embed = 16;
  dims.hidden = 32;
  dims.max_len = 16;
  TrainOptions o;
  o.epochs = 30;
  o.batch_size = 32;
  o.learning_rate = 0.01;
  o.seed = 7;
  const auto t0 = Clock::now();
  const auto r = train(tr, dev, ModelParams<float>::random(dims, 7), o);
  const double secs = seconds_since(t0);
  const double train_acc = accuracy(tr, r.params);
  const double held_acc = accuracy(held, r.params);
  return { train_acc >= 0.99 && held_acc >= 0.95 && secs < 600,
           fmt("train %.4f (>= 0.99), held-out %.4f (>= 0.95), best epoch %zu of %zu, "
               "%.1f s (limit 600 s)",
               train_acc, held_acc, r.best_epoch, r.history.size(), secs) };
}

// 8. Metrics, AUC and sweep against counting oracles.
Outcome metric_oracles() {
  std::mt19937_64 rng(808);
  std::size_t sets = 0, metric_bad = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<ScoredLabel> preds(n);
    for (auto &p: preds)
      p = { static_cast<double>(rng() % 11) / 10.0, static_cast<int>(rng() % 2) };
    const double th = static_cast<double>(rng() % 11) / 10.0;
    std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
    for (const auto &p: preds) {
      const bool said_pos = !(p.probability < th);
      if (p.label == 1 && said_pos) ++tp;
      if (p.label == 1 && !said_pos) ++fn;
      if (p.label == 0 && said_pos) ++fp;
      if (p.label == 0 && !said_pos) ++tn;
    }
    auto div = [](double a, double b) { return b == 0 ? 0.0 : a / b; };
    const double pp = div(tp, tp + fp), pr = div(tp, tp + fn);
    const double np = div(tn, tn + fn), nr = div(tn, tn + fp);
    const EvalReport r = metrics(confusion(preds, th), th);
    const bool same = r.counts == ConfusionCounts { tp, fn, fp, tn }
                      && r.accuracy == div(tp + tn, n) && r.positive.precision == pp
                      && r.positive.recall == pr
                      && r.positive.f1 == div(2 * pp * pr, pp + pr)
                      && r.negative.precision == np && r.negative.recall == nr
                      && r.negative.f1 == div(2 * np * nr, np + nr);
    metric_bad += !same;
    ++sets;
  }
  bool empty_rejected = false;
  try {
    metrics(ConfusionCounts { });
  } catch (const Error &) {
    empty_rejected = true;
  }

  double auc_worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<ScoredLabel> preds(n);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = trial % 2 ? std::uniform_real_distribution<>(0, 1)(rng)
                                 : static_cast<double>(rng() % 5) / 4.0;
      labels[i] = static_cast<int>(i < 1 ? 1 : i < 2 ? 0 : rng() % 2);
      scores[i] = s;
      preds[i] = { s, labels[i] };
    }
    auc_worst = std::max(auc_worst,
                         std::abs(roc_auc(preds).auc - oracle::pair_auc(scores, labels)));
  }

  std::vector<ScoredLabel> preds;
  for (int i = 0; i < 100; ++i)
    preds.push_back({ std::uniform_real_distribution<>(0, 1)(rng), i % 3 ? 1 : 0 });
  const SweepTable sweep = threshold_sweep(preds);
  bool grid_ok = sweep.rows.size() == 10;
  for (std::size_t k = 0; grid_ok && k < 10; ++k)
    grid_ok = std::abs(sweep.rows[k].threshold - 0.1 * static_cast<double>(k + 1)) < 1e-12;

  return { metric_bad == 0 && empty_rejected && auc_worst <= 1e-12 && grid_ok,
           fmt("metrics mismatches %zu/%zu sets, empty set rejected %s, AUC max |diff| %.3g "
               "on 200 sets (limit 1e-12), sweep rows %zu at 0.1 steps %s",
               metric_bad, sets, empty_rejected ? "yes" : "no", auc_worst,
               sweep.rows.size(), grid_ok ? "yes" : "no") };
}

// 9. Generated negatives never collide with known positives.
Outcome negative_filter() {
  std::vector<LabeledReaction> pos;
  for (const auto &r: synth::reactions(1000, 909))
    pos.push_back({ normalize_reaction(parse_reaction(r)), 1 });
  NegativeRules rules;
  rules.rewrites = load_rules(fs::path(RXPJ_SOURCE_DIR) / "data" / "rules.tsv");
  const KnownPositiveIndex base = build_index(pos);
  KnownPositiveIndex known = base;
  const auto first = generate_negatives(pos, rules, known, 1000000);

  // Mark every other first-round negative as a known positive and rerun.
  std::set<std::string> planted;
  for (std::size_t k = 0; k < first.size(); k += 2) {
    planted.insert(first[k].key());
    known.insert(first[k].key());
  }
  const auto second = generate_negatives(pos, rules, known, 1000000);
  std::size_t hits = 0;
  for (const auto &n: first)
    hits += n.label != 0 || base.contains(n.key());
  for (const auto &n: second)
    hits += n.label != 0 || known.contains(n.key());
  return { hits == 0 && !first.empty() && !planted.empty() && second.size() < first.size(),
           fmt("%zu rules, %zu negatives, %zu after planting %zu known, %zu collisions",
               rules.rewrites.size(), first.size(), second.size(), planted.size(), hits) };
}

// 10. prepare, lexicon, train and evaluate on a synthetic corpus.
struct PipelineRun {
  std::map<std::string, std::string> digests;
  std::map<std::string, std::string> eval;
  std::map<std::string, std::string> manifest;
};

std::map<std::string, std::string> parse_kv(const std::string &text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);)
    if (const auto eq = line.find('='); eq != std::string::npos)
      out[line.substr(0, eq)] = line.substr(eq + 1);
  return out;
}

PipelineRun run_pipeline(const fs::path &dir, const Config &cfg) {
  fs::create_directories(dir);
  std::ostringstream log;
  const std::string pos = (dir / "positives.tsv").string();
  {
    std::ofstream os(pos);
    for (const auto &r: synth::reactions(5000, 1010, true))
      os << "1\t" << r << '\n';
  }
  GenNegativesOptions g;
  g.positives = pos;
  g.rules = (fs::path(RXPJ_SOURCE_DIR) / "data" / "rules.tsv").string();
  g.out = (dir / "negatives.tsv").string();
  g.cap = 500;
  cmd_gen_negatives(g, cfg, log);

  PrepareOptions p;
  p.inputs = { pos, g.out };
  p.out_dir = (dir / "prep").string();
  cmd_prepare(p, cfg, log);

  const std::string train = (dir / "prep" / "train.tsv").string();
  const std::string lexicon = (dir / "lexicon.tsv").string();
  cmd_lexicon_build({ train, lexicon }, cfg, log);

  TrainCmdOptions t;
  t.train = train;
  t.dev = (dir / "prep" / "dev.tsv").string();
  t.lexicon = lexicon;
  t.out = (dir / "model.bin").string();
  cmd_train(t, cfg, log);

  EvaluateOptions e;
  e.model = t.out;
  e.test = (dir / "prep" / "test.tsv").string();
  e.sweep_out = (dir / "sweep.tsv").string();
  e.roc_out = (dir / "roc.tsv").string();
  std::ostringstream out;
  cmd_evaluate(e, out);

  PipelineRun run;
  for (const char *f: { "negatives.tsv", "prep/train.tsv", "prep/dev.tsv", "prep/test.tsv",
                        "lexicon.tsv", "model.bin", "sweep.tsv", "roc.tsv" })
    run.digests[f] = file_digest(dir / f);
  run.eval = parse_kv(out.str());
  std::ifstream ms(dir / "prep" / "manifest.kv");
  run.manifest = parse_kv({ std::istreambuf_iterator<char>(ms), { } });
  return run;
}

Outcome end_to_end() {
  Config cfg;
  cfg.judge.dims.embed = 16;
  cfg.judge.dims.hidden = 32;
  cfg.judge.train.epochs = 6;
  cfg.judge.train.batch_size = 32;
  cfg.judge.train.learning_rate = 0.005;
  cfg.judge.train.seed = 2024;
  const fs::path dir = fs::temp_directory_path() / "rxpj_acceptance_e2e";
  fs::remove_all(dir);

  const auto t0 = Clock::now();
  const PipelineRun a = run_pipeline(dir, cfg);
  const double secs = seconds_since(t0);
  const PipelineRun b = run_pipeline(dir, cfg);

  std::string differing;
  for (const auto &[f, d]: a.digests)
    if (b.digests.at(f) != d)
      differing += " " + f;
  const bool deterministic = differing.empty() && a.eval == b.eval;

  const double pos = std::stod(a.manifest.at("test.positive"));
  const double neg = std::stod(a.manifest.at("test.negative"));
  const double baseline = std::max(pos, neg) / (pos + neg);
  const double acc = std::stod(a.eval.at("accuracy"));
  return { deterministic && acc > baseline && secs < 1800,
           fmt("test %g pos / %g neg, accuracy %.4f vs majority %.4f, auc %s, "
               "deterministic %s%s, one run %.1f s (limit 1800 s)",
               pos, neg, acc, baseline, a.eval.count("auc") ? a.eval.at("auc").c_str() : "n/a",
               deterministic ? "yes" : "no", differing.c_str(), secs) };
}

} // namespace

int main(int argc, char **argv) {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
    { "tokenizer round trip", tokenizer_round_trip },
    { "DLG oracle equivalence", dlg_oracle },
    { "tokenization fixture", tokenization_fixture },
    { "RSD replay", rsd_replay },
    { "gradient check", gradient_check },
    { "masking invariance", masking_invariance },
    { "toy-task learnability", toy_task },
    { "metric oracles", metric_oracles },
    { "negative filter soundness", negative_filter },
    { "end-to-end pipeline", end_to_end },
  };

  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i)
    only.insert(static_cast<std::size_t>(std::stoul(argv[i])));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const std::size_t id = k + 1;
    if (!only.empty() && !only.count(id))
      continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception &e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " ("
              << criteria[k].first << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
