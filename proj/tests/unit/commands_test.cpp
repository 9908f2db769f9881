//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "rxpj/checkpoint.h"
#include "rxpj/commands.h"
#include "rxpj/errors.h"
#include "rxpj/experiment.h"
#include "rxpj/hash.h"
#include "synthetic.h"

using namespace rxpj;
namespace fs = std::filesystem;

namespace {
class CommandsTest: public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path()
           / ("rxpj_cmd_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    cfg_.judge.dims.embed = 8;
    cfg_.judge.dims.hidden = 8;
    cfg_.judge.dims.max_len = 60;
    cfg_.judge.train.epochs = 2;
    cfg_.judge.train.batch_size = 32;
    cfg_.report_dir = (dir_ / "reports").string();
  }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  std::string write(const std::string &name, const std::string &text) const {
    std::ofstream os(path(name));
    os << text;
    return path(name);
  }

  static std::string slurp(const std::string &p) {
    std::ifstream is(p, std::ios::binary);
    return { std::istreambuf_iterator<char>(is), { } };
  }

  static std::map<std::string, std::string> kv(const std::string &p) {
    std::map<std::string, std::string> out;
    std::istringstream is(slurp(p));
    for (std::string line; std::getline(is, line);) {
      const auto eq = line.find('=');
      out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
  }

  // Positives plus some rule negatives, with one malformed line and one
  // duplicate.
  std::string corpus_file(std::size_t n) const {
    std::ostringstream os;
    const auto rs = synth::reactions(n, 21);
    for (std::size_t k = 0; k < rs.size(); ++k)
      os << (k % 5 == 0 ? 0 : 1) << '\t' << rs[k] << '\n';
    os << "1\tnot a reaction\n";
    os << "1\t" << rs[1] << '\n';
    return write("corpus.tsv", os.str());
  }

  void prepare(const std::string &out) {
    PrepareOptions o;
    o.inputs = { corpus_file(200) };
    o.out_dir = path(out);
    std::ostringstream log;
    cmd_prepare(o, cfg_, log);
  }

  fs::path dir_;
  Config cfg_;
};
} // namespace

TEST_F(CommandsTest, PrepareWritesSplitsAndManifest) {
  prepare("prep");
  const auto m = kv(path("prep/manifest.kv"));
  EXPECT_EQ(m.at("records.malformed"), "1");
  EXPECT_EQ(m.at("records.duplicates"), "1");
  EXPECT_EQ(m.at("records.unique"), "200");
  EXPECT_EQ(std::stoul(m.at("train.count")) + std::stoul(m.at("dev.count"))
                + std::stoul(m.at("test.count")),
            200u);
  EXPECT_EQ(m.at("test.count"), "20");
  EXPECT_EQ(m.at("test.negative"), "4");
  EXPECT_EQ(m.at("train.digest"), file_digest(path("prep/train.tsv")));
}

TEST_F(CommandsTest, PrepareIsByteIdenticalUnderSeed) {
  prepare("a");
  prepare("b");
  for (const char *f: { "train.tsv", "dev.tsv", "test.tsv", "manifest.kv" })
    EXPECT_EQ(slurp(path(std::string("a/") + f)), slurp(path(std::string("b/") + f))) << f;
  cfg_.judge.train.seed = 99;
  prepare("c");
  EXPECT_NE(slurp(path("a/train.tsv")), slurp(path("c/train.tsv")));
}

TEST_F(CommandsTest, PrepareErrors) {
  std::ostringstream log;
  PrepareOptions o;
  o.inputs = { path("missing.tsv") };
  o.out_dir = path("x");
  try {
    cmd_prepare(o, cfg_, log);
    FAIL();
  } catch (const std::exception &e) {
    EXPECT_EQ(exit_code(e), 2);
  }
  o.inputs = { write("empty.tsv", "") };
  try {
    cmd_prepare(o, cfg_, log);
    FAIL();
  } catch (const std::exception &e) {
    EXPECT_EQ(exit_code(e), 2);
    EXPECT_EQ(error_line(e).rfind("error\tEmptyCorpus\t", 0), 0u);
  }
}

TEST_F(CommandsTest, LexiconBuildAndApply) {
  std::ostringstream lines;
  for (int k = 0; k < 30; ++k)
    lines << "1\tN#Cc1ccccc1O.ClCC1CO1>>N#Cc1ccccc1OCC1CO1\n";
  const std::string train = write("train.tsv", lines.str());
  std::ostringstream log;
  cmd_lexicon_build({ train, path("lex.tsv") }, cfg_, log);

  std::ifstream is(path("lex.tsv"));
  const Lexicon lex = Lexicon::load(is);
  EXPECT_GT(lex.multi_token_count(), 0u);
  EXPECT_EQ(kv(path("lex.tsv.provenance")).at("train_digest"), file_digest(train));

  std::ostringstream out;
  cmd_lexicon_apply({ path("lex.tsv"), { "N#Cc1ccccc1O" } }, cfg_, out);
  const std::string words = out.str();
  EXPECT_LT(std::count(words.begin(), words.end(), ' '), 11);

  const std::string empty = write("empty.tsv", "\n");
  try {
    cmd_lexicon_build({ empty, path("lex2.tsv") }, cfg_, log);
    FAIL();
  } catch (const std::exception &e) {
    EXPECT_EQ(exit_code(e), 2);
    EXPECT_NE(error_line(e).find("EmptyCorpus"), std::string::npos);
  }
}

TEST_F(CommandsTest, GenNegativesAvoidsKnown) {
  std::ostringstream os;
  for (const auto &r: synth::reactions(100, 3))
    os << r << '\n';
  GenNegativesOptions o;
  o.positives = write("pos.txt", os.str());
  o.label_mode = LabelMode::kPositive;
  o.out = path("neg.tsv");
  o.cap = 40;
  o.rules = RXPJ_SOURCE_DIR "/data/rules.tsv";
  std::ostringstream log;
  cmd_gen_negatives(o, cfg_, log);
  const auto negs = load_corpus(o.out, LabelMode::kColumn);
  EXPECT_EQ(negs.records.size(), 40u);
  const auto pos = load_corpus(o.positives, LabelMode::kPositive);
  const auto idx = build_index(pos.records);
  for (const auto &n: negs.records) {
    EXPECT_EQ(n.label, 0);
    EXPECT_FALSE(idx.contains(n.key()));
  }
}

TEST_F(CommandsTest, RsdPrintsThreeRows) {
  std::ostringstream out;
  cmd_rsd("CCO>>CC=O", out);
  EXPECT_EQ(out.str(), "C\tC\tO\t$\n_\t_\tAD:=\t_\nC\tC\t=O\t-\n");
}

TEST_F(CommandsTest, TrainPredictEvaluate) {
  prepare("prep");
  std::ostringstream log;
  TrainCmdOptions t;
  t.train = path("prep/train.tsv");
  t.dev = path("prep/dev.tsv");
  t.out = path("model.bin");
  t.history = path("history.tsv");
  cmd_train(t, cfg_, log);
  const Checkpoint ck = load_checkpoint(t.out);
  EXPECT_EQ(metadata_value(ck, "train_digest"), file_digest(t.train));
  EXPECT_EQ(metadata_value(ck, "config.hidden_dim"), "8");

  std::ostringstream pred;
  PredictOptions p;
  p.model = t.out;
  p.reactions = { "CCO>>CC=O" };
  cmd_predict(p, pred);
  const std::string line = pred.str();
  const auto tab = line.find('\t');
  ASSERT_NE(tab, std::string::npos);
  const double prob = std::stod(line.substr(0, tab));
  EXPECT_EQ(line.substr(tab + 1), prob >= 0.5 ? "1\n" : "0\n");

  std::ostringstream ev;
  EvaluateOptions e;
  e.model = t.out;
  e.test = path("prep/test.tsv");
  e.sweep_out = path("sweep.tsv");
  e.roc_out = path("roc.tsv");
  cmd_evaluate(e, ev);
  EXPECT_NE(ev.str().find("accuracy="), std::string::npos);
  const std::string sweep = slurp(e.sweep_out);
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 11);
  EXPECT_EQ(slurp(e.roc_out).rfind("fpr\ttpr\tthreshold\n", 0), 0u);
}

TEST_F(CommandsTest, ExperimentEmptyGridIsNoop) {
  std::ostringstream log;
  cmd_experiment({ "empty", "none", "", { } }, cfg_, log);
  EXPECT_FALSE(fs::exists(path("reports/empty")));
  EXPECT_THROW(cmd_experiment({ "x", "sideways", "", { } }, cfg_, log), ConfigError);
}

TEST_F(CommandsTest, ExperimentAblationGrid) {
  prepare("prep");
  cfg_.train_path = path("prep/train.tsv");
  cfg_.dev_path = path("prep/dev.tsv");
  cfg_.test_path = path("prep/test.tsv");
  cfg_.judge.train.epochs = 1;
  std::ostringstream log;
  cmd_experiment({ "abl", "ablation", "", { } }, cfg_, log);
  for (const char *cell: { "full", "no_rsd", "no_dlg", "no_rsd_no_dlg" }) {
    const auto m = kv(path(std::string("reports/abl/") + cell + "/metrics.kv"));
    EXPECT_EQ(m.at("count"), "20") << cell;
    EXPECT_TRUE(fs::exists(path(std::string("reports/abl/") + cell + "/roc.tsv")));
  }
}

TEST(ErrorMapping, Codes) {
  EXPECT_EQ(exit_code(IoError("x")), 2);
  EXPECT_EQ(exit_code(EmptyCorpus("x")), 2);
  EXPECT_EQ(exit_code(ConfigError("x")), 3);
  EXPECT_EQ(exit_code(MalformedReaction("x")), 1);
  EXPECT_EQ(exit_code(std::runtime_error("x")), 1);
  EXPECT_EQ(error_line(CheckpointError("bad\nthing")), "error\tCheckpointError\tbad thing");
}
