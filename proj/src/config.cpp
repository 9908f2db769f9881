//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/config.h"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rxpj/errors.h"
#include "rxpj/number_format.h"

namespace rxpj {
namespace {
std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return { };
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value,
                            const char *expected) {
  throw ConfigError("key '" + key + "': expected " + expected + ", got '"
                    + value + "'");
}

std::uint64_t to_uint(const std::string &key, const std::string &v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc { } || p != v.data() + v.size())
    bad_value(key, v, "unsigned integer");
  return out;
}

std::size_t to_positive(const std::string &key, const std::string &v) {
  const auto n = to_uint(key, v);
  if (n == 0)
    bad_value(key, v, "positive integer");
  return static_cast<std::size_t>(n);
}

double to_double(const std::string &key, const std::string &v) {
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc { } || p != v.data() + v.size()
      || !std::isfinite(out))
    bad_value(key, v, "number");
  return out;
}

bool to_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1")
    return true;
  if (v == "false" || v == "0")
    return false;
  bad_value(key, v, "true/false");
}

std::string fmt(double v) { return format_number(v); }

struct Field {
  std::function<void(Config &, const std::string &, const std::string &)> set;
  std::function<std::string(const Config &)> get;
};

const std::vector<std::pair<std::string, Field>> &fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
    { "embedding_dim",
      { [](Config &c, auto &k, auto &v) { c.judge.dims.embed = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.dims.embed); } } },
    { "hidden_dim",
      { [](Config &c, auto &k, auto &v) { c.judge.dims.hidden = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.dims.hidden); } } },
    { "max_len",
      { [](Config &c, auto &k, auto &v) { c.judge.dims.max_len = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.dims.max_len); } } },
    { "threshold",
      { [](Config &c, auto &k, auto &v) {
          const double t = to_double(k, v);
          if (t < 0 || t > 1)
            bad_value(k, v, "value in [0, 1]");
          c.judge.threshold = t;
          c.judge.train.threshold = t;
        },
        [](const Config &c) { return fmt(c.judge.threshold); } } },
    { "use_rsd",
      { [](Config &c, auto &k, auto &v) { c.judge.features.use_rsd = to_bool(k, v); },
        [](const Config &c) { return std::string(c.judge.features.use_rsd ? "true" : "false"); } } },
    { "use_dlg",
      { [](Config &c, auto &k, auto &v) { c.judge.features.use_dlg = to_bool(k, v); },
        [](const Config &c) { return std::string(c.judge.features.use_dlg ? "true" : "false"); } } },
    { "segment_mode",
      { [](Config &c, auto &k, auto &v) {
          if (v == "greedy")
            c.judge.features.segment_mode = SegmentMode::kGreedy;
          else if (v == "global")
            c.judge.features.segment_mode = SegmentMode::kGlobal;
          else
            bad_value(k, v, "greedy or global");
        },
        [](const Config &c) {
          return std::string(c.judge.features.segment_mode == SegmentMode::kGlobal
                                 ? "global"
                                 : "greedy");
        } } },
    { "seed",
      { [](Config &c, auto &k, auto &v) { c.judge.train.seed = to_uint(k, v); },
        [](const Config &c) { return std::to_string(c.judge.train.seed); } } },
    { "epochs",
      { [](Config &c, auto &k, auto &v) { c.judge.train.epochs = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.train.epochs); } } },
    { "batch_size",
      { [](Config &c, auto &k, auto &v) { c.judge.train.batch_size = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.train.batch_size); } } },
    { "learning_rate",
      { [](Config &c, auto &k, auto &v) {
          const double lr = to_double(k, v);
          if (lr <= 0)
            bad_value(k, v, "positive number");
          c.judge.train.learning_rate = lr;
        },
        [](const Config &c) { return fmt(c.judge.train.learning_rate); } } },
    { "grad_clip",
      { [](Config &c, auto &k, auto &v) { c.judge.train.clip_norm = to_double(k, v); },
        [](const Config &c) { return fmt(c.judge.train.clip_norm); } } },
    { "lexicon_max_n",
      { [](Config &c, auto &k, auto &v) { c.judge.lexicon.max_n = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.lexicon.max_n); } } },
    { "lexicon_min_count",
      { [](Config &c, auto &k, auto &v) { c.judge.lexicon.min_count = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.lexicon.min_count); } } },
    { "lexicon_threshold",
      { [](Config &c, auto &k, auto &v) { c.judge.lexicon.threshold = to_double(k, v); },
        [](const Config &c) { return fmt(c.judge.lexicon.threshold); } } },
    { "vocab_min_count",
      { [](Config &c, auto &k, auto &v) { c.judge.vocab_min_count = to_positive(k, v); },
        [](const Config &c) { return std::to_string(c.judge.vocab_min_count); } } },
    { "negatives_cap",
      { [](Config &c, auto &k, auto &v) { c.negatives_cap = to_uint(k, v); },
        [](const Config &c) { return std::to_string(c.negatives_cap); } } },
    { "train_path",
      { [](Config &c, auto &, auto &v) { c.train_path = v; },
        [](const Config &c) { return c.train_path; } } },
    { "dev_path",
      { [](Config &c, auto &, auto &v) { c.dev_path = v; },
        [](const Config &c) { return c.dev_path; } } },
    { "test_path",
      { [](Config &c, auto &, auto &v) { c.test_path = v; },
        [](const Config &c) { return c.test_path; } } },
    { "lexicon_path",
      { [](Config &c, auto &, auto &v) { c.lexicon_path = v; },
        [](const Config &c) { return c.lexicon_path; } } },
    { "model_path",
      { [](Config &c, auto &, auto &v) { c.model_path = v; },
        [](const Config &c) { return c.model_path; } } },
    { "report_dir",
      { [](Config &c, auto &, auto &v) { c.report_dir = v; },
        [](const Config &c) { return c.report_dir; } } },
    { "rules_path",
      { [](Config &c, auto &, auto &v) { c.rules_path = v; },
        [](const Config &c) { return c.rules_path; } } },
  };
  return table;
}

const Field *find_field(const std::string &key) {
  for (const auto &[name, f]: fields())
    if (name == key)
      return &f;
  return nullptr;
}
} // namespace

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto &[name, f]: fields())
      out.push_back(name);
    return out;
  }();
  return keys;
}

void set_config_value(Config &config, const std::string &key,
                      const std::string &value) {
  const Field *f = find_field(key);
  if (!f)
    throw ConfigError("unknown key '" + key + "'");
  f->set(config, key, value);
}

Config parse_config(std::istream &is, Config base) {
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": missing '='");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '"
                        + key + "'");
    set_config_value(base, key, value);
  }
  return base;
}

Config load_config(const std::filesystem::path &path, Config base) {
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot open " + path.string());
  return parse_config(is, std::move(base));
}

void apply_environment(Config &config) {
  if (const char *s = std::getenv("RXPJ_SEED"))
    config.judge.train.seed = to_uint("RXPJ_SEED", s);
}

std::vector<std::pair<std::string, std::string>>
config_echo(const Config &config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto &[name, f]: fields())
    out.emplace_back(name, f.get(config));
  return out;
}

} // namespace rxpj
