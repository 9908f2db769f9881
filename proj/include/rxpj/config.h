//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_CONFIG_H_
#define RXPJ_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "rxpj/judge.h"

namespace rxpj {

// Flat key=value settings. Blank lines and lines starting with '#' are
// skipped.
struct Config {
  JudgeConfig judge;  // judge.train.seed is the run seed
  std::size_t negatives_cap = 100000;
  std::string train_path, dev_path, test_path;
  std::string lexicon_path, model_path, report_dir = "reports";
  std::string rules_path;

  std::uint64_t seed() const { return judge.train.seed; }
};

// Every key the parser accepts, in echo order.
const std::vector<std::string> &config_keys();

// Throws ConfigError on unknown keys, duplicate keys, missing '=' or values
// that fail their type check.
Config parse_config(std::istream &is, Config base = { });
// Throws IoError when the file cannot be read.
Config load_config(const std::filesystem::path &path, Config base = { });

// Applies a single key=value override (same checks as the parser).
void set_config_value(Config &config, const std::string &key,
                      const std::string &value);

// RXPJ_SEED, when set, replaces the seed. Throws ConfigError if it is not an
// unsigned integer.
void apply_environment(Config &config);

// key, value pairs for every key, parseable by parse_config.
std::vector<std::pair<std::string, std::string>>
config_echo(const Config &config);

} // namespace rxpj

#endif // RXPJ_CONFIG_H_
