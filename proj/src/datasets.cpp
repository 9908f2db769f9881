//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/datasets.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rxpj/errors.h"
#include "rxpj/hash.h"

namespace rxpj {
namespace {
std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return { };
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string_view first_field(std::string_view s) {
  s = trim(s);
  return s.substr(0, s.find_first_of(" \t"));
}

std::string first_word(const std::string &molecule, const Lexicon &lexicon) {
  const TokenSequence toks = tokenize_atomwise(molecule);
  if (toks.empty())
    return { };
  if (lexicon.size() == 0)
    return toks.front();
  return segment(toks, lexicon).words.front();
}

// Largest-remainder apportionment of `total` over `sizes`.
std::vector<std::size_t> apportion(const std::vector<std::size_t> &sizes,
                                   std::size_t total) {
  std::size_t n = 0;
  for (std::size_t s: sizes)
    n += s;
  std::vector<std::size_t> out(sizes.size(), 0);
  if (n == 0)
    return out;

  std::vector<std::pair<std::size_t, std::size_t>> rem;  // remainder, index
  std::size_t given = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::size_t num = sizes[k] * total;
    out[k] = num / n;
    given += out[k];
    rem.emplace_back(num % n, k);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto &a, const auto &b) {
    return a.first > b.first;
  });
  for (std::size_t k = 0; given < total && k < rem.size(); ++k, ++given)
    ++out[rem[k].second];
  return out;
}

std::size_t tenth(std::size_t n) {
  return (n + 5) / 10;
}

RawReaction with_reactants(const RawReaction &base,
                           std::vector<std::string> reactants) {
  RawReaction r = base;
  r.reactants = std::move(reactants);
  return r;
}

// Every position where `lhs` matches `toks`, rewritten.
std::vector<std::string> rewrite_all(const TokenSequence &toks,
                                     const RewriteRule &rule) {
  std::vector<std::string> out;
  const std::size_t n = rule.lhs.size();
  if (n == 0 || n > toks.size())
    return out;

  for (std::size_t pos = 0; pos + n <= toks.size(); ++pos) {
    TokenSequence captured;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      if (rule.lhs[k] == "*")
        captured.push_back(toks[pos + k]);
      else
        ok = rule.lhs[k] == toks[pos + k];
    }
    if (!ok)
      continue;

    TokenSequence result(toks.begin(), toks.begin() + pos);
    std::size_t next = 0;
    for (const auto &t: rule.rhs) {
      if (t == "*")
        result.push_back(next < captured.size() ? captured[next++] : "");
      else
        result.push_back(t);
    }
    result.insert(result.end(), toks.begin() + pos + n, toks.end());
    std::string mol = join_tokens(result);
    if (!mol.empty())
      out.push_back(std::move(mol));
  }
  return out;
}
} // namespace

LabelMode parse_label_mode(std::string_view name) {
  if (name == "column")
    return LabelMode::kColumn;
  if (name == "positive")
    return LabelMode::kPositive;
  if (name == "negative")
    return LabelMode::kNegative;
  throw ConfigError("unknown label mode '" + std::string(name)
                    + "' (expected column, positive or negative)");
}

LoadResult read_corpus(std::istream &is, LabelMode mode, RecordSource source) {
  LoadResult out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty())
      continue;

    LabeledReaction rec;
    rec.source = source;
    rec.label = mode == LabelMode::kNegative ? 0 : 1;
    try {
      if (mode == LabelMode::kColumn) {
        const std::size_t tab = body.find('\t');
        const std::string_view label = tab == std::string_view::npos
                                           ? std::string_view { }
                                           : trim(body.substr(0, tab));
        if (label != "0" && label != "1")
          throw MalformedReaction("expected a 0/1 label column");
        rec.label = label == "1" ? 1 : 0;
        body = body.substr(tab + 1);
      }
      rec.reaction = normalize_reaction(parse_reaction(first_field(body)));
    } catch (const Error &e) {
      ++out.malformed;
      out.warnings.push_back("line " + std::to_string(lineno) + ": "
                             + e.what());
      continue;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

LoadResult load_corpus(const std::filesystem::path &path, LabelMode mode,
                       RecordSource source) {
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot open " + path.string());
  return read_corpus(is, mode, source);
}

void write_records(std::ostream &os, const std::vector<LabeledReaction> &rs) {
  for (const auto &r: rs)
    os << r.label << '\t' << r.key() << '\n';
}

void write_records(const std::filesystem::path &path,
                   const std::vector<LabeledReaction> &rs) {
  std::ofstream os(path, std::ios::trunc);
  if (!os)
    throw IoError("cannot write " + path.string());
  write_records(os, rs);
  if (!os)
    throw IoError("failed writing " + path.string());
}

DedupResult deduplicate(const std::vector<LabeledReaction> &records) {
  DedupResult out;
  std::unordered_map<std::string, std::size_t> slot;
  std::unordered_map<std::string, bool> conflicted;
  for (const auto &r: records) {
    std::string key = r.key();
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(std::move(key), out.records.size());
      out.records.push_back(r);
      continue;
    }

    ++out.duplicates;
    LabeledReaction &kept = out.records[it->second];
    if (kept.label != r.label) {
      if (!conflicted[key]) {
        conflicted[key] = true;
        ++out.conflicts;
      }
      if (r.label == 0)
        kept = r;
    }
  }
  return out;
}

DatasetSplit split(const std::vector<LabeledReaction> &records,
                   std::uint64_t seed) {
  std::map<int, std::vector<LabeledReaction>> strata;
  for (const auto &r: records)
    strata[r.label].push_back(r);
  for (const auto &[label, rs]: strata)
    if (rs.size() < 3)
      throw TooFewRecords("label " + std::to_string(label) + " has only "
                          + std::to_string(rs.size()) + " records");

  std::vector<std::size_t> sizes;
  for (const auto &[label, rs]: strata)
    sizes.push_back(rs.size());
  const std::size_t n_test = tenth(records.size());
  const std::vector<std::size_t> test_quota = apportion(sizes, n_test);

  std::vector<std::size_t> rest_sizes;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    rest_sizes.push_back(sizes[k] - test_quota[k]);
  const std::size_t n_dev = tenth(records.size() - n_test);
  const std::vector<std::size_t> dev_quota = apportion(rest_sizes, n_dev);

  DatasetSplit out;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  std::size_t k = 0;
  for (auto &[label, rs]: strata) {
    std::shuffle(rs.begin(), rs.end(), rng);
    const std::size_t t = test_quota[k], d = dev_quota[k];
    out.test.insert(out.test.end(), rs.begin(), rs.begin() + t);
    out.dev.insert(out.dev.end(), rs.begin() + t, rs.begin() + t + d);
    out.train.insert(out.train.end(), rs.begin() + t + d, rs.end());
    ++k;
  }
  std::shuffle(out.train.begin(), out.train.end(), rng);
  std::shuffle(out.dev.begin(), out.dev.end(), rng);
  std::shuffle(out.test.begin(), out.test.end(), rng);
  return out;
}

KnownPositiveIndex build_index(const std::vector<LabeledReaction> &positives) {
  KnownPositiveIndex idx;
  idx.reserve(positives.size());
  for (const auto &r: positives)
    idx.insert(render_reaction(normalize_reaction(r.reaction)));
  return idx;
}

std::vector<RewriteRule> load_rules(std::istream &is) {
  std::vector<RewriteRule> rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line).front() == '#')
      continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ConfigError("rule line " + std::to_string(lineno)
                        + " has no TAB separator");

    auto words = [](std::string_view s) {
      TokenSequence out;
      std::istringstream ss { std::string(s) };
      std::string w;
      while (ss >> w)
        out.push_back(w);
      return out;
    };
    RewriteRule rule { words(std::string_view(line).substr(0, tab)),
                       words(std::string_view(line).substr(tab + 1)) };
    if (rule.lhs.empty())
      throw ConfigError("rule line " + std::to_string(lineno)
                        + " has an empty pattern");
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<RewriteRule> load_rules(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot open " + path.string());
  return load_rules(is);
}

std::vector<LabeledReaction>
generate_negatives(const std::vector<LabeledReaction> &positives,
                   const NegativeRules &rules, const KnownPositiveIndex &known,
                   std::size_t cap, const Lexicon &lexicon) {
  std::vector<LabeledReaction> out;
  if (cap == 0 || positives.empty())
    return out;

  // first word -> sorted distinct reactant molecules
  std::map<std::string, std::vector<std::string>> groups;
  std::map<std::string, std::string> first_of;
  if (rules.reactant_swap) {
    for (const auto &p: positives)
      for (const auto &mol: p.reaction.reactants)
        if (!first_of.contains(mol))
          first_of.emplace(mol, first_word(mol, lexicon));
    for (const auto &[mol, word]: first_of)
      groups[word].push_back(mol);
  }

  const std::size_t per_rule = rules.max_per_positive;
  std::vector<std::vector<RawReaction>> candidates(positives.size());
  for (std::size_t pi = 0; pi < positives.size(); ++pi) {
    const RawReaction &base = positives[pi].reaction;
    auto &list = candidates[pi];

    if (rules.reactant_swap) {
      const std::uint64_t salt = fnv1a(render_reaction(base));
      std::size_t made = 0;
      for (std::size_t i = 0; i < base.reactants.size() && made < per_rule;
           ++i) {
        const auto &group = groups[first_of[base.reactants[i]]];
        for (std::size_t k = 0; k < group.size() && made < per_rule; ++k) {
          const std::string &alt = group[(salt + k) % group.size()];
          if (std::find(base.reactants.begin(), base.reactants.end(), alt)
              != base.reactants.end())
            continue;
          std::vector<std::string> rs = base.reactants;
          rs[i] = alt;
          list.push_back(with_reactants(base, std::move(rs)));
          ++made;
        }
      }
    }

    if (rules.reactant_removal && base.reactants.size() >= 2) {
      for (std::size_t i = 0; i < base.reactants.size() && i < per_rule; ++i) {
        std::vector<std::string> rs = base.reactants;
        rs.erase(rs.begin() + static_cast<std::ptrdiff_t>(i));
        list.push_back(with_reactants(base, std::move(rs)));
      }
    }

    for (const auto &rule: rules.rewrites) {
      std::size_t made = 0;
      for (std::size_t i = 0; i < base.reactants.size() && made < per_rule;
           ++i) {
        for (auto &mol: rewrite_all(tokenize_atomwise(base.reactants[i]),
                                    rule)) {
          if (made >= per_rule)
            break;
          std::vector<std::string> rs = base.reactants;
          rs[i] = std::move(mol);
          list.push_back(with_reactants(base, std::move(rs)));
          ++made;
        }
      }
    }
  }

  std::unordered_set<std::string> emitted;
  for (std::size_t round = 0; out.size() < cap; ++round) {
    bool any = false;
    for (std::size_t pi = 0; pi < positives.size() && out.size() < cap; ++pi) {
      if (round >= candidates[pi].size())
        continue;
      any = true;

      LabeledReaction neg;
      try {
        neg.reaction = normalize_reaction(candidates[pi][round]);
      } catch (const Error &) {
        continue;
      }
      std::string key = neg.key();
      if (known.contains(key) || !emitted.insert(std::move(key)).second)
        continue;
      neg.label = 0;
      neg.source = RecordSource::kRuleGenerated;
      out.push_back(std::move(neg));
    }
    if (!any)
      break;
  }
  return out;
}

std::vector<LabeledReaction>
incremental_mix(const std::vector<LabeledReaction> &base_train,
                const std::vector<LabeledReaction> &pool, double ratio) {
  ratio = std::clamp(ratio, 0.0, 1.0);
  const auto take = std::min(
      pool.size(), static_cast<std::size_t>(
                       std::floor(ratio * static_cast<double>(pool.size())
                                  + 1e-9)));
  std::vector<LabeledReaction> out = base_train;
  out.insert(out.end(), pool.begin(),
             pool.begin() + static_cast<std::ptrdiff_t>(take));
  return out;
}

std::vector<LabeledExample>
to_examples(const std::vector<LabeledReaction> &records) {
  std::vector<LabeledExample> out;
  out.reserve(records.size());
  for (const auto &r: records)
    out.push_back({ r.reaction, static_cast<double>(r.label) });
  return out;
}

} // namespace rxpj
