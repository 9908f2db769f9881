//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/dlg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rxpj/errors.h"
#include "rxpj/number_format.h"

namespace rxpj {
namespace {
double xlog2x(double x) {
  return x > 0 ? x * std::log2(x) : 0.0;
}

double sum_xlog2x(const std::vector<std::size_t> &freq) {
  double s = 0;
  for (std::size_t c: freq)
    s += xlog2x(static_cast<double>(c));
  return s;
}

// L(X) = T log2 T - sum c log2 c; `sum_clogc` is cached by callers scoring
// many candidates against one corpus.
double gain(const std::vector<std::size_t> &freq, std::size_t total,
            double sum_clogc, const std::vector<Corpus::Symbol> &word,
            std::size_t k) {
  const double base = xlog2x(static_cast<double>(total)) - sum_clogc;

  std::vector<std::pair<Corpus::Symbol, std::size_t>> mult;
  for (Corpus::Symbol s: word) {
    auto it = std::find_if(mult.begin(), mult.end(),
                           [s](const auto &p) { return p.first == s; });
    if (it == mult.end())
      mult.emplace_back(s, 1);
    else
      ++it->second;
  }

  const std::size_t n = word.size();
  double replaced = sum_clogc + xlog2x(static_cast<double>(k));
  for (auto [s, m]: mult) {
    const std::size_t before = freq[s];
    const std::size_t after = before - k * m + m;
    replaced += xlog2x(static_cast<double>(after))
                - xlog2x(static_cast<double>(before));
  }
  const std::size_t new_total = total - k * n + k + n;
  const double after_len = xlog2x(static_cast<double>(new_total)) - replaced;
  return base - after_len;
}
} // namespace

Corpus::Corpus(const std::vector<TokenSequence> &sequences) {
  for (const auto &seq: sequences)
    add_sequence(seq);
}

void Corpus::add_sequence(const TokenSequence &seq) {
  if (sequences_ > 0) {
    stream_.push_back(kBoundary);
    ++freq_[kBoundary];
  }
  ++sequences_;

  for (const auto &tok: seq) {
    auto [it, inserted] = ids_.try_emplace(tok,
                                           static_cast<Symbol>(tokens_.size()));
    if (inserted) {
      tokens_.push_back(tok);
      freq_.push_back(0);
    }
    stream_.push_back(it->second);
    ++freq_[it->second];
  }
}

Corpus::Symbol Corpus::symbol_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kBoundary : it->second;
}

double description_length(const std::vector<std::size_t> &freq,
                          std::size_t total) {
  if (total == 0)
    throw EmptyCorpus("description length of an empty corpus");
  const double t = static_cast<double>(total);
  double bits = 0;
  for (std::size_t c: freq) {
    if (c == 0)
      continue;
    const double p = static_cast<double>(c) / t;
    bits -= t * p * std::log2(p);
  }
  return bits == 0.0 ? 0.0 : bits;
}

std::size_t count_occurrences(const Corpus &corpus,
                              const std::vector<Corpus::Symbol> &word) {
  const auto &x = corpus.stream();
  if (word.empty() || word.size() > x.size())
    return 0;

  std::size_t count = 0;
  std::size_t i = 0;
  while (i + word.size() <= x.size()) {
    if (std::equal(word.begin(), word.end(), x.begin() + i)) {
      ++count;
      i += word.size();
    } else {
      ++i;
    }
  }
  return count;
}

double dlg_score(const Corpus &corpus, const std::vector<Corpus::Symbol> &word,
                 std::size_t occurrences) {
  if (occurrences == 0)
    throw CandidateAbsent("candidate does not occur in corpus");
  return gain(corpus.freq(), corpus.total_length(), sum_xlog2x(corpus.freq()),
              word, occurrences);
}

double dlg_score(const Corpus &corpus, const TokenSequence &candidate) {
  std::vector<Corpus::Symbol> word;
  word.reserve(candidate.size());
  for (const auto &tok: candidate) {
    const Corpus::Symbol s = corpus.symbol_of(tok);
    if (s == Corpus::kBoundary)
      throw CandidateAbsent("token '" + tok + "' is not in the corpus");
    word.push_back(s);
  }
  const std::size_t k = count_occurrences(corpus, word);
  if (k == 0)
    throw CandidateAbsent("candidate '" + word_key(candidate)
                          + "' does not occur in corpus");
  return dlg_score(corpus, word, k);
}

std::string word_key(const TokenSequence &word) {
  return join_tokens(word, " ");
}

void Lexicon::insert(const TokenSequence &word, double goodness) {
  insert_key(word_key(word), word.size(), goodness);
}

void Lexicon::insert_key(std::string key, std::size_t n_tokens,
                         double goodness) {
  entries_.insert_or_assign(std::move(key), goodness);
  max_word_len_ = std::max(max_word_len_, n_tokens);
}

const double *Lexicon::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::contains(const TokenSequence &word) const {
  return find(word_key(word)) != nullptr;
}

std::size_t Lexicon::multi_token_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const auto &e) {
        return e.first.find(' ') != std::string::npos;
      }));
}

std::vector<std::pair<std::string, double>> Lexicon::ranked() const {
  std::vector<std::pair<std::string, double>> out(entries_.begin(),
                                                  entries_.end());
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.second > b.second;
  });
  return out;
}

void Lexicon::save(std::ostream &os) const {
  for (const auto &[word, g]: ranked())
    os << word << '\t' << format_number(g) << '\n';
}

Lexicon Lexicon::load(std::istream &is) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;

    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0)
      throw IoError("malformed lexicon line " + std::to_string(lineno));
    double g = 0;
    try {
      std::size_t used = 0;
      g = std::stod(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1)
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception &) {
      throw IoError("bad goodness on lexicon line " + std::to_string(lineno));
    }
    std::string key = line.substr(0, tab);
    const std::size_t n = 1 + std::count(key.begin(), key.end(), ' ');
    lex.insert_key(std::move(key), n, g);
  }
  return lex;
}

Lexicon build_lexicon(const Corpus &corpus, const LexiconOptions &opts) {
  if (corpus.total_length() == 0)
    throw EmptyCorpus("cannot build a lexicon from an empty corpus");

  Lexicon lex;
  for (Corpus::Symbol s = 1; s <= corpus.vocabulary_size(); ++s)
    lex.insert_key(corpus.token_of(s), 1, 0.0);

  const auto &x = corpus.stream();
  const auto &freq = corpus.freq();
  const double sum_clogc = sum_xlog2x(freq);

  struct Tally {
    std::size_t count = 0;
    std::size_t next_free = 0;
  };

  for (std::size_t n = 2; n <= opts.max_n; ++n) {
    std::unordered_map<std::u32string, Tally> tallies;
    std::size_t run = 0;  // symbols since the last boundary
    for (std::size_t end = 0; end < x.size(); ++end) {
      if (x[end] == Corpus::kBoundary) {
        run = 0;
        continue;
      }
      if (++run < n)
        continue;

      const std::size_t begin = end + 1 - n;
      std::u32string key(x.begin() + begin, x.begin() + end + 1);
      Tally &t = tallies[key];
      if (begin >= t.next_free) {
        ++t.count;
        t.next_free = end + 1;
      }
    }

    std::vector<std::pair<std::u32string, std::size_t>> frequent;
    for (auto &[key, t]: tallies)
      if (t.count >= opts.min_count)
        frequent.emplace_back(key, t.count);
    std::sort(frequent.begin(), frequent.end());

    for (const auto &[key, k]: frequent) {
      std::vector<Corpus::Symbol> word(key.begin(), key.end());
      const double g = gain(freq, x.size(), sum_clogc, word, k);
      if (!(g > opts.threshold))
        continue;
      TokenSequence toks;
      toks.reserve(word.size());
      for (Corpus::Symbol s: word)
        toks.push_back(corpus.token_of(s));
      lex.insert(toks, g);
    }
  }
  return lex;
}

Segmentation segment(const TokenSequence &seq, const Lexicon &lex,
                     SegmentMode mode) {
  Segmentation out;
  const std::size_t n = seq.size();
  const std::size_t max_len = std::max<std::size_t>(1, lex.max_word_len());

  // score(i, len): goodness of seq[i, i+len) or NaN if absent; single tokens
  // always resolve (0 when unseen).
  auto score = [&](std::size_t i, std::size_t len, std::string &key) {
    key.clear();
    for (std::size_t k = i; k < i + len; ++k) {
      if (k > i)
        key += ' ';
      key += seq[k];
    }
    const double *g = lex.find(key);
    if (g != nullptr)
      return *g;
    return len == 1 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  };

  auto emit = [&](std::size_t i, std::size_t len, double g) {
    std::string word;
    for (std::size_t k = i; k < i + len; ++k)
      word += seq[k];
    out.words.push_back(std::move(word));
    out.token_counts.push_back(len);
    out.total_goodness += g;
  };

  std::string key;
  if (mode == SegmentMode::kGreedy) {
    std::size_t i = 0;
    while (i < n) {
      std::size_t best_len = 1;
      double best = score(i, 1, key);
      for (std::size_t len = 2; len <= max_len && i + len <= n; ++len) {
        const double g = score(i, len, key);
        if (std::isnan(g))
          continue;
        if (g >= best) {
          best = g;
          best_len = len;
        }
      }
      emit(i, best_len, best);
      i += best_len;
    }
    return out;
  }

  std::vector<double> best(n + 1, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> back(n + 1, 0);
  best[0] = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t len = std::min(j, max_len); len >= 1; --len) {
      const double g = score(j - len, len, key);
      if (std::isnan(g))
        continue;
      const double total = best[j - len] + g;
      if (total > best[j]) {
        best[j] = total;
        back[j] = len;
      }
    }
  }

  std::vector<std::size_t> lens;
  for (std::size_t j = n; j > 0; j -= back[j])
    lens.push_back(back[j]);
  std::size_t i = 0;
  for (auto it = lens.rbegin(); it != lens.rend(); ++it) {
    emit(i, *it, score(i, *it, key));
    i += *it;
  }
  return out;
}

} // namespace rxpj
