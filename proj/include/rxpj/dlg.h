//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_DLG_H_
#define RXPJ_DLG_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rxpj/smiles_text.h"

namespace rxpj {

// Token sequences flattened into one symbol stream. Consecutive sequences are
// separated by a reserved boundary symbol (id 0) that counts toward the
// stream length and frequencies but never appears inside a candidate word.
class Corpus {
public:
  using Symbol = std::uint32_t;
  static constexpr Symbol kBoundary = 0;

  Corpus() = default;
  explicit Corpus(const std::vector<TokenSequence> &sequences);

  void add_sequence(const TokenSequence &seq);

  const std::vector<Symbol> &stream() const { return stream_; }
  std::size_t total_length() const { return stream_.size(); }
  const std::vector<std::size_t> &freq() const { return freq_; }
  std::size_t sequence_count() const { return sequences_; }

  // Symbol id of a token, or kBoundary if the token is unknown.
  Symbol symbol_of(std::string_view token) const;
  const std::string &token_of(Symbol s) const { return tokens_[s]; }
  std::size_t vocabulary_size() const { return tokens_.size() - 1; }

private:
  std::vector<Symbol> stream_;
  std::vector<std::size_t> freq_ { 0 };
  std::vector<std::string> tokens_ { "" };
  std::unordered_map<std::string, Symbol> ids_;
  std::size_t sequences_ = 0;
};

// Empirical description length in bits: -sum_x c_x log2(c_x / total).
// Zero counts are skipped. Throws EmptyCorpus when total is 0.
double description_length(const std::vector<std::size_t> &freq,
                          std::size_t total);

// Non-overlapping, left-to-right occurrence count of `word` in the stream.
std::size_t count_occurrences(const Corpus &corpus,
                              const std::vector<Corpus::Symbol> &word);

// Description length gain of treating `candidate` as one symbol: L(X) minus
// the length of X with every occurrence replaced by a fresh symbol, followed
// by one spelled-out copy of the candidate. Throws CandidateAbsent if the
// candidate never occurs (or contains a token the corpus has never seen).
double dlg_score(const Corpus &corpus, const TokenSequence &candidate);

// Same, for a candidate whose occurrence count is already known.
double dlg_score(const Corpus &corpus, const std::vector<Corpus::Symbol> &word,
                 std::size_t occurrences);

struct LexiconOptions {
  std::size_t max_n = 8;
  std::size_t min_count = 3;
  double threshold = 0.0;
};

// Word candidates with their goodness. Keys are token n-grams joined by a
// single space; tokens never contain whitespace.
class Lexicon {
public:
  void insert(const TokenSequence &word, double goodness);
  void insert_key(std::string key, std::size_t n_tokens, double goodness);

  // Goodness of a word, or nullptr when absent.
  const double *find(std::string_view key) const;
  bool contains(const TokenSequence &word) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t max_word_len() const { return max_word_len_; }
  std::size_t multi_token_count() const;

  const std::map<std::string, double, std::less<>> &entries() const {
    return entries_;
  }

  // Entries sorted by descending goodness, ties by word.
  std::vector<std::pair<std::string, double>> ranked() const;

  void save(std::ostream &os) const;
  static Lexicon load(std::istream &is);

private:
  std::map<std::string, double, std::less<>> entries_;
  std::size_t max_word_len_ = 0;
};

std::string word_key(const TokenSequence &word);

// Enumerates intra-sequence n-grams (2 <= n <= max_n) seen at least min_count
// times (non-overlapping) and keeps those scoring above the threshold. Every
// single token of the corpus is added with goodness 0. Throws EmptyCorpus.
Lexicon build_lexicon(const Corpus &corpus, const LexiconOptions &opts = { });

struct Segmentation {
  // Each word is its tokens concatenated; token_counts tracks the split.
  std::vector<std::string> words;
  std::vector<std::size_t> token_counts;
  double total_goodness = 0.0;
};

enum class SegmentMode {
  kGreedy,  // best-scoring word at each position, left to right
  kGlobal,  // maximum total goodness over all segmentations
};

// Tokens missing from the lexicon are emitted as single words scoring 0.
// Greedy ties prefer the longer word.
Segmentation segment(const TokenSequence &seq, const Lexicon &lex,
                     SegmentMode mode = SegmentMode::kGreedy);

} // namespace rxpj

#endif // RXPJ_DLG_H_
