//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_DATASETS_H_
#define RXPJ_DATASETS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "rxpj/dlg.h"
#include "rxpj/judge.h"
#include "rxpj/smiles_text.h"

namespace rxpj {

enum class RecordSource { kCorpus, kRuleGenerated, kRealFailed };

struct LabeledReaction {
  RawReaction reaction;  // normalized
  int label = 1;         // 1 positive, 0 negative
  RecordSource source = RecordSource::kCorpus;

  std::string key() const { return render_reaction(reaction); }
};

enum class LabelMode {
  kColumn,    // `label<TAB>reaction`
  kPositive,  // bare reactions, all positive
  kNegative,  // bare reactions, all negative
};

LabelMode parse_label_mode(std::string_view name);

struct LoadResult {
  std::vector<LabeledReaction> records;
  std::size_t malformed = 0;
  std::vector<std::string> warnings;  // one per malformed line
};

// One record per non-blank line. The reaction is the first whitespace
// separated field after the optional label column, so trailing columns
// (patent ids and the like) are ignored. Malformed lines are counted and
// skipped. Throws IoError when the file cannot be read.
LoadResult load_corpus(const std::filesystem::path &path, LabelMode mode,
                       RecordSource source = RecordSource::kCorpus);
LoadResult read_corpus(std::istream &is, LabelMode mode,
                       RecordSource source = RecordSource::kCorpus);

// `label<TAB>reaction` lines.
void write_records(std::ostream &os, const std::vector<LabeledReaction> &rs);
void write_records(const std::filesystem::path &path,
                   const std::vector<LabeledReaction> &rs);

struct DedupResult {
  std::vector<LabeledReaction> records;
  std::size_t duplicates = 0;  // records dropped
  std::size_t conflicts = 0;   // keys seen with both labels
};

// First occurrence wins, except that a negative always replaces a positive
// with the same normalized key.
DedupResult deduplicate(const std::vector<LabeledReaction> &records);

struct DatasetSplit {
  std::vector<LabeledReaction> train, dev, test;
  std::uint64_t seed = 0;
};

// Seeded, label-stratified 9:1 split into train+dev and test, then 10% of
// train+dev into dev. Global split sizes are rounded once and apportioned to
// the strata by largest remainder. Throws TooFewRecords when a label present
// in the data has fewer than 3 records.
DatasetSplit split(const std::vector<LabeledReaction> &records,
                   std::uint64_t seed);

using KnownPositiveIndex = std::unordered_set<std::string>;

KnownPositiveIndex build_index(const std::vector<LabeledReaction> &positives);

// Token rewrite rule: space-separated token patterns where `*` matches any
// single token; the i-th `*` on the right-hand side emits the i-th captured
// token.
struct RewriteRule {
  TokenSequence lhs;
  TokenSequence rhs;
};

std::vector<RewriteRule> load_rules(std::istream &is);
std::vector<RewriteRule> load_rules(const std::filesystem::path &path);

struct NegativeRules {
  // Replace one reactant with another corpus reactant that starts with the
  // same DLG word.
  bool reactant_swap = true;
  // Drop one reactant while keeping the product.
  bool reactant_removal = true;
  std::vector<RewriteRule> rewrites;
  // Candidates considered per positive and rule.
  std::size_t max_per_positive = 8;
};

// Reverse-rule negatives for each positive, skipping any candidate whose
// normalized key is in `known`. Positives are visited round-robin (first
// candidate of every positive, then the second, ...) until `cap` negatives
// exist. The lexicon supplies the first-word grouping for reactant swaps;
// with an empty lexicon the first atom token is used.
std::vector<LabeledReaction>
generate_negatives(const std::vector<LabeledReaction> &positives,
                   const NegativeRules &rules, const KnownPositiveIndex &known,
                   std::size_t cap, const Lexicon &lexicon = { });

// base_train plus the first floor(ratio * |pool|) pool items.
std::vector<LabeledReaction>
incremental_mix(const std::vector<LabeledReaction> &base_train,
                const std::vector<LabeledReaction> &pool, double ratio);

std::vector<LabeledExample>
to_examples(const std::vector<LabeledReaction> &records);

} // namespace rxpj

#endif // RXPJ_DATASETS_H_
