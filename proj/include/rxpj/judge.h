//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_JUDGE_H_
#define RXPJ_JUDGE_H_

#include <string_view>
#include <vector>

#include "rxpj/dlg.h"
#include "rxpj/model.h"
#include "rxpj/rsd.h"
#include "rxpj/smiles_text.h"
#include "rxpj/trainer.h"
#include "rxpj/vocab.h"

namespace rxpj {

// End-to-end reaction judge: text features, vocabulary and the Siamese
// model, plus the switches the ablations flip.

struct FeatureOptions {
  bool use_rsd = true;
  bool use_dlg = true;
  SegmentMode segment_mode = SegmentMode::kGreedy;
};

struct ReactionFeatures {
  TokenSequence reactant;  // DLG words (or atom tokens with use_dlg off)
  TokenSequence product;
  TokenSequence rsd;       // empty with use_rsd off
};

// Atom-wise tokens of a molecule group, molecules separated by a '.' token.
TokenSequence group_tokens(const std::vector<std::string> &molecules);

// Normalizes, tokenizes, aligns reactant tokens to product tokens (reagents
// are ignored), then segments both sides with the lexicon.
ReactionFeatures featurize(const RawReaction &reaction, const Lexicon &lexicon,
                           const FeatureOptions &opts);

// Lexicon corpus: one sequence per reactant side and per product side.
Corpus lexicon_corpus(const std::vector<RawReaction> &reactions);

EncodedExample encode(const ReactionFeatures &f, const Vocab &vocab,
                      double label);

// Vocabulary over every token stream the model will embed.
Vocab build_vocab(const std::vector<ReactionFeatures> &features,
                  std::size_t min_count = 1);

struct JudgeConfig {
  ModelDims dims;  // dims.vocab is filled in from the built vocabulary
  FeatureOptions features;
  LexiconOptions lexicon;
  TrainOptions train;
  std::size_t vocab_min_count = 1;
  double threshold = 0.5;
};

struct Artifacts {
  Lexicon lexicon;
  Vocab vocab;
  ModelParams<float> params;
  FeatureOptions features;
  double threshold = 0.5;
};

struct LabeledExample {
  RawReaction reaction;
  double label = 0;
};

struct FitResult {
  Artifacts artifacts;
  std::vector<EpochStats> history;
  std::size_t best_epoch = 0;
};

// Builds the lexicon and vocabulary from `train_set` only, then trains.
FitResult fit(const std::vector<LabeledExample> &train_set,
              const std::vector<LabeledExample> &dev_set,
              const JudgeConfig &config, const EpochCallback &on_epoch = { });

// Same, with a lexicon built beforehand (ignored when use_dlg is off).
FitResult fit(const std::vector<LabeledExample> &train_set,
              const std::vector<LabeledExample> &dev_set,
              const JudgeConfig &config, Lexicon lexicon,
              const EpochCallback &on_epoch = { });

// Lexicon over the reactant and product sides of `reactions`.
Lexicon build_reaction_lexicon(const std::vector<RawReaction> &reactions,
                               const LexiconOptions &opts);

Prediction predict(const RawReaction &reaction, const Artifacts &artifacts);

// Parses first; throws MalformedReaction.
Prediction predict(std::string_view reaction_text, const Artifacts &artifacts);

} // namespace rxpj

#endif // RXPJ_JUDGE_H_
