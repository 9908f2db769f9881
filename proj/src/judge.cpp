//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/judge.h"

#include <string>
#include <vector>

namespace rxpj {
namespace {
TokenSequence words_of(const TokenSequence &atoms, const Lexicon &lexicon,
                       const FeatureOptions &opts) {
  if (!opts.use_dlg)
    return atoms;
  return segment(atoms, lexicon, opts.segment_mode).words;
}
} // namespace

TokenSequence group_tokens(const std::vector<std::string> &molecules) {
  TokenSequence out;
  for (std::size_t i = 0; i < molecules.size(); ++i) {
    if (i > 0)
      out.emplace_back(".");
    TokenSequence toks = tokenize_atomwise(molecules[i]);
    out.insert(out.end(), std::make_move_iterator(toks.begin()),
               std::make_move_iterator(toks.end()));
  }
  return out;
}

ReactionFeatures featurize(const RawReaction &reaction, const Lexicon &lexicon,
                           const FeatureOptions &opts) {
  const RawReaction norm = normalize_reaction(reaction);
  const TokenSequence reactant = group_tokens(norm.reactants);
  const TokenSequence product = group_tokens(norm.products);

  ReactionFeatures f;
  if (opts.use_rsd)
    f.rsd = rsd_tokens(generate_rsd(reactant, product));
  f.reactant = words_of(reactant, lexicon, opts);
  f.product = words_of(product, lexicon, opts);
  return f;
}

Corpus lexicon_corpus(const std::vector<RawReaction> &reactions) {
  Corpus corpus;
  for (const auto &r: reactions) {
    const RawReaction norm = normalize_reaction(r);
    corpus.add_sequence(group_tokens(norm.reactants));
    corpus.add_sequence(group_tokens(norm.products));
  }
  return corpus;
}

EncodedExample encode(const ReactionFeatures &f, const Vocab &vocab,
                      double label) {
  EncodedExample ex;
  ex.reactant = vocab.encode(f.reactant);
  ex.product = vocab.encode(f.product);
  ex.rsd = vocab.encode(f.rsd);
  ex.label = label;
  return ex;
}

Vocab build_vocab(const std::vector<ReactionFeatures> &features,
                  std::size_t min_count) {
  std::vector<TokenSequence> streams;
  streams.reserve(features.size() * 3);
  for (const auto &f: features) {
    streams.push_back(f.reactant);
    streams.push_back(f.product);
    streams.push_back(f.rsd);
  }
  return Vocab::build(streams, min_count);
}

FitResult fit(const std::vector<LabeledExample> &train_set,
              const std::vector<LabeledExample> &dev_set,
              const JudgeConfig &config, const EpochCallback &on_epoch) {
  Lexicon lexicon;
  if (config.features.use_dlg) {
    std::vector<RawReaction> reactions;
    reactions.reserve(train_set.size());
    for (const auto &ex: train_set)
      reactions.push_back(ex.reaction);
    lexicon = build_reaction_lexicon(reactions, config.lexicon);
  }
  return fit(train_set, dev_set, config, std::move(lexicon), on_epoch);
}

Lexicon build_reaction_lexicon(const std::vector<RawReaction> &reactions,
                               const LexiconOptions &opts) {
  return build_lexicon(lexicon_corpus(reactions), opts);
}

FitResult fit(const std::vector<LabeledExample> &train_set,
              const std::vector<LabeledExample> &dev_set,
              const JudgeConfig &config, Lexicon lexicon,
              const EpochCallback &on_epoch) {
  FitResult out;
  Artifacts &art = out.artifacts;
  art.features = config.features;
  art.threshold = config.threshold;
  if (config.features.use_dlg)
    art.lexicon = std::move(lexicon);

  std::vector<ReactionFeatures> train_feats;
  train_feats.reserve(train_set.size());
  for (const auto &ex: train_set)
    train_feats.push_back(featurize(ex.reaction, art.lexicon, art.features));
  art.vocab = build_vocab(train_feats, config.vocab_min_count);

  std::vector<EncodedExample> train_enc, dev_enc;
  train_enc.reserve(train_set.size());
  for (std::size_t k = 0; k < train_set.size(); ++k)
    train_enc.push_back(encode(train_feats[k], art.vocab, train_set[k].label));
  dev_enc.reserve(dev_set.size());
  for (const auto &ex: dev_set)
    dev_enc.push_back(encode(featurize(ex.reaction, art.lexicon, art.features),
                             art.vocab, ex.label));

  ModelDims dims = config.dims;
  dims.vocab = art.vocab.size();
  TrainOptions topts = config.train;
  topts.threshold = config.threshold;
  TrainResult tr = train(train_enc, dev_enc,
                         ModelParams<float>::random(dims, topts.seed), topts,
                         on_epoch);
  art.params = std::move(tr.params);
  out.history = std::move(tr.history);
  out.best_epoch = tr.best_epoch;
  return out;
}

Prediction predict(const RawReaction &reaction, const Artifacts &artifacts) {
  const EncodedExample ex = encode(
      featurize(reaction, artifacts.lexicon, artifacts.features),
      artifacts.vocab, 0.0);
  Prediction p;
  p.probability = predict_probability(ex, artifacts.params);
  p.label = p.probability >= artifacts.threshold;
  return p;
}

Prediction predict(std::string_view reaction_text, const Artifacts &artifacts) {
  return predict(parse_reaction(reaction_text), artifacts);
}

} // namespace rxpj
