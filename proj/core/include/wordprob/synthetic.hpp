#pragma once

// Desk-scale synthetic data for the two experimental pipelines: a template
// grammar with transitive/intransitive garden-path items, a training corpus
// for an n-gram scorer, filler sentences, and simulated reading times.
//
// The grammar teaches the scorer that "<verb> the <object>" is usually
// followed by a comma or a period, so in the ambiguous item
//   after the doctor left the room turned very dark.
// the boundary before "turned" is improbable, while in the control
//   after the doctor left, the room turned very dark.
// it is expected.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wordprob/decoding.hpp"
#include "wordprob/ingest.hpp"
#include "wordprob/probsource.hpp"

namespace wordprob::synthetic {

struct Sentence {
  std::string sid;
  std::string item;
  std::string condition;  // "filler", "ambiguous", "unambiguous"
  Segmentation seg;
  std::vector<std::string> regions;  // per word; empty when unlabelled
};

struct CorpusConfig {
  std::size_t training_sentences = 4000;
  std::size_t fillers = 120;
  std::size_t items = 24;
  std::size_t ngram_order = 4;
  double alpha = 0.01;
};

struct Corpus {
  std::shared_ptr<const Vocabulary> vocab;
  std::vector<std::vector<TokenId>> training;
  std::vector<Sentence> fillers;
  std::vector<Sentence> items;  // both conditions of every item
  /// Log frequency per word surface (natural log of (count+1) per million
  /// over the training corpus).
  std::map<std::string, double> logfreq;
  CorpusConfig config;
};

Corpus make_garden_path_corpus(std::uint64_t seed, const CorpusConfig& config = {});

NGramModel train_scorer(const Corpus& corpus);

/// Linear linking function from surprisal (bits) to reading time (ms).
struct LinkingFunction {
  double intercept = 250.0;
  double surp = 12.0;
  double surp_prev1 = 12.0;
  double surp_prev2 = 4.0;
  double length = 3.0;
  double freq = -2.0;
  double noise_sd = 20.0;
};

/// Per-word "true" surprisal driving the simulated reader, one vector per
/// sentence in the same order as the sentences passed alongside.
using SurprisalTrace = std::vector<std::vector<double>>;

SurprisalTrace trace(const std::vector<SentenceScore>& scores, Variant variant);

/// Mixes two traces elementwise: weight * a + (1 - weight) * b.
SurprisalTrace mix(const SurprisalTrace& a, const SurprisalTrace& b, double weight);

/// Every subject reads every filler; experimental items follow a Latin
/// square (subject s reads item i in condition (s + i) mod 2).
std::vector<RTRow> simulate_reading_times(const Corpus& corpus,
                                          const std::vector<Sentence>& sentences,
                                          const SurprisalTrace& truth,
                                          std::size_t subjects,
                                          const LinkingFunction& link,
                                          std::uint64_t seed);

}  // namespace wordprob::synthetic
