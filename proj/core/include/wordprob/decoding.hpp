#pragma once

// Word probabilities under whitespace-leading (WL) aggregation and
// whitespace-trailing (WT) decoding.
//
// WL: the chain-rule product of a word's tokens, leading whitespace included.
// WT: the WL probability rescaled by the boundary mass after the word over
//     the boundary mass before it,
//
//   P_WT(w | ctx) = P_WL(w | ctx) * P(next in V_B | ctx w) / P(next in V_B | ctx)
//
// so each word pays for its own trailing whitespace instead of the leading
// one. Log-probabilities are natural logs; surprisals are bits.

#include <span>
#include <string>
#include <vector>

#include "wordprob/probsource.hpp"
#include "wordprob/record.hpp"
#include "wordprob/vocab.hpp"

namespace wordprob {

enum class Variant { WL, WT };

const char* to_string(Variant v);

struct ScoredWord {
  std::string surface;
  WordSpan span;
  double wl_logprob = 0.0;
  double wt_logprob = 0.0;
  double wl_surprisal = 0.0;
  double wt_surprisal = 0.0;

  double logprob(Variant v) const { return v == Variant::WL ? wl_logprob : wt_logprob; }
  double surprisal(Variant v) const {
    return v == Variant::WL ? wl_surprisal : wt_surprisal;
  }
};

struct SentenceScore {
  std::string sid;
  std::vector<ScoredWord> words;
  /// log P(next in V_B) before the first token and after the last.
  double initial_b_logmass = 0.0;
  double final_b_logmass = 0.0;
};

double wl_word_logprob(const ConditionalModel& model,
                       std::span<const TokenId> ctx,
                       std::span<const TokenId> word);

/// Throws UndefinedRescalingError when the boundary mass before the word
/// is zero.
double wt_word_logprob(const ConditionalModel& model,
                       std::span<const TokenId> ctx,
                       std::span<const TokenId> word);

/// -logprob / ln 2. Throws DomainError for positive (or NaN) input.
double surprisal_bits(double logprob);

SentenceScore score_sentence(const ConditionalModel& model,
                             const Segmentation& seg, std::string sid = {});

/// Same arithmetic as score_sentence, reading every factor from the record.
/// Word surfaces drop a leading `marker` or space.
SentenceScore score_from_records(const LogprobRecord& record,
                                 std::string_view marker = kDefaultMarker);

/// Evaluates the model along the segmentation and stores the factors that
/// score_from_records consumes.
LogprobRecord make_record(const ConditionalModel& model, const Segmentation& seg,
                          std::string sid);

}  // namespace wordprob
