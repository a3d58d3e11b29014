#pragma once

// Exact enumeration of the word sample space: every token sequence made of
// one B token followed by zero or more I tokens, up to a depth. Summing word
// probabilities per depth checks whether a decoding scheme yields a proper
// distribution over next words.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wordprob/decoding.hpp"
#include "wordprob/probsource.hpp"

namespace wordprob {

inline constexpr std::size_t kDefaultEnumerationBudget = 10'000'000;

struct EnumeratedWord {
  std::vector<TokenId> tokens;
  double wl_prob = 0.0;
  double wt_prob = 0.0;
};

struct DepthMass {
  std::size_t tokens = 0;
  double mass = 0.0;
};

struct OmegaReport {
  Variant mode = Variant::WL;
  std::vector<TokenId> context;
  std::vector<DepthMass> per_depth;
  double cumulative = 0.0;
  /// WT only: upper bound on the mass beyond the last depth, q^depth where q
  /// bounds the I-continuation probability. Absent when q is unknown.
  std::optional<double> tail_bound;

  std::string to_text() const;
  std::string to_json() const;
};

/// Number of words of length 1..max_tokens, saturating at SIZE_MAX.
std::size_t omega_size(std::size_t b_count, std::size_t i_count,
                       std::size_t max_tokens);

/// Words in depth-first order (lexicographic by token id within a depth
/// ordering). Throws EnumerationBudgetError when more than `budget` words
/// would be produced, ValidationError when max_tokens is 0.
std::vector<EnumeratedWord> enumerate_words(
    const ConditionalModel& model, std::span<const TokenId> ctx,
    std::size_t max_tokens, std::size_t budget = kDefaultEnumerationBudget);

OmegaReport p_omega_partial(const ConditionalModel& model,
                            std::span<const TokenId> ctx, std::size_t max_tokens,
                            Variant mode,
                            std::size_t budget = kDefaultEnumerationBudget);

/// WL report for overcount_table() at depth 2; cumulative is exactly 2.
OmegaReport overcount_witness();

}  // namespace wordprob
