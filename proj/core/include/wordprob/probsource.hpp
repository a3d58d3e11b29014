#pragma once

// Next-token distributions: the factors every word-probability formula
// consumes. Models keep natural-log probabilities internally.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wordprob/vocab.hpp"

namespace wordprob {

/// log(sum(exp(v))) over the selected indices; -inf when all are -inf.
double log_sum_exp(std::span<const double> logp, std::span<const TokenId> ids);
double log_sum_exp(std::span<const double> logp);

/// Log of the probability mass on `ids`: log_sum_exp clamped to at most 0,
/// since a mass of 1 can round to a log just above zero.
double log_mass(std::span<const double> logp, std::span<const TokenId> ids);

/// Source of P(next token | token prefix). Implementations are immutable
/// and deterministic, so every member is safe to call concurrently.
class ConditionalModel {
 public:
  virtual ~ConditionalModel() = default;

  virtual const Vocabulary& vocab() const = 0;

  /// Natural-log distribution over the vocabulary, indexed by TokenId.
  /// Throws LookupError for out-of-range context ids.
  virtual std::vector<double> next_logprobs(
      std::span<const TokenId> ctx) const = 0;

  /// An upper bound on the I-class mass over every context, when the model
  /// can supply one. Used to certify enumeration tails.
  virtual std::optional<double> max_continuation_mass() const {
    return std::nullopt;
  }

  std::vector<double> next_dist(std::span<const TokenId> ctx) const;

  /// Marginal probability that the next token is class B.
  double b_mass(std::span<const TokenId> ctx) const;
  double log_b_mass(std::span<const TokenId> ctx) const;

 protected:
  void check_context(std::span<const TokenId> ctx) const;
};

class UniformModel final : public ConditionalModel {
 public:
  explicit UniformModel(std::shared_ptr<const Vocabulary> vocab);

  const Vocabulary& vocab() const override { return *vocab_; }
  std::vector<double> next_logprobs(std::span<const TokenId> ctx) const override;
  std::optional<double> max_continuation_mass() const override;

 private:
  std::shared_ptr<const Vocabulary> vocab_;
};

using ContextKey = std::vector<TokenId>;
using Distribution = std::vector<double>;

/// Explicit table from context to distribution. Contexts are truncated to
/// their last `order` tokens before lookup; unlisted contexts fall back to
/// the default distribution.
class TabularModel final : public ConditionalModel {
 public:
  /// Distributions are given in probability space and validated: right
  /// length, nonnegative, summing to 1 within 1e-9 (then renormalized).
  TabularModel(std::shared_ptr<const Vocabulary> vocab, std::size_t order,
               const std::map<ContextKey, Distribution>& table,
               const Distribution& default_dist);

  /// Tab-separated table file; see README for the format.
  static TabularModel load(const std::filesystem::path& path);
  static TabularModel parse(std::istream& in);
  void write(std::ostream& out) const;

  const Vocabulary& vocab() const override { return *vocab_; }
  std::shared_ptr<const Vocabulary> shared_vocab() const { return vocab_; }
  std::vector<double> next_logprobs(std::span<const TokenId> ctx) const override;
  std::optional<double> max_continuation_mass() const override;

  std::size_t order() const noexcept { return order_; }
  const std::map<ContextKey, std::vector<double>>& log_table() const noexcept {
    return table_;
  }
  const std::vector<double>& default_logprobs() const noexcept {
    return default_;
  }

  /// Builds directly from log-probabilities (already validated elsewhere).
  static TabularModel from_log_table(std::shared_ptr<const Vocabulary> vocab,
                                     std::size_t order,
                                     std::map<ContextKey, std::vector<double>> table,
                                     std::vector<double> default_logprobs);

 private:
  TabularModel() = default;
  std::vector<double> to_log(const Distribution& dist) const;

  std::shared_ptr<const Vocabulary> vocab_;
  std::size_t order_ = 0;
  std::map<ContextKey, std::vector<double>> table_;
  std::vector<double> default_;
};

/// Additively smoothed n-gram model:
///   P(j | c) = (count(c, j) + alpha) / (count(c) + alpha |V|)
/// where c is the last order-1 tokens (fewer at sequence starts).
class NGramModel final : public ConditionalModel {
 public:
  const Vocabulary& vocab() const override { return *vocab_; }
  std::vector<double> next_logprobs(std::span<const TokenId> ctx) const override;
  std::optional<double> max_continuation_mass() const override;

  std::size_t order() const noexcept { return order_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t context_count() const noexcept { return counts_.size(); }

  /// Exact tabular equivalent: every seen context plus the uniform default.
  TabularModel to_tabular() const;

 private:
  friend NGramModel train_ngram(std::shared_ptr<const Vocabulary>,
                                const std::vector<std::vector<TokenId>>&,
                                std::size_t, double);
  NGramModel() = default;
  std::vector<double> smoothed(const std::vector<double>* counts) const;

  std::shared_ptr<const Vocabulary> vocab_;
  std::size_t order_ = 1;
  double alpha_ = 1.0;
  std::map<ContextKey, std::vector<double>> counts_;
};

/// Throws ValidationError on an empty corpus, order 0, or alpha <= 0.
NGramModel train_ngram(std::shared_ptr<const Vocabulary> vocab,
                       const std::vector<std::vector<TokenId>>& corpus,
                       std::size_t order, double alpha);

// Reference tables.

/// V_B = {▁j1}, V_I = {j2}: P(▁j1 | ε) = 1, P(j2 | ▁j1) = 1, and all mass on
/// ▁j1 after [▁j1, j2]. The degenerate model behind the WL overcount.
TabularModel overcount_table();

/// V_B = {▁a}, V_I = {x}: P(▁a | ε) = 0.9, then P(▁a) = 0.1 in every
/// nonempty context.
TabularModel garden_table();

/// V_B = {▁a}, V_I = {x}: P(▁a | ε) = 0.5, P(x | ▁a) = 0.9,
/// P(▁a | ▁a x) = 0.95. WT ranks "▁a x" above "▁a"; WL cannot.
TabularModel nonmonotone_table();

}  // namespace wordprob
