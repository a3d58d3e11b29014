#pragma once

// Ordinary least squares with a Gaussian likelihood, nested-model ΔLL,
// predicted-RT garden-path effects, and a paired sign-flip permutation test.
//
// This is a fixed-effects reduction of the usual mixed-effects setup: random
// intercepts become optional one-hot indicator blocks and smooth terms
// become linear (optionally quadratic) columns.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wordprob/ingest.hpp"

namespace wordprob {

/// n x p predictors (row-major, no intercept column) plus the response.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  /// Throws ValidationError on shape mismatch or non-finite entries.
  DesignMatrix(std::vector<std::string> names, std::vector<double> values,
               std::vector<double> response);

  std::size_t rows() const noexcept { return response_.size(); }
  std::size_t cols() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& response() const noexcept { return response_; }
  double at(std::size_t row, std::size_t col) const {
    return values_[row * names_.size() + col];
  }

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<double> response_;
};

struct DesignOptions {
  /// One-hot indicator blocks standing in for random intercepts; the first
  /// level (in sorted order) is the reference.
  bool subject_indicators = false;
  bool item_indicators = false;
  /// Adds length_sq and index_sq.
  bool quadratic = false;
  /// Off when rebuilding a design for prediction with a fit's exact columns.
  bool drop_constant_indicators = true;
};

/// Column names accepted by make_design: surp, surp_prev1, surp_prev2, freq,
/// freq_prev1, freq_prev2, length, index, slength, pfix, prev1_missing,
/// prev2_missing, length_sq, index_sq. Missing-indicator columns that are
/// constant over the rows are omitted (they would duplicate the intercept or
/// be all zero) unless options.drop_constant_indicators is off.
DesignMatrix make_design(const std::vector<RegressionRow>& rows,
                         const std::vector<std::string>& columns,
                         const DesignOptions& options = {});

struct FitResult {
  std::vector<std::string> names;
  double intercept = 0.0;
  std::vector<double> coefficients;
  std::vector<double> residuals;
  /// MLE residual variance (RSS / n).
  double sigma2 = 0.0;
  /// RSS / (n - p - 1).
  double sigma2_unbiased = 0.0;
  /// Gaussian log-likelihood at the MLE variance; empty for perfect fits.
  std::optional<double> loglik;
  bool perfect_fit = false;
  std::size_t n = 0;
  std::size_t p = 0;
  std::uint64_t response_fingerprint = 0;
};

/// Throws SingularDesignError naming the collinear columns, ValidationError
/// when n <= p + 1.
FitResult fit_ols(const DesignMatrix& X);

/// full.loglik - base.loglik. Throws ComparisonError on different n,
/// different responses, non-nested columns, or a perfect fit on either side.
double delta_ll(const FitResult& base, const FitResult& full);

/// Throws ComparisonError when the columns differ from the fit's.
std::vector<double> predict(const FitResult& fit, const DesignMatrix& X);

struct PredictedRow {
  std::string subject;
  std::string item;
  std::string condition;
  std::string region;
  double pred = 0.0;
};

struct EffectOptions {
  std::string ambiguous = "ambiguous";
  std::string control = "unambiguous";
  std::size_t resamples = 2000;
};

struct EffectEstimate {
  std::string region;
  double effect = 0.0;  // ms, ambiguous minus control
  double ci_low = 0.0;
  double ci_high = 0.0;
  double half_width = 0.0;
  std::size_t items = 0;
  std::size_t resamples = 0;
};

/// Mean predicted RT difference between conditions in one region, with a
/// 95% percentile interval from a bootstrap over items. Throws
/// EstimationError when either condition is absent from the region.
EffectEstimate garden_path_effect(const std::vector<PredictedRow>& preds,
                                  const std::string& region, std::uint64_t seed,
                                  const EffectOptions& options = {});

struct GroupError {
  std::string group;
  double value = 0.0;
};

/// Sums squared residuals per group label.
std::vector<GroupError> aggregate_squared_errors(
    std::span<const double> residuals, std::span<const std::string> groups);

struct PermutationResult {
  double observed = 0.0;  // mean of a - b over groups
  double p_value = 1.0;
  std::size_t permutations = 0;
  bool exact = false;
};

inline constexpr std::size_t kExactPermutationGroups = 12;

/// Two-sided paired sign-flip test on per-group values. With at most
/// kExactPermutationGroups groups every sign pattern is enumerated (p is the
/// exact proportion); otherwise `n_perm` random flips are drawn and
/// p = (hits + 1) / (n_perm + 1). Throws ComparisonError when the group sets
/// differ.
PermutationResult permutation_test(std::span<const GroupError> a,
                                   std::span<const GroupError> b,
                                   std::size_t n_perm, std::uint64_t seed,
                                   bool force_monte_carlo = false);

}  // namespace wordprob
