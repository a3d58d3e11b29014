#pragma once

// End-to-end analyses built from the ingest and regress pieces: the
// garden-path effect pipeline (fit a linking function on filler items, then
// predict reading times for experimental items) and the ΔLL comparison.

#include <cstdint>
#include <string>
#include <vector>

#include "wordprob/regress.hpp"

namespace wordprob {

struct GardenPathOptions {
  /// Rows whose condition is empty or equals this label train the linking
  /// function; every other row with a region label is predicted.
  std::string filler_label = "filler";
  std::vector<std::string> columns = {"surp",       "surp_prev1", "surp_prev2",
                                      "freq",       "freq_prev1", "freq_prev2",
                                      "length",     "index",      "prev1_missing",
                                      "prev2_missing"};
  bool quadratic = false;
  EffectOptions effect;
};

struct GardenPathResult {
  Variant variant = Variant::WL;
  FitResult filler_fit;
  std::vector<EffectEstimate> effects;  // regions in order of first appearance
};

GardenPathResult estimate_garden_path(const std::vector<SentenceScore>& scores,
                                      const std::vector<RTRow>& rts, Variant variant,
                                      std::uint64_t seed,
                                      const GardenPathOptions& options = {});

struct DeltaLLOptions {
  RTKind kind = RTKind::SPR;
  Transform transform = Transform::Log;
  /// Predictors shared by both models; surprisal columns are added on top.
  std::vector<std::string> base_columns = {"length", "index"};
  std::vector<std::string> surprisal_columns = {"surp"};
  DesignOptions design;
};

struct DeltaLLResult {
  Variant variant = Variant::WL;
  FitResult base;
  FitResult full;
  double delta = 0.0;
  std::vector<RegressionRow> rows;
};

DeltaLLResult delta_ll_analysis(const std::vector<SentenceScore>& scores,
                                const std::vector<RTRow>& rts, Variant variant,
                                const DeltaLLOptions& options = {});

/// ΔLL after permuting the surprisal triple (surp, surp_prev1, surp_prev2)
/// across the rows of `result`: a null control for the surprisal effect.
double shuffled_delta_ll(const DeltaLLResult& result, const DeltaLLOptions& options,
                         std::uint64_t seed);

/// Default base columns for a corpus kind: gpd adds slength and pfix.
std::vector<std::string> default_base_columns(RTKind kind);

}  // namespace wordprob
