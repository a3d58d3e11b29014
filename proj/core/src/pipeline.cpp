#include "wordprob/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "wordprob/error.hpp"

namespace wordprob {

GardenPathResult estimate_garden_path(const std::vector<SentenceScore>& scores,
                                      const std::vector<RTRow>& rts, Variant variant,
                                      std::uint64_t seed,
                                      const GardenPathOptions& options) {
  std::vector<RTRow> fillers, targets;
  for (const auto& r : rts) {
    if (r.condition.empty() || r.condition == options.filler_label) {
      fillers.push_back(r);
    } else if (!r.region.empty()) {
      targets.push_back(r);
    }
  }
  if (fillers.empty()) throw EstimationError("no filler rows to fit the linking function");
  if (targets.empty()) throw EstimationError("no region-labelled experimental rows");

  const auto freq = frequency_table(rts);
  const auto filler_rows = build_rows(scores, filter_rt(fillers, RTKind::SPR), variant,
                                      Transform::Identity, &freq);
  DesignOptions design;
  design.quadratic = options.quadratic;

  GardenPathResult out;
  out.variant = variant;
  out.filler_fit = fit_ols(make_design(filler_rows, options.columns, design));

  DesignOptions exact;
  exact.drop_constant_indicators = false;
  const auto target_rows =
      build_rows(scores, targets, variant, Transform::Identity, &freq);
  const auto preds = predict(out.filler_fit,
                             make_design(target_rows, out.filler_fit.names, exact));

  std::vector<PredictedRow> labelled;
  std::vector<std::string> regions;
  labelled.reserve(target_rows.size());
  for (std::size_t i = 0; i < target_rows.size(); ++i) {
    const auto& r = target_rows[i];
    labelled.push_back({r.subject, r.item, r.condition, r.region, preds[i]});
    if (std::find(regions.begin(), regions.end(), r.region) == regions.end()) {
      regions.push_back(r.region);
    }
  }
  for (const auto& region : regions) {
    out.effects.push_back(garden_path_effect(labelled, region, seed, options.effect));
  }
  return out;
}

std::vector<std::string> default_base_columns(RTKind kind) {
  if (kind == RTKind::GPD) return {"length", "index", "slength", "pfix"};
  return {"length", "index"};
}

DeltaLLResult delta_ll_analysis(const std::vector<SentenceScore>& scores,
                                const std::vector<RTRow>& rts, Variant variant,
                                const DeltaLLOptions& options) {
  const auto freq = frequency_table(rts);
  DeltaLLResult out;
  out.variant = variant;
  out.rows = build_rows(scores, filter_rt(rts, options.kind), variant,
                        options.transform, &freq);
  if (out.rows.empty()) throw EstimationError("no rows survive filtering");

  auto full_columns = options.base_columns;
  for (const auto& c : options.surprisal_columns) full_columns.push_back(c);
  out.base = fit_ols(make_design(out.rows, options.base_columns, options.design));
  out.full = fit_ols(make_design(out.rows, full_columns, options.design));
  out.delta = delta_ll(out.base, out.full);
  return out;
}

double shuffled_delta_ll(const DeltaLLResult& result, const DeltaLLOptions& options,
                         std::uint64_t seed) {
  auto rows = result.rows;
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& src = result.rows[order[i]];
    rows[i].surp = src.surp;
    rows[i].surp_prev1 = src.surp_prev1;
    rows[i].surp_prev2 = src.surp_prev2;
  }
  auto full_columns = options.base_columns;
  for (const auto& c : options.surprisal_columns) full_columns.push_back(c);
  const auto full = fit_ols(make_design(rows, full_columns, options.design));
  return delta_ll(result.base, full);
}

}  // namespace wordprob
