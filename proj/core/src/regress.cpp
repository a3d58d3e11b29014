#include "wordprob/regress.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "wordprob/error.hpp"

namespace wordprob {

namespace {

// Relative pivot threshold for the rank check on unit-norm columns.
constexpr double kRankThreshold = 1e-10;

std::uint64_t fingerprint(const std::vector<double>& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double x : v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof x);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::optional<double> column_value(const RegressionRow& r, const std::string& name) {
  if (name == "surp") return r.surp;
  if (name == "surp_prev1") return r.surp_prev1;
  if (name == "surp_prev2") return r.surp_prev2;
  if (name == "freq") return r.freq;
  if (name == "freq_prev1") return r.freq_prev1;
  if (name == "freq_prev2") return r.freq_prev2;
  if (name == "length") return r.length;
  if (name == "index") return r.index;
  if (name == "length_sq") return r.length * r.length;
  if (name == "index_sq") return r.index * r.index;
  if (name == "slength") return r.slength;
  if (name == "pfix") return r.pfix;
  if (name == "prev1_missing") return r.prev1_missing;
  if (name == "prev2_missing") return r.prev2_missing;
  throw ValidationError("unknown design column '" + name + "'", "columns");
}

bool is_indicator(const std::string& name) { return name.ends_with("_missing"); }

// Type-7 quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

DesignMatrix::DesignMatrix(std::vector<std::string> names, std::vector<double> values,
                           std::vector<double> response)
    : names_(std::move(names)), values_(std::move(values)),
      response_(std::move(response)) {
  if (values_.size() != names_.size() * response_.size()) {
    throw ValidationError("design values do not match rows x columns", "values");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite predictor", "values");
  }
  for (double v : response_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite response", "response");
  }
}

DesignMatrix make_design(const std::vector<RegressionRow>& rows,
                         const std::vector<std::string>& columns,
                         const DesignOptions& options) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;

  auto add = [&](const std::string& name) {
    std::vector<double> c;
    c.reserve(rows.size());
    for (const auto& r : rows) {
      const auto v = column_value(r, name);
      if (!v) {
        throw ValidationError("column '" + name + "' is missing for sentence '" +
                                  r.sid + "' index " + std::to_string(r.widx),
                              name);
      }
      c.push_back(*v);
    }
    if (options.drop_constant_indicators && is_indicator(name) && !c.empty() &&
        std::all_of(c.begin(), c.end(), [&](double v) { return v == c.front(); })) {
      return;
    }
    names.push_back(name);
    cols.push_back(std::move(c));
  };

  for (const auto& name : columns) add(name);
  if (options.quadratic) {
    add("length_sq");
    add("index_sq");
  }

  auto add_groups = [&](const char* prefix, auto key) {
    std::set<std::string> levels;
    for (const auto& r : rows) levels.insert(key(r));
    bool reference = true;
    for (const auto& level : levels) {
      if (reference) {
        reference = false;
        continue;
      }
      std::vector<double> c;
      c.reserve(rows.size());
      for (const auto& r : rows) c.push_back(key(r) == level ? 1.0 : 0.0);
      names.push_back(std::string(prefix) + level);
      cols.push_back(std::move(c));
    }
  };
  if (options.subject_indicators) {
    add_groups("subject=", [](const RegressionRow& r) { return r.subject; });
  }
  if (options.item_indicators) {
    add_groups("item=", [](const RegressionRow& r) { return r.item; });
  }

  std::vector<double> values(rows.size() * names.size());
  for (std::size_t j = 0; j < names.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      values[i * names.size() + j] = cols[j][i];
    }
  }
  std::vector<double> response;
  response.reserve(rows.size());
  for (const auto& r : rows) response.push_back(r.response);
  return DesignMatrix(std::move(names), std::move(values), std::move(response));
}

FitResult fit_ols(const DesignMatrix& X) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n <= p + 1) {
    throw ValidationError("need more rows (" + std::to_string(n) +
                              ") than coefficients (" + std::to_string(p + 1) + ")",
                          "rows");
  }

  Eigen::MatrixXd A(n, p + 1);
  A.col(0).setOnes();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) A(i, j + 1) = X.at(i, j);
  }
  const Eigen::Map<const Eigen::VectorXd> y(X.response().data(),
                                            static_cast<Eigen::Index>(n));

  // Unit-norm columns so the rank threshold is scale-free.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  std::vector<std::string> zero_cols;
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (scale(j) == 0.0) {
      zero_cols.push_back(j == 0 ? "(intercept)" : X.names()[j - 1]);
      scale(j) = 1.0;
    }
  }
  if (!zero_cols.empty()) {
    throw SingularDesignError("design has all-zero columns", zero_cols);
  }
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(As);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < static_cast<Eigen::Index>(p + 1)) {
    std::vector<std::string> collinear;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) {
      const auto j = perm(k);
      collinear.push_back(j == 0 ? "(intercept)" : X.names()[j - 1]);
    }
    std::string list;
    for (const auto& c : collinear) list += (list.empty() ? "" : ", ") + c;
    throw SingularDesignError("design is rank deficient; collinear columns: " + list,
                              collinear);
  }
  const Eigen::VectorXd beta = qr.solve(y).cwiseQuotient(scale);
  const Eigen::VectorXd resid = y - A * beta;

  FitResult fit;
  fit.names = X.names();
  fit.intercept = beta(0);
  fit.coefficients.assign(beta.data() + 1, beta.data() + beta.size());
  fit.residuals.assign(resid.data(), resid.data() + resid.size());
  fit.n = n;
  fit.p = p;
  fit.response_fingerprint = fingerprint(X.response());

  const double rss = resid.squaredNorm();
  const double nn = static_cast<double>(n);
  fit.sigma2 = rss / nn;
  fit.sigma2_unbiased = rss / static_cast<double>(n - p - 1);
  const double ss = y.squaredNorm();
  fit.perfect_fit = rss <= 1e-20 * ss || rss == 0.0;
  if (!fit.perfect_fit) {
    fit.loglik = -0.5 * nn * (std::log(2.0 * std::numbers::pi * fit.sigma2) + 1.0);
  }
  return fit;
}

double delta_ll(const FitResult& base, const FitResult& full) {
  if (base.n != full.n) {
    throw ComparisonError("fits have different sample sizes (" +
                          std::to_string(base.n) + " vs " + std::to_string(full.n) +
                          ")");
  }
  if (base.response_fingerprint != full.response_fingerprint) {
    throw ComparisonError("fits were estimated on different responses");
  }
  for (const auto& name : base.names) {
    if (std::find(full.names.begin(), full.names.end(), name) == full.names.end()) {
      throw ComparisonError("base column '" + name + "' is absent from the full fit");
    }
  }
  if (!base.loglik || !full.loglik) {
    throw ComparisonError("log-likelihood undefined for a perfect fit");
  }
  return *full.loglik - *base.loglik;
}

std::vector<double> predict(const FitResult& fit, const DesignMatrix& X) {
  if (X.names() != fit.names) {
    throw ComparisonError("design columns do not match the fitted columns");
  }
  std::vector<double> out(X.rows(), fit.intercept);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t j = 0; j < X.cols(); ++j) {
      out[i] += X.at(i, j) * fit.coefficients[j];
    }
  }
  return out;
}

EffectEstimate garden_path_effect(const std::vector<PredictedRow>& preds,
                                  const std::string& region, std::uint64_t seed,
                                  const EffectOptions& options) {
  struct Cell {
    double amb_sum = 0.0, ctl_sum = 0.0;
    std::size_t amb_n = 0, ctl_n = 0;
  };
  std::map<std::string, Cell> items;
  for (const auto& r : preds) {
    if (r.region != region) continue;
    auto& c = items[r.item];
    if (r.condition == options.ambiguous) {
      c.amb_sum += r.pred;
      ++c.amb_n;
    } else if (r.condition == options.control) {
      c.ctl_sum += r.pred;
      ++c.ctl_n;
    }
  }

  std::vector<Cell> cells;
  for (const auto& [item, c] : items) {
    if (c.amb_n + c.ctl_n > 0) cells.push_back(c);
  }
  auto effect_of = [&](const std::vector<std::size_t>& weight) -> std::optional<double> {
    double as = 0.0, cs = 0.0, an = 0.0, cn = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (weight[k] == 0) continue;
      const auto w = static_cast<double>(weight[k]);
      as += w * cells[k].amb_sum;
      cs += w * cells[k].ctl_sum;
      an += w * static_cast<double>(cells[k].amb_n);
      cn += w * static_cast<double>(cells[k].ctl_n);
    }
    if (an == 0.0 || cn == 0.0) return std::nullopt;
    return as / an - cs / cn;
  };

  const auto point = effect_of(std::vector<std::size_t>(cells.size(), 1));
  if (!point) {
    throw EstimationError("region '" + region + "' lacks the '" + options.ambiguous +
                          "' or '" + options.control + "' condition");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::vector<double> boot;
  boot.reserve(options.resamples);
  std::vector<std::size_t> weight(cells.size());
  for (std::size_t b = 0; b < options.resamples; ++b) {
    std::fill(weight.begin(), weight.end(), 0);
    for (std::size_t k = 0; k < cells.size(); ++k) ++weight[pick(rng)];
    if (auto e = effect_of(weight)) boot.push_back(*e);
  }

  EffectEstimate out;
  out.region = region;
  out.effect = *point;
  out.items = cells.size();
  out.resamples = boot.size();
  if (boot.empty()) {
    out.ci_low = out.ci_high = *point;
  } else {
    std::sort(boot.begin(), boot.end());
    out.ci_low = quantile(boot, 0.025);
    out.ci_high = quantile(boot, 0.975);
  }
  out.half_width = 0.5 * (out.ci_high - out.ci_low);
  return out;
}

std::vector<GroupError> aggregate_squared_errors(std::span<const double> residuals,
                                                 std::span<const std::string> groups) {
  if (residuals.size() != groups.size()) {
    throw ComparisonError("residual and group vectors differ in length");
  }
  std::map<std::string, double> sums;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    sums[groups[i]] += residuals[i] * residuals[i];
  }
  std::vector<GroupError> out;
  out.reserve(sums.size());
  for (auto& [g, v] : sums) out.push_back({g, v});
  return out;
}

PermutationResult permutation_test(std::span<const GroupError> a,
                                   std::span<const GroupError> b, std::size_t n_perm,
                                   std::uint64_t seed, bool force_monte_carlo) {
  std::map<std::string, double> ma, mb;
  for (const auto& g : a) {
    if (!ma.emplace(g.group, g.value).second) {
      throw ComparisonError("duplicate group '" + g.group + "'");
    }
  }
  for (const auto& g : b) {
    if (!mb.emplace(g.group, g.value).second) {
      throw ComparisonError("duplicate group '" + g.group + "'");
    }
  }
  if (ma.size() != mb.size() || ma.empty()) {
    throw ComparisonError("error vectors cover different group counts");
  }
  std::vector<double> d;
  d.reserve(ma.size());
  for (const auto& [g, v] : ma) {
    const auto it = mb.find(g);
    if (it == mb.end()) throw ComparisonError("group '" + g + "' is unpaired");
    d.push_back(v - it->second);
  }

  const auto groups = d.size();
  const double count = static_cast<double>(groups);
  double observed = 0.0, magnitude = 0.0;
  for (double x : d) {
    observed += x;
    magnitude += std::abs(x);
  }
  observed /= count;
  // Floating ties: sign patterns that reach |observed| up to rounding count.
  const double threshold = std::abs(observed) - 1e-12 * magnitude / count;

  PermutationResult out;
  out.observed = observed;
  if (groups <= kExactPermutationGroups && !force_monte_carlo) {
    const std::size_t patterns = std::size_t{1} << groups;
    std::size_t hits = 0;
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      double s = 0.0;
      for (std::size_t g = 0; g < groups; ++g) s += (mask >> g & 1U) ? -d[g] : d[g];
      if (std::abs(s / count) >= threshold) ++hits;
    }
    out.p_value = static_cast<double>(hits) / static_cast<double>(patterns);
    out.permutations = patterns;
    out.exact = true;
    return out;
  }

  if (n_perm == 0) throw ComparisonError("n_perm must be positive");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(0.5);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n_perm; ++k) {
    double s = 0.0;
    for (double x : d) s += flip(rng) ? -x : x;
    if (std::abs(s / count) >= threshold) ++hits;
  }
  out.p_value = static_cast<double>(hits + 1) / static_cast<double>(n_perm + 1);
  out.permutations = n_perm;
  return out;
}

}  // namespace wordprob
