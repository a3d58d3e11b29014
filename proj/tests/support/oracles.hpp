#pragma once

// Random model generators and independent reference computations. The
// oracles work in probability space straight from next_dist, never through
// the decoding or normcheck code they are compared against.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wordprob/probsource.hpp"
#include "wordprob/vocab.hpp"

namespace wordprob::oracle {

inline std::string b_surface(std::size_t i) {
  return std::string(kDefaultMarker) + "b" + std::to_string(i);
}
inline std::string i_surface(std::size_t i) { return "i" + std::to_string(i); }

inline std::shared_ptr<const Vocabulary> make_vocab(std::size_t nb, std::size_t ni) {
  std::vector<std::string> s;
  for (std::size_t k = 0; k < nb; ++k) s.push_back(b_surface(k));
  for (std::size_t k = 0; k < ni; ++k) s.push_back(i_surface(k));
  return std::make_shared<const Vocabulary>(Vocabulary::from_surfaces(s));
}

/// Strictly positive random distribution; `floor` keeps every entry away
/// from zero.
inline Distribution random_dist(std::mt19937_64& rng, std::size_t n, double floor = 0.02) {
  std::gamma_distribution<double> g(0.7, 1.0);
  Distribution d(n);
  double sum = 0.0;
  for (auto& x : d) {
    x = g(rng) + floor;
    sum += x;
  }
  for (auto& x : d) x /= sum;
  return d;
}

inline std::vector<TokenId> random_tokens(std::mt19937_64& rng, std::size_t vocab_size,
                                          std::size_t len) {
  std::uniform_int_distribution<TokenId> pick(0, static_cast<TokenId>(vocab_size - 1));
  std::vector<TokenId> out(len);
  for (auto& t : out) t = pick(rng);
  return out;
}

/// Random tabular model with random contexts of length <= order.
inline TabularModel random_tabular(std::mt19937_64& rng,
                                   std::shared_ptr<const Vocabulary> vocab,
                                   std::size_t order, std::size_t contexts,
                                   double floor = 0.02) {
  std::map<ContextKey, Distribution> table;
  std::uniform_int_distribution<std::size_t> len(0, order);
  for (std::size_t c = 0; c < contexts; ++c) {
    table[random_tokens(rng, vocab->size(), len(rng))] =
        random_dist(rng, vocab->size(), floor);
  }
  const auto def = random_dist(rng, vocab->size(), floor);
  return TabularModel(std::move(vocab), order, table, def);
}

/// Random model whose b_mass is the same in every context.
inline TabularModel random_context_free_b_mass(std::mt19937_64& rng,
                                               std::shared_ptr<const Vocabulary> vocab,
                                               std::size_t order, std::size_t contexts) {
  std::uniform_real_distribution<double> u(0.2, 0.8);
  const double bm = u(rng);
  auto shaped = [&]() {
    auto d = random_dist(rng, vocab->size());
    double b = 0.0, i = 0.0;
    for (TokenId t = 0; t < d.size(); ++t) (vocab->is_b(t) ? b : i) += d[t];
    for (TokenId t = 0; t < d.size(); ++t) d[t] *= vocab->is_b(t) ? bm / b : (1 - bm) / i;
    return d;
  };
  std::map<ContextKey, Distribution> table;
  std::uniform_int_distribution<std::size_t> len(0, order);
  for (std::size_t c = 0; c < contexts; ++c) {
    table[random_tokens(rng, vocab->size(), len(rng))] = shaped();
  }
  return TabularModel(std::move(vocab), order, table, shaped());
}

/// 1..max_words words, each one B token and 0..max_i I tokens.
inline std::vector<TokenId> random_sentence(std::mt19937_64& rng, const Vocabulary& v,
                                            std::size_t max_words, std::size_t max_i = 2) {
  std::uniform_int_distribution<std::size_t> nw(1, max_words), ni(0, max_i);
  std::uniform_int_distribution<std::size_t> pb(0, v.b_ids().size() - 1);
  std::uniform_int_distribution<std::size_t> pi(0, v.i_ids().empty() ? 0 : v.i_ids().size() - 1);
  std::vector<TokenId> out;
  const auto words = nw(rng);
  for (std::size_t w = 0; w < words; ++w) {
    out.push_back(v.b_ids()[pb(rng)]);
    if (v.i_ids().empty()) continue;
    const auto k = ni(rng);
    for (std::size_t j = 0; j < k; ++j) out.push_back(v.i_ids()[pi(rng)]);
  }
  return out;
}

/// P(next in V_B | ctx), summed in probability space.
inline double b_mass_of(const ConditionalModel& m, std::span<const TokenId> ctx) {
  const auto d = m.next_dist(ctx);
  double s = 0.0;
  for (TokenId t = 0; t < d.size(); ++t) {
    if (m.vocab().is_b(t)) s += d[t];
  }
  return s;
}

/// Chain-rule probability of `word` after `ctx`.
inline double chain_prob(const ConditionalModel& m, std::vector<TokenId> ctx,
                           std::span<const TokenId> word) {
  double p = 1.0;
  for (TokenId t : word) {
    p *= m.next_dist(ctx)[t];
    ctx.push_back(t);
  }
  return p;
}

/// Terms of the disjoint-subspace series for the next word after `ctx`:
/// term k = P(x_2..x_k in V_I, x_{k+1} in V_B | x_1 in V_B, ctx), for
/// k = 1..depth. Computed by pushing prefix probability mass forward.
inline std::vector<double> series_terms(const ConditionalModel& m,
                                               const std::vector<TokenId>& ctx,
                                               std::size_t depth) {
  const auto& v = m.vocab();
  const double start = b_mass_of(m, ctx);
  std::vector<std::pair<std::vector<TokenId>, double>> frontier;
  const auto first = m.next_dist(ctx);
  for (TokenId b : v.b_ids()) {
    auto c = ctx;
    c.push_back(b);
    frontier.emplace_back(std::move(c), first[b] / start);
  }
  std::vector<double> terms;
  for (std::size_t k = 1; k <= depth; ++k) {
    double term = 0.0;
    std::vector<std::pair<std::vector<TokenId>, double>> next;
    for (const auto& [prefix, mass] : frontier) {
      const auto d = m.next_dist(prefix);
      for (TokenId t = 0; t < d.size(); ++t) {
        if (v.is_b(t)) {
          term += mass * d[t];
        } else if (k < depth) {
          auto c = prefix;
          c.push_back(t);
          next.emplace_back(std::move(c), mass * d[t]);
        }
      }
    }
    terms.push_back(term);
    frontier = std::move(next);
  }
  return terms;
}

/// Exhaustive two-sided sign-flip p-value for paired differences.
inline double sign_flip_p(const std::vector<double>& d) {
  const std::size_t g = d.size();
  double obs = 0.0, mag = 0.0;
  for (double x : d) {
    obs += x;
    mag += std::fabs(x);
  }
  const double thr = std::fabs(obs / g) - 1e-12 * mag / g;
  std::size_t hits = 0;
  const std::size_t n = std::size_t{1} << g;
  for (std::size_t mask = 0; mask < n; ++mask) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < g; ++k) s += ((mask >> k) & 1U) ? -d[k] : d[k];
    if (std::fabs(static_cast<double>(s) / g) >= thr) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

/// Least squares with intercept via normal equations in long double.
inline std::vector<double> ols(const std::vector<std::vector<double>>& x,
                                      const std::vector<double>& y) {
  const std::size_t n = y.size(), p = x.empty() ? 0 : x[0].size() + 1;
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0.0L));
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<long double> row(p);
    row[0] = 1.0L;
    for (std::size_t c = 1; c < p; ++c) row[c] = x[r][c - 1];
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += row[i] * row[j];
      a[i][p] += row[i] * y[r];
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t piv = i;
    for (std::size_t r = i + 1; r < p; ++r) {
      if (std::fabs(a[r][i]) > std::fabs(a[piv][i])) piv = r;
    }
    std::swap(a[i], a[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == i) continue;
      const long double f = a[r][i] / a[i][i];
      for (std::size_t c = i; c <= p; ++c) a[r][c] -= f * a[i][c];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t i = 0; i < p; ++i) beta[i] = static_cast<double>(a[i][p] / a[i][i]);
  return beta;
}

}  // namespace wordprob::oracle
