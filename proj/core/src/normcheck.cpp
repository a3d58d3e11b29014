#include "wordprob/normcheck.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wordprob/error.hpp"

namespace wordprob {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Visit {
  std::span<const TokenId> word;
  double wl_logprob;
  double b_after;  // log B-mass after the word
};

template <typename Fn>
void dfs(const ConditionalModel& model, std::vector<TokenId>& path,
         std::size_t ctx_len, double wl_logprob, std::size_t max_tokens, Fn& fn) {
  const auto logp = model.next_logprobs(path);
  const double b_after = log_mass(logp, model.vocab().b_ids());
  fn(Visit{std::span<const TokenId>(path).subspan(ctx_len), wl_logprob, b_after});
  if (path.size() - ctx_len >= max_tokens) return;
  for (TokenId i : model.vocab().i_ids()) {
    path.push_back(i);
    dfs(model, path, ctx_len, wl_logprob + logp[i], max_tokens, fn);
    path.pop_back();
  }
}

template <typename Fn>
void visit_words(const ConditionalModel& model, std::span<const TokenId> ctx,
                 std::size_t max_tokens, std::size_t budget, Fn&& fn) {
  if (max_tokens == 0) {
    throw ValidationError("max_tokens must be >= 1", "max_tokens");
  }
  const auto& vocab = model.vocab();
  const auto count =
      omega_size(vocab.b_ids().size(), vocab.i_ids().size(), max_tokens);
  if (count > budget) {
    throw EnumerationBudgetError(
        "enumerating " +
        (count == std::numeric_limits<std::size_t>::max() ? std::string("> 2^64")
                                                          : std::to_string(count)) +
        " words exceeds the budget of " + std::to_string(budget));
  }
  std::vector<TokenId> path(ctx.begin(), ctx.end());
  const auto logp = model.next_logprobs(path);
  for (TokenId b : vocab.b_ids()) {
    path.push_back(b);
    dfs(model, path, ctx.size(), logp[b], max_tokens, fn);
    path.pop_back();
  }
}

double wt_prob(double wl_logprob, double b_after, double b_before) {
  if (b_before == kNegInf) {
    throw UndefinedRescalingError(
        "boundary mass of the context is zero; whitespace-trailing "
        "probabilities are undefined");
  }
  return std::exp(wl_logprob + b_after - b_before);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::size_t omega_size(std::size_t b_count, std::size_t i_count,
                       std::size_t max_tokens) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t layer = b_count;
  for (std::size_t n = 1; n <= max_tokens; ++n) {
    if (total > kMax - layer) return kMax;
    total += layer;
    if (n == max_tokens) break;
    if (i_count == 0) break;
    if (layer > kMax / i_count) return kMax;
    layer *= i_count;
  }
  return total;
}

std::vector<EnumeratedWord> enumerate_words(const ConditionalModel& model,
                                            std::span<const TokenId> ctx,
                                            std::size_t max_tokens,
                                            std::size_t budget) {
  const double b_before = model.log_b_mass(ctx);
  std::vector<EnumeratedWord> out;
  visit_words(model, ctx, max_tokens, budget, [&](const Visit& v) {
    out.push_back({std::vector<TokenId>(v.word.begin(), v.word.end()),
                   std::exp(v.wl_logprob), wt_prob(v.wl_logprob, v.b_after, b_before)});
  });
  return out;
}

OmegaReport p_omega_partial(const ConditionalModel& model,
                            std::span<const TokenId> ctx, std::size_t max_tokens,
                            Variant mode, std::size_t budget) {
  OmegaReport report;
  report.mode = mode;
  report.context.assign(ctx.begin(), ctx.end());
  report.per_depth.resize(max_tokens);
  for (std::size_t n = 0; n < max_tokens; ++n) report.per_depth[n].tokens = n + 1;

  const double b_before = model.log_b_mass(ctx);
  visit_words(model, ctx, max_tokens, budget, [&](const Visit& v) {
    const double p = mode == Variant::WL ? std::exp(v.wl_logprob)
                                         : wt_prob(v.wl_logprob, v.b_after, b_before);
    report.per_depth[v.word.size() - 1].mass += p;
  });
  for (const auto& d : report.per_depth) report.cumulative += d.mass;

  if (mode == Variant::WT) {
    if (auto q = model.max_continuation_mass()) {
      report.tail_bound = std::pow(*q, static_cast<double>(max_tokens));
    }
  }
  return report;
}

OmegaReport overcount_witness() {
  const auto model = overcount_table();
  return p_omega_partial(model, {}, 2, Variant::WL);
}

std::string OmegaReport::to_text() const {
  std::ostringstream out;
  out << "mode\t" << to_string(mode) << '\n';
  out << "depth\tmass\tcumulative\n";
  double running = 0.0;
  for (const auto& d : per_depth) {
    running += d.mass;
    out << d.tokens << '\t' << fmt(d.mass) << '\t' << fmt(running) << '\n';
  }
  out << "total\t" << fmt(cumulative) << '\n';
  if (tail_bound) out << "tail_bound\t" << fmt(*tail_bound) << '\n';
  return out.str();
}

std::string OmegaReport::to_json() const {
  nlohmann::json depths = nlohmann::json::array();
  double running = 0.0;
  for (const auto& d : per_depth) {
    running += d.mass;
    depths.push_back({{"tokens", d.tokens}, {"mass", d.mass}, {"cumulative", running}});
  }
  nlohmann::json j = {{"mode", to_string(mode)},
                      {"context", context},
                      {"per_depth", std::move(depths)},
                      {"cumulative", cumulative}};
  j["tail_bound"] = tail_bound ? nlohmann::json(*tail_bound) : nlohmann::json(nullptr);
  return j.dump(2);
}

}  // namespace wordprob
