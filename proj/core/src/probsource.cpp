#include "wordprob/probsource.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wordprob/error.hpp"

namespace wordprob {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::string_view kEmptyContext = "\xCE\xB5";  // ε
constexpr std::string_view kDefaultContext = "*";

std::span<const TokenId> truncate(std::span<const TokenId> ctx,
                                  std::size_t order) {
  if (ctx.size() <= order) return ctx;
  return ctx.subspan(ctx.size() - order);
}

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto next = s.find(' ', pos);
    const auto end = next == std::string_view::npos ? s.size() : next;
    if (end > pos) out.emplace_back(s.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

// Parses "<tok>:<p>,<tok>:<p>..." where a token may itself contain ':' or
// ','. An item ends at the first ':' (past one token byte) whose number
// runs to the next ',' or end of line.
std::vector<std::pair<std::string, double>> parse_items(std::string_view s,
                                                        std::size_t lineno) {
  std::vector<std::pair<std::string, double>> items;
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool found = false;
    for (std::size_t colon = s.find(':', pos + 1);
         colon != std::string_view::npos; colon = s.find(':', colon + 1)) {
      double value = 0.0;
      const char* first = s.data() + colon + 1;
      const char* last = s.data() + s.size();
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc{} || ptr == first) continue;
      if (ptr != last && *ptr != ',') continue;
      items.emplace_back(std::string(s.substr(pos, colon - pos)), value);
      pos = static_cast<std::size_t>(ptr - s.data()) + 1;
      found = true;
      break;
    }
    if (!found) {
      throw ValidationError("malformed '<token>:<prob>' list", "distribution",
                            lineno);
    }
  }
  return items;
}

}  // namespace

double log_sum_exp(std::span<const double> logp, std::span<const TokenId> ids) {
  double hi = kNegInf;
  for (TokenId id : ids) hi = std::max(hi, logp[id]);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (TokenId id : ids) acc += std::exp(logp[id] - hi);
  return hi + std::log(acc);
}

double log_sum_exp(std::span<const double> logp) {
  double hi = kNegInf;
  for (double v : logp) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : logp) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

double log_mass(std::span<const double> logp, std::span<const TokenId> ids) {
  return std::min(0.0, log_sum_exp(logp, ids));
}

// ConditionalModel

void ConditionalModel::check_context(std::span<const TokenId> ctx) const {
  const auto n = vocab().size();
  for (TokenId t : ctx) {
    if (t >= n) {
      throw LookupError("context token id " + std::to_string(t) +
                        " is not in the vocabulary");
    }
  }
}

std::vector<double> ConditionalModel::next_dist(
    std::span<const TokenId> ctx) const {
  auto p = next_logprobs(ctx);
  for (double& v : p) v = std::exp(v);
  return p;
}

double ConditionalModel::log_b_mass(std::span<const TokenId> ctx) const {
  const auto logp = next_logprobs(ctx);
  return log_mass(logp, vocab().b_ids());
}

double ConditionalModel::b_mass(std::span<const TokenId> ctx) const {
  return std::exp(log_b_mass(ctx));
}

// UniformModel

UniformModel::UniformModel(std::shared_ptr<const Vocabulary> vocab)
    : vocab_(std::move(vocab)) {}

std::vector<double> UniformModel::next_logprobs(
    std::span<const TokenId> ctx) const {
  check_context(ctx);
  const double n = static_cast<double>(vocab_->size());
  return std::vector<double>(vocab_->size(), -std::log(n));
}

std::optional<double> UniformModel::max_continuation_mass() const {
  return static_cast<double>(vocab_->i_ids().size()) /
         static_cast<double>(vocab_->size());
}

// TabularModel

std::vector<double> TabularModel::to_log(const Distribution& dist) const {
  if (dist.size() != vocab_->size()) {
    throw ValidationError("distribution has " + std::to_string(dist.size()) +
                              " entries, vocabulary has " +
                              std::to_string(vocab_->size()),
                          "distribution");
  }
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("probabilities must be finite and nonnegative",
                            "distribution");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("distribution sums to " + format_prob(sum) +
                              ", expected 1",
                          "distribution");
  }
  std::vector<double> out(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    out[i] = dist[i] > 0.0 ? std::log(dist[i] / sum) : kNegInf;
  }
  return out;
}

TabularModel::TabularModel(std::shared_ptr<const Vocabulary> vocab,
                           std::size_t order,
                           const std::map<ContextKey, Distribution>& table,
                           const Distribution& default_dist)
    : vocab_(std::move(vocab)), order_(order) {
  for (const auto& [key, dist] : table) {
    if (key.size() > order_) {
      throw ValidationError("context longer than the model order", "context");
    }
    check_context(key);
    table_.emplace(key, to_log(dist));
  }
  default_ = to_log(default_dist);
}

TabularModel TabularModel::from_log_table(
    std::shared_ptr<const Vocabulary> vocab, std::size_t order,
    std::map<ContextKey, std::vector<double>> table,
    std::vector<double> default_logprobs) {
  TabularModel m;
  m.vocab_ = std::move(vocab);
  m.order_ = order;
  m.table_ = std::move(table);
  m.default_ = std::move(default_logprobs);
  return m;
}

std::vector<double> TabularModel::next_logprobs(
    std::span<const TokenId> ctx) const {
  check_context(ctx);
  const auto key = truncate(ctx, order_);
  const auto it = table_.find(ContextKey(key.begin(), key.end()));
  return it == table_.end() ? default_ : it->second;
}

std::optional<double> TabularModel::max_continuation_mass() const {
  const auto& ids = vocab_->i_ids();
  if (ids.empty()) return 0.0;
  double hi = std::exp(log_sum_exp(default_, ids));
  for (const auto& [key, logp] : table_) {
    hi = std::max(hi, std::exp(log_sum_exp(logp, ids)));
  }
  return std::min(hi, 1.0);
}

TabularModel TabularModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open model file " + path.string(), "path");
  }
  return parse(in);
}

TabularModel TabularModel::parse(std::istream& in) {
  struct Row {
    std::string context;
    std::vector<std::pair<std::string, double>> items;
    std::size_t lineno;
  };

  std::optional<std::size_t> order;
  std::string marker(kDefaultMarker);
  std::vector<std::string> declared;
  std::vector<Row> rows;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const auto key = line.substr(1, eq - 1);
      const auto value = line.substr(eq + 1);
      if (key == "order") {
        std::size_t k = 0;
        const auto [ptr, ec] =
            std::from_chars(value.data(), value.data() + value.size(), k);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
          throw ValidationError("order must be a nonnegative integer", "order",
                                lineno);
        }
        order = k;
      } else if (key == "marker") {
        marker = value;
      } else if (key == "vocab") {
        declared = split_spaces(value);
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError("expected '<context>\\t<distribution>'", "line",
                            lineno);
    }
    rows.push_back({line.substr(0, tab),
                    parse_items(std::string_view(line).substr(tab + 1), lineno),
                    lineno});
  }
  if (!order) throw ValidationError("missing '#order=k' header", "order");

  if (declared.empty()) {
    std::vector<std::string> seen;
    auto note = [&](const std::string& s) {
      if (std::find(seen.begin(), seen.end(), s) == seen.end()) seen.push_back(s);
    };
    for (const auto& row : rows) {
      if (row.context != kEmptyContext && row.context != kDefaultContext) {
        for (const auto& t : split_spaces(row.context)) note(t);
      }
      for (const auto& [t, p] : row.items) note(t);
    }
    declared = std::move(seen);
  }
  auto vocab = std::make_shared<const Vocabulary>(
      Vocabulary::from_surfaces(declared, marker));

  auto lookup = [&](const std::string& surface, std::size_t at) {
    if (auto id = vocab->find(surface)) return *id;
    throw ValidationError("token '" + surface + "' is not in the vocabulary",
                          "token", at);
  };

  std::map<ContextKey, Distribution> table;
  std::optional<Distribution> fallback;
  for (const auto& row : rows) {
    double sum = 0.0;
    Distribution dist(vocab->size(), 0.0);
    for (const auto& [t, p] : row.items) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw ValidationError("probabilities must be finite and nonnegative",
                              "distribution", row.lineno);
      }
      dist[lookup(t, row.lineno)] += p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("distribution sums to " + format_prob(sum) +
                                ", expected 1",
                            "distribution", row.lineno);
    }
    if (row.context == kDefaultContext) {
      fallback = std::move(dist);
      continue;
    }
    ContextKey key;
    if (row.context != kEmptyContext) {
      for (const auto& t : split_spaces(row.context)) {
        key.push_back(lookup(t, row.lineno));
      }
    }
    if (key.size() > *order) {
      throw ValidationError("context longer than the model order", "context",
                            row.lineno);
    }
    if (!table.emplace(std::move(key), std::move(dist)).second) {
      throw ValidationError("duplicate context", "context", row.lineno);
    }
  }
  if (!fallback) {
    fallback = Distribution(vocab->size(),
                            1.0 / static_cast<double>(vocab->size()));
  }
  return TabularModel(std::move(vocab), *order, table, *fallback);
}

void TabularModel::write(std::ostream& out) const {
  out << "#order=" << order_ << '\n';
  out << "#marker=" << vocab_->marker() << '\n';
  out << "#vocab=";
  for (TokenId id = 0; id < vocab_->size(); ++id) {
    out << (id ? " " : "") << vocab_->surface(id);
  }
  out << '\n';

  auto write_dist = [&](const std::vector<double>& logp) {
    bool first = true;
    for (TokenId id = 0; id < logp.size(); ++id) {
      if (logp[id] == kNegInf) continue;
      out << (first ? "" : ",") << vocab_->surface(id) << ':'
          << format_prob(std::exp(logp[id]));
      first = false;
    }
    out << '\n';
  };

  out << kDefaultContext << '\t';
  write_dist(default_);
  for (const auto& [key, logp] : table_) {
    if (key.empty()) {
      out << kEmptyContext;
    } else {
      for (std::size_t i = 0; i < key.size(); ++i) {
        out << (i ? " " : "") << vocab_->surface(key[i]);
      }
    }
    out << '\t';
    write_dist(logp);
  }
}

// NGramModel

std::vector<double> NGramModel::smoothed(const std::vector<double>* counts) const {
  const std::size_t v = vocab_->size();
  double total = 0.0;
  if (counts) {
    for (double c : *counts) total += c;
  }
  const double denom = std::log(total + alpha_ * static_cast<double>(v));
  std::vector<double> out(v);
  for (std::size_t j = 0; j < v; ++j) {
    const double c = counts ? (*counts)[j] : 0.0;
    out[j] = std::log(c + alpha_) - denom;
  }
  return out;
}

std::vector<double> NGramModel::next_logprobs(std::span<const TokenId> ctx) const {
  check_context(ctx);
  const auto key = truncate(ctx, order_ - 1);
  const auto it = counts_.find(ContextKey(key.begin(), key.end()));
  return smoothed(it == counts_.end() ? nullptr : &it->second);
}

std::optional<double> NGramModel::max_continuation_mass() const {
  const auto& ids = vocab_->i_ids();
  if (ids.empty()) return 0.0;
  double hi = std::exp(log_sum_exp(smoothed(nullptr), ids));
  for (const auto& [key, counts] : counts_) {
    hi = std::max(hi, std::exp(log_sum_exp(smoothed(&counts), ids)));
  }
  return std::min(hi, 1.0);
}

TabularModel NGramModel::to_tabular() const {
  std::map<ContextKey, std::vector<double>> table;
  for (const auto& [key, counts] : counts_) table.emplace(key, smoothed(&counts));
  return TabularModel::from_log_table(vocab_, order_ - 1, std::move(table),
                                      smoothed(nullptr));
}

NGramModel train_ngram(std::shared_ptr<const Vocabulary> vocab,
                       const std::vector<std::vector<TokenId>>& corpus,
                       std::size_t order, double alpha) {
  if (order < 1) throw ValidationError("n-gram order must be >= 1", "order");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("smoothing constant must be positive", "alpha");
  }
  std::size_t tokens = 0;
  for (const auto& seq : corpus) tokens += seq.size();
  if (tokens == 0) throw ValidationError("training corpus is empty", "corpus");

  NGramModel m;
  m.vocab_ = std::move(vocab);
  m.order_ = order;
  m.alpha_ = alpha;
  const std::size_t v = m.vocab_->size();
  for (const auto& seq : corpus) {
    m.check_context(seq);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const std::size_t from = i >= order - 1 ? i - (order - 1) : 0;
      ContextKey key(seq.begin() + static_cast<std::ptrdiff_t>(from),
                     seq.begin() + static_cast<std::ptrdiff_t>(i));
      auto [it, inserted] = m.counts_.try_emplace(std::move(key));
      if (inserted) it->second.assign(v, 0.0);
      it->second[seq[i]] += 1.0;
    }
  }
  return m;
}

// Reference tables

namespace {

std::shared_ptr<const Vocabulary> two_token_vocab(const char* b, const char* i) {
  return std::make_shared<const Vocabulary>(std::vector<VocabEntry>{
      {std::string(kDefaultMarker) + b, TokenClass::B}, {i, TokenClass::I}});
}

}  // namespace

TabularModel overcount_table() {
  auto vocab = two_token_vocab("j1", "j2");
  const TokenId j1 = 0, j2 = 1;
  std::map<ContextKey, Distribution> table{
      {{}, {1.0, 0.0}},
      {{j1}, {0.0, 1.0}},
      {{j1, j2}, {1.0, 0.0}},
  };
  return TabularModel(std::move(vocab), 2, table, {1.0, 0.0});
}

TabularModel garden_table() {
  auto vocab = two_token_vocab("a", "x");
  std::map<ContextKey, Distribution> table{{{}, {0.9, 0.1}}};
  return TabularModel(std::move(vocab), 1, table, {0.1, 0.9});
}

TabularModel nonmonotone_table() {
  auto vocab = two_token_vocab("a", "x");
  const TokenId a = 0, x = 1;
  std::map<ContextKey, Distribution> table{
      {{}, {0.5, 0.5}},
      {{a}, {0.1, 0.9}},
      {{a, x}, {0.95, 0.05}},
  };
  return TabularModel(std::move(vocab), 2, table, {0.5, 0.5});
}

}  // namespace wordprob
