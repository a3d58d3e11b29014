#include "wordprob/decoding.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wordprob/error.hpp"

namespace wordprob {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Factors {
  std::vector<double> token_logps;  // n
  std::vector<double> b_logmass;    // n + 1
};

Factors evaluate(const ConditionalModel& model, std::span<const TokenId> tokens) {
  Factors f;
  f.token_logps.reserve(tokens.size());
  f.b_logmass.reserve(tokens.size() + 1);
  const auto& b_ids = model.vocab().b_ids();
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    const auto logp = model.next_logprobs(tokens.first(i));
    f.b_logmass.push_back(log_mass(logp, b_ids));
    if (i < tokens.size()) f.token_logps.push_back(logp[tokens[i]]);
  }
  return f;
}

double rescale(double wl, double b_after, double b_before) {
  if (b_before == kNegInf) {
    throw UndefinedRescalingError(
        "boundary mass before the word is zero; whitespace-trailing "
        "probability is undefined");
  }
  return wl + b_after - b_before;
}

// Shared by live-model and record scoring so both are bit-identical.
SentenceScore combine(std::string sid, std::vector<std::string> surfaces,
                      const std::vector<WordSpan>& spans, const Factors& f) {
  SentenceScore out;
  out.sid = std::move(sid);
  out.initial_b_logmass = f.b_logmass.front();
  out.final_b_logmass = f.b_logmass.back();
  out.words.reserve(spans.size());
  for (std::size_t w = 0; w < spans.size(); ++w) {
    const auto& span = spans[w];
    double wl = 0.0;
    for (std::size_t i = span.begin; i < span.end; ++i) wl += f.token_logps[i];
    const double wt = rescale(wl, f.b_logmass[span.end], f.b_logmass[span.begin]);
    out.words.push_back({std::move(surfaces[w]), span, wl, wt,
                         surprisal_bits(wl), surprisal_bits(wt)});
  }
  return out;
}

std::vector<TokenId> concat(std::span<const TokenId> a, std::span<const TokenId> b) {
  std::vector<TokenId> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

const char* to_string(Variant v) { return v == Variant::WL ? "wl" : "wt"; }

double wl_word_logprob(const ConditionalModel& model,
                       std::span<const TokenId> ctx,
                       std::span<const TokenId> word) {
  auto prefix = concat(ctx, {});
  double total = 0.0;
  for (TokenId t : word) {
    total += model.next_logprobs(prefix)[t];
    prefix.push_back(t);
  }
  return total;
}

double wt_word_logprob(const ConditionalModel& model,
                       std::span<const TokenId> ctx,
                       std::span<const TokenId> word) {
  const double before = model.log_b_mass(ctx);
  const double after = model.log_b_mass(concat(ctx, word));
  return rescale(wl_word_logprob(model, ctx, word), after, before);
}

double surprisal_bits(double logprob) {
  if (!(logprob <= 0.0)) {
    throw DomainError("log-probability must be <= 0, got " +
                      std::to_string(logprob));
  }
  if (logprob == 0.0) return 0.0;
  return -logprob / std::numbers::ln2;
}

SentenceScore score_sentence(const ConditionalModel& model,
                             const Segmentation& seg, std::string sid) {
  const auto f = evaluate(model, seg.tokens());
  std::vector<std::string> surfaces;
  surfaces.reserve(seg.word_count());
  for (std::size_t w = 0; w < seg.word_count(); ++w) {
    surfaces.push_back(word_surface(model.vocab(), seg.word_tokens(w)));
  }
  return combine(std::move(sid), std::move(surfaces), seg.spans(), f);
}

SentenceScore score_from_records(const LogprobRecord& record,
                                 std::string_view marker) {
  validate(record);
  Factors f;
  std::vector<TokenClass> classes;
  f.token_logps.reserve(record.tokens.size());
  for (const auto& t : record.tokens) {
    f.token_logps.push_back(t.logp);
    classes.push_back(t.is_b ? TokenClass::B : TokenClass::I);
  }
  f.b_logmass = record.b_mass_logps;

  const auto spans = segment_words(classes);
  std::vector<std::string> surfaces;
  surfaces.reserve(spans.size());
  for (const auto& span : spans) {
    std::string s;
    for (std::size_t i = span.begin; i < span.end; ++i) s += record.tokens[i].surface;
    if (!marker.empty() && s.starts_with(marker)) {
      s.erase(0, marker.size());
    } else if (!s.empty() && s.front() == ' ') {
      s.erase(0, 1);
    }
    surfaces.push_back(std::move(s));
  }
  return combine(record.sid, std::move(surfaces), spans, f);
}

LogprobRecord make_record(const ConditionalModel& model, const Segmentation& seg,
                          std::string sid) {
  const auto f = evaluate(model, seg.tokens());
  LogprobRecord r;
  r.sid = std::move(sid);
  r.b_mass_logps = f.b_logmass;
  const auto& vocab = model.vocab();
  for (std::size_t i = 0; i < seg.tokens().size(); ++i) {
    const TokenId t = seg.tokens()[i];
    r.tokens.push_back({vocab.surface(t), f.token_logps[i], vocab.is_b(t)});
  }
  return r;
}

}  // namespace wordprob
