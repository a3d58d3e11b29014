#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wordprob/error.hpp"
#include "wordprob/pipeline.hpp"
#include "wordprob/synthetic.hpp"

using namespace wordprob;

namespace {

constexpr std::size_t kWords = 7;

SentenceScore sentence(const std::string& sid, const std::vector<double>& surp) {
  SentenceScore s;
  s.sid = sid;
  for (std::size_t w = 0; w < surp.size(); ++w) {
    ScoredWord word;
    word.surface = "w" + std::to_string(w);
    word.wl_surprisal = word.wt_surprisal = surp[w];
    word.wl_logprob = word.wt_logprob = -surp[w] * std::log(2.0);
    s.words.push_back(word);
  }
  return s;
}

struct Dataset {
  std::vector<SentenceScore> scores;
  std::vector<RTRow> rts;
};

// Fillers read with RT = 200 + beta * surp + noise; items differ between
// conditions only by `bump` bits of surprisal on word 3.
Dataset planted(double beta, double bump, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1.0, 9.0);
  std::normal_distribution<double> noise(0.0, 5.0);
  Dataset d;
  auto read = [&](const SentenceScore& s, const std::string& subject, const std::string& item,
                  const std::string& condition) {
    for (std::size_t w = 0; w < s.words.size(); ++w) {
      RTRow r;
      r.subject = subject;
      r.item = item;
      r.sid = s.sid;
      r.widx = w;
      r.word = s.words[w].surface;
      r.rt = 200.0 + beta * s.words[w].wl_surprisal + noise(rng);
      r.length = 2 + static_cast<int>(w % 3);
      r.condition = condition;
      r.region = condition == "filler" ? "" : (w == 3 ? "critical" : w == 4 ? "spillover1" : "");
      r.sentence_final = w + 1 == s.words.size();
      d.rts.push_back(r);
    }
  };
  std::vector<SentenceScore> fillers, amb, ctl;
  for (int f = 0; f < 40; ++f) {
    std::vector<double> s(kWords);
    for (auto& v : s) v = u(rng);
    fillers.push_back(sentence("f" + std::to_string(f), s));
  }
  for (int i = 0; i < 12; ++i) {
    std::vector<double> s(kWords);
    for (auto& v : s) v = u(rng);
    ctl.push_back(sentence("i" + std::to_string(i) + "-c", s));
    s[3] += bump;
    amb.push_back(sentence("i" + std::to_string(i) + "-a", s));
  }
  for (int subj = 0; subj < 10; ++subj) {
    const auto sname = "s" + std::to_string(subj);
    for (const auto& f : fillers) read(f, sname, f.sid, "filler");
    for (int i = 0; i < 12; ++i) {
      const bool a = (subj + i) % 2 == 0;
      read(a ? amb[i] : ctl[i], sname, "i" + std::to_string(i), a ? "ambiguous" : "unambiguous");
    }
  }
  d.scores = fillers;
  d.scores.insert(d.scores.end(), amb.begin(), amb.end());
  d.scores.insert(d.scores.end(), ctl.begin(), ctl.end());
  return d;
}

}  // namespace

TEST(GardenPathPipeline, PlantedSurprisalBump) {
  const auto d = planted(12.0, 2.0, 1);
  GardenPathOptions opt;
  opt.columns = {"surp", "surp_prev1", "index", "prev1_missing"};
  const auto r = estimate_garden_path(d.scores, d.rts, Variant::WL, 5, opt);
  ASSERT_EQ(r.effects.size(), 2u);
  const auto& crit = r.effects[0];
  EXPECT_EQ(crit.region, "critical");
  const double beta = r.filler_fit.coefficients[0];
  EXPECT_NEAR(beta, 12.0, 0.5);
  EXPECT_NEAR(crit.effect, 2.0 * beta, 1e-6);
  EXPECT_LE(crit.ci_low, 2.0 * beta + 1e-6);
  EXPECT_GE(crit.ci_high, 2.0 * beta - 1e-6);
  const double beta_prev = r.filler_fit.coefficients[1];
  EXPECT_NEAR(r.effects[1].effect, 2.0 * beta_prev, 1e-6);
}

TEST(GardenPathPipeline, RequiresFillersAndTargets) {
  auto d = planted(10.0, 1.0, 2);
  std::vector<RTRow> only_fillers;
  for (const auto& r : d.rts) {
    if (r.condition == "filler") only_fillers.push_back(r);
  }
  EXPECT_THROW(estimate_garden_path(d.scores, only_fillers, Variant::WL, 1), EstimationError);
  std::vector<RTRow> no_fillers;
  for (const auto& r : d.rts) {
    if (r.condition != "filler") no_fillers.push_back(r);
  }
  EXPECT_THROW(estimate_garden_path(d.scores, no_fillers, Variant::WL, 1), EstimationError);
}

TEST(DeltaLLPipeline, PlantedSignalAndShuffledControl) {
  const auto d = planted(15.0, 0.0, 3);
  DeltaLLOptions opt;
  opt.transform = Transform::Identity;
  const auto r = delta_ll_analysis(d.scores, d.rts, Variant::WL, opt);
  EXPECT_GT(r.delta, 100.0);
  EXPECT_NEAR(r.delta, 0.5 * double(r.full.n) * std::log(r.base.sigma2 / r.full.sigma2),
              1e-8);
  const double control = shuffled_delta_ll(r, opt, 7);
  EXPECT_GE(control, -1e-9);
  EXPECT_LT(control, 5.0);
  EXPECT_EQ(control, shuffled_delta_ll(r, opt, 7));
}

TEST(DeltaLLPipeline, NullPredictorAndZeroColumn) {
  auto d = planted(15.0, 0.0, 4);
  DeltaLLOptions opt;
  const auto r = delta_ll_analysis(d.scores, d.rts, Variant::WL, opt);
  EXPECT_NEAR(delta_ll(r.base, r.base), 0.0, 1e-9);
  for (auto& s : d.scores) {
    for (auto& w : s.words) w.wl_surprisal = 0.0;
  }
  EXPECT_THROW(delta_ll_analysis(d.scores, d.rts, Variant::WL, opt), SingularDesignError);
}

TEST(DeltaLLPipeline, GazeBaseColumns) {
  EXPECT_EQ(default_base_columns(RTKind::SPR), (std::vector<std::string>{"length", "index"}));
  EXPECT_EQ(default_base_columns(RTKind::GPD),
            (std::vector<std::string>{"length", "index", "slength", "pfix"}));
}

TEST(Synthetic, DeterministicCorpus) {
  synthetic::CorpusConfig cfg;
  cfg.training_sentences = 200;
  cfg.fillers = 10;
  cfg.items = 4;
  const auto a = synthetic::make_garden_path_corpus(3, cfg);
  const auto b = synthetic::make_garden_path_corpus(3, cfg);
  EXPECT_EQ(a.training, b.training);
  ASSERT_EQ(a.items.size(), 8u);
  for (const auto& s : a.items) {
    EXPECT_EQ(s.regions.at(6), "critical");
    EXPECT_EQ(s.seg.word_count(), 9u);
  }
  // The control version carries the comma on the verb.
  const auto& v = *a.vocab;
  EXPECT_EQ(word_surface(v, a.items[1].seg.word_tokens(3)).back(), ',');
  EXPECT_NE(word_surface(v, a.items[0].seg.word_tokens(3)).back(), ',');
}
