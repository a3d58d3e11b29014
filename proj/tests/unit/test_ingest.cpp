#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "wordprob/error.hpp"
#include "wordprob/ingest.hpp"

using namespace wordprob;

namespace {

const char* kHeader = "subject,item,sid,widx,word,rt,length,logfreq,condition,region\n";

RTRow row(std::string sid, std::size_t widx, double rt, bool final_word = false) {
  RTRow r;
  r.subject = "s1";
  r.item = sid;
  r.sid = std::move(sid);
  r.widx = widx;
  r.word = "w" + std::to_string(widx);
  r.rt = rt;
  r.sentence_final = final_word;
  return r;
}

// One sentence of four one-token words with fixed WL/WT values.
SentenceScore four_words(const std::string& sid) {
  SentenceScore s;
  s.sid = sid;
  const double wl[] = {2, 5, 3, 4}, wt[] = {1, 6, 2, 7};
  for (int i = 0; i < 4; ++i) {
    ScoredWord w;
    w.surface = "w" + std::to_string(i);
    w.wl_surprisal = wl[i];
    w.wt_surprisal = wt[i];
    w.wl_logprob = -wl[i] * std::log(2.0);
    w.wt_logprob = -wt[i] * std::log(2.0);
    s.words.push_back(w);
  }
  return s;
}

std::vector<RTRow> four_rows(const std::string& sid, const std::string& subject) {
  std::vector<RTRow> rows;
  for (std::size_t i = 0; i < 4; ++i) {
    auto r = row(sid, i, 200.0 + 10.0 * double(i), i == 3);
    r.subject = subject;
    r.logfreq = 1.0 + double(i);
    r.length = 2;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST(RtCsv, ParsesAndAnnotatesFinal) {
  std::istringstream in(std::string(kHeader) +
                        "s1,i1,a,0,The,300,3,5.5,amb,\n"
                        "s1,i1,a,1,\"room,\",412.5,5,3.25,amb,critical\n"
                        "s1,i1,a,2,fell,,4,2,amb,\n");
  const auto rows = parse_rt_csv(in);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].word, "room,");
  EXPECT_EQ(rows[1].rt, 412.5);
  EXPECT_EQ(rows[1].region, "critical");
  EXPECT_EQ(rows[2].rt, 0.0);
  EXPECT_FALSE(rows[1].sentence_final);
  EXPECT_TRUE(rows[2].sentence_final);
}

TEST(RtCsv, Errors) {
  std::istringstream empty("");
  EXPECT_THROW(parse_rt_csv(empty), ValidationError);
  std::istringstream header_only(kHeader);
  EXPECT_THROW(parse_rt_csv(header_only), ValidationError);
  std::istringstream missing("subject,item,sid,widx,word,rt,length\ns,i,a,0,w,1,1\n");
  EXPECT_THROW(parse_rt_csv(missing), ValidationError);
  std::istringstream bad(std::string(kHeader) + "s,i,a,zero,w,1,1,1,,\n");
  try {
    parse_rt_csv(bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(RtCsv, RoundTrip) {
  std::vector<RTRow> rows{row("x", 0, 250.25), row("x", 1, 1234.5, true)};
  rows[0].word = "quoted, \"word\"";
  rows[0].condition = "amb";
  rows[0].region = "critical";
  rows[1].slength = 3.5;
  rows[1].pfix = 1;
  rows[1].drop = true;
  std::stringstream ss;
  write_rt_csv(ss, rows);
  const auto back = parse_rt_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].word, rows[0].word);
  EXPECT_EQ(back[0].rt, 250.25);
  EXPECT_EQ(back[0].region, "critical");
  EXPECT_EQ(back[1].slength, 3.5);
  EXPECT_EQ(back[1].pfix, 1);
  EXPECT_TRUE(back[1].drop);
  EXPECT_TRUE(back[1].sentence_final);
}

TEST(Filter, SelfPacedBounds) {
  const std::vector<RTRow> rows{row("a", 1, 50), row("a", 2, 100), row("a", 3, 3000),
                                row("a", 4, 3000.5), row("a", 0, 500), row("a", 5, 400, true)};
  const auto kept = filter_rt(rows, RTKind::SPR);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].rt, 100);
  EXPECT_EQ(kept[1].rt, 3000);
}

TEST(Filter, GazeDurations) {
  std::vector<RTRow> rows{row("a", 1, 0), row("a", 2, 180), row("a", 3, 5000),
                          row("a", 4, 220), row("a", 5, 300, true)};
  rows[3].drop = true;
  const auto kept = filter_rt(rows, RTKind::GPD);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].widx, 2u);
  EXPECT_EQ(kept[1].widx, 3u);
}

TEST(Filter, Idempotent) {
  std::vector<RTRow> rows;
  for (std::size_t s = 0; s < 5; ++s) {
    for (std::size_t w = 0; w < 6; ++w) {
      rows.push_back(row("s" + std::to_string(s), w, double(60 * (w + s * 3)), w == 5));
    }
  }
  for (auto kind : {RTKind::SPR, RTKind::GPD}) {
    const auto once = filter_rt(rows, kind);
    const auto twice = filter_rt(once, kind);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      EXPECT_EQ(once[i].sid, twice[i].sid);
      EXPECT_EQ(once[i].widx, twice[i].widx);
    }
  }
}

TEST(BuildRows, LagsAndImputation) {
  const auto rts = four_rows("a", "s1");
  const auto rows = build_rows({four_words("a")}, rts, Variant::WL, Transform::Identity);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2].surp, 3);
  EXPECT_EQ(rows[2].surp_prev1, 5);
  EXPECT_EQ(rows[2].surp_prev2, 2);
  EXPECT_EQ(rows[2].freq_prev1, 2);
  EXPECT_EQ(rows[2].freq_prev2, 1);
  EXPECT_EQ(rows[0].surp_prev1, 0);
  EXPECT_EQ(rows[0].prev1_missing, 1);
  EXPECT_EQ(rows[0].prev2_missing, 1);
  EXPECT_EQ(rows[1].prev1_missing, 0);
  EXPECT_EQ(rows[1].prev2_missing, 1);
  EXPECT_EQ(rows[3].response, 230);

  BuildOptions opt;
  opt.imputed = -7.5;
  const auto shifted =
      build_rows({four_words("a")}, rts, Variant::WL, Transform::Log, nullptr, opt);
  EXPECT_EQ(shifted[0].surp_prev1, -7.5);
  EXPECT_EQ(shifted[1].freq_prev2, -7.5);
  EXPECT_NEAR(shifted[3].response, std::log(230.0), 1e-15);
}

TEST(BuildRows, VariantsDifferOnlyInSurprisal) {
  const auto rts = four_rows("a", "s1");
  const auto wl = build_rows({four_words("a")}, rts, Variant::WL, Transform::Log);
  const auto wt = build_rows({four_words("a")}, rts, Variant::WT, Transform::Log);
  ASSERT_EQ(wl.size(), wt.size());
  for (std::size_t i = 0; i < wl.size(); ++i) {
    EXPECT_EQ(wl[i].response, wt[i].response);
    EXPECT_EQ(wl[i].freq, wt[i].freq);
    EXPECT_EQ(wl[i].length, wt[i].length);
    EXPECT_EQ(wl[i].index, wt[i].index);
    EXPECT_EQ(wl[i].prev1_missing, wt[i].prev1_missing);
  }
  EXPECT_EQ(wt[2].surp, 2);
  EXPECT_EQ(wt[2].surp_prev1, 6);
}

TEST(BuildRows, AlignmentErrors) {
  auto rts = four_rows("a", "s1");
  rts[1].word = "other";
  EXPECT_THROW(build_rows({four_words("a")}, rts, Variant::WL, Transform::Log),
               AlignmentError);
  auto unknown = four_rows("b", "s1");
  EXPECT_THROW(build_rows({four_words("a")}, unknown, Variant::WL, Transform::Log),
               AlignmentError);
  auto beyond = four_rows("a", "s1");
  beyond[3].widx = 9;
  EXPECT_THROW(build_rows({four_words("a")}, beyond, Variant::WL, Transform::Log),
               AlignmentError);
}

TEST(BuildRows, BijectionOnFilteredRows) {
  std::vector<RTRow> rts;
  std::vector<SentenceScore> scores;
  for (int s = 0; s < 3; ++s) {
    const auto sid = "x" + std::to_string(s);
    scores.push_back(four_words(sid));
    for (const auto* subj : {"s1", "s2"}) {
      const auto r = four_rows(sid, subj);
      rts.insert(rts.end(), r.begin(), r.end());
    }
  }
  const auto kept = filter_rt(rts, RTKind::SPR);
  const auto freq = frequency_table(rts);
  const auto rows = build_rows(scores, kept, Variant::WT, Transform::Log, &freq);
  ASSERT_EQ(rows.size(), kept.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].sid, kept[i].sid);
    EXPECT_EQ(rows[i].widx, kept[i].widx);
    EXPECT_EQ(rows[i].subject, kept[i].subject);
    // Lagged frequency survives filtering of the predecessor.
    EXPECT_EQ(rows[i].freq_prev1, double(kept[i].widx));
  }
}

TEST(LogFrequency, PerMillion) {
  const auto f = log_frequencies({{"a", 3}, {"b", 0}, {"c", 1}});
  EXPECT_NEAR(f.at("a"), std::log(4.0 * 1e6 / 4.0), 1e-12);
  EXPECT_NEAR(f.at("b"), std::log(1.0 * 1e6 / 4.0), 1e-12);
}
