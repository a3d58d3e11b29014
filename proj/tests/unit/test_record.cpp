#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "wordprob/error.hpp"
#include "wordprob/record.hpp"

using namespace wordprob;

namespace {

const char* kGood =
    R"({"sid":"s1","tokens":[{"t":"▁a","lp":-0.1,"b":true},{"t":"x","lp":-0.2,"b":false}],"bm":[-0.1,-2.3,-2.3]})";

}  // namespace

TEST(Record, ParsesWellFormedLine) {
  const auto r = parse_record(kGood, 1);
  EXPECT_EQ(r.sid, "s1");
  ASSERT_EQ(r.tokens.size(), 2u);
  EXPECT_EQ(r.tokens[0].surface, "\xE2\x96\x81" "a");
  EXPECT_TRUE(r.tokens[0].is_b);
  EXPECT_FALSE(r.tokens[1].is_b);
  EXPECT_EQ(r.b_mass_logps.size(), 3u);
}

TEST(Record, OffByOneBoundaryMassNamesTheField) {
  const std::string line =
      R"({"sid":"s","tokens":[{"t":"a","lp":-0.1,"b":true},{"t":"x","lp":-0.2,"b":false}],"bm":[-0.1,-2.3]})";
  try {
    parse_record(line, 4);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "b_mass_logps");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("b_mass_logps"), std::string::npos);
  }
}

TEST(Record, RejectsMalformedInput) {
  EXPECT_THROW(parse_record("not json", 1), ValidationError);
  EXPECT_THROW(parse_record(R"({"sid":"s","tokens":[],"bm":[0]})", 1), ValidationError);
  EXPECT_THROW(parse_record(R"({"sid":"s","tokens":[{"t":"a","lp":0.5,"b":true}],"bm":[0,0]})", 1),
               ValidationError);
  EXPECT_THROW(parse_record(R"({"sid":"s","tokens":[{"t":"a","lp":-1,"b":true}],"bm":[0.2,0]})", 1),
               ValidationError);
  EXPECT_THROW(parse_record(R"({"sid":"s","tokens":[{"t":"a","lp":-1,"b":1}],"bm":[0,0]})", 1),
               ValidationError);
  EXPECT_THROW(parse_record(R"({"tokens":[{"t":"a","lp":-1,"b":true}],"bm":[0,0]})", 1),
               ValidationError);
  // A B token cannot be likelier than all B tokens together.
  EXPECT_THROW(parse_record(R"({"sid":"s","tokens":[{"t":"a","lp":-0.1,"b":true}],"bm":[-0.5,0]})", 1),
               ValidationError);
}

TEST(Record, RoundTrip) {
  LogprobRecord r;
  r.sid = "round, \"trip\"";
  r.tokens = {{"\xE2\x96\x81" "mat", std::log(0.3), true}, {"ron", std::log(1.0 / 7), false}};
  r.b_mass_logps = {std::log(0.7), std::log(0.123456789), -1e-300};
  std::stringstream ss;
  write_records(ss, {r, r});
  const auto back = read_records(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], r);
  EXPECT_EQ(back[1], r);
}

TEST(Record, ReaderReportsLineNumbers) {
  std::istringstream in(std::string(kGood) + "\n\n{\"sid\":1}\n");
  try {
    read_records(in);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}
