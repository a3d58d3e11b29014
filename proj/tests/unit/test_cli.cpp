#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = WORDPROB_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = wordprob::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "wordprob_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

}  // namespace

TEST(CliScore, GardenSingleWord) {
  const auto r = run({"score", "--model", "builtin:garden", "--text", " a"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "sid,widx,word,wl_bits,wt_bits\n1,0,a,0.152003093445,3.32192809489\n");
}

TEST(CliScore, SingleVariantAndLogprobs) {
  const auto r = run({"score", "--model", "builtin:garden", "--text", "a ax", "--variant",
                      "wt", "--logprobs"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(header, "sid,widx,word,wt_bits,wt_logprob");
  EXPECT_EQ(second.substr(0, 7), "1,1,ax,");
}

TEST(CliScore, RecordsMatchLiveScoring) {
  const auto live = run({"score", "--model", (kData / "garden" / "model.tsv").string(), "--in",
                         (kData / "garden" / "sentences.txt").string()});
  const auto rec = run({"score", "--records", (kData / "garden" / "records.jsonl").string()});
  ASSERT_EQ(live.code, 0) << live.err;
  ASSERT_EQ(rec.code, 0) << rec.err;
  EXPECT_EQ(live.out, rec.out);
}

TEST(CliScore, BothVariantsShareTheWordColumn) {
  const auto rec = (kData / "garden" / "records.jsonl").string();
  const auto both = run({"score", "--records", rec});
  const auto wl = run({"score", "--records", rec, "--variant", "wl"});
  const auto wt = run({"score", "--records", rec, "--variant", "wt"});
  ASSERT_EQ(both.code, 0);
  auto keys = [](const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) out.push_back(line.substr(0, line.rfind(',')));
    return out;
  };
  const auto kw = keys(wl.out), kt = keys(wt.out);
  auto kb = keys(both.out);
  for (auto& k : kb) k = k.substr(0, k.rfind(','));
  EXPECT_EQ(kb, kw);
  EXPECT_EQ(kw, kt);
  EXPECT_EQ(kb.size(), 9u);
}

TEST(CliScore, QuotesFieldsWithCommas) {
  const auto r = run({"score", "--records",
                      (kData / "garden_path" / "records.jsonl").string(), "--variant", "wl"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(",\"left,\","), std::string::npos);
}

TEST(CliScore, Errors) {
  const auto missing = run({"score", "--model", "no/such/model.tsv", "--text", " a"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("no/such/model.tsv"), std::string::npos);
  EXPECT_EQ(run({"score", "--text", " a"}).code, 1);
  EXPECT_EQ(run({"score", "--model", "builtin:garden", "--ngram", "x", "--text", " a"}).code, 1);
  EXPECT_EQ(run({"score", "--model", "builtin:garden", "--text", " a b"}).code, 1);
  EXPECT_EQ(run({"score", "--model", "builtin:garden", "--variant", "xx", "--text", "a"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  // Zero boundary mass before the second word: a runtime failure.
  const auto undefined = run({"score", "--model", "builtin:overcount", "--text", " j1 j1"});
  EXPECT_EQ(undefined.code, 2) << undefined.err;
}

TEST(CliOmega, Witness) {
  const auto r = run({"check-omega", "--witness"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("total\t2\n"), std::string::npos);
}

TEST(CliOmega, GardenWtConverges) {
  const auto out = scratch("omega.json");
  const auto r = run({"check-omega", "--model", "builtin:garden", "--variant", "wt", "--depth",
                      "200", "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(out));
  EXPECT_LT(std::abs(j["cumulative"].get<double>() - 1.0), 1e-9);
  EXPECT_EQ(j["per_depth"].size(), 200u);
}

TEST(CliOmega, GardenWlWarns) {
  const auto r = run({"check-omega", "--model", "builtin:garden", "--variant", "wl", "--depth",
                      "50"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("total\t8.953616"), std::string::npos);
}

TEST(CliOmega, BrokenTableTripsTheBound) {
  // A table whose rows do not sum to one can only come from a bug; loading
  // rejects it, so the bound check never sees it.
  const auto bad = scratch("bad.tsv");
  spit(bad, "#order=1\nε\t\xE2\x96\x81" "a:0.9,x:0.2\n");
  EXPECT_EQ(run({"check-omega", "--model", bad.string()}).code, 1);
  EXPECT_EQ(run({"check-omega", "--model", "builtin:garden", "--depth", "40", "--budget", "10"})
                .code,
            1);
  EXPECT_EQ(run({"check-omega", "--records", "x.jsonl"}).code, 1);
}

TEST(CliRegress, DeltaLLBothVariantsAndControl) {
  const auto rec = (kData / "garden_path" / "records.jsonl").string();
  const auto rt = (kData / "delta_ll" / "rt_wt.csv").string();
  const auto r = run({"regress", "--records", rec, "--rt", rt, "--seed", "3",
                      "--shuffle-control", "--base",
                      "length,index,freq,freq_prev1,freq_prev2,prev1_missing,prev2_missing",
                      "--surprisal-columns", "surp,surp_prev1,surp_prev2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const double wl = j["variants"]["wl"]["delta_ll"];
  const double wt = j["variants"]["wt"]["delta_ll"];
  EXPECT_GT(wl, 0.0);
  EXPECT_GT(wt, wl);
  EXPECT_DOUBLE_EQ(j["delta_ll_wt_minus_wl"].get<double>(), wt - wl);
  EXPECT_LT(j["variants"]["wt"]["delta_ll_shuffled"].get<double>(), 0.05 * wt);
  EXPECT_EQ(j["permutation_test"]["sidedness"], "two-sided");
  EXPECT_TRUE(j.contains("note"));
  // Byte-identical reruns.
  EXPECT_EQ(run({"regress", "--records", rec, "--rt", rt, "--seed", "3", "--shuffle-control",
                 "--base", "length,index,freq,freq_prev1,freq_prev2,prev1_missing,prev2_missing",
                 "--surprisal-columns", "surp,surp_prev1,surp_prev2"})
                .out,
            r.out);
}

TEST(CliRegress, Errors) {
  const auto rec = (kData / "garden_path" / "records.jsonl").string();
  const auto empty = scratch("empty.csv");
  spit(empty, "");
  EXPECT_EQ(run({"regress", "--records", rec, "--rt", empty.string(), "--seed", "1"}).code, 1);
  EXPECT_EQ(run({"regress", "--records", rec, "--rt", "missing.csv", "--seed", "1"}).code, 1);
  EXPECT_EQ(run({"regress", "--records", rec, "--rt",
                 (kData / "delta_ll" / "rt_wl.csv").string()})
                .code,
            1);
  // Sentences that do not match the RT corpus: an alignment failure.
  const auto r = run({"regress", "--records", (kData / "garden" / "records.jsonl").string(),
                      "--rt", (kData / "delta_ll" / "rt_wl.csv").string(), "--seed", "1"});
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(CliGardenPath, JsonAndCsv) {
  const auto csv = scratch("gp.csv");
  const auto r = run({"gp-effect", "--records",
                      (kData / "garden_path" / "records.jsonl").string(), "--rt",
                      (kData / "garden_path" / "rt.csv").string(), "--seed", "5", "--resamples",
                      "300", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["variants"]["wl"]["effects"].size(), 4u);
  const auto text = slurp(csv);
  EXPECT_EQ(text.rfind("variant,region,effect,ci_low,ci_high\n", 0), 0u);
  EXPECT_NE(text.find("wt,critical,"), std::string::npos);
}

TEST(CliConfig, FileValuesAndOverrides) {
  const auto cfg = scratch("cfg.json");
  spit(cfg, R"({"command": "check-omega", "model": "builtin:garden", "variant": "wt", "depth": 5})");
  const auto a = run({"--config", cfg.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("mode\twt"), std::string::npos);
  EXPECT_NE(a.out.find("\n5\t"), std::string::npos);
  const auto b = run({"check-omega", "--config", cfg.string(), "--depth", "3"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.out.find("\n5\t"), std::string::npos);
  EXPECT_NE(b.out.find("\n3\t"), std::string::npos);
  EXPECT_EQ(run({"--config", "absent.json"}).code, 1);
}

TEST(CliTrain, WritesALoadableTable) {
  const auto out = scratch("ngram.tsv");
  const auto r = run({"train-ngram", "--in", (kData / "garden_path" / "train.txt").string(),
                      "--vocab", (kData / "garden_path" / "vocab.txt").string(), "--order",
                      "2", "--alpha", "0.5", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = " the nurse left the room.";
  const auto a = run({"score", "--model", out.string(), "--text", text});
  const auto b = run({"score", "--ngram", (kData / "garden_path" / "train.txt").string(),
                      "--vocab", (kData / "garden_path" / "vocab.txt").string(), "--order",
                      "2", "--alpha", "0.5", "--text", text});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}
