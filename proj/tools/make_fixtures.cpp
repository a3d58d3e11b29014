// Writes the checked-in fixture files under a data directory:
//   garden/       reference-table records
//   garden_path/  synthetic garden-path corpus, scorer records and RTs
//   delta_ll/     RTs generated from WL-only and WT-only surprisal

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "wordprob/decoding.hpp"
#include "wordprob/ingest.hpp"
#include "wordprob/probsource.hpp"
#include "wordprob/record.hpp"
#include "wordprob/synthetic.hpp"

namespace fs = std::filesystem;
using namespace wordprob;

namespace {

std::ofstream open(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void write_garden(const fs::path& dir) {
  const auto model = garden_table();
  const auto& v = model.vocab();
  auto f = open(dir / "records.jsonl");
  auto sf = open(dir / "sentences.txt");
  const char* texts[] = {" a", " ax", " a a", " axx a", " a ax a"};
  int i = 0;
  for (const char* t : texts) {
    const auto sid = "g" + std::to_string(++i);
    write_records(f, {make_record(model, tokenize_greedy(t, v), sid)});
    sf << sid << '\t' << t << '\n';
  }
  auto vf = open(dir / "vocab.txt");
  v.write(vf);
  auto mf = open(dir / "model.tsv");
  model.write(mf);
}

std::vector<synthetic::Sentence> all_sentences(const synthetic::Corpus& c) {
  auto s = c.fillers;
  s.insert(s.end(), c.items.begin(), c.items.end());
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? argv[1] : "data";
  write_garden(root / "garden");

  const auto corpus = synthetic::make_garden_path_corpus(7);
  const auto& vocab = *corpus.vocab;
  const auto scorer = synthetic::train_scorer(corpus);
  const auto sentences = all_sentences(corpus);

  const fs::path gp = root / "garden_path";
  {
    auto vf = open(gp / "vocab.txt");
    vocab.write(vf);
    auto tf = open(gp / "train.txt");
    for (const auto& seq : corpus.training) tf << detokenize(vocab, seq).substr(1) << '\n';
    auto sf = open(gp / "sentences.txt");
    auto rf = open(gp / "records.jsonl");
    for (const auto& s : sentences) {
      sf << s.sid << '\t' << detokenize(vocab, s.seg.tokens()).substr(1) << '\n';
      write_records(rf, {make_record(scorer, s.seg, s.sid)});
    }
  }

  std::vector<SentenceScore> scores;
  for (const auto& s : sentences) scores.push_back(score_sentence(scorer, s.seg, s.sid));
  const auto wl = synthetic::trace(scores, Variant::WL);
  const auto wt = synthetic::trace(scores, Variant::WT);
  const synthetic::LinkingFunction link;
  {
    auto f = open(gp / "rt.csv");
    write_rt_csv(f, synthetic::simulate_reading_times(
                        corpus, sentences, synthetic::mix(wl, wt, 0.5), 20, link, 11));
  }
  {
    auto f = open(root / "delta_ll" / "rt_wl.csv");
    write_rt_csv(f, synthetic::simulate_reading_times(corpus, sentences, wl, 8, link, 13));
    auto g = open(root / "delta_ll" / "rt_wt.csv");
    write_rt_csv(g, synthetic::simulate_reading_times(corpus, sentences, wt, 8, link, 13));
  }
  std::cout << "fixtures written to " << root.string() << '\n';
  return 0;
}
