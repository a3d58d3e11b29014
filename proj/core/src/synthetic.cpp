#include "wordprob/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "wordprob/error.hpp"

namespace wordprob::synthetic {

namespace {

const std::vector<std::string> kSubjects = {"doctor", "nurse", "pilot",
                                            "chef",   "guard", "clerk"};
const std::vector<std::string> kVerbs = {"left",  "visited", "cleaned",
                                         "watched", "painted", "checked"};
// Two objects are split into word-initial and word-internal pieces.
const std::vector<std::vector<std::string>> kObjects = {
    {"room"}, {"house"}, {"kit", "chen"}, {"gar", "den"}, {"office"}, {"hall"}};
const std::vector<std::string> kCritical = {"turned", "seemed", "looked",
                                            "became", "grew",   "stayed"};
const std::vector<std::string> kAdjectives = {"dark",   "cold",  "quiet",
                                              "empty",  "bright", "warm"};
const std::vector<std::string> kFunction = {"after", "the", "very", "quite", "and"};

std::string b(const std::string& s) { return std::string(kDefaultMarker) + s; }

std::shared_ptr<const Vocabulary> build_vocab() {
  std::vector<std::string> surfaces;
  for (const auto& w : kFunction) surfaces.push_back(b(w));
  for (const auto& w : kSubjects) surfaces.push_back(b(w));
  for (const auto& w : kVerbs) surfaces.push_back(b(w));
  for (const auto& o : kObjects) {
    surfaces.push_back(b(o.front()));
    for (std::size_t i = 1; i < o.size(); ++i) surfaces.push_back(o[i]);
  }
  for (const auto& w : kCritical) surfaces.push_back(b(w));
  for (const auto& w : kAdjectives) surfaces.push_back(b(w));
  surfaces.push_back(",");
  surfaces.push_back(".");
  return std::make_shared<const Vocabulary>(Vocabulary::from_surfaces(surfaces));
}

struct Builder {
  const Vocabulary& vocab;
  std::vector<TokenId> tokens;

  Builder& word(const std::string& w) {
    tokens.push_back(vocab.id(b(w)));
    return *this;
  }
  Builder& object(const std::vector<std::string>& pieces) {
    tokens.push_back(vocab.id(b(pieces.front())));
    for (std::size_t i = 1; i < pieces.size(); ++i) tokens.push_back(vocab.id(pieces[i]));
    return *this;
  }
  Builder& punct(const char* p) {
    tokens.push_back(vocab.id(p));
    return *this;
  }
};

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

struct Fill {
  std::string subj, verb, crit, adj, subj2;
  std::vector<std::string> obj, obj2;
};

Fill random_fill(std::mt19937_64& rng) {
  return {pick(kSubjects, rng),  pick(kVerbs, rng),   pick(kCritical, rng),
          pick(kAdjectives, rng), pick(kSubjects, rng), pick(kObjects, rng),
          pick(kObjects, rng)};
}

// Grammatical templates seen in training and used as fillers.
std::vector<TokenId> grammatical(const Vocabulary& vocab, std::mt19937_64& rng) {
  const auto f = random_fill(rng);
  Builder s{vocab, {}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  if (r < 0.35) {
    // the doctor left the room.
    s.word("the").word(f.subj).word(f.verb).word("the").object(f.obj).punct(".");
  } else if (r < 0.55) {
    // after the doctor left, the room turned very dark.
    s.word("after").word("the").word(f.subj).word(f.verb).punct(",");
    s.word("the").object(f.obj).word(f.crit).word("very").word(f.adj).punct(".");
  } else if (r < 0.80) {
    // after the doctor left the room, the hall turned very dark.
    s.word("after").word("the").word(f.subj).word(f.verb).word("the").object(f.obj);
    s.punct(",").word("the").object(f.obj2).word(f.crit).word("very").word(f.adj);
    s.punct(".");
  } else {
    // the room turned quite dark and the nurse left.
    s.word("the").object(f.obj).word(f.crit).word("quite").word(f.adj);
    s.word("and").word("the").word(f.subj2).word(f.verb).punct(".");
  }
  return s.tokens;
}

std::string label(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
  return buf;
}

std::size_t char_length(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return std::max<std::size_t>(n, 1);
}

}  // namespace

Corpus make_garden_path_corpus(std::uint64_t seed, const CorpusConfig& config) {
  Corpus c;
  c.config = config;
  c.vocab = build_vocab();
  const auto& vocab = *c.vocab;
  std::mt19937_64 rng(seed);

  c.training.reserve(config.training_sentences);
  for (std::size_t i = 0; i < config.training_sentences; ++i) {
    c.training.push_back(grammatical(vocab, rng));
  }

  for (std::size_t i = 0; i < config.fillers; ++i) {
    Sentence s;
    s.sid = label("filler", i);
    s.item = s.sid;
    s.condition = "filler";
    s.seg = Segmentation(vocab, grammatical(vocab, rng));
    s.regions.assign(s.seg.word_count(), "");
    c.fillers.push_back(std::move(s));
  }

  for (std::size_t i = 0; i < config.items; ++i) {
    const auto f = random_fill(rng);
    for (const bool ambiguous : {true, false}) {
      Builder t{vocab, {}};
      t.word("after").word("the").word(f.subj).word(f.verb);
      if (!ambiguous) t.punct(",");
      t.word("the").object(f.obj).word(f.crit).word("very").word(f.adj).punct(".");
      Sentence s;
      s.item = label("item", i);
      s.condition = ambiguous ? "ambiguous" : "unambiguous";
      s.sid = s.item + (ambiguous ? "-amb" : "-unamb");
      s.seg = Segmentation(vocab, std::move(t.tokens));
      s.regions.assign(s.seg.word_count(), "");
      // after the <subj> <verb>[,] the <obj> <crit> very <adj>.
      s.regions[5] = "pre-critical";
      s.regions[6] = "critical";
      s.regions[7] = "spillover1";
      s.regions[8] = "spillover2";
      c.items.push_back(std::move(s));
    }
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& seq : c.training) {
    const Segmentation seg(vocab, seq);
    for (std::size_t w = 0; w < seg.word_count(); ++w) {
      ++counts[word_surface(vocab, seg.word_tokens(w))];
    }
  }
  auto note_unseen = [&](const std::vector<Sentence>& ss) {
    for (const auto& s : ss) {
      for (std::size_t w = 0; w < s.seg.word_count(); ++w) {
        counts.try_emplace(word_surface(vocab, s.seg.word_tokens(w)), 0);
      }
    }
  };
  note_unseen(c.fillers);
  note_unseen(c.items);
  c.logfreq = log_frequencies(counts);
  return c;
}

NGramModel train_scorer(const Corpus& corpus) {
  return train_ngram(corpus.vocab, corpus.training, corpus.config.ngram_order,
                     corpus.config.alpha);
}

SurprisalTrace trace(const std::vector<SentenceScore>& scores, Variant variant) {
  SurprisalTrace out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    std::vector<double> v;
    v.reserve(s.words.size());
    for (const auto& w : s.words) v.push_back(w.surprisal(variant));
    out.push_back(std::move(v));
  }
  return out;
}

SurprisalTrace mix(const SurprisalTrace& a, const SurprisalTrace& b, double weight) {
  if (a.size() != b.size()) throw ValidationError("traces differ in length", "trace");
  SurprisalTrace out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) {
      throw ValidationError("traces differ in sentence length", "trace");
    }
    out[i].resize(a[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      out[i][j] = weight * a[i][j] + (1.0 - weight) * b[i][j];
    }
  }
  return out;
}

std::vector<RTRow> simulate_reading_times(const Corpus& corpus,
                                          const std::vector<Sentence>& sentences,
                                          const SurprisalTrace& truth,
                                          std::size_t subjects,
                                          const LinkingFunction& link,
                                          std::uint64_t seed) {
  if (truth.size() != sentences.size()) {
    throw ValidationError("one surprisal trace per sentence is required", "truth");
  }
  const auto& vocab = *corpus.vocab;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, link.noise_sd);

  // Item index -> condition parity for the Latin square.
  std::map<std::string, std::size_t> item_index;
  for (const auto& s : sentences) {
    if (s.condition != "filler") item_index.try_emplace(s.item, item_index.size());
  }

  std::vector<RTRow> rows;
  for (std::size_t subj = 0; subj < subjects; ++subj) {
    const auto subject = label("s", subj);
    for (std::size_t k = 0; k < sentences.size(); ++k) {
      const auto& s = sentences[k];
      if (s.condition != "filler") {
        const bool ambiguous = (subj + item_index[s.item]) % 2 == 0;
        if (ambiguous != (s.condition == "ambiguous")) continue;
      }
      const auto& surp = truth[k];
      if (surp.size() != s.seg.word_count()) {
        throw ValidationError("trace length differs from sentence '" + s.sid + "'",
                              "truth");
      }
      for (std::size_t w = 0; w < s.seg.word_count(); ++w) {
        RTRow r;
        r.subject = subject;
        r.item = s.item;
        r.sid = s.sid;
        r.widx = w;
        r.word = word_surface(vocab, s.seg.word_tokens(w));
        r.length = static_cast<int>(char_length(r.word));
        r.logfreq = corpus.logfreq.at(r.word);
        r.condition = s.condition;
        r.region = s.regions[w];
        r.sentence_final = w + 1 == s.seg.word_count();
        double rt = link.intercept + link.surp * surp[w] + link.length * r.length +
                    link.freq * r.logfreq + noise(rng);
        if (w >= 1) rt += link.surp_prev1 * surp[w - 1];
        if (w >= 2) rt += link.surp_prev2 * surp[w - 2];
        r.rt = std::clamp(rt, 120.0, 2900.0);
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

}  // namespace wordprob::synthetic
