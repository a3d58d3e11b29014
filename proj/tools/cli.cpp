#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "wordprob/decoding.hpp"
#include "wordprob/error.hpp"
#include "wordprob/ingest.hpp"
#include "wordprob/normcheck.hpp"
#include "wordprob/pipeline.hpp"
#include "wordprob/probsource.hpp"
#include "wordprob/record.hpp"
#include "wordprob/regress.hpp"

namespace wordprob::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kBoundTolerance = 1e-9;

/// Bad flags, missing files and other problems found before any work starts.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // model source
  std::string model;
  std::string ngram;
  std::string records;
  std::string vocab;
  std::size_t order = 3;
  double alpha = 1.0;
  // inputs
  std::vector<std::string> text;
  std::string in;
  std::string rt;
  std::string context;
  // options
  std::string variant = "both";
  std::size_t depth = 10;
  std::size_t budget = kDefaultEnumerationBudget;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string csv;
  bool witness = false;
  bool logprobs = false;
  std::string kind = "spr";
  std::string transform = "log";
  std::vector<std::string> base;
  std::vector<std::string> surprisal = {"surp"};
  std::size_t permutations = 10000;
  std::size_t resamples = 2000;
  bool subject_indicators = false;
  bool item_indicators = false;
  bool quadratic = false;
  bool shuffle_control = false;
  bool garden_path = false;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw UsageError(std::string(what) + " file not found: " + path);
  }
}

std::vector<Variant> variants(const std::string& v) {
  if (v == "wl") return {Variant::WL};
  if (v == "wt") return {Variant::WT};
  return {Variant::WL, Variant::WT};
}

// Output goes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct NamedText {
  std::string sid;
  std::string text;
};

// `sid<TAB>text` lines; a line without a tab gets its 1-based line number as
// sid. Text that does not start with whitespace gets one leading space so the
// first word opens with a word-initial token.
std::vector<NamedText> read_sentences(const std::string& path) {
  require_file(path, "sentence");
  std::ifstream f(path, std::ios::binary);
  std::vector<NamedText> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    NamedText s;
    if (const auto tab = line.find('\t'); tab != std::string::npos) {
      s.sid = line.substr(0, tab);
      s.text = line.substr(tab + 1);
    } else {
      s.sid = std::to_string(lineno);
      s.text = line;
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) throw ValidationError("no sentences in " + path, "sentences");
  return out;
}

std::string with_leading_space(const std::string& text) {
  if (!text.empty() && text.front() == ' ') return text;
  return ' ' + text;
}

std::shared_ptr<const Vocabulary> load_vocab(const std::string& path) {
  require_file(path, "vocabulary");
  return std::make_shared<const Vocabulary>(Vocabulary::load(path));
}

NGramModel train_from_file(const RunConfig& c) {
  if (c.vocab.empty()) throw UsageError("--ngram requires --vocab");
  const auto vocab = load_vocab(c.vocab);
  std::vector<std::vector<TokenId>> corpus;
  for (const auto& s : read_sentences(c.ngram)) {
    corpus.push_back(tokenize_greedy(with_leading_space(s.text), *vocab).tokens());
  }
  return train_ngram(vocab, corpus, c.order, c.alpha);
}

std::unique_ptr<ConditionalModel> load_model(const RunConfig& c) {
  if (!c.ngram.empty()) return std::make_unique<NGramModel>(train_from_file(c));
  const std::string& m = c.model;
  if (m == "builtin:garden") return std::make_unique<TabularModel>(garden_table());
  if (m == "builtin:overcount") return std::make_unique<TabularModel>(overcount_table());
  if (m == "builtin:nonmonotone") {
    return std::make_unique<TabularModel>(nonmonotone_table());
  }
  if (m == "builtin:uniform") {
    if (c.vocab.empty()) throw UsageError("builtin:uniform requires --vocab");
    return std::make_unique<UniformModel>(load_vocab(c.vocab));
  }
  if (m.rfind("builtin:", 0) == 0) throw UsageError("unknown builtin model: " + m);
  require_file(m, "model");
  return std::make_unique<TabularModel>(TabularModel::load(m));
}

void check_model_source(const RunConfig& c, bool allow_records) {
  const int sources = !c.model.empty() + !c.ngram.empty() + !c.records.empty();
  if (sources != 1) {
    throw UsageError(allow_records
                         ? "exactly one of --model, --ngram, --records is required"
                         : "exactly one of --model, --ngram is required");
  }
  if (!c.records.empty() && !allow_records) {
    throw UsageError("--records cannot be enumerated; use --model or --ngram");
  }
  if (!c.records.empty()) require_file(c.records, "records");
}

// Scores from records, or from a model over --text / --in sentences.
std::vector<SentenceScore> collect_scores(const RunConfig& c) {
  std::vector<SentenceScore> scores;
  if (!c.records.empty()) {
    if (!c.text.empty() || !c.in.empty()) {
      throw UsageError("--records already carries the sentences; drop --text/--in");
    }
    for (const auto& r : read_records(fs::path(c.records))) {
      scores.push_back(score_from_records(r));
    }
    return scores;
  }
  std::vector<NamedText> sentences;
  for (std::size_t i = 0; i < c.text.size(); ++i) {
    sentences.push_back({std::to_string(i + 1), c.text[i]});
  }
  if (!c.in.empty()) {
    for (auto& s : read_sentences(c.in)) sentences.push_back(std::move(s));
  }
  if (sentences.empty()) throw UsageError("no input: give --text, --in or --records");
  const auto model = load_model(c);
  for (const auto& s : sentences) {
    const auto seg = tokenize_greedy(with_leading_space(s.text), model->vocab());
    scores.push_back(score_sentence(*model, seg, s.sid));
  }
  return scores;
}

std::vector<RTRow> load_rts(const RunConfig& c) {
  if (c.rt.empty()) throw UsageError("--rt is required");
  require_file(c.rt, "reading-time");
  return read_rt_csv(c.rt);
}

json fit_json(const FitResult& f) {
  json coef = json::object();
  for (std::size_t i = 0; i < f.names.size(); ++i) coef[f.names[i]] = f.coefficients[i];
  return {{"n", f.n},
          {"p", f.p},
          {"intercept", f.intercept},
          {"coefficients", std::move(coef)},
          {"sigma2", f.sigma2},
          {"sigma2_unbiased", f.sigma2_unbiased},
          {"loglik", f.loglik ? json(*f.loglik) : json(nullptr)},
          {"perfect_fit", f.perfect_fit}};
}

const char* kFixedEffectsNote =
    "fixed-effects OLS reduction: random intercepts are approximated by optional "
    "one-hot subject/item indicators; smooths by linear (optionally quadratic) terms";

// ---------------------------------------------------------------- score

int cmd_score(const RunConfig& c, std::ostream& out) {
  check_model_source(c, true);
  const auto scores = collect_scores(c);
  const auto vs = variants(c.variant);
  Sink sink(c.out, out);
  auto& os = *sink;
  os << "sid,widx,word";
  for (auto v : vs) os << ',' << to_string(v) << "_bits";
  if (c.logprobs) {
    for (auto v : vs) os << ',' << to_string(v) << "_logprob";
  }
  os << '\n';
  for (const auto& s : scores) {
    for (std::size_t w = 0; w < s.words.size(); ++w) {
      const auto& word = s.words[w];
      os << csv_field(s.sid) << ',' << w << ',' << csv_field(word.surface);
      for (auto v : vs) os << ',' << fmt(word.surprisal(v));
      if (c.logprobs) {
        for (auto v : vs) os << ',' << fmt(word.logprob(v));
      }
      os << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------- check-omega

int cmd_check_omega(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<OmegaReport> reports;
  if (c.witness) {
    reports.push_back(overcount_witness());
  } else {
    check_model_source(c, false);
    if (c.depth == 0) throw UsageError("--depth must be at least 1");
    const auto model = load_model(c);
    std::vector<TokenId> ctx;
    if (!c.context.empty()) {
      ctx = tokenize_greedy(with_leading_space(c.context), model->vocab()).tokens();
    }
    for (auto v : variants(c.variant)) {
      reports.push_back(p_omega_partial(*model, ctx, c.depth, v, c.budget));
    }
  }

  int code = kOk;
  json all = json::array();
  for (const auto& r : reports) {
    out << r.to_text();
    all.push_back(json::parse(r.to_json()));
    if (r.mode == Variant::WL) {
      if (r.cumulative > 1.0 + kBoundTolerance) {
        err << "warning: WL mass " << fmt(r.cumulative)
            << " exceeds 1; word probabilities under WL do not form a distribution\n";
      }
      continue;
    }
    if (r.cumulative > 1.0 + kBoundTolerance) {
      err << "error: WT mass " << fmt(r.cumulative) << " exceeds 1\n";
      code = kInvariantViolation;
    } else if (r.tail_bound &&
               std::abs(r.cumulative - 1.0) > *r.tail_bound + kBoundTolerance) {
      err << "error: WT mass " << fmt(r.cumulative) << " is further from 1 than the tail bound "
          << fmt(*r.tail_bound) << '\n';
      code = kInvariantViolation;
    } else if (!r.tail_bound) {
      err << "note: the model gives no continuation bound; the WT tail is uncertified\n";
    }
  }
  if (!c.out.empty()) {
    Sink sink(c.out, out);
    *sink << (all.size() == 1 ? all[0] : json{{"reports", all}}).dump(2) << '\n';
  }
  return code;
}

// ------------------------------------------------------------ gp-effect

json gp_effect_json(const RunConfig& c, const std::vector<SentenceScore>& scores,
                    const std::vector<RTRow>& rts, std::vector<std::string>& csv_lines) {
  GardenPathOptions opts;
  opts.quadratic = c.quadratic;
  opts.effect.resamples = c.resamples;
  json per_variant = json::object();
  for (auto v : variants(c.variant)) {
    const auto res = estimate_garden_path(scores, rts, v, c.seed, opts);
    json effects = json::array();
    for (const auto& e : res.effects) {
      effects.push_back({{"region", e.region},
                         {"effect", e.effect},
                         {"ci_low", e.ci_low},
                         {"ci_high", e.ci_high},
                         {"half_width", e.half_width},
                         {"items", e.items}});
      csv_lines.push_back(std::string(to_string(v)) + ',' + csv_field(e.region) + ',' +
                          fmt(e.effect) + ',' + fmt(e.ci_low) + ',' + fmt(e.ci_high));
    }
    per_variant[to_string(v)] = {{"filler_fit", fit_json(res.filler_fit)},
                                 {"effects", std::move(effects)}};
  }
  return {{"variants", std::move(per_variant)},
          {"bootstrap", {{"unit", "item"}, {"resamples", c.resamples}, {"seed", c.seed},
                         {"interval", "95% percentile"}}},
          {"note", std::string(kFixedEffectsNote) +
                       "; effects are condition-mean differences of predicted RT "
                       "(no random-effect predictions)"}};
}

void write_effect_csv(const std::string& path, const std::vector<std::string>& lines,
                      std::ostream& out) {
  if (path.empty()) return;
  Sink sink(path, out);
  *sink << "variant,region,effect,ci_low,ci_high\n";
  for (const auto& l : lines) *sink << l << '\n';
}

int cmd_gp_effect(const RunConfig& c, std::ostream& out) {
  check_model_source(c, true);
  if (!c.seed_set) throw UsageError("--seed is required");
  const auto rts = load_rts(c);
  const auto scores = collect_scores(c);
  std::vector<std::string> lines;
  const auto j = gp_effect_json(c, scores, rts, lines);
  Sink sink(c.out, out);
  *sink << j.dump(2) << '\n';
  write_effect_csv(c.csv, lines, out);
  return kOk;
}

// -------------------------------------------------------------- regress

int cmd_regress(const RunConfig& c, std::ostream& out) {
  check_model_source(c, true);
  if (!c.seed_set) throw UsageError("--seed is required");
  if (c.kind != "spr" && c.kind != "gpd") throw UsageError("--kind must be spr or gpd");
  if (c.transform != "log" && c.transform != "identity") {
    throw UsageError("--transform must be log or identity");
  }
  const auto rts = load_rts(c);
  const auto scores = collect_scores(c);

  DeltaLLOptions opts;
  opts.kind = c.kind == "gpd" ? RTKind::GPD : RTKind::SPR;
  opts.transform = c.transform == "log" ? Transform::Log : Transform::Identity;
  opts.base_columns = c.base.empty() ? default_base_columns(opts.kind) : c.base;
  opts.surprisal_columns = c.surprisal;
  opts.design.subject_indicators = c.subject_indicators;
  opts.design.item_indicators = c.item_indicators;
  opts.design.quadratic = c.quadratic;

  json j = {{"kind", c.kind},
            {"transform", c.transform},
            {"base_columns", opts.base_columns},
            {"surprisal_columns", opts.surprisal_columns},
            {"note", kFixedEffectsNote}};
  std::map<Variant, DeltaLLResult> results;
  for (auto v : variants(c.variant)) {
    auto r = delta_ll_analysis(scores, rts, v, opts);
    json jv = {{"n", r.full.n},
               {"loglik_base", r.base.loglik ? json(*r.base.loglik) : json(nullptr)},
               {"loglik_full", r.full.loglik ? json(*r.full.loglik) : json(nullptr)},
               {"delta_ll", r.delta},
               {"base", fit_json(r.base)},
               {"full", fit_json(r.full)}};
    if (c.shuffle_control) jv["delta_ll_shuffled"] = shuffled_delta_ll(r, opts, c.seed);
    j["variants"][to_string(v)] = std::move(jv);
    results.emplace(v, std::move(r));
  }

  if (results.size() == 2) {
    const auto& wl = results.at(Variant::WL);
    const auto& wt = results.at(Variant::WT);
    j["delta_ll_wt_minus_wl"] = wt.delta - wl.delta;
    auto groups = [](const DeltaLLResult& r) {
      std::vector<std::string> g;
      g.reserve(r.rows.size());
      for (const auto& row : r.rows) g.push_back(row.subject);
      return g;
    };
    const auto ga = groups(wt);
    const auto gb = groups(wl);
    const auto ea = aggregate_squared_errors(wt.full.residuals, ga);
    const auto eb = aggregate_squared_errors(wl.full.residuals, gb);
    const auto p = permutation_test(ea, eb, c.permutations, c.seed);
    j["permutation_test"] = {{"statistic", "mean per-subject squared error, wt - wl"},
                             {"observed", p.observed},
                             {"p_value", p.p_value},
                             {"permutations", p.permutations},
                             {"exact", p.exact},
                             {"sidedness", "two-sided"},
                             {"groups", ea.size()},
                             {"seed", c.seed}};
  }

  if (c.garden_path) {
    std::vector<std::string> lines;
    j["garden_path"] = gp_effect_json(c, scores, rts, lines);
    write_effect_csv(c.csv, lines, out);
  }
  Sink sink(c.out, out);
  *sink << j.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------- train-ngram

int cmd_train_ngram(const RunConfig& c, std::ostream& out) {
  if (c.ngram.empty()) throw UsageError("--ngram (training corpus) is required");
  const auto model = train_from_file(c);
  Sink sink(c.out, out);
  model.to_tabular().write(*sink);
  return kOk;
}

// ----------------------------------------------------------------- config

std::vector<std::string> config_flags(const std::string& path) {
  require_file(path, "config");
  std::ifstream f(path, std::ios::binary);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config " + path + ": expected a JSON object");
  std::vector<std::string> flags;
  auto scalar = [&](const std::string& key, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number()) return fmt(v.get<double>());
    throw UsageError("config " + path + ": unsupported value for '" + key + "'");
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    std::string flag = "--" + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) flags.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        flags.push_back(flag);
        flags.push_back(scalar(key, v));
      }
    } else {
      flags.push_back(flag);
      flags.push_back(scalar(key, value));
    }
  }
  return flags;
}

// Splices `--config FILE` into the argument list: the file's settings go
// right after the subcommand so later command-line flags override them.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  auto flags = config_flags(path);
  std::string command;
  {
    std::ifstream f(path, std::ios::binary);
    const auto j = json::parse(f);
    if (j.contains("command")) command = j["command"].get<std::string>();
  }
  const bool has_command = !args.empty() && args.front().rfind("-", 0) != 0;
  if (!has_command) {
    if (command.empty()) throw UsageError("no subcommand given on the command line or in config");
    args.insert(args.begin(), command);
  }
  args.insert(args.begin() + 1, flags.begin(), flags.end());
  return args;
}

void add_model_source(CLI::App* sub, RunConfig& c) {
  sub->add_option("--model", c.model,
                  "Tabular model file or builtin:garden|overcount|nonmonotone|uniform");
  sub->add_option("--ngram", c.ngram, "Train an n-gram scorer on this sentence file");
  sub->add_option("--vocab", c.vocab, "Vocabulary file (for --ngram and builtin:uniform)");
  sub->add_option("--order", c.order, "n-gram order")->check(CLI::PositiveNumber);
  sub->add_option("--alpha", c.alpha, "Additive smoothing constant")
      ->check(CLI::PositiveNumber);
}

void add_sentence_inputs(CLI::App* sub, RunConfig& c) {
  sub->add_option("--records", c.records, "LogprobRecord JSONL file");
  sub->add_option("--text", c.text, "Sentence text (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub->add_option("--in", c.in, "Sentence file, one `sid<TAB>text` per line");
}

void add_variant(CLI::App* sub, RunConfig& c) {
  sub->add_option("--variant", c.variant, "wl, wt or both")
      ->check(CLI::IsMember({"wl", "wt", "both"}));
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Word probabilities under leading- and trailing-whitespace decoding"};
  app.name("wordprob");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* score = app.add_subcommand("score", "Per-word surprisal table (CSV)");
  add_model_source(score, c);
  add_sentence_inputs(score, c);
  add_variant(score, c);
  score->add_option("--out", c.out, "Output CSV path (default stdout)");
  score->add_flag("--logprobs", c.logprobs, "Also emit natural-log probabilities");

  auto* omega = app.add_subcommand("check-omega", "Sum word probabilities over the sample space");
  add_model_source(omega, c);
  add_variant(omega, c);
  omega->add_flag("--witness", c.witness, "Report the two-token overcount example");
  omega->add_option("--depth", c.depth, "Maximum tokens per word");
  omega->add_option("--context", c.context, "Preceding text (default: empty)");
  omega->add_option("--budget", c.budget, "Maximum number of enumerated words");
  omega->add_option("--out", c.out, "JSON report path");

  auto* regress = app.add_subcommand("regress", "Delta log-likelihood of surprisal");
  add_model_source(regress, c);
  add_sentence_inputs(regress, c);
  add_variant(regress, c);
  regress->add_option("--rt", c.rt, "Reading-time CSV");
  regress->add_option("--seed", c.seed, "Seed for permutation and bootstrap");
  regress->add_option("--kind", c.kind, "spr or gpd");
  regress->add_option("--transform", c.transform, "Response transform: log or identity");
  regress->add_option("--base", c.base, "Base predictor columns")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',');
  regress->add_option("--surprisal-columns", c.surprisal, "Surprisal columns added on top")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',');
  regress->add_option("--permutations", c.permutations, "Monte Carlo sign flips");
  regress->add_option("--resamples", c.resamples, "Bootstrap resamples (--garden-path)");
  regress->add_flag("--subject-indicators", c.subject_indicators, "One-hot subject columns");
  regress->add_flag("--item-indicators", c.item_indicators, "One-hot item columns");
  regress->add_flag("--quadratic", c.quadratic, "Add squared length and index");
  regress->add_flag("--shuffle-control", c.shuffle_control,
                    "Also report the ΔLL with surprisal shuffled across rows");
  regress->add_flag("--garden-path", c.garden_path, "Also estimate garden-path effects");
  regress->add_option("--csv", c.csv, "Effect CSV path (--garden-path)");
  regress->add_option("--out", c.out, "JSON output path");

  auto* gp = app.add_subcommand("gp-effect", "Garden-path effects from predicted RTs");
  add_model_source(gp, c);
  add_sentence_inputs(gp, c);
  add_variant(gp, c);
  gp->add_option("--rt", c.rt, "Reading-time CSV with condition and region columns");
  gp->add_option("--seed", c.seed, "Bootstrap seed");
  gp->add_option("--resamples", c.resamples, "Bootstrap resamples");
  gp->add_flag("--quadratic", c.quadratic, "Add squared length and index");
  gp->add_option("--out", c.out, "JSON output path");
  gp->add_option("--csv", c.csv, "Plot-ready CSV path");

  auto* train = app.add_subcommand("train-ngram", "Train an n-gram model and write it as a table");
  train->add_option("--ngram,--in", c.ngram, "Training sentence file");
  train->add_option("--vocab", c.vocab, "Vocabulary file")->required();
  train->add_option("--order", c.order, "n-gram order")->check(CLI::PositiveNumber);
  train->add_option("--alpha", c.alpha, "Additive smoothing constant")
      ->check(CLI::PositiveNumber);
  train->add_option("--out", c.out, "Model output path (default stdout)");

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    for (auto* sub : {regress, gp}) {
      if (sub->parsed()) c.seed_set = sub->count("--seed") > 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (score->parsed()) return cmd_score(c, out);
    if (omega->parsed()) return cmd_check_omega(c, out, err);
    if (regress->parsed()) return cmd_regress(c, out);
    if (gp->parsed()) return cmd_gp_effect(c, out);
    return cmd_train_ngram(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const TokenizationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const EnumerationBudgetError& e) {
    err << "error: " << e.what() << " (lower --depth or raise --budget)\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace wordprob::cli
