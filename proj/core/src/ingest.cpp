#include "wordprob/ingest.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "wordprob/error.hpp"

namespace wordprob {

namespace {

std::vector<std::string> split_csv_line(const std::string& line,
                                        std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ValidationError("unterminated quoted field", "csv", lineno);
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <typename T>
T parse_number(const std::string& s, const char* field, std::size_t lineno) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ValidationError(std::string("cannot parse '") + s + "' in column " +
                              field,
                          field, lineno);
  }
  return value;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::vector<RTRow> parse_rt_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      header = split_csv_line(line, lineno);
      break;
    }
  }
  if (header.empty()) throw ValidationError("RT file is empty", "header", 0);

  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], i);
  for (const char* required :
       {"subject", "item", "sid", "widx", "word", "rt", "length", "logfreq"}) {
    if (!col.contains(required)) {
      throw ValidationError(std::string("missing required column '") + required +
                                "'",
                            required, lineno);
    }
  }
  auto opt = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = col.find(name);
    if (it == col.end()) return std::nullopt;
    return it->second;
  };
  const auto c_condition = opt("condition"), c_region = opt("region"),
             c_slength = opt("slength"), c_pfix = opt("pfix"), c_drop = opt("drop"),
             c_final = opt("final");

  std::vector<RTRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line, lineno);
    if (f.size() != header.size()) {
      throw ValidationError("expected " + std::to_string(header.size()) +
                                " fields, found " + std::to_string(f.size()),
                            "csv", lineno);
    }
    RTRow r;
    r.subject = f[col["subject"]];
    r.item = f[col["item"]];
    r.sid = f[col["sid"]];
    r.widx = parse_number<std::size_t>(f[col["widx"]], "widx", lineno);
    r.word = f[col["word"]];
    const auto& rt = f[col["rt"]];
    r.rt = rt.empty() ? 0.0 : parse_number<double>(rt, "rt", lineno);
    if (!(r.rt >= 0.0) || !std::isfinite(r.rt)) {
      throw ValidationError("rt must be a nonnegative number", "rt", lineno);
    }
    r.length = parse_number<int>(f[col["length"]], "length", lineno);
    if (r.length < 1) throw ValidationError("length must be >= 1", "length", lineno);
    r.logfreq = parse_number<double>(f[col["logfreq"]], "logfreq", lineno);
    if (c_condition) r.condition = f[*c_condition];
    if (c_region) r.region = f[*c_region];
    if (c_slength && !f[*c_slength].empty()) {
      r.slength = parse_number<double>(f[*c_slength], "slength", lineno);
    }
    if (c_pfix && !f[*c_pfix].empty()) {
      r.pfix = parse_number<int>(f[*c_pfix], "pfix", lineno);
    }
    if (c_drop && !f[*c_drop].empty()) {
      r.drop = parse_number<int>(f[*c_drop], "drop", lineno) != 0;
    }
    if (c_final && !f[*c_final].empty()) {
      r.sentence_final = parse_number<int>(f[*c_final], "final", lineno) != 0;
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ValidationError("RT file has no data rows", "rows", lineno);
  if (!c_final) annotate_sentence_final(rows);
  return rows;
}

std::vector<RTRow> read_rt_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open RT file " + path.string(), "path");
  return parse_rt_csv(in);
}

void write_rt_csv(std::ostream& out, const std::vector<RTRow>& rows) {
  out << "subject,item,sid,widx,word,rt,length,logfreq,condition,region,slength,"
         "pfix,drop,final\n";
  for (const auto& r : rows) {
    out << csv_quote(r.subject) << ',' << csv_quote(r.item) << ','
        << csv_quote(r.sid) << ',' << r.widx << ',' << csv_quote(r.word) << ','
        << fmt(r.rt) << ',' << r.length << ',' << fmt(r.logfreq) << ','
        << csv_quote(r.condition) << ',' << csv_quote(r.region) << ','
        << (r.slength ? fmt(*r.slength) : "") << ','
        << (r.pfix ? std::to_string(*r.pfix) : "") << ',' << (r.drop ? 1 : 0)
        << ',' << (r.sentence_final ? 1 : 0) << '\n';
  }
}

void annotate_sentence_final(std::vector<RTRow>& rows) {
  std::unordered_map<std::string, std::size_t> last;
  for (const auto& r : rows) {
    auto [it, inserted] = last.try_emplace(r.sid, r.widx);
    if (!inserted && r.widx > it->second) it->second = r.widx;
  }
  for (auto& r : rows) r.sentence_final = r.widx == last[r.sid];
}

std::vector<RTRow> filter_rt(const std::vector<RTRow>& rows, RTKind kind) {
  std::vector<RTRow> out;
  for (const auto& r : rows) {
    if (r.widx == 0 || r.sentence_final) continue;
    if (kind == RTKind::SPR) {
      if (r.rt < 100.0 || r.rt > 3000.0) continue;
    } else {
      if (r.rt <= 0.0 || r.drop) continue;
    }
    out.push_back(r);
  }
  return out;
}

FrequencyTable frequency_table(const std::vector<RTRow>& rows) {
  FrequencyTable table;
  for (const auto& r : rows) table.emplace(std::pair{r.sid, r.widx}, r.logfreq);
  return table;
}

std::vector<RegressionRow> build_rows(const std::vector<SentenceScore>& scores,
                                      const std::vector<RTRow>& rts,
                                      Variant variant, Transform transform,
                                      const FrequencyTable* freq,
                                      BuildOptions options) {
  std::unordered_map<std::string, const SentenceScore*> by_sid;
  for (const auto& s : scores) by_sid.emplace(s.sid, &s);

  FrequencyTable own;
  if (!freq) {
    own = frequency_table(rts);
    freq = &own;
  }
  auto lagged_freq = [&](const RTRow& r, std::size_t lag) {
    const auto it = freq->find({r.sid, r.widx - lag});
    if (it == freq->end()) {
      throw AlignmentError("no frequency for sentence '" + r.sid + "' word " +
                           std::to_string(r.widx - lag) +
                           " (needed as a lagged predictor)");
    }
    return it->second;
  };

  std::vector<RegressionRow> out;
  out.reserve(rts.size());
  for (const auto& r : rts) {
    const auto it = by_sid.find(r.sid);
    if (it == by_sid.end() || r.widx >= it->second->words.size()) {
      throw AlignmentError("no scored word for sentence '" + r.sid + "' index " +
                           std::to_string(r.widx));
    }
    const auto& words = it->second->words;
    if (words[r.widx].surface != r.word) {
      throw AlignmentError("word mismatch in sentence '" + r.sid + "' index " +
                           std::to_string(r.widx) + ": scored '" +
                           words[r.widx].surface + "', corpus '" + r.word + "'");
    }
    if (transform == Transform::Log && !(r.rt > 0.0)) {
      throw AlignmentError("cannot log-transform a non-positive reading time in '" +
                           r.sid + "' index " + std::to_string(r.widx));
    }

    RegressionRow row;
    row.response = transform == Transform::Log ? std::log(r.rt) : r.rt;
    row.surp = words[r.widx].surprisal(variant);
    row.freq = r.logfreq;
    row.length = r.length;
    row.index = static_cast<double>(r.widx);
    if (r.slength) row.slength = *r.slength;
    if (r.pfix) row.pfix = static_cast<double>(*r.pfix);
    if (r.widx >= 1) {
      row.surp_prev1 = words[r.widx - 1].surprisal(variant);
      row.freq_prev1 = lagged_freq(r, 1);
    } else {
      row.surp_prev1 = row.freq_prev1 = options.imputed;
      row.prev1_missing = 1.0;
    }
    if (r.widx >= 2) {
      row.surp_prev2 = words[r.widx - 2].surprisal(variant);
      row.freq_prev2 = lagged_freq(r, 2);
    } else {
      row.surp_prev2 = row.freq_prev2 = options.imputed;
      row.prev2_missing = 1.0;
    }
    row.subject = r.subject;
    row.item = r.item;
    row.sid = r.sid;
    row.widx = r.widx;
    row.condition = r.condition;
    row.region = r.region;
    out.push_back(std::move(row));
  }
  return out;
}

std::map<std::string, double> log_frequencies(
    const std::map<std::string, std::size_t>& counts) {
  double total = 0.0;
  for (const auto& [w, c] : counts) total += static_cast<double>(c);
  if (total <= 0.0) throw ValidationError("frequency counts are empty", "counts");
  std::map<std::string, double> out;
  for (const auto& [w, c] : counts) {
    out.emplace(w, std::log((static_cast<double>(c) + 1.0) * 1e6 / total));
  }
  return out;
}

std::map<std::string, double> load_log_frequencies(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open count file " + path.string(), "path");
  std::map<std::string, std::size_t> counts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto sep = line.find_last_of("\t ");
    if (sep == std::string::npos || sep == 0) {
      throw ValidationError("expected '<word> <count>'", "line", lineno);
    }
    counts[line.substr(0, sep)] +=
        parse_number<std::size_t>(line.substr(sep + 1), "count", lineno);
  }
  return log_frequencies(counts);
}

}  // namespace wordprob
