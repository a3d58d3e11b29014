#include "wordprob/record.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "wordprob/error.hpp"

namespace wordprob {

namespace {

using nlohmann::json;

// Slack for the member-below-marginal check; exported float32 logits round.
constexpr double kMarginalSlack = 1e-9;

const json& require(const json& obj, const char* key, std::size_t lineno) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(std::string("missing field '") + key + "'", key,
                          lineno);
  }
  return *it;
}

double require_number(const json& v, const char* field, std::size_t lineno) {
  if (!v.is_number()) {
    throw ValidationError(std::string("field '") + field + "' must be a number",
                          field, lineno);
  }
  return v.get<double>();
}

}  // namespace

void validate(const LogprobRecord& record) {
  if (record.tokens.empty()) {
    throw ValidationError("record '" + record.sid + "' has no tokens", "tokens");
  }
  if (record.b_mass_logps.size() != record.tokens.size() + 1) {
    throw ValidationError("record '" + record.sid + "': b_mass_logps (bm) has " +
                              std::to_string(record.b_mass_logps.size()) +
                              " entries, expected token count + 1 = " +
                              std::to_string(record.tokens.size() + 1),
                          "b_mass_logps");
  }
  for (const auto& t : record.tokens) {
    if (!std::isfinite(t.logp) || t.logp > 0.0) {
      throw ValidationError("record '" + record.sid + "': token '" + t.surface +
                                "' has log-probability outside (-inf, 0]",
                            "lp");
    }
  }
  for (double v : record.b_mass_logps) {
    if (!std::isfinite(v) || v > 0.0) {
      throw ValidationError("record '" + record.sid +
                                "': b_mass_logps entry outside (-inf, 0]",
                            "b_mass_logps");
    }
  }
  for (std::size_t i = 0; i < record.tokens.size(); ++i) {
    const auto& t = record.tokens[i];
    if (t.is_b && t.logp > record.b_mass_logps[i] + kMarginalSlack) {
      throw ValidationError("record '" + record.sid + "': B token '" +
                                t.surface + "' at position " +
                                std::to_string(i) +
                                " is more probable than the B marginal",
                            "lp");
    }
  }
}

LogprobRecord parse_record(const std::string& json_line, std::size_t lineno) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what(), "record",
                          lineno);
  }
  if (!j.is_object()) {
    throw ValidationError("record must be a JSON object", "record", lineno);
  }

  LogprobRecord r;
  const auto& sid = require(j, "sid", lineno);
  if (!sid.is_string()) {
    throw ValidationError("field 'sid' must be a string", "sid", lineno);
  }
  r.sid = sid.get<std::string>();

  const auto& tokens = require(j, "tokens", lineno);
  if (!tokens.is_array()) {
    throw ValidationError("field 'tokens' must be an array", "tokens", lineno);
  }
  for (const auto& t : tokens) {
    if (!t.is_object()) {
      throw ValidationError("token entries must be objects", "tokens", lineno);
    }
    RecordToken tok;
    const auto& surface = require(t, "t", lineno);
    if (!surface.is_string()) {
      throw ValidationError("field 't' must be a string", "t", lineno);
    }
    tok.surface = surface.get<std::string>();
    tok.logp = require_number(require(t, "lp", lineno), "lp", lineno);
    const auto& b = require(t, "b", lineno);
    if (!b.is_boolean()) {
      throw ValidationError("field 'b' must be a boolean", "b", lineno);
    }
    tok.is_b = b.get<bool>();
    r.tokens.push_back(std::move(tok));
  }

  const auto& bm = require(j, "bm", lineno);
  if (!bm.is_array()) {
    throw ValidationError("field 'bm' must be an array", "bm", lineno);
  }
  for (const auto& v : bm) r.b_mass_logps.push_back(require_number(v, "bm", lineno));

  try {
    validate(r);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), e.field(), lineno);
  }
  return r;
}

std::string to_json_line(const LogprobRecord& record) {
  json tokens = json::array();
  for (const auto& t : record.tokens) {
    tokens.push_back({{"t", t.surface}, {"lp", t.logp}, {"b", t.is_b}});
  }
  json j = {{"sid", record.sid}, {"tokens", std::move(tokens)},
            {"bm", record.b_mass_logps}};
  return j.dump();
}

std::vector<LogprobRecord> read_records(std::istream& in) {
  std::vector<LogprobRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line, lineno));
  }
  return out;
}

std::vector<LogprobRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open records file " + path.string(), "path");
  }
  return read_records(in);
}

void write_records(std::ostream& out, const std::vector<LogprobRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

}  // namespace wordprob
