#pragma once

// LogprobRecord: per-sentence token log-probabilities plus the boundary
// (class-B) marginal at every position. This is the exchange format between
// real language models and the decoder.
//
// JSONL, one record per line:
//   {"sid": str, "tokens": [{"t": str, "lp": float, "b": bool}], "bm": [float]}
// All floats are natural logs. bm[i] is the B-marginal given the first i
// tokens, so bm has one more entry than tokens.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wordprob {

struct RecordToken {
  std::string surface;
  double logp = 0.0;
  bool is_b = false;

  friend bool operator==(const RecordToken&, const RecordToken&) = default;
};

struct LogprobRecord {
  std::string sid;
  std::vector<RecordToken> tokens;
  std::vector<double> b_mass_logps;

  friend bool operator==(const LogprobRecord&, const LogprobRecord&) = default;
};

/// Throws ValidationError naming the offending field.
void validate(const LogprobRecord& record);

LogprobRecord parse_record(const std::string& json_line, std::size_t lineno = 0);
std::string to_json_line(const LogprobRecord& record);

std::vector<LogprobRecord> read_records(std::istream& in);
std::vector<LogprobRecord> read_records(const std::filesystem::path& path);
void write_records(std::ostream& out, const std::vector<LogprobRecord>& records);

}  // namespace wordprob
