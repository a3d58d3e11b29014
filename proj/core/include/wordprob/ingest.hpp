#pragma once

// Reading-time corpora and regression-ready rows.
//
// RT corpus CSV header (UTF-8, comma separated, '.' decimal, RFC 4180
// quoting):
//   subject,item,sid,widx,word,rt,length,logfreq[,condition,region]
// plus optional columns `slength`, `pfix`, `drop`, `final` in any position.
// `widx` is the 0-based whitespace-word position in the sentence. `rt` may
// be 0 or empty for unfixated words (gpd corpora).

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wordprob/decoding.hpp"
#include "wordprob/record.hpp"

namespace wordprob {

struct RTRow {
  std::string subject;
  std::string item;
  std::string sid;
  std::size_t widx = 0;
  std::string word;
  double rt = 0.0;  // milliseconds; 0 = not fixated
  int length = 1;
  double logfreq = 0.0;
  std::string condition;
  std::string region;
  std::optional<double> slength;
  std::optional<int> pfix;
  /// Precomputed exclusion (e.g. long incoming saccade); dropped by gpd.
  bool drop = false;
  /// Last word of its sentence. Set from the `final` column when present,
  /// otherwise from the largest widx seen for the sid in the same file.
  bool sentence_final = false;
};

enum class RTKind { SPR, GPD };

std::vector<RTRow> parse_rt_csv(std::istream& in);
std::vector<RTRow> read_rt_csv(const std::filesystem::path& path);
void write_rt_csv(std::ostream& out, const std::vector<RTRow>& rows);

/// Marks sentence_final on the rows with the largest widx per sid.
void annotate_sentence_final(std::vector<RTRow>& rows);

/// spr: keeps 100 <= rt <= 3000 ms, drops sentence-initial and -final words.
/// gpd: drops unfixated (rt <= 0), flagged, sentence-initial and -final words.
/// Order-preserving and idempotent.
std::vector<RTRow> filter_rt(const std::vector<RTRow>& rows, RTKind kind);

enum class Transform { Identity, Log };

struct RegressionRow {
  double response = 0.0;
  double surp = 0.0, surp_prev1 = 0.0, surp_prev2 = 0.0;
  double freq = 0.0, freq_prev1 = 0.0, freq_prev2 = 0.0;
  double length = 0.0;
  double index = 0.0;
  std::optional<double> slength;
  std::optional<double> pfix;
  /// 1 where the lag-1 / lag-2 predecessor does not exist and the lagged
  /// surprisal and frequency were imputed.
  double prev1_missing = 0.0;
  double prev2_missing = 0.0;
  std::string subject, item, sid;
  std::size_t widx = 0;
  std::string condition, region;
};

/// Log frequency of each (sid, widx), used for lagged frequency columns.
using FrequencyTable = std::map<std::pair<std::string, std::size_t>, double>;

FrequencyTable frequency_table(const std::vector<RTRow>& rows);

struct BuildOptions {
  /// Value written into lagged columns that have no predecessor.
  double imputed = 0.0;
};

/// Joins RT rows with scored words on (sid, widx), checking that the word
/// surfaces agree. Lagged surprisal comes from the scored sentence; lagged
/// frequency from `freq` (built from `rts` when null). Throws AlignmentError
/// on unmatched rows, surface mismatches, or missing lagged frequencies.
std::vector<RegressionRow> build_rows(const std::vector<SentenceScore>& scores,
                                      const std::vector<RTRow>& rts,
                                      Variant variant, Transform transform,
                                      const FrequencyTable* freq = nullptr,
                                      BuildOptions options = {});

/// Natural log of (count + 1) per million tokens for each word in a
/// `<word><TAB or space><count>` file.
std::map<std::string, double> load_log_frequencies(const std::filesystem::path& path);
std::map<std::string, double> log_frequencies(
    const std::map<std::string, std::size_t>& counts);

}  // namespace wordprob
