#include "wordprob/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "wordprob/error.hpp"

namespace wordprob {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Number of code points in a UTF-8 string; invalid lead bytes count as one.
std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string replace_all(std::string_view s, std::string_view from,
                        std::string_view to) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = s.find(from, pos);
    if (hit == std::string_view::npos) {
      out.append(s.substr(pos));
      return out;
    }
    out.append(s.substr(pos, hit - pos));
    out.append(to);
    pos = hit + from.size();
  }
}

}  // namespace

char to_char(TokenClass cls) { return cls == TokenClass::B ? 'B' : 'I'; }

Vocabulary::Vocabulary(std::vector<VocabEntry> entries, std::string marker)
    : entries_(std::move(entries)), marker_(std::move(marker)) {
  if (marker_.empty() || utf8_length(marker_) != 1) {
    throw ValidationError("whitespace marker must be a single character",
                          "marker");
  }
  if (entries_.empty()) {
    throw ValidationError("vocabulary is empty", "entries");
  }
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.surface.empty()) {
      throw ValidationError("empty token surface at entry " + std::to_string(i),
                            "surface");
    }
    if (e.surface.find_first_of("\t\n\r ") != std::string::npos) {
      throw ValidationError("token surface contains whitespace: '" + e.surface +
                                "'",
                            "surface");
    }
    const bool marked = starts_with(e.surface, marker_);
    if (marked != (e.cls == TokenClass::B)) {
      throw ValidationError("token '" + e.surface + "' declared class " +
                                to_char(e.cls) +
                                " disagrees with its whitespace marker",
                            "class");
    }
    const auto id = static_cast<TokenId>(i);
    if (!index_.emplace(e.surface, id).second) {
      throw ValidationError("duplicate token surface '" + e.surface + "'",
                            "surface");
    }
    (marked ? b_ids_ : i_ids_).push_back(id);
  }
  if (b_ids_.empty()) {
    throw ValidationError("vocabulary has no word-initial (B) tokens",
                          "entries");
  }
}

Vocabulary Vocabulary::from_surfaces(const std::vector<std::string>& surfaces,
                                     std::string marker) {
  std::vector<VocabEntry> entries;
  entries.reserve(surfaces.size());
  for (const auto& s : surfaces) {
    entries.push_back(
        {s, starts_with(s, marker) ? TokenClass::B : TokenClass::I});
  }
  return Vocabulary(std::move(entries), std::move(marker));
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open vocabulary file " + path.string(),
                          "path");
  }
  return parse(in);
}

Vocabulary Vocabulary::parse(std::istream& in) {
  std::string marker(kDefaultMarker);
  std::vector<VocabEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "#marker=";
      if (starts_with(line, key)) marker = line.substr(key.size());
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab + 2 != line.size()) {
      throw ValidationError("expected '<surface>\\t<B|I>'", "line", lineno);
    }
    const char c = line[tab + 1];
    if (c != 'B' && c != 'I') {
      throw ValidationError("class must be B or I", "class", lineno);
    }
    auto surface = line.substr(0, tab);
    const auto cls = c == 'B' ? TokenClass::B : TokenClass::I;
    if (starts_with(surface, marker) != (cls == TokenClass::B)) {
      throw ValidationError("class of '" + surface + "' disagrees with its marker", "class",
                            lineno);
    }
    entries.push_back({std::move(surface), cls});
  }
  return Vocabulary(std::move(entries), std::move(marker));
}

void Vocabulary::write(std::ostream& out) const {
  out << "#marker=" << marker_ << '\n';
  for (const auto& e : entries_) {
    out << e.surface << '\t' << to_char(e.cls) << '\n';
  }
}

const std::string& Vocabulary::surface(TokenId id) const {
  if (id >= entries_.size()) {
    throw LookupError("token id " + std::to_string(id) + " out of range");
  }
  return entries_[id].surface;
}

TokenClass Vocabulary::cls(TokenId id) const {
  if (id >= entries_.size()) {
    throw LookupError("token id " + std::to_string(id) + " out of range");
  }
  return entries_[id].cls;
}

std::optional<TokenId> Vocabulary::find(std::string_view surface) const {
  const auto it = index_.find(std::string(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id(std::string_view surface) const {
  if (auto found = find(surface)) return *found;
  throw LookupError("unknown token '" + std::string(surface) + "'");
}

std::string Vocabulary::text_form(TokenId id) const {
  return replace_all(surface(id), marker_, " ");
}

std::vector<WordSpan> segment_words(std::span<const TokenClass> classes) {
  std::vector<WordSpan> spans;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i == 0 || classes[i] == TokenClass::B) {
      if (!spans.empty()) spans.back().end = i;
      spans.push_back({i, i + 1});
    }
  }
  if (!spans.empty()) spans.back().end = classes.size();
  return spans;
}

Segmentation::Segmentation(const Vocabulary& vocab, std::vector<TokenId> tokens)
    : tokens_(std::move(tokens)) {
  std::vector<TokenClass> classes;
  classes.reserve(tokens_.size());
  for (TokenId t : tokens_) classes.push_back(vocab.cls(t));
  spans_ = segment_words(classes);
}

std::span<const TokenId> Segmentation::word_tokens(std::size_t word) const {
  const auto& s = spans_.at(word);
  return std::span<const TokenId>(tokens_).subspan(s.begin, s.size());
}

TokenClass classify(std::string_view surface, const Vocabulary& vocab) {
  return vocab.cls(vocab.id(surface));
}

Segmentation tokenize_greedy(std::string_view text, const Vocabulary& vocab) {
  std::unordered_map<std::string, TokenId> by_text;
  std::size_t longest = 0;
  for (TokenId id = 0; id < vocab.size(); ++id) {
    auto form = vocab.text_form(id);
    longest = std::max(longest, form.size());
    by_text.emplace(std::move(form), id);
  }

  std::vector<TokenId> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (std::size_t len = std::min(longest, text.size() - pos); len > 0;
         --len) {
      const auto it = by_text.find(std::string(text.substr(pos, len)));
      if (it != by_text.end()) {
        tokens.push_back(it->second);
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw TokenizationError(
          "no vocabulary entry covers byte offset " + std::to_string(pos), pos);
    }
  }
  return Segmentation(vocab, std::move(tokens));
}

std::string detokenize(const Vocabulary& vocab,
                       std::span<const TokenId> tokens) {
  std::string out;
  for (TokenId t : tokens) out += vocab.text_form(t);
  return out;
}

std::string word_surface(const Vocabulary& vocab,
                         std::span<const TokenId> word) {
  std::string s = detokenize(vocab, word);
  if (!s.empty() && s.front() == ' ') s.erase(0, 1);
  return s;
}

}  // namespace wordprob
