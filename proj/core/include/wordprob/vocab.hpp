#pragma once

// Subword vocabularies split into word-initial (B) and word-internal (I)
// tokens, a greedy tokenizer for toy vocabularies, and word segmentation.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordprob {

using TokenId = std::uint32_t;

enum class TokenClass : std::uint8_t { B, I };

char to_char(TokenClass cls);

/// U+2581 LOWER ONE EIGHTH BLOCK, the SentencePiece word-start marker.
inline constexpr std::string_view kDefaultMarker = "\xE2\x96\x81";

struct VocabEntry {
  std::string surface;
  TokenClass cls;
};

/// Immutable token inventory. A token is class B iff its surface begins
/// with the marker; construction rejects entries that disagree.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<VocabEntry> entries,
                      std::string marker = std::string(kDefaultMarker));

  /// Classifies each surface by its leading marker.
  static Vocabulary from_surfaces(const std::vector<std::string>& surfaces,
                                  std::string marker = std::string(kDefaultMarker));

  /// `#marker=<c>` header followed by `<surface>\t<B|I>` lines.
  static Vocabulary load(const std::filesystem::path& path);
  static Vocabulary parse(std::istream& in);
  void write(std::ostream& out) const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& marker() const noexcept { return marker_; }
  const std::string& surface(TokenId id) const;
  TokenClass cls(TokenId id) const;
  bool is_b(TokenId id) const { return cls(id) == TokenClass::B; }

  std::optional<TokenId> find(std::string_view surface) const;
  /// Throws LookupError naming the surface.
  TokenId id(std::string_view surface) const;

  const std::vector<TokenId>& b_ids() const noexcept { return b_ids_; }
  const std::vector<TokenId>& i_ids() const noexcept { return i_ids_; }
  const std::vector<VocabEntry>& entries() const noexcept { return entries_; }

  /// Surface with the marker replaced by a plain space.
  std::string text_form(TokenId id) const;

 private:
  std::vector<VocabEntry> entries_;
  std::string marker_;
  std::unordered_map<std::string, TokenId> index_;
  std::vector<TokenId> b_ids_;
  std::vector<TokenId> i_ids_;
};

/// Half-open token range [begin, end) covering one whitespace word.
struct WordSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const WordSpan&, const WordSpan&) = default;
};

/// A new span starts at position 0 and at every class-B token.
std::vector<WordSpan> segment_words(std::span<const TokenClass> classes);

/// Token ids plus the word spans that tile them.
class Segmentation {
 public:
  Segmentation() = default;
  Segmentation(const Vocabulary& vocab, std::vector<TokenId> tokens);

  const std::vector<TokenId>& tokens() const noexcept { return tokens_; }
  const std::vector<WordSpan>& spans() const noexcept { return spans_; }
  std::size_t word_count() const noexcept { return spans_.size(); }
  std::span<const TokenId> word_tokens(std::size_t word) const;

 private:
  std::vector<TokenId> tokens_;
  std::vector<WordSpan> spans_;
};

TokenClass classify(std::string_view surface, const Vocabulary& vocab);

/// Leftmost-longest match over the vocabulary with each space in `text`
/// standing for the marker. Throws TokenizationError with the byte offset of
/// the first uncoverable position.
Segmentation tokenize_greedy(std::string_view text, const Vocabulary& vocab);

/// Concatenated surfaces with the marker mapped back to a space.
std::string detokenize(const Vocabulary& vocab, std::span<const TokenId> tokens);

/// Word text without its leading whitespace.
std::string word_surface(const Vocabulary& vocab, std::span<const TokenId> word);

}  // namespace wordprob
