#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fred {

using TokenStream = std::vector<std::string>;
using TokenIds = std::vector<std::uint32_t>;

/// Reserved as the document separator in n-gram indexes; no vocabulary may
/// assign it.
inline constexpr std::uint32_t kSeparatorId = 0xFFFFFFFFu;

inline constexpr std::string_view kDefaultBoundaryMarker = "\xE2\x96\x81";  // U+2581

/// One unit of a subword segmentation.
struct SubwordPiece {
  std::uint32_t id = 0;
  std::string_view source;  // consumed input text, boundary marker excluded
  bool word_start = false;
  bool unknown = false;
};

/// Piece inventory for greedy longest-match segmentation. Immutable and
/// cheap to copy; safe to share between threads.
class SubwordVocab {
 public:
  /// One piece per line (id = 0-based piece line), optional "\t<score>"
  /// suffix ignored. Leading "#unk=<id>" / "#marker=<str>" header lines are
  /// not pieces.
  static SubwordVocab load(const std::filesystem::path& path);
  static SubwordVocab from_pieces(std::vector<std::string> pieces, std::uint32_t unk_id = 0,
                                  std::string marker = std::string(kDefaultBoundaryMarker));

  std::size_t size() const;
  const std::string& piece(std::uint32_t id) const;
  std::optional<std::uint32_t> find(std::string_view piece) const;
  std::uint32_t unk_id() const;
  const std::string& marker() const;
  std::uint64_t fingerprint() const;

  /// Each whitespace-separated word is segmented left to right. At a word
  /// start the longest piece spelled "<marker><prefix>" wins; failing that a
  /// bare marker piece is emitted if the vocabulary has one, otherwise the
  /// marker is dropped. Inside a word the longest matching piece wins. A
  /// position no piece covers yields the unk id for one grapheme cluster.
  std::vector<SubwordPiece> segment(std::string_view text) const;
  TokenIds encode(std::string_view text) const;

 private:
  struct Impl;
  explicit SubwordVocab(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

enum class TokenizerScheme { Ws13a, Char, HanMixed, Subword };

const char* to_string(TokenizerScheme scheme);
std::optional<TokenizerScheme> parse_tokenizer_scheme(std::string_view name);

struct TokenizerSpec {
  TokenizerScheme scheme = TokenizerScheme::Ws13a;
  std::shared_ptr<const SubwordVocab> vocab;  // required iff scheme == Subword

  static TokenizerSpec ws13a() { return {TokenizerScheme::Ws13a, nullptr}; }
  static TokenizerSpec chars() { return {TokenizerScheme::Char, nullptr}; }
  static TokenizerSpec han_mixed() { return {TokenizerScheme::HanMixed, nullptr}; }
  static TokenizerSpec subword(std::shared_ptr<const SubwordVocab> v) {
    return {TokenizerScheme::Subword, std::move(v)};
  }

  /// Throws Validation when the subword scheme lacks a non-empty vocab.
  void validate() const;
};

TokenStream tokenize(const TokenizerSpec& spec, std::string_view text);

/// The WMT mteval-v13a normalization; returns the space-joined token line.
std::string tokenize_13a_line(std::string_view text);
/// Ideographs split individually, remainder through the 13a punctuation rules.
std::string tokenize_han_mixed_line(std::string_view text);

/// Unified ideographs (U+4E00..U+9FFF) and extension A (U+3400..U+4DBF).
bool is_cjk_ideograph(char32_t cp);

enum class CharPolicy { LatinChars, SplitUnits };

const char* to_string(CharPolicy policy);
std::optional<CharPolicy> parse_char_policy(std::string_view name);

/// LatinChars: non-whitespace grapheme clusters. SplitUnits: whitespace
/// separated units.
std::size_t count_chars(CharPolicy policy, std::string_view text);

TokenIds encode_ids(const SubwordVocab& vocab, std::string_view text);

}  // namespace fred
