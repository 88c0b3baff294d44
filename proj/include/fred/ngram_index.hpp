#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "fred/tokenize.hpp"

namespace fred {

inline constexpr char kIndexMagic[8] = {'F', 'R', 'E', 'D', 'N', 'G', 'X', '1'};
inline constexpr std::size_t kIndexHeaderBytes = 24;

struct IndexBuildOptions {
  /// Largest token stream (separators included) the build accepts.
  std::uint64_t max_tokens = std::uint64_t{1} << 40;
};

/// Suffix array over a token-id stream; documents are joined by kSeparatorId.
/// Immutable once built; count() may be called from any number of threads.
///
/// On-disk layout, little-endian:
///   "FREDNGX1" | u64 L | u64 vocab_fingerprint | u32 tokens[L] | u64 sa[L]
class NGramIndex {
 public:
  NGramIndex() = default;

  /// Every non-empty line of every file is one document, encoded with the
  /// vocabulary's longest-match segmentation.
  static NGramIndex build(const std::vector<std::filesystem::path>& files, const SubwordVocab& vocab,
                          const IndexBuildOptions& options = {});
  static NGramIndex from_documents(const std::vector<TokenIds>& documents, std::uint64_t vocab_fingerprint,
                                   const IndexBuildOptions& options = {});

  /// Occurrences of `gram` as a contiguous run, overlaps included. Grams
  /// containing the separator id never match.
  std::uint64_t count(std::span<const std::uint32_t> gram) const;

  void save(const std::filesystem::path& path) const;
  /// Warns (does not fail) when `expected_fingerprint` differs from the file.
  static NGramIndex load(const std::filesystem::path& path,
                         std::optional<std::uint64_t> expected_fingerprint = std::nullopt);

  std::uint64_t size() const { return tokens_.size(); }
  std::uint64_t vocab_fingerprint() const { return fingerprint_; }
  std::span<const std::uint32_t> tokens() const { return tokens_; }
  std::span<const std::uint64_t> suffix_array() const { return sa_; }

 private:
  NGramIndex(std::vector<std::uint32_t> tokens, std::vector<std::uint64_t> sa, std::uint64_t fingerprint);

  // <0, 0, >0 comparing the suffix at `pos` against `gram` on |gram| tokens;
  // a suffix shorter than the gram that matches its prefix compares less.
  int compare_prefix(std::uint64_t pos, std::span<const std::uint32_t> gram) const;

  std::vector<std::uint32_t> tokens_;
  std::vector<std::uint64_t> sa_;
  std::uint64_t fingerprint_ = 0;
};

}  // namespace fred
