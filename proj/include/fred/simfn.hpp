#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fred/tokenize.hpp"

namespace fred {

enum class SimilarityKind { Bleu, Chrf, ChrfPP };

const char* to_string(SimilarityKind kind);
std::optional<SimilarityKind> parse_similarity_kind(std::string_view name);

inline constexpr int kMaxBleuOrder = 8;
inline constexpr int kMaxChrfOrders = 16;  // char_order + word_order

/// Base metric f. Scores are in [0, 100].
struct SimilarityFn {
  SimilarityKind kind = SimilarityKind::Bleu;
  TokenizerSpec tokenizer;  // BLEU only
  int max_ngram = 4;
  int char_order = 6;
  int word_order = 0;
  double beta = 2.0;

  static SimilarityFn bleu(TokenizerSpec tokenizer = TokenizerSpec::ws13a());
  static SimilarityFn chrf();
  static SimilarityFn chrfpp();
  static SimilarityFn of_kind(SimilarityKind kind, TokenizerSpec bleu_tokenizer = TokenizerSpec::ws13a());

  void validate() const;
};

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, std::size_t>;

/// Contiguous n-grams with multiplicities; empty when tokens.size() < n.
NgramCounts ngram_profile(const TokenStream& tokens, int n);

struct BleuStats {
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  std::array<std::size_t, kMaxBleuOrder> correct{};
  std::array<std::size_t, kMaxBleuOrder> total{};
};

/// Sentence BLEU with exponential smoothing and effective order, arithmetic
/// kept operation-for-operation identical to the reference scorer so that
/// ties in argmax searches break identically. One exception: a perfect match
/// returns exactly 100 (the reference yields 100.00000000000004).
double bleu_from_stats(const BleuStats& stats, int max_order);

struct ChrfOrderStats {
  std::size_t hyp = 0;
  std::size_t ref = 0;
  std::size_t match = 0;
};

/// Char orders first, then word orders.
struct ChrfStats {
  std::array<ChrfOrderStats, kMaxChrfOrders> orders{};
  int count = 0;
};

double chrf_from_stats(const ChrfStats& stats, double beta);

BleuStats bleu_stats(const SimilarityFn& f, std::string_view hyp, std::string_view ref);
ChrfStats chrf_stats(const SimilarityFn& f, std::string_view hyp, std::string_view ref);

double sentence_bleu(const SimilarityFn& f, std::string_view hyp, std::string_view ref);
double chrf(const SimilarityFn& f, std::string_view hyp, std::string_view ref);
/// Dispatches on f.kind.
double similarity(const SimilarityFn& f, std::string_view hyp, std::string_view ref);

/// Word splitting used by the chrF++ word n-grams: one leading or trailing
/// ASCII punctuation mark is detached from each whitespace-separated word.
std::vector<std::string> chrf_words(std::string_view text);

}  // namespace fred
