#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fred/simfn.hpp"

namespace fred {

/// N-gram multiset of one sentence with every distinct n-gram interned to a
/// dense id, sorted by id within each order. Scoring two profiles is a linear
/// merge, which is what makes the all-pairs D and R loops affordable.
struct SentenceProfile {
  std::uint32_t length = 0;  // token count (BLEU) or 0 (chrF)
  std::array<std::uint32_t, kMaxChrfOrders + 1> offsets{};
  std::array<std::uint32_t, kMaxChrfOrders> totals{};
  std::vector<std::uint32_t> ids;
  std::vector<std::uint32_t> counts;
};

/// Builds profiles for one SimilarityFn. prepare() mutates the interner and
/// must not run concurrently; score() is const and thread-safe.
class ProfileBuilder {
 public:
  explicit ProfileBuilder(SimilarityFn f);

  SentenceProfile prepare(std::string_view text);
  std::vector<SentenceProfile> prepare_all(const std::vector<std::string>& texts);

  double score(const SentenceProfile& hyp, const SentenceProfile& ref) const;
  const SimilarityFn& fn() const { return fn_; }

 private:
  using Key = std::u32string;
  std::uint32_t unigram_id(std::string_view token);
  void add_orders(SentenceProfile& p, const std::u32string& units, int first_slot, int orders);

  SimilarityFn fn_;
  int slots_ = 0;
  std::unordered_map<std::string, std::uint32_t> unigrams_;
  std::vector<std::unordered_map<Key, std::uint32_t>> ngram_ids_;  // one map per slot
};

}  // namespace fred
