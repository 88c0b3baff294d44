#include "fred/prepared.hpp"

#include <algorithm>
#include <utility>

#include "fred/error.hpp"
#include "fred/unicode.hpp"

namespace fred {

ProfileBuilder::ProfileBuilder(SimilarityFn f) : fn_(std::move(f)) {
  fn_.validate();
  slots_ = fn_.kind == SimilarityKind::Bleu ? fn_.max_ngram : fn_.char_order + fn_.word_order;
  ngram_ids_.resize(static_cast<std::size_t>(slots_));
}

std::uint32_t ProfileBuilder::unigram_id(std::string_view token) {
  auto [it, inserted] = unigrams_.try_emplace(std::string(token), static_cast<std::uint32_t>(unigrams_.size()));
  return it->second;
}

void ProfileBuilder::add_orders(SentenceProfile& p, const std::u32string& units, int first_slot, int orders) {
  std::vector<std::uint32_t> window_ids;
  for (int n = 1; n <= orders; ++n) {
    const int slot = first_slot + n - 1;
    auto& table = ngram_ids_[static_cast<std::size_t>(slot)];
    window_ids.clear();
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + un <= units.size(); ++i) {
      auto [it, inserted] = table.try_emplace(units.substr(i, un), static_cast<std::uint32_t>(table.size()));
      window_ids.push_back(it->second);
    }
    std::sort(window_ids.begin(), window_ids.end());
    p.offsets[static_cast<std::size_t>(slot)] = static_cast<std::uint32_t>(p.ids.size());
    p.totals[static_cast<std::size_t>(slot)] = static_cast<std::uint32_t>(window_ids.size());
    for (std::size_t i = 0; i < window_ids.size();) {
      std::size_t j = i;
      while (j < window_ids.size() && window_ids[j] == window_ids[i]) ++j;
      p.ids.push_back(window_ids[i]);
      p.counts.push_back(static_cast<std::uint32_t>(j - i));
      i = j;
    }
  }
}

SentenceProfile ProfileBuilder::prepare(std::string_view text) {
  SentenceProfile p;
  if (fn_.kind == SimilarityKind::Bleu) {
    const TokenStream tokens = tokenize(fn_.tokenizer, text);
    if (tokens.empty()) warn("sentence BLEU: empty input after tokenization; score is 0");
    std::u32string units;
    units.reserve(tokens.size());
    for (const auto& t : tokens) units.push_back(static_cast<char32_t>(unigram_id(t)));
    p.length = static_cast<std::uint32_t>(tokens.size());
    add_orders(p, units, 0, fn_.max_ngram);
  } else {
    std::u32string chars;
    for (char32_t c : unicode::decode(text)) {
      if (!unicode::is_space(c)) chars.push_back(c);
    }
    add_orders(p, chars, 0, fn_.char_order);
    if (fn_.word_order > 0) {
      std::u32string words;
      for (const auto& w : chrf_words(text)) words.push_back(static_cast<char32_t>(unigram_id(w)));
      add_orders(p, words, fn_.char_order, fn_.word_order);
    }
  }
  p.offsets[static_cast<std::size_t>(slots_)] = static_cast<std::uint32_t>(p.ids.size());
  return p;
}

std::vector<SentenceProfile> ProfileBuilder::prepare_all(const std::vector<std::string>& texts) {
  std::vector<SentenceProfile> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(prepare(t));
  return out;
}

namespace {

std::size_t merge_matches(const SentenceProfile& h, const SentenceProfile& r, std::size_t slot) {
  std::uint32_t i = h.offsets[slot];
  const std::uint32_t ie = h.offsets[slot + 1];
  std::uint32_t j = r.offsets[slot];
  const std::uint32_t je = r.offsets[slot + 1];
  std::size_t m = 0;
  while (i < ie && j < je) {
    const std::uint32_t a = h.ids[i];
    const std::uint32_t b = r.ids[j];
    if (a < b) {
      ++i;
    } else if (b < a) {
      ++j;
    } else {
      m += std::min(h.counts[i], r.counts[j]);
      ++i;
      ++j;
    }
  }
  return m;
}

}  // namespace

double ProfileBuilder::score(const SentenceProfile& hyp, const SentenceProfile& ref) const {
  if (fn_.kind == SimilarityKind::Bleu) {
    BleuStats s;
    s.hyp_len = hyp.length;
    s.ref_len = ref.length;
    for (int n = 0; n < slots_; ++n) {
      const auto slot = static_cast<std::size_t>(n);
      s.total[slot] = hyp.totals[slot];
      s.correct[slot] = merge_matches(hyp, ref, slot);
    }
    return bleu_from_stats(s, fn_.max_ngram);
  }
  ChrfStats s;
  s.count = slots_;
  for (int n = 0; n < slots_; ++n) {
    const auto slot = static_cast<std::size_t>(n);
    auto& o = s.orders[slot];
    o.ref = ref.totals[slot];
    o.hyp = o.ref > 0 ? hyp.totals[slot] : 0;
    o.match = merge_matches(hyp, ref, slot);
  }
  return chrf_from_stats(s, fn_.beta);
}

}  // namespace fred
