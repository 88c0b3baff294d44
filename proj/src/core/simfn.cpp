#include "fred/simfn.hpp"

#include <algorithm>
#include <cmath>

#include "fred/error.hpp"
#include "fred/unicode.hpp"

namespace fred {

const char* to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::Bleu:
      return "bleu";
    case SimilarityKind::Chrf:
      return "chrf";
    case SimilarityKind::ChrfPP:
      return "chrfpp";
  }
  return "?";
}

std::optional<SimilarityKind> parse_similarity_kind(std::string_view name) {
  if (name == "bleu") return SimilarityKind::Bleu;
  if (name == "chrf") return SimilarityKind::Chrf;
  if (name == "chrfpp" || name == "chrf++") return SimilarityKind::ChrfPP;
  return std::nullopt;
}

SimilarityFn SimilarityFn::bleu(TokenizerSpec tokenizer) {
  SimilarityFn f;
  f.kind = SimilarityKind::Bleu;
  f.tokenizer = std::move(tokenizer);
  return f;
}

SimilarityFn SimilarityFn::chrf() {
  SimilarityFn f;
  f.kind = SimilarityKind::Chrf;
  return f;
}

SimilarityFn SimilarityFn::chrfpp() {
  SimilarityFn f;
  f.kind = SimilarityKind::ChrfPP;
  f.word_order = 2;
  return f;
}

SimilarityFn SimilarityFn::of_kind(SimilarityKind kind, TokenizerSpec bleu_tokenizer) {
  switch (kind) {
    case SimilarityKind::Bleu:
      return bleu(std::move(bleu_tokenizer));
    case SimilarityKind::Chrf:
      return chrf();
    case SimilarityKind::ChrfPP:
      return chrfpp();
  }
  return bleu();
}

void SimilarityFn::validate() const {
  if (kind == SimilarityKind::Bleu) {
    if (max_ngram < 1 || max_ngram > kMaxBleuOrder) {
      raise(ErrorCode::InvalidArgument, "BLEU order must be in [1, " + std::to_string(kMaxBleuOrder) + "]");
    }
    tokenizer.validate();
    return;
  }
  if (char_order < 1 || word_order < 0 || char_order + word_order > kMaxChrfOrders) {
    raise(ErrorCode::InvalidArgument, "chrF orders out of range");
  }
  if (!(beta > 0)) raise(ErrorCode::InvalidArgument, "chrF beta must be positive");
}

NgramCounts ngram_profile(const TokenStream& tokens, int n) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "n-gram order must be >= 1");
  NgramCounts out;
  const auto un = static_cast<std::size_t>(n);
  if (tokens.size() < un) return out;
  for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
    ++out[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                tokens.begin() + static_cast<std::ptrdiff_t>(i + un))];
  }
  return out;
}

namespace {

double floored_log(double x) { return x == 0.0 ? -9999999999.0 : std::log(x); }

std::size_t clipped_matches(const NgramCounts& hyp, const NgramCounts& ref) {
  std::size_t m = 0;
  for (const auto& [g, c] : hyp) {
    if (auto it = ref.find(g); it != ref.end()) m += std::min(c, it->second);
  }
  return m;
}

std::size_t total_count(const NgramCounts& counts) {
  std::size_t t = 0;
  for (const auto& [g, c] : counts) t += c;
  return t;
}

}  // namespace

double bleu_from_stats(const BleuStats& s, int max_order) {
  double bp = 1.0;
  if (s.hyp_len < s.ref_len) {
    bp = s.hyp_len > 0
             ? std::exp(1.0 - static_cast<double>(s.ref_len) / static_cast<double>(s.hyp_len))
             : 0.0;
  }
  bool any_correct = false;
  for (int n = 0; n < max_order; ++n) any_correct = any_correct || s.correct[n] > 0;
  if (!any_correct) return 0.0;

  std::array<double, kMaxBleuOrder> precisions{};
  double smooth = 1.0;
  int eff_order = max_order;
  for (int n = 1; n <= max_order; ++n) {
    const std::size_t total = s.total[n - 1];
    if (total == 0) break;
    eff_order = n;
    if (s.correct[n - 1] == 0) {
      smooth *= 2;
      precisions[n - 1] = 100.0 / (smooth * static_cast<double>(total));
    } else {
      precisions[n - 1] = 100.0 * static_cast<double>(s.correct[n - 1]) / static_cast<double>(total);
    }
  }
  bool perfect = bp == 1.0;
  for (int n = 0; n < eff_order && perfect; ++n) perfect = s.correct[n] == s.total[n];
  if (perfect) return 100.0;
  double log_sum = 0.0;
  for (int n = 0; n < eff_order; ++n) log_sum += floored_log(precisions[n]);
  return bp * std::exp(log_sum / eff_order);
}

double chrf_from_stats(const ChrfStats& s, double beta) {
  const double factor = beta * beta;
  double avg_prec = 0.0;
  double avg_rec = 0.0;
  int effective = 0;
  for (int i = 0; i < s.count; ++i) {
    const auto& o = s.orders[i];
    if (o.hyp > 0 && o.ref > 0) {
      avg_prec += static_cast<double>(o.match) / static_cast<double>(o.hyp);
      avg_rec += static_cast<double>(o.match) / static_cast<double>(o.ref);
      ++effective;
    }
  }
  if (effective == 0) return 0.0;
  avg_prec /= effective;
  avg_rec /= effective;
  if (avg_prec + avg_rec == 0.0) return 0.0;
  double score = (1 + factor) * avg_prec * avg_rec;
  score /= (factor * avg_prec) + avg_rec;
  return 100 * score;
}

BleuStats bleu_stats(const SimilarityFn& f, std::string_view hyp, std::string_view ref) {
  const TokenStream h = tokenize(f.tokenizer, hyp);
  const TokenStream r = tokenize(f.tokenizer, ref);
  if (h.empty() || r.empty()) warn("sentence BLEU: empty input after tokenization; score is 0");
  BleuStats s;
  s.hyp_len = h.size();
  s.ref_len = r.size();
  for (int n = 1; n <= f.max_ngram; ++n) {
    const auto hp = ngram_profile(h, n);
    const auto rp = ngram_profile(r, n);
    s.total[n - 1] = total_count(hp);
    s.correct[n - 1] = clipped_matches(hp, rp);
  }
  return s;
}

std::vector<std::string> chrf_words(std::string_view text) {
  static constexpr std::string_view kPuncts = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
  auto is_punct = [](char c) { return kPuncts.find(c) != std::string_view::npos; };
  std::vector<std::string> out;
  for (std::string_view w : unicode::split_whitespace(text)) {
    // Length is measured in code points; punctuation is ASCII so a byte test
    // on the first/last byte is exact.
    const bool single = unicode::decode(w).size() == 1;
    if (single) {
      out.emplace_back(w);
    } else if (is_punct(w.back())) {
      out.emplace_back(w.substr(0, w.size() - 1));
      out.emplace_back(w.substr(w.size() - 1));
    } else if (is_punct(w.front())) {
      out.emplace_back(w.substr(0, 1));
      out.emplace_back(w.substr(1));
    } else {
      out.emplace_back(w);
    }
  }
  return out;
}

namespace {

TokenStream stripped_code_points(std::string_view text) {
  TokenStream out;
  for (char32_t c : unicode::decode(text)) {
    if (!unicode::is_space(c)) out.push_back(unicode::encode(std::u32string_view(&c, 1)));
  }
  return out;
}

}  // namespace

ChrfStats chrf_stats(const SimilarityFn& f, std::string_view hyp, std::string_view ref) {
  ChrfStats s;
  auto add_orders = [&s](const TokenStream& h, const TokenStream& r, int max_order) {
    for (int n = 1; n <= max_order; ++n) {
      const auto hp = ngram_profile(h, n);
      const auto rp = ngram_profile(r, n);
      auto& o = s.orders[s.count++];
      o.hyp = rp.empty() ? 0 : total_count(hp);
      o.ref = total_count(rp);
      o.match = clipped_matches(hp, rp);
    }
  };
  add_orders(stripped_code_points(hyp), stripped_code_points(ref), f.char_order);
  if (f.word_order > 0) add_orders(chrf_words(hyp), chrf_words(ref), f.word_order);
  return s;
}

double sentence_bleu(const SimilarityFn& f, std::string_view hyp, std::string_view ref) {
  return bleu_from_stats(bleu_stats(f, hyp, ref), f.max_ngram);
}

double chrf(const SimilarityFn& f, std::string_view hyp, std::string_view ref) {
  return chrf_from_stats(chrf_stats(f, hyp, ref), f.beta);
}

double similarity(const SimilarityFn& f, std::string_view hyp, std::string_view ref) {
  return f.kind == SimilarityKind::Bleu ? sentence_bleu(f, hyp, ref) : chrf(f, hyp, ref);
}

}  // namespace fred
