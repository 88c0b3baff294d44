#include "fred/metrics.hpp"

#include <algorithm>

#include "fred/error.hpp"
#include "fred/parallel.hpp"
#include "fred/prepared.hpp"

namespace fred {

namespace {

void require_nonempty(const ParallelCorpus& corpus) {
  if (corpus.train.empty() || corpus.test.empty()) {
    raise(ErrorCode::Validation, "corpus '" + corpus.pair_id + "' needs at least one train and one test pair");
  }
}

double sum_in_order(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

FertilityResult fertility(const ParallelCorpus& corpus, const TokenizerSpec& src_tokenizer,
                          const TokenizerSpec& tgt_tokenizer, CharPolicy src_policy, CharPolicy tgt_policy) {
  require_nonempty(corpus);
  src_tokenizer.validate();
  tgt_tokenizer.validate();
  FertilityResult r;
  for (const auto& p : corpus.test) {
    r.tokens_source += tokenize(src_tokenizer, p.source).size();
    r.chars_source += count_chars(src_policy, p.source);
    r.tokens_target += tokenize(tgt_tokenizer, p.target).size();
    r.chars_target += count_chars(tgt_policy, p.target);
  }
  if (r.chars_source == 0 || r.chars_target == 0) {
    raise(ErrorCode::Validation, "fertility: zero character count on the test split");
  }
  r.f_source = static_cast<double>(r.tokens_source) / static_cast<double>(r.chars_source);
  r.f_target = static_cast<double>(r.tokens_target) / static_cast<double>(r.chars_target);
  if (r.f_target > r.f_source) {
    r.f_score = r.f_target;
    r.side_used = Side::Target;
  } else {
    r.f_score = r.f_source;
    r.side_used = Side::Source;
  }
  return r;
}

FertilityResult fertility(const ParallelCorpus& corpus, const TokenizerSpec& tokenizer, CharPolicy src_policy,
                          CharPolicy tgt_policy) {
  return fertility(corpus, tokenizer, tokenizer, src_policy, tgt_policy);
}

RetrievalResult retrieval_proxy(const ParallelCorpus& corpus, const SimilarityFn& src_fn, const SimilarityFn& tgt_fn,
                                unsigned threads) {
  require_nonempty(corpus);
  ProfileBuilder src_builder(src_fn);
  ProfileBuilder tgt_builder(tgt_fn);
  const auto train_src = src_builder.prepare_all(corpus.train_side(Side::Source));
  const auto test_src = src_builder.prepare_all(corpus.test_side(Side::Source));
  const auto train_tgt = tgt_builder.prepare_all(corpus.train_side(Side::Target));
  const auto test_tgt = tgt_builder.prepare_all(corpus.test_side(Side::Target));

  RetrievalResult out;
  out.items.resize(test_src.size());
  parallel_for(test_src.size(), resolve_threads(threads), [&](std::size_t i) {
    std::size_t best = 0;
    double best_sim = src_builder.score(test_src[i], train_src[0]);
    for (std::size_t j = 1; j < train_src.size(); ++j) {
      const double s = src_builder.score(test_src[i], train_src[j]);
      if (s > best_sim) {
        best_sim = s;
        best = j;
      }
    }
    out.items[i] = {i, best, best_sim, tgt_builder.score(test_tgt[i], train_tgt[best])};
  });
  double total = 0;
  for (const auto& item : out.items) total += item.tgt_sim;
  out.r_score = total / static_cast<double>(out.items.size());
  return out;
}

RetrievalResult retrieval_proxy(const ParallelCorpus& corpus, const SimilarityFn& f, unsigned threads) {
  return retrieval_proxy(corpus, f, f, threads);
}

double corpus_diversity(const ParallelCorpus& corpus, const SimilarityFn& f, unsigned threads) {
  require_nonempty(corpus);
  ProfileBuilder builder(f);
  const auto train = builder.prepare_all(corpus.train_side(Side::Target));
  const auto test = builder.prepare_all(corpus.test_side(Side::Target));
  std::vector<double> row_sums(test.size());
  parallel_for(test.size(), resolve_threads(threads), [&](std::size_t i) {
    double s = 0;
    for (const auto& ref : train) s += builder.score(test[i], ref);
    row_sums[i] = s;
  });
  return sum_in_order(row_sums) / (static_cast<double>(test.size()) * static_cast<double>(train.size()));
}

RetrievalResult retrieval_proxy_naive(const ParallelCorpus& corpus, const SimilarityFn& src_fn,
                                      const SimilarityFn& tgt_fn) {
  require_nonempty(corpus);
  RetrievalResult out;
  double total = 0;
  for (std::size_t i = 0; i < corpus.test.size(); ++i) {
    std::size_t best = 0;
    double best_sim = -1;
    for (std::size_t j = 0; j < corpus.train.size(); ++j) {
      const double s = similarity(src_fn, corpus.test[i].source, corpus.train[j].source);
      if (s > best_sim) {
        best_sim = s;
        best = j;
      }
    }
    const double t = similarity(tgt_fn, corpus.test[i].target, corpus.train[best].target);
    out.items.push_back({i, best, best_sim, t});
    total += t;
  }
  out.r_score = total / static_cast<double>(corpus.test.size());
  return out;
}

double corpus_diversity_naive(const ParallelCorpus& corpus, const SimilarityFn& f) {
  require_nonempty(corpus);
  double total = 0;
  for (const auto& t : corpus.test) {
    double row = 0;
    for (const auto& r : corpus.train) row += similarity(f, t.target, r.target);
    total += row;
  }
  return total / (static_cast<double>(corpus.test.size()) * static_cast<double>(corpus.train.size()));
}

ExposureResult exposure(const std::vector<std::string>& sentences, const NGramIndex& index,
                        const SubwordVocab& vocab, int n, unsigned threads) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "n-gram order must be >= 1");
  if (index.vocab_fingerprint() != vocab.fingerprint()) {
    warn("index vocabulary fingerprint differs from the supplied vocabulary; E may be meaningless");
  }
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::vector<std::uint32_t>> grams;
  for (const auto& s : sentences) {
    const auto ids = vocab.encode(s);
    for (std::size_t i = 0; i + un <= ids.size(); ++i) grams.emplace_back(ids.begin() + i, ids.begin() + i + un);
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());

  ExposureResult out;
  out.n_used = grams.size();
  if (grams.empty()) {
    warn("exposure: no test sentence has " + std::to_string(n) + " tokens; E reported as 0");
    return out;
  }
  std::vector<std::uint64_t> counts(grams.size());
  parallel_for(grams.size(), resolve_threads(threads), [&](std::size_t i) { counts[i] = index.count(grams[i]); });
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  out.e_score = total / static_cast<double>(grams.size());
  return out;
}

namespace {

TokenizerSpec spec_for(TokenizerScheme scheme, const std::shared_ptr<const SubwordVocab>& vocab) {
  TokenizerSpec s{scheme, scheme == TokenizerScheme::Subword ? vocab : nullptr};
  s.validate();
  return s;
}

std::string describe(const TokenizerSpec& a, const TokenizerSpec& b) {
  if (a.scheme == b.scheme) return to_string(a.scheme);
  return std::string(to_string(a.scheme)) + "/" + to_string(b.scheme);
}

}  // namespace

FredScores score_corpus(const ParallelCorpus& corpus, const PairSetup& setup, const ScoreOptions& options,
                        RetrievalDiagnostics* diagnostics) {
  validate(corpus);
  if (options.exposure_n < 1) raise(ErrorCode::InvalidArgument, "n for E must be >= 1");
  FredScores s;
  s.pair_id = corpus.pair_id;
  s.src_lang = corpus.src_lang;
  s.tgt_lang = corpus.tgt_lang;
  s.n_train = corpus.n_train();
  s.n_test = corpus.n_test();

  s.fertility = fertility(corpus, setup.fertility_src, setup.fertility_tgt, setup.char_policy_src,
                          setup.char_policy_tgt);
  s.fertility_tokenizer = describe(setup.fertility_src, setup.fertility_tgt);
  s.char_policy_src = setup.char_policy_src;
  s.char_policy_tgt = setup.char_policy_tgt;
  s.bleu_tokenizer_src = setup.bleu_src.scheme;
  s.bleu_tokenizer_tgt = setup.bleu_tgt.scheme;
  s.n_token_mean = static_cast<double>(s.fertility.tokens_source) / static_cast<double>(s.n_test);

  for (auto kind : options.kinds) {
    const auto src_fn = SimilarityFn::of_kind(kind, setup.bleu_src);
    const auto tgt_fn = SimilarityFn::of_kind(kind, setup.bleu_tgt);
    auto r = retrieval_proxy(corpus, src_fn, tgt_fn, options.threads);
    s.r_score[kind] = r.r_score;
    s.d_score[kind] = corpus_diversity(corpus, tgt_fn, options.threads);
    if (diagnostics) (*diagnostics)[kind] = std::move(r.items);
  }

  s.e_order = options.exposure_n;
  s.exposure_side = setup.exposure_side;
  if (setup.index) {
    if (!setup.vocab) raise(ErrorCode::InvalidArgument, "E requires the subword vocabulary");
    const auto e = exposure(corpus.test_side(setup.exposure_side), *setup.index, *setup.vocab, options.exposure_n,
                            options.threads);
    s.e_score = e.e_score;
    s.e_ngrams = e.n_used;
  }
  return s;
}

PairSetup make_setup(const ManifestEntry& entry) {
  PairSetup setup;
  if (entry.subword_vocab) setup.vocab = std::make_shared<const SubwordVocab>(SubwordVocab::load(*entry.subword_vocab));
  setup.bleu_src = spec_for(entry.tokenizer_src, setup.vocab);
  setup.bleu_tgt = spec_for(entry.tokenizer_tgt, setup.vocab);
  if (entry.fertility_tokenizer) {
    setup.fertility_src = setup.fertility_tgt = spec_for(*entry.fertility_tokenizer, setup.vocab);
  } else if (setup.vocab) {
    setup.fertility_src = setup.fertility_tgt = spec_for(TokenizerScheme::Subword, setup.vocab);
  } else {
    setup.fertility_src = setup.bleu_src;
    setup.fertility_tgt = setup.bleu_tgt;
  }
  setup.char_policy_src = entry.char_policy_src;
  setup.char_policy_tgt = entry.char_policy_tgt;
  setup.exposure_side = entry.resolved_exposure_side();
  return setup;
}

FredScores score_pair(const ManifestEntry& entry, const ScoreOptions& options, RetrievalDiagnostics* diagnostics) {
  auto setup = make_setup(entry);
  if (entry.index) {
    setup.index = std::make_shared<const NGramIndex>(NGramIndex::load(*entry.index));
  }
  auto corpus = load_parallel_corpus(entry.paths, LoadOptions{entry.normalize_nfc});
  corpus.pair_id = entry.pair_id;
  corpus.src_lang = entry.src_lang;
  corpus.tgt_lang = entry.tgt_lang;
  auto s = score_corpus(corpus, setup, options, diagnostics);
  s.external = entry.external;
  return s;
}

}  // namespace fred
