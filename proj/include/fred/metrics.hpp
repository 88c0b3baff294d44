#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fred/corpus.hpp"
#include "fred/manifest.hpp"
#include "fred/ngram_index.hpp"
#include "fred/simfn.hpp"
#include "fred/tokenize.hpp"

namespace fred {

struct FertilityResult {
  double f_score = 0;  // max of the two sides
  Side side_used = Side::Source;
  double f_source = 0;
  double f_target = 0;
  std::size_t tokens_source = 0;
  std::size_t chars_source = 0;
  std::size_t tokens_target = 0;
  std::size_t chars_target = 0;
};

/// Ratio of summed token counts to summed char counts over the test split,
/// per side. Ties report the source side.
FertilityResult fertility(const ParallelCorpus& corpus, const TokenizerSpec& src_tokenizer,
                          const TokenizerSpec& tgt_tokenizer, CharPolicy src_policy, CharPolicy tgt_policy);
FertilityResult fertility(const ParallelCorpus& corpus, const TokenizerSpec& tokenizer, CharPolicy src_policy,
                          CharPolicy tgt_policy);

struct RetrievalItem {
  std::size_t test_index = 0;
  std::size_t argmax_train_index = 0;
  double src_sim = 0;
  double tgt_sim = 0;
};

struct RetrievalResult {
  double r_score = 0;
  std::vector<RetrievalItem> items;
};

/// For every test item the train item with the most similar source (smallest
/// index on ties) is retrieved; R is the mean target similarity f(y_i, y_j*).
/// `src_fn` scores sources, `tgt_fn` targets; they differ only in tokenizer.
RetrievalResult retrieval_proxy(const ParallelCorpus& corpus, const SimilarityFn& src_fn, const SimilarityFn& tgt_fn,
                                unsigned threads = 0);
RetrievalResult retrieval_proxy(const ParallelCorpus& corpus, const SimilarityFn& f, unsigned threads = 0);

/// Mean of f(y_i, y_j) over every test target i and train target j.
double corpus_diversity(const ParallelCorpus& corpus, const SimilarityFn& f, unsigned threads = 0);

/// Double-loop references over the string scorers; used as test oracles.
RetrievalResult retrieval_proxy_naive(const ParallelCorpus& corpus, const SimilarityFn& src_fn,
                                      const SimilarityFn& tgt_fn);
double corpus_diversity_naive(const ParallelCorpus& corpus, const SimilarityFn& f);

struct ExposureResult {
  double e_score = 0;
  std::size_t n_used = 0;  // |unique test n-grams|
};

/// Mean index count of the unique token-id n-grams of `sentences`,
/// deduplicated across all sentences.
ExposureResult exposure(const std::vector<std::string>& sentences, const NGramIndex& index,
                        const SubwordVocab& vocab, int n = 4, unsigned threads = 0);

struct FredScores {
  std::string pair_id;
  std::string src_lang;
  std::string tgt_lang;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double n_token_mean = 0;  // fertility tokenizer, test source side

  FertilityResult fertility;
  std::string fertility_tokenizer;  // scheme names, "src/tgt" when they differ
  CharPolicy char_policy_src = CharPolicy::LatinChars;
  CharPolicy char_policy_tgt = CharPolicy::LatinChars;
  TokenizerScheme bleu_tokenizer_src = TokenizerScheme::Ws13a;
  TokenizerScheme bleu_tokenizer_tgt = TokenizerScheme::Ws13a;

  std::map<SimilarityKind, double> r_score;
  std::map<SimilarityKind, double> d_score;

  std::optional<double> e_score;
  std::size_t e_ngrams = 0;
  int e_order = 4;
  Side exposure_side = Side::Target;

  std::map<std::string, double> external;
};

struct ScoreOptions {
  std::vector<SimilarityKind> kinds{SimilarityKind::Bleu, SimilarityKind::Chrf, SimilarityKind::ChrfPP};
  int exposure_n = 4;
  unsigned threads = 0;
};

/// Everything score_corpus needs beyond the bitext.
struct PairSetup {
  TokenizerSpec bleu_src = TokenizerSpec::ws13a();
  TokenizerSpec bleu_tgt = TokenizerSpec::ws13a();
  TokenizerSpec fertility_src = TokenizerSpec::ws13a();
  TokenizerSpec fertility_tgt = TokenizerSpec::ws13a();
  CharPolicy char_policy_src = CharPolicy::LatinChars;
  CharPolicy char_policy_tgt = CharPolicy::LatinChars;
  std::shared_ptr<const SubwordVocab> vocab;       // required when index is set
  std::shared_ptr<const NGramIndex> index;         // E is skipped when null
  Side exposure_side = Side::Target;
};

using RetrievalDiagnostics = std::map<SimilarityKind, std::vector<RetrievalItem>>;

FredScores score_corpus(const ParallelCorpus& corpus, const PairSetup& setup, const ScoreOptions& options,
                        RetrievalDiagnostics* diagnostics = nullptr);

/// Loads the entry's corpus, vocabulary and index, then runs score_corpus.
FredScores score_pair(const ManifestEntry& entry, const ScoreOptions& options,
                      RetrievalDiagnostics* diagnostics = nullptr);

/// Resolves the manifest entry's tokenizer policies into a PairSetup without
/// loading the bitext.
PairSetup make_setup(const ManifestEntry& entry);

}  // namespace fred
