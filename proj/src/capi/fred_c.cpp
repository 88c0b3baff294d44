#include "fred/fred.h"

#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "fred/commands.hpp"
#include "fred/corpus.hpp"
#include "fred/error.hpp"
#include "fred/metrics.hpp"
#include "fred/ngram_index.hpp"
#include "fred/simfn.hpp"
#include "fred/tokenize.hpp"

struct fred_vocab {
  std::shared_ptr<const fred::SubwordVocab> v;
};
struct fred_simfn {
  fred::SimilarityFn f;
};
struct fred_corpus {
  fred::ParallelCorpus c;
};
struct fred_index {
  fred::NGramIndex idx;
};

namespace {

thread_local std::string g_last_error;

fred_status set_error(fred_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename Fn>
fred_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FRED_OK;
  } catch (const fred::Error& e) {
    return set_error(static_cast<fred_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(FRED_E_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return set_error(FRED_E_INTERNAL, e.what());
  }
}

void need(const void* p, const char* name) {
  if (!p) fred::raise(fred::ErrorCode::InvalidArgument, std::string(name) + " is NULL");
}

fred::TokenizerSpec make_spec(const char* scheme, const fred_vocab* vocab) {
  const auto s = fred::parse_tokenizer_scheme(scheme ? scheme : "ws13a");
  if (!s) fred::raise(fred::ErrorCode::InvalidArgument, std::string("unknown tokenizer '") + scheme + "'");
  fred::TokenizerSpec spec{*s, nullptr};
  if (*s == fred::TokenizerScheme::Subword) {
    need(vocab, "vocab");
    spec.vocab = vocab->v;
  }
  spec.validate();
  return spec;
}

fred::CharPolicy make_policy(const char* name) {
  need(name, "policy");
  const auto p = fred::parse_char_policy(name);
  if (!p) fred::raise(fred::ErrorCode::InvalidArgument, std::string("unknown char policy '") + name + "'");
  return *p;
}

std::vector<std::string> split_commas(const char* list) {
  std::vector<std::string> out;
  if (!list) return out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<std::string> strings(const char* const* arr, std::size_t n, const char* name) {
  if (n > 0) need(arr, name);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    need(arr[i], name);
    out.emplace_back(arr[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* fred_version(void) { return FRED_VERSION; }

const char* fred_last_error(void) { return g_last_error.c_str(); }

const char* fred_status_name(fred_status status) {
  switch (status) {
    case FRED_OK:
      return "ok";
    case FRED_E_INVALID_ARGUMENT:
      return "invalid argument";
    case FRED_E_IO:
      return "i/o error";
    case FRED_E_DECODE:
      return "decode error";
    case FRED_E_VALIDATION:
      return "validation error";
    case FRED_E_FORMAT:
      return "format error";
    case FRED_E_NOT_FOUND:
      return "not found";
    case FRED_E_LIMIT:
      return "limit exceeded";
    case FRED_E_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

void fred_set_warning_callback(fred_warning_fn fn, void* user) {
  if (!fn) {
    fred::set_warning_sink(nullptr);
    return;
  }
  fred::set_warning_sink([fn, user](std::string_view msg) {
    const std::string s(msg);
    fn(s.c_str(), user);
  });
}

fred_status fred_vocab_load(const char* path, fred_vocab** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new fred_vocab{std::make_shared<const fred::SubwordVocab>(fred::SubwordVocab::load(path))};
  });
}

fred_status fred_vocab_from_pieces(const char* const* pieces, size_t n, uint32_t unk_id, const char* marker,
                                   fred_vocab** out) {
  return guarded([&] {
    need(out, "out");
    auto v = fred::SubwordVocab::from_pieces(strings(pieces, n, "pieces"), unk_id,
                                             marker ? std::string(marker) : std::string(fred::kDefaultBoundaryMarker));
    *out = new fred_vocab{std::make_shared<const fred::SubwordVocab>(std::move(v))};
  });
}

void fred_vocab_free(fred_vocab* vocab) { delete vocab; }

size_t fred_vocab_size(const fred_vocab* vocab) { return vocab ? vocab->v->size() : 0; }

uint64_t fred_vocab_fingerprint(const fred_vocab* vocab) { return vocab ? vocab->v->fingerprint() : 0; }

fred_status fred_vocab_encode(const fred_vocab* vocab, const char* text, uint32_t* ids, size_t capacity,
                              size_t* count) {
  return guarded([&] {
    need(vocab, "vocab");
    need(text, "text");
    need(count, "count");
    const auto enc = vocab->v->encode(text);
    if (capacity > 0) need(ids, "ids");
    for (std::size_t i = 0; i < enc.size() && i < capacity; ++i) ids[i] = enc[i];
    *count = enc.size();
  });
}

fred_status fred_token_count(const char* scheme, const fred_vocab* vocab, const char* text, size_t* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = fred::tokenize(make_spec(scheme, vocab), text).size();
  });
}

fred_status fred_char_count(const char* policy, const char* text, size_t* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = fred::count_chars(make_policy(policy), text);
  });
}

fred_status fred_simfn_create(const char* kind, const char* bleu_tokenizer, const fred_vocab* vocab,
                              fred_simfn** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    const auto k = fred::parse_similarity_kind(kind);
    if (!k) fred::raise(fred::ErrorCode::InvalidArgument, std::string("unknown similarity kind '") + kind + "'");
    auto f = fred::SimilarityFn::of_kind(*k, make_spec(bleu_tokenizer, vocab));
    f.validate();
    *out = new fred_simfn{std::move(f)};
  });
}

void fred_simfn_free(fred_simfn* fn) { delete fn; }

fred_status fred_similarity(const fred_simfn* fn, const char* hyp, const char* ref, double* out) {
  return guarded([&] {
    need(fn, "fn");
    need(hyp, "hyp");
    need(ref, "ref");
    need(out, "out");
    *out = fred::similarity(fn->f, hyp, ref);
  });
}

fred_status fred_corpus_load(const char* src_train, const char* tgt_train, const char* src_test, const char* tgt_test,
                             int normalize_nfc, fred_corpus** out) {
  return guarded([&] {
    need(src_train, "src_train");
    need(tgt_train, "tgt_train");
    need(src_test, "src_test");
    need(tgt_test, "tgt_test");
    need(out, "out");
    fred::BitextPaths p{src_train, tgt_train, src_test, tgt_test};
    *out = new fred_corpus{fred::load_parallel_corpus(p, fred::LoadOptions{normalize_nfc != 0})};
  });
}

fred_status fred_corpus_from_arrays(const char* const* train_src, const char* const* train_tgt, size_t n_train,
                                    const char* const* test_src, const char* const* test_tgt, size_t n_test,
                                    fred_corpus** out) {
  return guarded([&] {
    need(out, "out");
    fred::ParallelCorpus c;
    const auto trs = strings(train_src, n_train, "train_src");
    const auto trt = strings(train_tgt, n_train, "train_tgt");
    const auto tes = strings(test_src, n_test, "test_src");
    const auto tet = strings(test_tgt, n_test, "test_tgt");
    for (std::size_t i = 0; i < n_train; ++i) c.train.push_back({trs[i], trt[i]});
    for (std::size_t i = 0; i < n_test; ++i) c.test.push_back({tes[i], tet[i]});
    fred::validate(c);
    *out = new fred_corpus{std::move(c)};
  });
}

void fred_corpus_free(fred_corpus* corpus) { delete corpus; }

size_t fred_corpus_n_train(const fred_corpus* corpus) { return corpus ? corpus->c.n_train() : 0; }

size_t fred_corpus_n_test(const fred_corpus* corpus) { return corpus ? corpus->c.n_test() : 0; }

fred_status fred_fertility(const fred_corpus* corpus, const char* scheme, const fred_vocab* vocab,
                           const char* src_policy, const char* tgt_policy, double* f_score, fred_side* side_used) {
  return guarded([&] {
    need(corpus, "corpus");
    need(f_score, "f_score");
    const auto r = fred::fertility(corpus->c, make_spec(scheme, vocab), make_policy(src_policy),
                                   make_policy(tgt_policy));
    *f_score = r.f_score;
    if (side_used) *side_used = r.side_used == fred::Side::Source ? FRED_SIDE_SOURCE : FRED_SIDE_TARGET;
  });
}

fred_status fred_retrieval_proxy(const fred_corpus* corpus, const fred_simfn* fn, unsigned threads, double* out) {
  return guarded([&] {
    need(corpus, "corpus");
    need(fn, "fn");
    need(out, "out");
    *out = fred::retrieval_proxy(corpus->c, fn->f, threads).r_score;
  });
}

fred_status fred_corpus_diversity(const fred_corpus* corpus, const fred_simfn* fn, unsigned threads, double* out) {
  return guarded([&] {
    need(corpus, "corpus");
    need(fn, "fn");
    need(out, "out");
    *out = fred::corpus_diversity(corpus->c, fn->f, threads);
  });
}

fred_status fred_exposure(const fred_corpus* corpus, fred_side side, const fred_index* index, const fred_vocab* vocab,
                          int n, unsigned threads, double* e_score, size_t* n_used) {
  return guarded([&] {
    need(corpus, "corpus");
    need(index, "index");
    need(vocab, "vocab");
    need(e_score, "e_score");
    const auto s = side == FRED_SIDE_SOURCE ? fred::Side::Source : fred::Side::Target;
    const auto r = fred::exposure(corpus->c.test_side(s), index->idx, *vocab->v, n, threads);
    *e_score = r.e_score;
    if (n_used) *n_used = r.n_used;
  });
}

fred_status fred_index_build(const char* const* files, size_t n_files, const fred_vocab* vocab, uint64_t max_tokens,
                             fred_index** out) {
  return guarded([&] {
    need(vocab, "vocab");
    need(out, "out");
    std::vector<std::filesystem::path> paths;
    for (const auto& s : strings(files, n_files, "files")) paths.emplace_back(s);
    fred::IndexBuildOptions opts;
    if (max_tokens > 0) opts.max_tokens = max_tokens;
    *out = new fred_index{fred::NGramIndex::build(paths, *vocab->v, opts)};
  });
}

fred_status fred_index_from_ids(const uint32_t* ids, size_t n, uint64_t vocab_fingerprint, fred_index** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(ids, "ids");
    std::vector<fred::TokenIds> docs(1);
    for (std::size_t i = 0; i < n; ++i) {
      if (ids[i] == fred::kSeparatorId) {
        docs.emplace_back();
      } else {
        docs.back().push_back(ids[i]);
      }
    }
    if (n == 0) docs.clear();
    *out = new fred_index{fred::NGramIndex::from_documents(docs, vocab_fingerprint)};
  });
}

fred_status fred_index_load(const char* path, const fred_vocab* expected, fred_index** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::optional<std::uint64_t> fp;
    if (expected) fp = expected->v->fingerprint();
    *out = new fred_index{fred::NGramIndex::load(path, fp)};
  });
}

fred_status fred_index_save(const fred_index* index, const char* path) {
  return guarded([&] {
    need(index, "index");
    need(path, "path");
    index->idx.save(path);
  });
}

void fred_index_free(fred_index* index) { delete index; }

uint64_t fred_index_size(const fred_index* index) { return index ? index->idx.size() : 0; }

fred_status fred_index_count(const fred_index* index, const uint32_t* gram, size_t n, uint64_t* out) {
  return guarded([&] {
    need(index, "index");
    need(out, "out");
    if (n == 0) fred::raise(fred::ErrorCode::InvalidArgument, "empty gram");
    need(gram, "gram");
    *out = index->idx.count(std::span<const std::uint32_t>(gram, n));
  });
}

void fred_score_args_init(fred_score_args* args) {
  if (!args) return;
  *args = fred_score_args{};
  args->kinds = "bleu,chrf,chrf++";
  args->exposure_n = 4;
  args->formats = "tsv,json,markdown";
}

void fred_analyze_args_init(fred_analyze_args* args) {
  if (!args) return;
  *args = fred_analyze_args{};
  const fred::OutlierOptions d;
  args->target = "reported";
  args->band_metric = "bleu";
  args->k = d.k;
  args->r_ref_avg = d.r_ref_avg;
  args->r_ref_mult = d.r_ref_mult;
  args->f_threshold = d.f_threshold;
}

int fred_cmd_index_build(const char* const* corpus, size_t n_corpus, const char* vocab, const char* out,
                         uint64_t max_tokens) {
  fred::IndexBuildCommand cmd;
  try {
    need(vocab, "vocab");
    need(out, "out");
    for (const auto& s : strings(corpus, n_corpus, "corpus")) cmd.corpus.emplace_back(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fred::kExitUsage;
  }
  cmd.vocab = vocab;
  cmd.out = out;
  if (max_tokens > 0) cmd.max_tokens = max_tokens;
  return fred::run_index_build(cmd, std::cout, std::cerr);
}

int fred_cmd_index_count(const char* index, const char* vocab, const char* text, int order) {
  if (!index || !vocab || !text) {
    std::cerr << "error: index, vocab and text are required\n";
    return fred::kExitUsage;
  }
  return fred::run_index_count({index, vocab, text, order}, std::cout, std::cerr);
}

int fred_cmd_score(const fred_score_args* args) {
  fred::ScoreCommand cmd;
  try {
    need(args, "args");
    need(args->manifest, "manifest");
    need(args->out_dir, "out_dir");
    cmd.manifest = args->manifest;
    cmd.out_dir = args->out_dir;
    cmd.threads = args->threads;
    cmd.exposure_n = args->exposure_n;
    cmd.diagnostics = args->diagnostics != 0;
    if (args->kinds) {
      cmd.kinds.clear();
      for (const auto& k : split_commas(args->kinds)) {
        const auto kind = fred::parse_similarity_kind(k);
        if (!kind) fred::raise(fred::ErrorCode::InvalidArgument, "unknown similarity kind '" + k + "'");
        cmd.kinds.push_back(*kind);
      }
    }
    if (args->formats) {
      cmd.formats.clear();
      for (const auto& f : split_commas(args->formats)) {
        if (f == "tsv") {
          cmd.formats.push_back(fred::ReportFormat::Tsv);
        } else if (f == "json") {
          cmd.formats.push_back(fred::ReportFormat::Json);
        } else if (f == "markdown" || f == "md") {
          cmd.formats.push_back(fred::ReportFormat::Markdown);
        } else {
          fred::raise(fred::ErrorCode::InvalidArgument, "unknown report format '" + f + "'");
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fred::kExitUsage;
  }
  return fred::run_score(cmd, std::cout, std::cerr);
}

int fred_cmd_analyze(const fred_analyze_args* args) {
  fred::AnalyzeCommand cmd;
  try {
    need(args, "args");
    need(args->matrix, "matrix");
    need(args->out_dir, "out_dir");
    cmd.matrix = args->matrix;
    cmd.out_dir = args->out_dir;
    if (args->target) cmd.target = args->target;
    cmd.features = split_commas(args->features);
    if (args->band) cmd.band = std::filesystem::path(args->band);
    if (args->band_metric) {
      const auto m = fred::parse_band_metric(args->band_metric);
      if (!m) fred::raise(fred::ErrorCode::InvalidArgument, std::string("unknown band metric '") + args->band_metric + "'");
      cmd.outlier.metric = *m;
    }
    cmd.outlier.k = args->k;
    cmd.outlier.r_ref_avg = args->r_ref_avg;
    cmd.outlier.r_ref_mult = args->r_ref_mult;
    cmd.outlier.f_threshold = args->f_threshold;
    for (const auto& p : split_commas(args->exclude)) cmd.exclude.insert(p);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fred::kExitUsage;
  }
  return fred::run_analyze(cmd, std::cout, std::cerr);
}

}  // extern "C"
