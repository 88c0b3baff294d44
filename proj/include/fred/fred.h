/* C interface to the corpus difficulty toolkit.
 *
 * Every function that can fail returns fred_status; on failure
 * fred_last_error() holds a message for the calling thread. Handles are
 * opaque and owned by the caller, released with the matching *_free.
 * Strings are UTF-8 and NUL-terminated. */
#ifndef FRED_H
#define FRED_H

#include <stddef.h>
#include <stdint.h>

#if defined(FRED_BUILDING_LIBRARY)
#define FRED_API __attribute__((visibility("default")))
#else
#define FRED_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fred_status {
  FRED_OK = 0,
  FRED_E_INVALID_ARGUMENT = 1,
  FRED_E_IO = 2,
  FRED_E_DECODE = 3,
  FRED_E_VALIDATION = 4,
  FRED_E_FORMAT = 5,
  FRED_E_NOT_FOUND = 6,
  FRED_E_LIMIT = 7,
  FRED_E_INTERNAL = 8
} fred_status;

typedef enum fred_side { FRED_SIDE_SOURCE = 0, FRED_SIDE_TARGET = 1 } fred_side;

typedef struct fred_vocab fred_vocab;
typedef struct fred_simfn fred_simfn;
typedef struct fred_corpus fred_corpus;
typedef struct fred_index fred_index;

FRED_API const char* fred_version(void);
FRED_API const char* fred_last_error(void);
FRED_API const char* fred_status_name(fred_status status);

/* NULL restores the default sink (stderr). */
typedef void (*fred_warning_fn)(const char* message, void* user);
FRED_API void fred_set_warning_callback(fred_warning_fn fn, void* user);

/* Subword vocabulary */
FRED_API fred_status fred_vocab_load(const char* path, fred_vocab** out);
/* marker NULL means U+2581. */
FRED_API fred_status fred_vocab_from_pieces(const char* const* pieces, size_t n, uint32_t unk_id, const char* marker,
                                            fred_vocab** out);
FRED_API void fred_vocab_free(fred_vocab* vocab);
FRED_API size_t fred_vocab_size(const fred_vocab* vocab);
FRED_API uint64_t fred_vocab_fingerprint(const fred_vocab* vocab);
/* Writes min(capacity, count) ids; *count receives the full length. */
FRED_API fred_status fred_vocab_encode(const fred_vocab* vocab, const char* text, uint32_t* ids, size_t capacity,
                                       size_t* count);

/* Tokenization. scheme: "ws13a" | "char" | "han_mixed" | "subword" (vocab
 * required for subword, ignored otherwise). policy: "latin_chars" |
 * "split_units". */
FRED_API fred_status fred_token_count(const char* scheme, const fred_vocab* vocab, const char* text, size_t* out);
FRED_API fred_status fred_char_count(const char* policy, const char* text, size_t* out);

/* Similarity. kind: "bleu" | "chrf" | "chrf++". bleu_tokenizer may be NULL
 * (ws13a). */
FRED_API fred_status fred_simfn_create(const char* kind, const char* bleu_tokenizer, const fred_vocab* vocab,
                                       fred_simfn** out);
FRED_API void fred_simfn_free(fred_simfn* fn);
FRED_API fred_status fred_similarity(const fred_simfn* fn, const char* hyp, const char* ref, double* out);

/* Parallel corpus */
FRED_API fred_status fred_corpus_load(const char* src_train, const char* tgt_train, const char* src_test,
                                      const char* tgt_test, int normalize_nfc, fred_corpus** out);
FRED_API fred_status fred_corpus_from_arrays(const char* const* train_src, const char* const* train_tgt,
                                             size_t n_train, const char* const* test_src,
                                             const char* const* test_tgt, size_t n_test, fred_corpus** out);
FRED_API void fred_corpus_free(fred_corpus* corpus);
FRED_API size_t fred_corpus_n_train(const fred_corpus* corpus);
FRED_API size_t fred_corpus_n_test(const fred_corpus* corpus);

/* Metrics. threads 0 = auto (FRED_THREADS or hardware concurrency). */
FRED_API fred_status fred_fertility(const fred_corpus* corpus, const char* scheme, const fred_vocab* vocab,
                                    const char* src_policy, const char* tgt_policy, double* f_score,
                                    fred_side* side_used);
FRED_API fred_status fred_retrieval_proxy(const fred_corpus* corpus, const fred_simfn* fn, unsigned threads,
                                          double* out);
FRED_API fred_status fred_corpus_diversity(const fred_corpus* corpus, const fred_simfn* fn, unsigned threads,
                                           double* out);
FRED_API fred_status fred_exposure(const fred_corpus* corpus, fred_side side, const fred_index* index,
                                   const fred_vocab* vocab, int n, unsigned threads, double* e_score,
                                   size_t* n_used);

/* N-gram count index */
FRED_API fred_status fred_index_build(const char* const* files, size_t n_files, const fred_vocab* vocab,
                                      uint64_t max_tokens, fred_index** out);
/* ids may contain 0xFFFFFFFF as a document separator. */
FRED_API fred_status fred_index_from_ids(const uint32_t* ids, size_t n, uint64_t vocab_fingerprint,
                                         fred_index** out);
/* expected may be NULL; a fingerprint mismatch only warns. */
FRED_API fred_status fred_index_load(const char* path, const fred_vocab* expected, fred_index** out);
FRED_API fred_status fred_index_save(const fred_index* index, const char* path);
FRED_API void fred_index_free(fred_index* index);
FRED_API uint64_t fred_index_size(const fred_index* index);
FRED_API fred_status fred_index_count(const fred_index* index, const uint32_t* gram, size_t n, uint64_t* out);

/* Command entry points. They print to stdout/stderr and return the process
 * exit code: 0 success, 1 partial failure, 2 usage or input error. */
typedef struct fred_score_args {
  const char* manifest;
  const char* out_dir;
  unsigned threads;
  const char* kinds;   /* comma list, e.g. "bleu,chrf,chrf++" */
  int exposure_n;
  const char* formats; /* comma list of tsv, json, markdown */
  int diagnostics;
} fred_score_args;

typedef struct fred_analyze_args {
  const char* matrix;
  const char* out_dir;
  const char* target;
  const char* features; /* comma list; NULL = every feature column */
  const char* band;     /* NULL = embedded band */
  const char* band_metric;
  double k;
  double r_ref_avg;
  double r_ref_mult;
  double f_threshold;
  const char* exclude;  /* comma list of pair ids */
} fred_analyze_args;

FRED_API void fred_score_args_init(fred_score_args* args);
FRED_API void fred_analyze_args_init(fred_analyze_args* args);

FRED_API int fred_cmd_index_build(const char* const* corpus, size_t n_corpus, const char* vocab, const char* out,
                                  uint64_t max_tokens);
FRED_API int fred_cmd_index_count(const char* index, const char* vocab, const char* text, int order);
FRED_API int fred_cmd_score(const fred_score_args* args);
FRED_API int fred_cmd_analyze(const fred_analyze_args* args);

#ifdef __cplusplus
}
#endif

#endif
