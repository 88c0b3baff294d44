#include <gtest/gtest.h>
#include <stdlib.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "fred/fred.h"

namespace {

std::string temp_dir() {
  char tmpl[] = "/tmp/fred_capi_XXXXXX";
  const char* d = mkdtemp(tmpl);
  return d ? d : "";
}

void write_file(const std::string& path, const std::string& text) {
  FILE* f = std::fopen(path.c_str(), "wb");
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

struct Warnings {
  std::vector<std::string> seen;
  static void collect(const char* m, void* user) { static_cast<Warnings*>(user)->seen.emplace_back(m); }
};

const char* kPieces[] = {"<unk>", "\xE2\x96\x81w", "\xE2\x96\x81x", "\xE2\x96\x81y", "\xE2\x96\x81z"};

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_GT(std::strlen(fred_version()), 0u);
  EXPECT_STREQ(fred_status_name(FRED_OK), "ok");
  EXPECT_STRNE(fred_status_name(FRED_E_FORMAT), fred_status_name(FRED_E_IO));
}

TEST(CApi, NullArgumentsAreRejected) {
  fred_vocab* v = nullptr;
  EXPECT_EQ(fred_vocab_load(nullptr, &v), FRED_E_INVALID_ARGUMENT);
  EXPECT_GT(std::strlen(fred_last_error()), 0u);
  double out = 0;
  EXPECT_EQ(fred_similarity(nullptr, "a", "a", &out), FRED_E_INVALID_ARGUMENT);
  fred_vocab_free(nullptr);
  fred_corpus_free(nullptr);
  fred_index_free(nullptr);
  fred_simfn_free(nullptr);
}

TEST(CApi, VocabEncode) {
  const char* pieces[] = {"\xE2\x96\x81" "a", "b", "<unk>"};
  fred_vocab* v = nullptr;
  ASSERT_EQ(fred_vocab_from_pieces(pieces, 3, 2, nullptr, &v), FRED_OK);
  EXPECT_EQ(fred_vocab_size(v), 3u);
  uint32_t ids[4];
  size_t n = 0;
  ASSERT_EQ(fred_vocab_encode(v, "ab", ids, 4, &n), FRED_OK);
  ASSERT_EQ(n, 2u);
  EXPECT_EQ(ids[0], 0u);
  EXPECT_EQ(ids[1], 1u);
  ASSERT_EQ(fred_vocab_encode(v, "zz zz", ids, 1, &n), FRED_OK);
  EXPECT_EQ(n, 4u);
  EXPECT_EQ(ids[0], 2u);
  fred_vocab_free(v);
  EXPECT_EQ(fred_vocab_from_pieces(pieces, 3, 9, nullptr, &v), FRED_E_VALIDATION);
}

TEST(CApi, TokenAndCharCounts) {
  size_t n = 0;
  ASSERT_EQ(fred_token_count("ws13a", nullptr, "Hello, world!", &n), FRED_OK);
  EXPECT_EQ(n, 4u);
  ASSERT_EQ(fred_char_count("latin_chars", "the cat", &n), FRED_OK);
  EXPECT_EQ(n, 6u);
  ASSERT_EQ(fred_char_count("split_units", "DINGIR MEŠ", &n), FRED_OK);
  EXPECT_EQ(n, 2u);
  EXPECT_EQ(fred_token_count("subword", nullptr, "x", &n), FRED_E_INVALID_ARGUMENT);
  EXPECT_EQ(fred_token_count("mecab", nullptr, "x", &n), FRED_E_INVALID_ARGUMENT);
}

TEST(CApi, SimilarityAndCorpusMetrics) {
  fred_simfn* bleu = nullptr;
  ASSERT_EQ(fred_simfn_create("bleu", nullptr, nullptr, &bleu), FRED_OK);
  double s = 0;
  ASSERT_EQ(fred_similarity(bleu, "the cat sat", "the cat sat", &s), FRED_OK);
  EXPECT_EQ(s, 100.0);

  const char* tr_s[] = {"a b", "c d"};
  const char* tr_t[] = {"p q", "r s"};
  const char* te_s[] = {"a b"};
  const char* te_t[] = {"p q"};
  fred_corpus* c = nullptr;
  ASSERT_EQ(fred_corpus_from_arrays(tr_s, tr_t, 2, te_s, te_t, 1, &c), FRED_OK);
  EXPECT_EQ(fred_corpus_n_train(c), 2u);
  EXPECT_EQ(fred_corpus_n_test(c), 1u);
  double r = 0, d = 0;
  ASSERT_EQ(fred_retrieval_proxy(c, bleu, 2, &r), FRED_OK);
  EXPECT_EQ(r, 100.0);
  ASSERT_EQ(fred_corpus_diversity(c, bleu, 2, &d), FRED_OK);
  EXPECT_GT(d, 0.0);
  EXPECT_LT(d, 100.0);
  double f = 0;
  fred_side side = FRED_SIDE_TARGET;
  ASSERT_EQ(fred_fertility(c, "ws13a", nullptr, "latin_chars", "latin_chars", &f, &side), FRED_OK);
  EXPECT_DOUBLE_EQ(f, 1.0);
  EXPECT_EQ(side, FRED_SIDE_SOURCE);

  fred_corpus* bad = nullptr;
  const char* empty[] = {""};
  EXPECT_EQ(fred_corpus_from_arrays(empty, tr_t, 1, te_s, te_t, 1, &bad), FRED_E_VALIDATION);
  EXPECT_EQ(fred_simfn_create("ter", nullptr, nullptr, &bleu), FRED_E_INVALID_ARGUMENT);
  fred_corpus_free(c);
  fred_simfn_free(bleu);
}

TEST(CApi, IndexCountSaveLoadAndExposure) {
  const uint32_t ids[] = {1, 2, 3, 4, 1, 2, 3, 4};
  fred_vocab* v = nullptr;
  ASSERT_EQ(fred_vocab_from_pieces(kPieces, 5, 0, nullptr, &v), FRED_OK);
  fred_index* idx = nullptr;
  ASSERT_EQ(fred_index_from_ids(ids, 8, fred_vocab_fingerprint(v), &idx), FRED_OK);
  EXPECT_EQ(fred_index_size(idx), 8u);
  uint64_t n = 0;
  ASSERT_EQ(fred_index_count(idx, ids, 4, &n), FRED_OK);
  EXPECT_EQ(n, 2u);

  const auto dir = temp_dir();
  const auto path = dir + "/i.idx";
  ASSERT_EQ(fred_index_save(idx, path.c_str()), FRED_OK);
  fred_index* back = nullptr;
  ASSERT_EQ(fred_index_load(path.c_str(), v, &back), FRED_OK);
  ASSERT_EQ(fred_index_count(back, ids + 1, 3, &n), FRED_OK);
  EXPECT_EQ(n, 2u);

  const char* tr[] = {"w"};
  const char* te_t[] = {"w x y z"};
  fred_corpus* c = nullptr;
  ASSERT_EQ(fred_corpus_from_arrays(tr, tr, 1, tr, te_t, 1, &c), FRED_OK);
  double e = 0;
  size_t used = 0;
  ASSERT_EQ(fred_exposure(c, FRED_SIDE_TARGET, back, v, 4, 1, &e, &used), FRED_OK);
  EXPECT_DOUBLE_EQ(e, 2.0);
  EXPECT_EQ(used, 1u);

  write_file(dir + "/junk.idx", "not an index at all, clearly");
  fred_index* junk = nullptr;
  EXPECT_EQ(fred_index_load((dir + "/junk.idx").c_str(), nullptr, &junk), FRED_E_FORMAT);
  EXPECT_NE(std::string(fred_last_error()).find("not an index file"), std::string::npos);

  fred_corpus_free(c);
  fred_index_free(back);
  fred_index_free(idx);
  fred_vocab_free(v);
  std::filesystem::remove_all(dir);
}

TEST(CApi, WarningCallback) {
  const uint32_t ids[] = {1, 2};
  fred_index* idx = nullptr;
  ASSERT_EQ(fred_index_from_ids(ids, 2, 1, &idx), FRED_OK);
  fred_vocab* v = nullptr;
  ASSERT_EQ(fred_vocab_from_pieces(kPieces, 5, 0, nullptr, &v), FRED_OK);
  const auto dir = temp_dir();
  const auto path = dir + "/i.idx";
  ASSERT_EQ(fred_index_save(idx, path.c_str()), FRED_OK);
  Warnings w;
  fred_set_warning_callback(&Warnings::collect, &w);
  fred_index* back = nullptr;
  ASSERT_EQ(fred_index_load(path.c_str(), v, &back), FRED_OK);
  fred_set_warning_callback(nullptr, nullptr);
  ASSERT_EQ(w.seen.size(), 1u);
  EXPECT_NE(w.seen[0].find("fingerprint"), std::string::npos);
  fred_index_free(back);
  fred_index_free(idx);
  fred_vocab_free(v);
  std::filesystem::remove_all(dir);
}

TEST(CApi, IndexBuildFromFiles) {
  const auto dir = temp_dir();
  write_file(dir + "/c.txt", "w x\n\ny z w\n");
  fred_vocab* v = nullptr;
  ASSERT_EQ(fred_vocab_from_pieces(kPieces, 5, 0, nullptr, &v), FRED_OK);
  const std::string file = dir + "/c.txt";
  const char* files[] = {file.c_str()};
  fred_index* idx = nullptr;
  ASSERT_EQ(fred_index_build(files, 1, v, 0, &idx), FRED_OK);
  EXPECT_EQ(fred_index_size(idx), 6u);
  fred_index_free(idx);
  EXPECT_EQ(fred_index_build(files, 1, v, 3, &idx), FRED_E_LIMIT);
  EXPECT_EQ(fred_index_build(files, 0, v, 0, &idx), FRED_E_INVALID_ARGUMENT);
  fred_vocab_free(v);
  std::filesystem::remove_all(dir);
}

TEST(CApi, CommandEntryPointsReportUsageErrors) {
  fred_score_args s;
  fred_score_args_init(&s);
  EXPECT_EQ(s.exposure_n, 4);
  s.manifest = "/nonexistent/m.manifest";
  s.out_dir = "/tmp";
  EXPECT_EQ(fred_cmd_score(&s), 2);
  fred_analyze_args a;
  fred_analyze_args_init(&a);
  EXPECT_DOUBLE_EQ(a.k, 1.0);
  EXPECT_DOUBLE_EQ(a.r_ref_avg, 3.24);
  a.matrix = "/nonexistent/m.tsv";
  a.out_dir = "/tmp";
  EXPECT_EQ(fred_cmd_analyze(&a), 2);
  EXPECT_EQ(fred_cmd_score(nullptr), 2);
}
