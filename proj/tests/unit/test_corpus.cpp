#include <gtest/gtest.h>

#include <functional>

#include "fred/corpus.hpp"
#include "fred/error.hpp"
#include "test_util.hpp"

using namespace fred;
using fred::testing::spit;
using fred::testing::TempDir;

namespace {

BitextPaths write_bitext(const TempDir& dir, const std::string& src_train, const std::string& tgt_train,
                         const std::string& src_test, const std::string& tgt_test) {
  BitextPaths p{dir / "train.src", dir / "train.tgt", dir / "test.src", dir / "test.tgt"};
  spit(p.src_train, src_train);
  spit(p.tgt_train, tgt_train);
  spit(p.src_test, src_test);
  spit(p.tgt_test, tgt_test);
  return p;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST(Corpus, CountsLines) {
  TempDir dir;
  auto p = write_bitext(dir, "a b\nc d\n", "x y\nz w\n", "e f\n", "u v\n");
  const auto c = load_parallel_corpus(p);
  EXPECT_EQ(c.n_train(), 2u);
  EXPECT_EQ(c.n_test(), 1u);
  EXPECT_EQ(c.train[1].source, "c d");
  EXPECT_EQ(c.test[0].target, "u v");
}

TEST(Corpus, MisalignedBitextNamesBothCounts) {
  TempDir dir;
  auto p = write_bitext(dir, "a\nb\nc\n", "x\ny\n", "e\n", "u\n");
  try {
    load_parallel_corpus(p);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("misaligned bitext"), std::string::npos);
    EXPECT_NE(msg.find("3"), std::string::npos);
    EXPECT_NE(msg.find("2"), std::string::npos);
  }
}

TEST(Corpus, InvalidUtf8ReportsLine) {
  TempDir dir;
  auto p = write_bitext(dir, "\xFF\n", "x\n", "e\n", "u\n");
  try {
    load_parallel_corpus(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Decode);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  spit(dir / "bad.txt", "ok\nfine\nbad \xC3\x28 here\n");
  try {
    read_segments(dir / "bad.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Corpus, RejectsOverlongAndSurrogates) {
  TempDir dir;
  spit(dir / "a.txt", "\xC0\xAF\n");
  EXPECT_EQ(code_of([&] { read_segments(dir / "a.txt"); }), ErrorCode::Decode);
  spit(dir / "b.txt", "\xED\xA0\x80\n");
  EXPECT_EQ(code_of([&] { read_segments(dir / "b.txt"); }), ErrorCode::Decode);
}

TEST(Corpus, EmptyLineIsValidationError) {
  TempDir dir;
  auto p = write_bitext(dir, "a\n\nb\n", "x\ny\nz\n", "e\n", "u\n");
  try {
    load_parallel_corpus(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Validation);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Corpus, CrlfAndMissingFinalNewline) {
  TempDir dir;
  spit(dir / "a.txt", "one\r\ntwo\r\nthree");
  const auto lines = read_segments(dir / "a.txt");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "one");
  EXPECT_EQ(lines[2], "three");
}

TEST(Corpus, TabsInsideSentencesAreKept) {
  TempDir dir;
  spit(dir / "a.txt", "col1\tcol2\n");
  EXPECT_EQ(read_segments(dir / "a.txt")[0], "col1\tcol2");
}

TEST(Corpus, EmptySplitIsAnError) {
  TempDir dir;
  auto p = write_bitext(dir, "a\n", "x\n", "", "");
  EXPECT_EQ(code_of([&] { load_parallel_corpus(p); }), ErrorCode::Validation);
}

TEST(Corpus, MissingFileIsIoError) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { read_segments(dir / "nope.txt"); }), ErrorCode::Io);
}

TEST(Corpus, NfcIsOptIn) {
  TempDir dir;
  spit(dir / "a.txt", "e\xCC\x81\n");  // e + combining acute
  EXPECT_EQ(read_segments(dir / "a.txt")[0], "e\xCC\x81");
  EXPECT_EQ(read_segments(dir / "a.txt", LoadOptions{true})[0], "\xC3\xA9");
}

TEST(Corpus, LoadingTwiceIsIdentical) {
  TempDir dir;
  auto p = write_bitext(dir, "a b\nc d\n", "x y\nz w\n", "e f\n", "u v\n");
  EXPECT_EQ(load_parallel_corpus(p), load_parallel_corpus(p));
}

TEST(Corpus, RoundTrip) {
  TempDir dir;
  ParallelCorpus c;
  c.train = {{"alpha beta", "gamma"}, {"ä ö ü", "tab\there"}, {"我喜欢", "x"}};
  c.test = {{"t1", "u1"}, {"t2 \xF0\x9F\x98\x80", "u2"}};
  BitextPaths p{dir / "a", dir / "b", dir / "c", dir / "d"};
  write_parallel_corpus(c, p);
  EXPECT_EQ(load_parallel_corpus(p), c);
}

TEST(Corpus, ValidateRejectsEmptySegments) {
  ParallelCorpus c;
  c.train = {{"a", ""}};
  c.test = {{"b", "c"}};
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::Validation);
  c.train = {};
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::Validation);
}
