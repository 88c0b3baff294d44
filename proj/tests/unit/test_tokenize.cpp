#include <gtest/gtest.h>

#include <random>

#include "fred/error.hpp"
#include "fred/tokenize.hpp"
#include "test_util.hpp"

using namespace fred;

namespace {

const std::string kMark = std::string(kDefaultBoundaryMarker);

SubwordVocab abc_vocab() { return SubwordVocab::from_pieces({kMark + "a", "b", "<unk>"}, 2); }

std::size_t whitespace_units(const std::string& s) {
  std::istringstream in(s);
  std::string w;
  std::size_t n = 0;
  while (in >> w) ++n;
  return n;
}

}  // namespace

TEST(Tokenize, Ws13aSplitsPunctuation) {
  EXPECT_EQ(tokenize(TokenizerSpec::ws13a(), "Hello, world!"), (TokenStream{"Hello", ",", "world", "!"}));
}

TEST(Tokenize, Ws13aKeepsInnerNumberPunctuation) {
  EXPECT_EQ(tokenize_13a_line("costs 1,000.50 dollars."), "costs 1,000.50 dollars .");
  EXPECT_EQ(tokenize_13a_line("a&amp;b"), "a & b");
  EXPECT_EQ(tokenize_13a_line("  spaced   out  "), "spaced out");
}

TEST(Tokenize, CharSplitsGraphemes) {
  EXPECT_EQ(tokenize(TokenizerSpec::chars(), "abc"), (TokenStream{"a", "b", "c"}));
  EXPECT_EQ(tokenize(TokenizerSpec::chars(), "a b"), (TokenStream{"a", "b"}));
  // e + combining acute stays one cluster
  EXPECT_EQ(tokenize(TokenizerSpec::chars(), "e\xCC\x81x"), (TokenStream{"e\xCC\x81", "x"}));
}

TEST(Tokenize, HanMixed) {
  EXPECT_EQ(tokenize(TokenizerSpec::han_mixed(), "我喜欢 NLP"), (TokenStream{"我", "喜", "欢", "NLP"}));
  EXPECT_EQ(tokenize(TokenizerSpec::han_mixed(), "他说:hi!"), (TokenStream{"他", "说", ":", "hi", "!"}));
  EXPECT_TRUE(is_cjk_ideograph(U'一'));
  EXPECT_TRUE(is_cjk_ideograph(U'㐀'));
  EXPECT_FALSE(is_cjk_ideograph(U'あ'));
}

TEST(Tokenize, EmptyInput) {
  EXPECT_TRUE(tokenize(TokenizerSpec::ws13a(), "").empty());
  EXPECT_TRUE(tokenize(TokenizerSpec::chars(), "   ").empty());
}

TEST(Tokenize, SchemeNames) {
  EXPECT_EQ(parse_tokenizer_scheme("13a"), TokenizerScheme::Ws13a);
  EXPECT_EQ(parse_tokenizer_scheme("zh"), TokenizerScheme::HanMixed);
  EXPECT_EQ(parse_tokenizer_scheme("subword"), TokenizerScheme::Subword);
  EXPECT_FALSE(parse_tokenizer_scheme("spm"));
  EXPECT_STREQ(to_string(TokenizerScheme::Char), "char");
}

TEST(Tokenize, SubwordNeedsVocab) {
  TokenizerSpec spec{TokenizerScheme::Subword, nullptr};
  EXPECT_THROW(spec.validate(), Error);
  EXPECT_THROW(tokenize(spec, "x"), Error);
}

TEST(CountChars, Examples) {
  EXPECT_EQ(count_chars(CharPolicy::LatinChars, "the cat"), 6u);
  EXPECT_EQ(count_chars(CharPolicy::SplitUnits, "DINGIR MEŠ"), 2u);
  EXPECT_EQ(count_chars(CharPolicy::LatinChars, "a b c"), 3u);
  EXPECT_EQ(count_chars(CharPolicy::LatinChars, "MEŠ"), 3u);
  EXPECT_EQ(count_chars(CharPolicy::LatinChars, "e\xCC\x81"), 1u);
  EXPECT_EQ(count_chars(CharPolicy::SplitUnits, " a\tb  c "), 3u);
}

TEST(EncodeIds, Examples) {
  const auto v = abc_vocab();
  EXPECT_EQ(encode_ids(v, "ab"), (TokenIds{0, 1}));
  EXPECT_EQ(encode_ids(v, "zz"), (TokenIds{2, 2}));
  EXPECT_EQ(encode_ids(v, "a"), (TokenIds{0}));
  EXPECT_EQ(encode_ids(v, "ab a"), (TokenIds{0, 1, 0}));
}

TEST(EncodeIds, LongestMatchWins) {
  const auto v = SubwordVocab::from_pieces({"<unk>", kMark + "a", kMark + "ab", "c", "bc", kMark});
  EXPECT_EQ(encode_ids(v, "abc"), (TokenIds{2, 3}));
  EXPECT_EQ(encode_ids(v, "c"), (TokenIds{5, 3}));
}

TEST(Vocab, LoadHeadersAndScores) {
  fred::testing::TempDir dir;
  fred::testing::spit(dir / "v.txt", "#unk=1\n" + kMark + "x\t-1.5\n<unk>\ny\n");
  const auto v = SubwordVocab::load(dir / "v.txt");
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.unk_id(), 1u);
  EXPECT_EQ(v.piece(0), kMark + "x");
  EXPECT_EQ(v.find("y"), 2u);
  EXPECT_EQ(encode_ids(v, "xyq"), (TokenIds{0, 2, 1}));
}

TEST(Vocab, FingerprintTracksContent) {
  const auto a = abc_vocab();
  const auto b = abc_vocab();
  const auto c = SubwordVocab::from_pieces({kMark + "a", "c", "<unk>"}, 2);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(Vocab, Rejects) {
  EXPECT_THROW(SubwordVocab::from_pieces({}), Error);
  EXPECT_THROW(SubwordVocab::from_pieces({"a", "a"}), Error);
  EXPECT_THROW(SubwordVocab::from_pieces({"a"}, 3), Error);
  EXPECT_THROW(SubwordVocab::load("/nonexistent/vocab.txt"), Error);
}

// Properties over random text.

class TokenizeProperty : public ::testing::Test {
 protected:
  std::string random_text(std::mt19937& rng) {
    static const std::vector<std::string> atoms = {"a", "b", "ka", "Š", "ŋ", "e\xCC\x81", "1", ",", ".", "!",
                                                   "我", "喜", " ", " ", "  ", "-", "'", "\t"};
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
    std::uniform_int_distribution<int> len(1, 30);
    std::string s;
    for (int i = len(rng); i > 0; --i) s += atoms[pick(rng)];
    return s;
  }
};

TEST_F(TokenizeProperty, CharTokensEqualGraphemeCount) {
  std::mt19937 rng(11);
  for (int t = 0; t < 500; ++t) {
    const auto s = random_text(rng);
    EXPECT_EQ(tokenize(TokenizerSpec::chars(), s).size(), count_chars(CharPolicy::LatinChars, s)) << s;
  }
}

TEST_F(TokenizeProperty, SplitUnitsEqualsWhitespaceSplit) {
  std::mt19937 rng(12);
  for (int t = 0; t < 500; ++t) {
    const auto s = random_text(rng);
    EXPECT_EQ(count_chars(CharPolicy::SplitUnits, s), whitespace_units(s)) << s;
  }
}

TEST_F(TokenizeProperty, SubwordPiecesReassembleText) {
  const auto v = SubwordVocab::from_pieces(
      {"<unk>", kMark + "a", kMark + "ka", "a", "b", "ka", kMark, ",", "我", kMark + "我"});
  std::mt19937 rng(13);
  for (int t = 0; t < 500; ++t) {
    const auto s = random_text(rng);
    std::string words, joined;
    {
      std::istringstream in(s);
      std::string w;
      while (in >> w) words += w;
    }
    for (const auto& p : v.segment(s)) joined += p.source;
    EXPECT_EQ(joined, words) << s;
    EXPECT_EQ(v.encode(s).size(), v.segment(s).size());
  }
}

TEST_F(TokenizeProperty, Ws13aOnlyMovesWhitespace) {
  const auto strip = [](const std::string& x) {
    std::string out;
    for (char c : x) {
      if (c != ' ' && c != '\t') out += c;
    }
    return out;
  };
  std::mt19937 rng(14);
  for (int t = 0; t < 300; ++t) {
    const auto s = random_text(rng);
    const auto line = tokenize_13a_line(s);
    EXPECT_EQ(strip(line), strip(s)) << s;
    EXPECT_EQ(line.find("  "), std::string::npos) << s;
    if (!line.empty()) {
      EXPECT_NE(line.front(), ' ');
      EXPECT_NE(line.back(), ' ');
    }
  }
}
