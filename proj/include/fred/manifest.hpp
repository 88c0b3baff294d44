#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fred/corpus.hpp"
#include "fred/tokenize.hpp"

namespace fred {

enum class Direction { IntoHigh, IntoLow };
const char* to_string(Direction d);

/// One language pair of a scoring run.
///
/// Manifest syntax (one file, UTF-8):
///
///   # comment
///   [entry]
///   pair_id         = akk-en
///   src_lang        = akk
///   tgt_lang        = en
///   src_train       = data/train.akk
///   tgt_train       = data/train.en
///   src_test        = data/test.akk
///   tgt_test        = data/test.en
///   direction       = into-high          # or into-low
///   tokenizer_src   = ws13a              # ws13a | char | han_mixed | subword
///   tokenizer_tgt   = ws13a
///   char_policy_src = split_units        # latin_chars | split_units
///   char_policy_tgt = latin_chars
///   subword_vocab   = vocab.txt
///   fertility_tokenizer = subword        # policy | ws13a | char | han_mixed | subword
///   index           = pretrain.fredidx
///   exposure_side   = target             # source | target
///   normalize       = none               # none | nfc
///   external.reported = 32.10
///
/// Required: pair_id and the four paths. Relative paths resolve against the
/// manifest's directory.
struct ManifestEntry {
  std::string pair_id;
  std::string src_lang;
  std::string tgt_lang;
  BitextPaths paths;
  Direction direction = Direction::IntoHigh;
  TokenizerScheme tokenizer_src = TokenizerScheme::Ws13a;
  TokenizerScheme tokenizer_tgt = TokenizerScheme::Ws13a;
  CharPolicy char_policy_src = CharPolicy::LatinChars;
  CharPolicy char_policy_tgt = CharPolicy::LatinChars;
  std::optional<std::filesystem::path> subword_vocab;
  // Unset means: subword when a vocab is given, otherwise each side's policy.
  std::optional<TokenizerScheme> fertility_tokenizer;
  std::optional<std::filesystem::path> index;
  // Unset means the high-resource side implied by direction.
  std::optional<Side> exposure_side;
  bool normalize_nfc = false;
  std::map<std::string, double> external;

  Side resolved_exposure_side() const;
  TokenizerScheme tokenizer(Side side) const;
  CharPolicy char_policy(Side side) const;
};

struct DatasetManifest {
  std::filesystem::path path;
  std::vector<ManifestEntry> entries;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
/// Parses manifest text; `base_dir` anchors relative paths. File existence is
/// checked here too.
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               const std::string& origin = "<manifest>");

}  // namespace fred
