#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace fred {

struct SentencePair {
  std::string source;
  std::string target;

  bool operator==(const SentencePair&) const = default;
};

enum class Side { Source, Target };

const char* to_string(Side side);

/// Train/test bitext for one language pair. Line order of the input files is
/// preserved; argmax tie-breaking in the retrieval metric depends on it.
struct ParallelCorpus {
  std::string pair_id;
  std::string src_lang;
  std::string tgt_lang;
  std::vector<SentencePair> train;
  std::vector<SentencePair> test;

  std::size_t n_train() const { return train.size(); }
  std::size_t n_test() const { return test.size(); }

  std::vector<std::string> test_side(Side side) const;
  std::vector<std::string> train_side(Side side) const;

  bool operator==(const ParallelCorpus&) const = default;
};

struct BitextPaths {
  std::filesystem::path src_train;
  std::filesystem::path tgt_train;
  std::filesystem::path src_test;
  std::filesystem::path tgt_test;
};

struct LoadOptions {
  bool normalize_nfc = false;
};

/// Reads a UTF-8 file as one segment per line. LF and CRLF endings are both
/// accepted; a final newline is optional. Empty lines and malformed UTF-8 are
/// fatal and name the 1-based line number.
std::vector<std::string> read_segments(const std::filesystem::path& path,
                                       const LoadOptions& options = {});

ParallelCorpus load_parallel_corpus(const BitextPaths& paths, const LoadOptions& options = {});

void write_segments(const std::filesystem::path& path, const std::vector<std::string>& lines);
void write_parallel_corpus(const ParallelCorpus& corpus, const BitextPaths& paths);

/// Checks the corpus invariants: N >= 1, M >= 1, no empty segment.
void validate(const ParallelCorpus& corpus);

}  // namespace fred
