#include "fred/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fred/error.hpp"
#include "fred/unicode.hpp"

namespace fred {

const char* to_string(Side side) { return side == Side::Source ? "source" : "target"; }

std::vector<std::string> ParallelCorpus::test_side(Side side) const {
  std::vector<std::string> out;
  out.reserve(test.size());
  for (const auto& p : test) out.push_back(side == Side::Source ? p.source : p.target);
  return out;
}

std::vector<std::string> ParallelCorpus::train_side(Side side) const {
  std::vector<std::string> out;
  out.reserve(train.size());
  for (const auto& p : train) out.push_back(side == Side::Source ? p.source : p.target);
  return out;
}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) raise(ErrorCode::Io, "read error on '" + path.string() + "'");
  return std::move(buf).str();
}

std::size_t line_of_offset(const std::string& data, std::size_t offset) {
  return 1 + static_cast<std::size_t>(std::count(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

std::vector<std::string> read_segments(const std::filesystem::path& path, const LoadOptions& options) {
  const std::string data = slurp(path);
  if (auto bad = unicode::find_invalid_utf8(data)) {
    raise(ErrorCode::Decode, path.string() + ": invalid UTF-8 at line " +
                                 std::to_string(line_of_offset(data, *bad)));
  }
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t end = data.find('\n', start);
    const bool last = end == std::string::npos;
    if (last) end = data.size();
    std::string_view line(data.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      raise(ErrorCode::Validation,
            path.string() + ": empty line at line " + std::to_string(lines.size() + 1));
    }
    lines.emplace_back(options.normalize_nfc ? unicode::to_nfc(line) : std::string(line));
    start = end + 1;
  }
  return lines;
}

namespace {

std::vector<SentencePair> zip_split(const std::filesystem::path& src, const std::filesystem::path& tgt,
                                    const char* split, const LoadOptions& options) {
  auto s = read_segments(src, options);
  auto t = read_segments(tgt, options);
  if (s.size() != t.size()) {
    raise(ErrorCode::Validation, std::string("misaligned bitext in ") + split + " split: " +
                                     src.string() + " has " + std::to_string(s.size()) + " lines, " +
                                     tgt.string() + " has " + std::to_string(t.size()));
  }
  if (s.empty()) raise(ErrorCode::Validation, std::string(split) + " split is empty: " + src.string());
  std::vector<SentencePair> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({std::move(s[i]), std::move(t[i])});
  return out;
}

}  // namespace

ParallelCorpus load_parallel_corpus(const BitextPaths& paths, const LoadOptions& options) {
  ParallelCorpus c;
  c.train = zip_split(paths.src_train, paths.tgt_train, "train", options);
  c.test = zip_split(paths.src_test, paths.tgt_test, "test", options);
  return c;
}

void write_segments(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::Io, "cannot write '" + path.string() + "'");
  for (const auto& l : lines) out << l << '\n';
  if (!out) raise(ErrorCode::Io, "write error on '" + path.string() + "'");
}

void write_parallel_corpus(const ParallelCorpus& corpus, const BitextPaths& paths) {
  write_segments(paths.src_train, corpus.train_side(Side::Source));
  write_segments(paths.tgt_train, corpus.train_side(Side::Target));
  write_segments(paths.src_test, corpus.test_side(Side::Source));
  write_segments(paths.tgt_test, corpus.test_side(Side::Target));
}

void validate(const ParallelCorpus& corpus) {
  if (corpus.train.empty()) raise(ErrorCode::Validation, "corpus has no training pairs");
  if (corpus.test.empty()) raise(ErrorCode::Validation, "corpus has no test pairs");
  auto check = [](const std::vector<SentencePair>& v, const char* split) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].source.empty() || v[i].target.empty()) {
        raise(ErrorCode::Validation,
              std::string("empty segment in ") + split + " pair " + std::to_string(i + 1));
      }
    }
  };
  check(corpus.train, "train");
  check(corpus.test, "test");
}

}  // namespace fred
