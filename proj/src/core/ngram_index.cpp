#include "fred/ngram_index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "fred/error.hpp"
#include "fred/suffix_array.hpp"
#include "fred/unicode.hpp"

namespace fred {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

namespace {

template <typename T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    T out{};
    auto* src = reinterpret_cast<const unsigned char*>(&v);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
    return out;
  } else {
    return v;
  }
}

template <typename T>
void write_array(std::ofstream& out, const std::vector<T>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
  } else {
    for (T x : v) {
      const T le = to_le(x);
      out.write(reinterpret_cast<const char*>(&le), sizeof(T));
    }
  }
}

template <typename T>
void read_array(std::ifstream& in, std::vector<T>& v) {
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& x : v) x = to_le(x);
  }
}

}  // namespace

NGramIndex::NGramIndex(std::vector<std::uint32_t> tokens, std::vector<std::uint64_t> sa, std::uint64_t fingerprint)
    : tokens_(std::move(tokens)), sa_(std::move(sa)), fingerprint_(fingerprint) {}

NGramIndex NGramIndex::from_documents(const std::vector<TokenIds>& documents, std::uint64_t vocab_fingerprint,
                                      const IndexBuildOptions& options) {
  if (documents.empty()) raise(ErrorCode::InvalidArgument, "no input documents");
  std::uint64_t total = documents.size() - 1;
  for (const auto& d : documents) total += d.size();
  if (total > options.max_tokens) {
    raise(ErrorCode::Limit, "token count " + std::to_string(total) + " exceeds the address width limit of " +
                                std::to_string(options.max_tokens) + " tokens");
  }
  std::vector<std::uint32_t> tokens;
  tokens.reserve(total);
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (i > 0) tokens.push_back(kSeparatorId);
    for (std::uint32_t t : documents[i]) {
      if (t == kSeparatorId) raise(ErrorCode::InvalidArgument, "document contains the reserved separator id");
      tokens.push_back(t);
    }
  }
  auto sa = build_suffix_array(tokens);
  return NGramIndex(std::move(tokens), std::move(sa), vocab_fingerprint);
}

NGramIndex NGramIndex::build(const std::vector<std::filesystem::path>& files, const SubwordVocab& vocab,
                             const IndexBuildOptions& options) {
  if (files.empty()) raise(ErrorCode::InvalidArgument, "no input documents");
  std::vector<TokenIds> documents;
  std::uint64_t total = 0;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot read corpus file '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (unicode::find_invalid_utf8(line)) {
        raise(ErrorCode::Decode, path.string() + ": invalid UTF-8 at line " + std::to_string(line_no));
      }
      documents.push_back(vocab.encode(line));
      total += documents.back().size() + 1;
      if (total > options.max_tokens + 1) {
        raise(ErrorCode::Limit, "token count exceeds the address width limit of " +
                                    std::to_string(options.max_tokens) + " tokens");
      }
    }
    if (in.bad()) raise(ErrorCode::Io, "read error on '" + path.string() + "'");
  }
  if (documents.empty()) raise(ErrorCode::InvalidArgument, "no input documents");
  return from_documents(documents, vocab.fingerprint(), options);
}

int NGramIndex::compare_prefix(std::uint64_t pos, std::span<const std::uint32_t> gram) const {
  const std::uint64_t avail = tokens_.size() - pos;
  const std::size_t k = static_cast<std::size_t>(std::min<std::uint64_t>(avail, gram.size()));
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint32_t a = tokens_[pos + i];
    if (a != gram[i]) return a < gram[i] ? -1 : 1;
  }
  return k < gram.size() ? -1 : 0;
}

std::uint64_t NGramIndex::count(std::span<const std::uint32_t> gram) const {
  if (gram.empty() || gram.size() > tokens_.size()) return 0;
  if (std::find(gram.begin(), gram.end(), kSeparatorId) != gram.end()) return 0;
  const auto lower = std::partition_point(sa_.begin(), sa_.end(),
                                          [&](std::uint64_t pos) { return compare_prefix(pos, gram) < 0; });
  const auto upper = std::partition_point(lower, sa_.end(),
                                          [&](std::uint64_t pos) { return compare_prefix(pos, gram) == 0; });
  return static_cast<std::uint64_t>(upper - lower);
}

void NGramIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::Io, "cannot write index '" + path.string() + "'");
  out.write(kIndexMagic, sizeof(kIndexMagic));
  const std::uint64_t len = to_le<std::uint64_t>(tokens_.size());
  const std::uint64_t fp = to_le(fingerprint_);
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(reinterpret_cast<const char*>(&fp), sizeof(fp));
  write_array(out, tokens_);
  write_array(out, sa_);
  out.flush();
  if (!out) raise(ErrorCode::Io, "write error on index '" + path.string() + "'");
}

NGramIndex NGramIndex::load(const std::filesystem::path& path, std::optional<std::uint64_t> expected_fingerprint) {
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) raise(ErrorCode::Io, "cannot read index '" + path.string() + "': " + ec.message());
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot read index '" + path.string() + "'");
  char magic[sizeof(kIndexMagic)] = {};
  in.read(magic, sizeof(magic));
  if (file_size < sizeof(kIndexMagic) || std::memcmp(magic, kIndexMagic, sizeof(kIndexMagic)) != 0) {
    raise(ErrorCode::Format, path.string() + ": not an index file");
  }
  if (file_size < kIndexHeaderBytes) raise(ErrorCode::Format, path.string() + ": truncated index file");
  std::uint64_t len = 0;
  std::uint64_t fp = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  in.read(reinterpret_cast<char*>(&fp), sizeof(fp));
  len = to_le(len);
  fp = to_le(fp);
  if (len > (file_size - kIndexHeaderBytes) / 12 || kIndexHeaderBytes + 12 * len != file_size) {
    raise(ErrorCode::Format, path.string() + ": truncated index file (header declares " + std::to_string(len) +
                                 " tokens, file has " + std::to_string(file_size) + " bytes)");
  }
  std::vector<std::uint32_t> tokens(len);
  std::vector<std::uint64_t> sa(len);
  read_array(in, tokens);
  read_array(in, sa);
  if (!in) raise(ErrorCode::Io, "read error on index '" + path.string() + "'");

  std::vector<bool> seen(len, false);
  for (std::uint64_t p : sa) {
    if (p >= len || seen[p]) raise(ErrorCode::Format, path.string() + ": corrupt suffix array");
    seen[p] = true;
  }
  if (expected_fingerprint && *expected_fingerprint != fp) {
    warn("index '" + path.string() + "' was built with a different vocabulary (fingerprint mismatch); "
         "counts may be meaningless");
  }
  return NGramIndex(std::move(tokens), std::move(sa), fp);
}

}  // namespace fred
