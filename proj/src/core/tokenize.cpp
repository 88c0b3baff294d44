#include "fred/tokenize.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fred/error.hpp"
#include "fred/unicode.hpp"

namespace fred {

// ---------------------------------------------------------------------------
// 13a and han_mixed

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool is_period_or_comma(char32_t c) { return c == U'.' || c == U','; }

// [\{-\~\[-\` -\&\(-\+\:-\@\/]
bool is_13a_punct(char32_t c) {
  return (c >= 0x7B && c <= 0x7E) || (c >= 0x5B && c <= 0x60) || (c >= 0x20 && c <= 0x26) ||
         (c >= 0x28 && c <= 0x2B) || (c >= 0x3A && c <= 0x40) || c == 0x2F;
}

// Leftmost non-overlapping substitution of a two-character pattern, which is
// how a regex engine applies `sub` for these fixed-width rules.
template <typename First, typename Second, typename Emit>
std::u32string substitute_pairs(const std::u32string& in, First first, Second second, Emit emit) {
  std::u32string out;
  out.reserve(in.size() + in.size() / 2);
  std::size_t i = 0;
  while (i < in.size()) {
    if (i + 1 < in.size() && first(in[i]) && second(in[i + 1])) {
      emit(out, in[i], in[i + 1]);
      i += 2;
    } else {
      out.push_back(in[i]);
      ++i;
    }
  }
  return out;
}

std::string apply_13a_rules(std::u32string line) {
  std::u32string padded;
  padded.reserve(line.size() * 2);
  for (char32_t c : line) {
    if (is_13a_punct(c)) {
      padded.push_back(U' ');
      padded.push_back(c);
      padded.push_back(U' ');
    } else {
      padded.push_back(c);
    }
  }
  auto not_digit = [](char32_t c) { return !is_ascii_digit(c); };
  padded = substitute_pairs(padded, not_digit, is_period_or_comma,
                            [](std::u32string& o, char32_t a, char32_t b) {
                              o.push_back(a);
                              o.push_back(U' ');
                              o.push_back(b);
                              o.push_back(U' ');
                            });
  padded = substitute_pairs(padded, is_period_or_comma, not_digit,
                            [](std::u32string& o, char32_t a, char32_t b) {
                              o.push_back(U' ');
                              o.push_back(a);
                              o.push_back(U' ');
                              o.push_back(b);
                            });
  padded = substitute_pairs(padded, is_ascii_digit, [](char32_t c) { return c == U'-'; },
                            [](std::u32string& o, char32_t a, char32_t b) {
                              o.push_back(a);
                              o.push_back(U' ');
                              o.push_back(b);
                              o.push_back(U' ');
                            });
  std::string out;
  out.reserve(padded.size());
  bool pending_space = false;
  for (char32_t c : padded) {
    if (unicode::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    unicode::append_utf8(out, c);
  }
  return out;
}

TokenStream split_to_stream(const std::string& line) {
  TokenStream out;
  for (auto w : unicode::split_whitespace(line)) out.emplace_back(w);
  return out;
}

}  // namespace

std::string tokenize_13a_line(std::string_view text) {
  std::string line(text);
  replace_all(line, "<skipped>", "");
  replace_all(line, "-\n", "");
  replace_all(line, "\n", " ");
  if (line.find('&') != std::string::npos) {
    replace_all(line, "&quot;", "\"");
    replace_all(line, "&amp;", "&");
    replace_all(line, "&lt;", "<");
    replace_all(line, "&gt;", ">");
  }
  std::u32string u = U" ";
  u += unicode::decode(line);
  u += U' ';
  return apply_13a_rules(std::move(u));
}

bool is_cjk_ideograph(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF);
}

std::string tokenize_han_mixed_line(std::string_view text) {
  std::u32string spaced;
  for (char32_t c : unicode::decode(text)) {
    if (is_cjk_ideograph(c)) {
      spaced.push_back(U' ');
      spaced.push_back(c);
      spaced.push_back(U' ');
    } else {
      spaced.push_back(c);
    }
  }
  return apply_13a_rules(std::move(spaced));
}

// ---------------------------------------------------------------------------
// Subword vocabulary

struct SubwordVocab::Impl {
  std::vector<std::string> pieces;
  std::unordered_map<std::string_view, std::uint32_t> index;
  std::size_t max_piece_bytes = 0;
  std::uint32_t unk_id = 0;
  std::string marker;
  std::optional<std::uint32_t> marker_id;
  std::uint64_t fingerprint = 0;
};

SubwordVocab::SubwordVocab(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SubwordVocab SubwordVocab::from_pieces(std::vector<std::string> pieces, std::uint32_t unk_id,
                                       std::string marker) {
  if (pieces.empty()) raise(ErrorCode::Validation, "subword vocabulary is empty");
  if (pieces.size() >= kSeparatorId) {
    raise(ErrorCode::Limit, "subword vocabulary exceeds " + std::to_string(kSeparatorId - 1) + " pieces");
  }
  if (unk_id >= pieces.size()) {
    raise(ErrorCode::Validation, "unk id " + std::to_string(unk_id) + " is not a valid piece id");
  }
  if (marker.empty()) raise(ErrorCode::Validation, "word boundary marker must not be empty");

  auto impl = std::make_shared<Impl>();
  impl->pieces = std::move(pieces);
  impl->unk_id = unk_id;
  impl->marker = std::move(marker);
  impl->index.reserve(impl->pieces.size());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, impl->marker);
  h = fnv1a(h, std::string_view("\0", 1));
  h = fnv1a(h, std::to_string(unk_id));
  for (std::uint32_t id = 0; id < impl->pieces.size(); ++id) {
    const std::string& p = impl->pieces[id];
    if (p.empty()) raise(ErrorCode::Validation, "empty piece with id " + std::to_string(id));
    if (!impl->index.emplace(p, id).second) {
      raise(ErrorCode::Validation, "duplicate piece '" + p + "' with id " + std::to_string(id));
    }
    impl->max_piece_bytes = std::max(impl->max_piece_bytes, p.size());
    h = fnv1a(h, std::string_view("\0", 1));
    h = fnv1a(h, p);
  }
  impl->fingerprint = h;
  if (auto it = impl->index.find(impl->marker); it != impl->index.end()) impl->marker_id = it->second;
  return SubwordVocab(std::move(impl));
}

SubwordVocab SubwordVocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::NotFound, "vocab not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = std::move(buf).str();
  if (auto bad = unicode::find_invalid_utf8(data)) {
    raise(ErrorCode::Decode, path.string() + ": invalid UTF-8 at byte " + std::to_string(*bad));
  }
  std::vector<std::string> pieces;
  std::uint32_t unk = 0;
  std::string marker(kDefaultBoundaryMarker);
  std::size_t line_no = 0;
  std::istringstream lines(data);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (pieces.empty() && line.rfind("#unk=", 0) == 0) {
      const std::string v = line.substr(5);
      try {
        std::size_t used = 0;
        const unsigned long long id = std::stoull(v, &used);
        if (used != v.size() || id >= kSeparatorId) throw std::invalid_argument(v);
        unk = static_cast<std::uint32_t>(id);
      } catch (const std::exception&) {
        raise(ErrorCode::Format, path.string() + ": bad #unk header at line " + std::to_string(line_no));
      }
      continue;
    }
    if (pieces.empty() && line.rfind("#marker=", 0) == 0) {
      marker = line.substr(8);
      continue;
    }
    const std::string piece = line.substr(0, line.find('\t'));
    if (piece.empty()) {
      raise(ErrorCode::Format, path.string() + ": empty piece at line " + std::to_string(line_no));
    }
    pieces.push_back(piece);
  }
  return from_pieces(std::move(pieces), unk, std::move(marker));
}

std::size_t SubwordVocab::size() const { return impl_->pieces.size(); }
const std::string& SubwordVocab::piece(std::uint32_t id) const { return impl_->pieces.at(id); }
std::uint32_t SubwordVocab::unk_id() const { return impl_->unk_id; }
const std::string& SubwordVocab::marker() const { return impl_->marker; }
std::uint64_t SubwordVocab::fingerprint() const { return impl_->fingerprint; }

std::optional<std::uint32_t> SubwordVocab::find(std::string_view piece) const {
  auto it = impl_->index.find(piece);
  if (it == impl_->index.end()) return std::nullopt;
  return it->second;
}

namespace {

std::size_t utf8_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  return 4;
}

}  // namespace

std::vector<SubwordPiece> SubwordVocab::segment(std::string_view text) const {
  const Impl& v = *impl_;
  std::vector<SubwordPiece> out;
  std::string probe;
  for (std::string_view word : unicode::split_whitespace(text)) {
    std::vector<std::string_view> clusters;
    std::size_t pos = 0;
    bool word_start = true;
    while (pos < word.size()) {
      std::size_t best_len = 0;
      std::uint32_t best_id = 0;
      if (word_start && v.max_piece_bytes > v.marker.size()) {
        probe.assign(v.marker);
        for (std::size_t end = pos; end < word.size();) {
          end += utf8_len(static_cast<unsigned char>(word[end]));
          if (v.marker.size() + end - pos > v.max_piece_bytes) break;
          probe.resize(v.marker.size());
          probe.append(word.substr(pos, end - pos));
          if (auto it = v.index.find(probe); it != v.index.end()) {
            best_len = end - pos;
            best_id = it->second;
          }
        }
        if (best_len > 0) {
          out.push_back({best_id, word.substr(pos, best_len), true, false});
          pos += best_len;
          word_start = false;
          continue;
        }
      }
      if (word_start && v.marker_id) {
        out.push_back({*v.marker_id, word.substr(pos, 0), true, false});
        word_start = false;
      }
      for (std::size_t end = pos; end < word.size();) {
        end += utf8_len(static_cast<unsigned char>(word[end]));
        if (end - pos > v.max_piece_bytes) break;
        if (auto it = v.index.find(word.substr(pos, end - pos)); it != v.index.end()) {
          best_len = end - pos;
          best_id = it->second;
        }
      }
      if (best_len == 0) {
        if (clusters.empty()) clusters = unicode::graphemes(word);
        // Remainder of the cluster containing `pos`.
        std::size_t cluster_end = word.size();
        for (auto g : clusters) {
          const auto g_end = static_cast<std::size_t>(g.data() - word.data()) + g.size();
          if (g_end > pos) {
            cluster_end = g_end;
            break;
          }
        }
        best_len = cluster_end - pos;
        best_id = v.unk_id;
        out.push_back({best_id, word.substr(pos, best_len), word_start, true});
      } else {
        out.push_back({best_id, word.substr(pos, best_len), word_start, false});
      }
      pos += best_len;
      word_start = false;
    }
  }
  return out;
}

TokenIds SubwordVocab::encode(std::string_view text) const {
  TokenIds ids;
  for (const auto& p : segment(text)) ids.push_back(p.id);
  return ids;
}

TokenIds encode_ids(const SubwordVocab& vocab, std::string_view text) { return vocab.encode(text); }

// ---------------------------------------------------------------------------
// Schemes

const char* to_string(TokenizerScheme scheme) {
  switch (scheme) {
    case TokenizerScheme::Ws13a:
      return "ws13a";
    case TokenizerScheme::Char:
      return "char";
    case TokenizerScheme::HanMixed:
      return "han_mixed";
    case TokenizerScheme::Subword:
      return "subword";
  }
  return "?";
}

std::optional<TokenizerScheme> parse_tokenizer_scheme(std::string_view name) {
  if (name == "ws13a" || name == "13a") return TokenizerScheme::Ws13a;
  if (name == "char") return TokenizerScheme::Char;
  if (name == "han_mixed" || name == "zh") return TokenizerScheme::HanMixed;
  if (name == "subword") return TokenizerScheme::Subword;
  return std::nullopt;
}

void TokenizerSpec::validate() const {
  if (scheme == TokenizerScheme::Subword && (!vocab || vocab->size() == 0)) {
    raise(ErrorCode::Validation, "subword tokenizer requires a non-empty vocabulary");
  }
}

TokenStream tokenize(const TokenizerSpec& spec, std::string_view text) {
  switch (spec.scheme) {
    case TokenizerScheme::Ws13a:
      return split_to_stream(tokenize_13a_line(text));
    case TokenizerScheme::HanMixed:
      return split_to_stream(tokenize_han_mixed_line(text));
    case TokenizerScheme::Char: {
      TokenStream out;
      for (auto unit : unicode::split_whitespace(text)) {
        for (auto g : unicode::graphemes(unit)) out.emplace_back(g);
      }
      return out;
    }
    case TokenizerScheme::Subword: {
      spec.validate();
      TokenStream out;
      for (const auto& p : spec.vocab->segment(text)) out.push_back(spec.vocab->piece(p.id));
      return out;
    }
  }
  return {};
}

const char* to_string(CharPolicy policy) {
  return policy == CharPolicy::LatinChars ? "latin_chars" : "split_units";
}

std::optional<CharPolicy> parse_char_policy(std::string_view name) {
  if (name == "latin_chars") return CharPolicy::LatinChars;
  if (name == "split_units") return CharPolicy::SplitUnits;
  return std::nullopt;
}

std::size_t count_chars(CharPolicy policy, std::string_view text) {
  const auto units = unicode::split_whitespace(text);
  if (policy == CharPolicy::SplitUnits) return units.size();
  std::size_t n = 0;
  for (auto u : units) n += unicode::graphemes(u).size();
  return n;
}

}  // namespace fred
