#include "fred/manifest.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fred/error.hpp"

namespace fred {

const char* to_string(Direction d) { return d == Direction::IntoHigh ? "into-high" : "into-low"; }

Side ManifestEntry::resolved_exposure_side() const {
  if (exposure_side) return *exposure_side;
  return direction == Direction::IntoHigh ? Side::Target : Side::Source;
}

TokenizerScheme ManifestEntry::tokenizer(Side side) const {
  return side == Side::Source ? tokenizer_src : tokenizer_tgt;
}

CharPolicy ManifestEntry::char_policy(Side side) const {
  return side == Side::Source ? char_policy_src : char_policy_tgt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Drops a trailing "# ..." comment when the hash follows whitespace.
std::string_view strip_comment(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '#' && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) return s.substr(0, i);
  }
  return s;
}

struct Parser {
  std::string origin;
  std::filesystem::path base;
  std::size_t line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    raise(ErrorCode::Validation, origin + ":" + std::to_string(line_no) + ": " + msg);
  }

  std::filesystem::path resolve(std::string_view v) const {
    std::filesystem::path p{std::string(v)};
    return p.is_absolute() ? p : base / p;
  }

  TokenizerScheme scheme(std::string_view v) const {
    auto s = parse_tokenizer_scheme(v);
    if (!s) fail("unknown tokenizer policy '" + std::string(v) + "'");
    return *s;
  }

  CharPolicy policy(std::string_view v) const {
    auto p = parse_char_policy(v);
    if (!p) fail("unknown char policy '" + std::string(v) + "'");
    return *p;
  }

  void assign(ManifestEntry& e, std::set<std::string>& seen, std::string_view key, std::string_view value) {
    if (!seen.insert(std::string(key)).second) fail("duplicate key '" + std::string(key) + "'");
    if (value.empty()) fail("empty value for '" + std::string(key) + "'");
    if (key == "pair_id") {
      e.pair_id = value;
    } else if (key == "src_lang") {
      e.src_lang = value;
    } else if (key == "tgt_lang") {
      e.tgt_lang = value;
    } else if (key == "src_train" || key == "src_train_path") {
      e.paths.src_train = resolve(value);
    } else if (key == "tgt_train" || key == "tgt_train_path") {
      e.paths.tgt_train = resolve(value);
    } else if (key == "src_test" || key == "src_test_path") {
      e.paths.src_test = resolve(value);
    } else if (key == "tgt_test" || key == "tgt_test_path") {
      e.paths.tgt_test = resolve(value);
    } else if (key == "direction") {
      if (value == "into-high") {
        e.direction = Direction::IntoHigh;
      } else if (value == "into-low") {
        e.direction = Direction::IntoLow;
      } else {
        fail("direction must be into-high or into-low, got '" + std::string(value) + "'");
      }
    } else if (key == "tokenizer_src" || key == "tokenizer_policy_src") {
      e.tokenizer_src = scheme(value);
    } else if (key == "tokenizer_tgt" || key == "tokenizer_policy_tgt") {
      e.tokenizer_tgt = scheme(value);
    } else if (key == "char_policy_src") {
      e.char_policy_src = policy(value);
    } else if (key == "char_policy_tgt") {
      e.char_policy_tgt = policy(value);
    } else if (key == "subword_vocab" || key == "subword_vocab_path") {
      e.subword_vocab = resolve(value);
    } else if (key == "fertility_tokenizer") {
      if (value != "policy") e.fertility_tokenizer = scheme(value);
    } else if (key == "index") {
      e.index = resolve(value);
    } else if (key == "exposure_side") {
      if (value == "source") {
        e.exposure_side = Side::Source;
      } else if (value == "target") {
        e.exposure_side = Side::Target;
      } else {
        fail("exposure_side must be source or target");
      }
    } else if (key == "normalize") {
      if (value == "nfc") {
        e.normalize_nfc = true;
      } else if (value != "none") {
        fail("normalize must be none or nfc");
      }
    } else if (key.starts_with("external.")) {
      const std::string name(key.substr(9));
      if (name.empty()) fail("external score needs a name");
      const std::string text(value);
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        fail("external." + name + " is not a number: '" + text + "'");
      }
      if (used != text.size()) fail("external." + name + " is not a number: '" + text + "'");
      if (!std::isfinite(v)) fail("external." + name + " must be finite");
      e.external[name] = v;
    } else {
      fail("unknown key '" + std::string(key) + "'");
    }
  }
};

void check_entry(const ManifestEntry& e, const std::string& origin) {
  const std::string where = origin + ": entry '" + e.pair_id + "'";
  const std::pair<const char*, const std::filesystem::path*> required[] = {
      {"src_train", &e.paths.src_train},
      {"tgt_train", &e.paths.tgt_train},
      {"src_test", &e.paths.src_test},
      {"tgt_test", &e.paths.tgt_test},
  };
  for (const auto& [name, p] : required) {
    if (p->empty()) raise(ErrorCode::Validation, where + ": missing " + name);
  }
  const bool wants_vocab = e.tokenizer_src == TokenizerScheme::Subword ||
                           e.tokenizer_tgt == TokenizerScheme::Subword ||
                           e.fertility_tokenizer == TokenizerScheme::Subword || e.index.has_value();
  if (wants_vocab && !e.subword_vocab) {
    raise(ErrorCode::Validation, where + ": subword tokenization or an index requires subword_vocab");
  }
  auto must_exist = [&](const std::filesystem::path& p) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) raise(ErrorCode::NotFound, where + ": missing file " + p.string());
  };
  for (const auto& [name, p] : required) must_exist(*p);
  if (e.subword_vocab) must_exist(*e.subword_vocab);
  if (e.index) must_exist(*e.index);
}

}  // namespace

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               const std::string& origin) {
  Parser parser{origin, base_dir};
  DatasetManifest out;
  std::vector<std::set<std::string>> keys;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++parser.line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[entry]") parser.fail("unknown section " + std::string(line));
      out.entries.emplace_back();
      keys.emplace_back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parser.fail("expected 'key = value'");
    if (out.entries.empty()) parser.fail("key outside an [entry] section");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) parser.fail("empty key");
    parser.assign(out.entries.back(), keys.back(), key, value);
  }
  if (out.entries.empty()) raise(ErrorCode::Validation, origin + ": no [entry] sections");

  std::set<std::string> ids;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    auto& e = out.entries[i];
    if (e.pair_id.empty()) {
      raise(ErrorCode::Validation, origin + ": entry " + std::to_string(i + 1) + " has no pair_id");
    }
    if (!ids.insert(e.pair_id).second) {
      raise(ErrorCode::Validation, origin + ": duplicate pair_id '" + e.pair_id + "'");
    }
    check_entry(e, origin);
  }
  return out;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::NotFound, "manifest not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  auto m = parse_manifest(buf.str(), base, path.string());
  m.path = path;
  return m;
}

}  // namespace fred
