#include "fred/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "fred/error.hpp"
#include "json.hpp"

namespace fred {

const char* to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::Tsv:
      return "tsv";
    case ReportFormat::Json:
      return "json";
    case ReportFormat::Markdown:
      return "markdown";
  }
  return "?";
}

std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string format_exposure(double v) {
  if (v > 0 && v < 0.01) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
  }
  return format_score(v);
}

namespace {

std::string opt_external(const FredScores& s, const std::string& name) {
  const auto it = s.external.find(name);
  return it == s.external.end() ? std::string() : format_score(it->second);
}

std::set<std::string> external_names(const ScoreReport& r) {
  std::set<std::string> names;
  for (const auto& e : r.entries) {
    for (const auto& [k, v] : e.external) names.insert(k);
  }
  return names;
}

std::string kind_label(SimilarityKind k) { return to_string(k); }

std::string joined_scores(const std::map<SimilarityKind, double>& m, const std::vector<SimilarityKind>& kinds) {
  std::string out;
  for (auto k : kinds) {
    if (!out.empty()) out += " / ";
    const auto it = m.find(k);
    out += it == m.end() ? std::string() : format_score(it->second);
  }
  return out;
}

std::string kinds_header(const std::vector<SimilarityKind>& kinds) {
  std::string out;
  for (auto k : kinds) {
    if (!out.empty()) out += " / ";
    out += kind_label(k);
  }
  return out;
}

bool any_missing_e(const ScoreReport& r) {
  for (const auto& e : r.entries) {
    if (!e.e_score) return true;
  }
  return false;
}

}  // namespace

std::string scores_tsv(const ScoreReport& report) {
  std::string out =
      "pair_id\tsrc_lang\ttgt_lang\tn_train\tn_test\tn_token\tf_score\tf_side\tf_source\tf_target\t"
      "fertility_tokenizer\tchar_policy_src\tchar_policy_tgt\tbleu_tokenizer_src\tbleu_tokenizer_tgt";
  for (auto k : report.kinds) out += std::string("\tr_") + kind_label(k);
  for (auto k : report.kinds) out += std::string("\td_") + kind_label(k);
  out += "\te_score\te_ngrams\te_order\texposure_side";
  const auto ext = external_names(report);
  for (const auto& n : ext) out += "\t" + n;
  out += "\n";
  for (const auto& s : report.entries) {
    out += s.pair_id + "\t" + s.src_lang + "\t" + s.tgt_lang + "\t" + std::to_string(s.n_train) + "\t" +
           std::to_string(s.n_test) + "\t" + format_score(s.n_token_mean) + "\t" + format_score(s.fertility.f_score) +
           "\t" + to_string(s.fertility.side_used) + "\t" + format_score(s.fertility.f_source) + "\t" +
           format_score(s.fertility.f_target) + "\t" + s.fertility_tokenizer + "\t" + to_string(s.char_policy_src) +
           "\t" + to_string(s.char_policy_tgt) + "\t" + to_string(s.bleu_tokenizer_src) + "\t" +
           to_string(s.bleu_tokenizer_tgt);
    for (auto k : report.kinds) out += "\t" + (s.r_score.count(k) ? format_score(s.r_score.at(k)) : std::string());
    for (auto k : report.kinds) out += "\t" + (s.d_score.count(k) ? format_score(s.d_score.at(k)) : std::string());
    out += "\t" + (s.e_score ? format_exposure(*s.e_score) : std::string());
    out += "\t" + (s.e_score ? std::to_string(s.e_ngrams) : std::string());
    out += "\t" + std::to_string(s.e_order) + "\t" + to_string(s.exposure_side);
    for (const auto& n : ext) out += "\t" + opt_external(s, n);
    out += "\n";
  }
  return out;
}

std::string scores_json(const ScoreReport& report) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["kinds"] = ordered_json::array();
  for (auto k : report.kinds) root["kinds"].push_back(kind_label(k));
  root["entries"] = ordered_json::array();
  for (const auto& s : report.entries) {
    ordered_json e;
    e["pair_id"] = s.pair_id;
    e["src_lang"] = s.src_lang;
    e["tgt_lang"] = s.tgt_lang;
    e["n_train"] = s.n_train;
    e["n_test"] = s.n_test;
    e["n_token_mean"] = s.n_token_mean;
    ordered_json f;
    f["f_score"] = s.fertility.f_score;
    f["side_used"] = to_string(s.fertility.side_used);
    f["f_source"] = s.fertility.f_source;
    f["f_target"] = s.fertility.f_target;
    f["tokens_source"] = s.fertility.tokens_source;
    f["chars_source"] = s.fertility.chars_source;
    f["tokens_target"] = s.fertility.tokens_target;
    f["chars_target"] = s.fertility.chars_target;
    f["tokenizer"] = s.fertility_tokenizer;
    f["char_policy_src"] = to_string(s.char_policy_src);
    f["char_policy_tgt"] = to_string(s.char_policy_tgt);
    f["aggregation"] = "ratio_of_sums";
    f["split"] = "test";
    e["fertility"] = f;
    e["bleu_tokenizer"] = {{"src", to_string(s.bleu_tokenizer_src)}, {"tgt", to_string(s.bleu_tokenizer_tgt)}};
    ordered_json r = ordered_json::object(), d = ordered_json::object();
    for (auto k : report.kinds) {
      if (s.r_score.count(k)) r[kind_label(k)] = s.r_score.at(k);
      if (s.d_score.count(k)) d[kind_label(k)] = s.d_score.at(k);
    }
    e["r_score"] = r;
    e["d_score"] = d;
    e["e_score"] = s.e_score ? ordered_json(*s.e_score) : ordered_json(nullptr);
    e["e_ngrams"] = s.e_score ? ordered_json(s.e_ngrams) : ordered_json(nullptr);
    e["e_order"] = s.e_order;
    e["exposure_side"] = to_string(s.exposure_side);
    ordered_json ext = ordered_json::object();
    for (const auto& [k, v] : s.external) ext[k] = v;
    e["external"] = ext;
    root["entries"].push_back(e);
  }
  root["failures"] = ordered_json::array();
  for (const auto& f : report.failures) root["failures"].push_back({{"pair_id", f.pair_id}, {"error", f.message}});
  return root.dump(2) + "\n";
}

std::string combined_table_tsv(const ScoreReport& report) {
  const auto kh = kinds_header(report.kinds);
  std::string out = "Lang\tN_train\tN_token\tF\tE\tD (" + kh + ")\tR (" + kh + ")\tReported\n";
  for (const auto& s : report.entries) {
    out += s.pair_id + "\t" + std::to_string(s.n_train) + "\t" + format_score(s.n_token_mean) + "\t" +
           format_score(s.fertility.f_score) + "\t" + (s.e_score ? format_exposure(*s.e_score) : std::string()) +
           "\t" + joined_scores(s.d_score, report.kinds) + "\t" + joined_scores(s.r_score, report.kinds) + "\t" +
           opt_external(s, "reported") + "\n";
  }
  return out;
}

std::string combined_table_markdown(const ScoreReport& report) {
  const auto kh = kinds_header(report.kinds);
  std::string out = "| Lang | N_train | N_token | F | E | D (" + kh + ") | R (" + kh + ") | Reported |\n";
  out += "|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& s : report.entries) {
    out += "| " + s.pair_id + " | " + std::to_string(s.n_train) + " | " + format_score(s.n_token_mean) + " | " +
           format_score(s.fertility.f_score) + " | " + (s.e_score ? format_exposure(*s.e_score) : std::string()) +
           " | " + joined_scores(s.d_score, report.kinds) + " | " + joined_scores(s.r_score, report.kinds) + " | " +
           opt_external(s, "reported") + " |\n";
  }
  out += "\n";
  out += "F: ratio of summed tokens to summed characters on the test split, larger side reported.\n";
  for (const auto& s : report.entries) {
    out += "- " + s.pair_id + ": F side " + to_string(s.fertility.side_used) + ", tokenizer " +
           s.fertility_tokenizer + ", char policy " + to_string(s.char_policy_src) + "/" +
           to_string(s.char_policy_tgt) + "; E on " + to_string(s.exposure_side) + " side, n=" +
           std::to_string(s.e_order) + "\n";
  }
  if (any_missing_e(report)) out += "\nE blank: no pre-training index supplied for that entry.\n";
  if (!report.failures.empty()) {
    out += "\nFailed entries:\n";
    for (const auto& f : report.failures) out += "- " + f.pair_id + ": " + f.message + "\n";
  }
  return out;
}

FeatureMatrix feature_matrix(const ScoreReport& report) {
  FeatureMatrix m;
  m.columns = {"n_train", "n_token", "f_score", "r_score", "d_score", "e_score"};
  const auto ext = external_names(report);
  for (const auto& n : ext) {
    if (n != m.target_name) m.columns.push_back(n);
  }
  const auto primary = report.kinds.empty() ? SimilarityKind::Bleu : report.kinds.front();
  for (const auto& s : report.entries) {
    std::vector<std::optional<double>> v;
    v.emplace_back(static_cast<double>(s.n_train));
    v.emplace_back(s.n_token_mean);
    v.emplace_back(s.fertility.f_score);
    v.push_back(s.r_score.count(primary) ? std::optional<double>(s.r_score.at(primary)) : std::nullopt);
    v.push_back(s.d_score.count(primary) ? std::optional<double>(s.d_score.at(primary)) : std::nullopt);
    v.push_back(s.e_score);
    for (const auto& n : ext) {
      if (n == m.target_name) continue;
      const auto it = s.external.find(n);
      v.push_back(it == s.external.end() ? std::nullopt : std::optional<double>(it->second));
    }
    const auto t = s.external.find(m.target_name);
    m.add_row(s.pair_id, std::move(v), t == s.external.end() ? std::nan("") : t->second);
  }
  return m;
}

std::string diagnostics_tsv(const std::vector<RetrievalItem>& items) {
  std::string out = "test_index\targmax_train_index\tsrc_sim\ttgt_sim\n";
  char buf[128];
  for (const auto& it : items) {
    std::snprintf(buf, sizeof(buf), "%zu\t%zu\t%.6f\t%.6f\n", it.test_index, it.argmax_train_index, it.src_sim,
                  it.tgt_sim);
    out += buf;
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) raise(ErrorCode::Io, "write error on '" + path.string() + "'");
}

}  // namespace fred
