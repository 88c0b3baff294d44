#include "fred/commands.hpp"

#include <algorithm>
#include <cstdio>

#include "fred/error.hpp"
#include "fred/manifest.hpp"
#include "fred/metrics.hpp"
#include "fred/ngram_index.hpp"

namespace fred {

namespace {

SubwordVocab load_vocab(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) raise(ErrorCode::NotFound, "vocab not found: " + path.string());
  return SubwordVocab::load(path);
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) raise(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string flags_text(const std::vector<OutlierFlag>& flags) {
  std::string out;
  for (auto f : flags) {
    if (!out.empty()) out += ",";
    out += to_string(f);
  }
  return out;
}

}  // namespace

int run_index_build(const IndexBuildCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const auto vocab = load_vocab(cmd.vocab);
    IndexBuildOptions opts;
    opts.max_tokens = cmd.max_tokens;
    const auto index = NGramIndex::build(cmd.corpus, vocab, opts);
    index.save(cmd.out);
    out << "indexed " << index.size() << " tokens into " << cmd.out.string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_index_count(const IndexCountCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    if (cmd.order < 0) raise(ErrorCode::InvalidArgument, "order must be >= 0");
    const auto vocab = load_vocab(cmd.vocab);
    const auto ids = vocab.encode(cmd.text);
    if (ids.empty()) raise(ErrorCode::InvalidArgument, "empty query");
    const auto index = NGramIndex::load(cmd.index, vocab.fingerprint());
    const std::size_t n = cmd.order == 0 ? ids.size() : static_cast<std::size_t>(cmd.order);
    if (n > ids.size()) {
      raise(ErrorCode::InvalidArgument, "query has " + std::to_string(ids.size()) + " tokens, fewer than order " +
                                            std::to_string(n));
    }
    for (std::size_t i = 0; i + n <= ids.size(); ++i) {
      std::span<const std::uint32_t> gram(ids.data() + i, n);
      std::string label;
      for (auto id : gram) {
        if (!label.empty()) label += ' ';
        label += vocab.piece(id);
      }
      out << label << "\t" << index.count(gram) << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_score(const ScoreCommand& cmd, std::ostream& out, std::ostream& err) {
  DatasetManifest manifest;
  try {
    if (cmd.kinds.empty()) raise(ErrorCode::InvalidArgument, "no similarity kinds requested");
    if (cmd.formats.empty()) raise(ErrorCode::InvalidArgument, "no report formats requested");
    if (cmd.exposure_n < 1) raise(ErrorCode::InvalidArgument, "n for E must be >= 1");
    manifest = load_manifest(cmd.manifest);
    make_dir(cmd.out_dir);
    if (cmd.diagnostics) make_dir(cmd.out_dir / "diagnostics");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  ScoreOptions options;
  options.kinds = cmd.kinds;
  options.exposure_n = cmd.exposure_n;
  options.threads = cmd.threads;

  ScoreReport report;
  report.kinds = cmd.kinds;
  for (const auto& entry : manifest.entries) {
    try {
      RetrievalDiagnostics diag;
      report.entries.push_back(score_pair(entry, options, cmd.diagnostics ? &diag : nullptr));
      for (const auto& [kind, items] : diag) {
        write_text(cmd.out_dir / "diagnostics" / (entry.pair_id + "." + to_string(kind) + ".tsv"),
                   diagnostics_tsv(items));
      }
      out << "scored " << entry.pair_id << "\n";
    } catch (const std::exception& e) {
      report.failures.push_back({entry.pair_id, e.what()});
      err << "error: " << entry.pair_id << ": " << e.what() << "\n";
    }
  }

  try {
    for (auto f : cmd.formats) {
      switch (f) {
        case ReportFormat::Tsv:
          write_text(cmd.out_dir / "scores.tsv", scores_tsv(report));
          write_text(cmd.out_dir / "table.tsv", combined_table_tsv(report));
          break;
        case ReportFormat::Json:
          write_text(cmd.out_dir / "scores.json", scores_json(report));
          break;
        case ReportFormat::Markdown:
          write_text(cmd.out_dir / "table.md", combined_table_markdown(report));
          break;
      }
    }
    write_text(cmd.out_dir / "features.tsv", format_feature_matrix(feature_matrix(report)));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << "wrote " << report.entries.size() << " of " << manifest.entries.size() << " entries to "
      << cmd.out_dir.string() << "\n";
  return report.failures.empty() ? kExitOk : kExitPartial;
}

int run_analyze(const AnalyzeCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const auto m = read_feature_matrix(cmd.matrix, cmd.target);
    const auto band = cmd.band ? ReferenceBand::load(*cmd.band) : ReferenceBand::embedded();
    make_dir(cmd.out_dir);

    const auto ranked = rank_features(m, cmd.features, cmd.thresholds);
    std::string r2 = "feature\tr2\tstrength\tn\n";
    out << "feature\tr2\tstrength\n";
    for (const auto& r : ranked) {
      r2 += r.feature + "\t" + num(r.r2, 4) + "\t" + r.label + "\t" + std::to_string(r.n) + "\n";
      out << r.feature << "\t" << num(r.r2, 4) << "\t" << r.label << "\n";
    }
    write_text(cmd.out_dir / "r2.tsv", r2);
    write_text(cmd.out_dir / "band.tsv", band.format());

    const auto n_idx = m.feature_index(cmd.n_train_column);
    if (n_idx) {
      const auto r_idx = m.feature_index(cmd.r_column);
      const auto f_idx = m.feature_index(cmd.f_column);
      std::string flags = "pair_id\tn_train\treported\tband_mean\tband_std\tflags\n";
      std::string fig = "pair_id,n_train,reported,band_mean,band_std\n";
      for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto n = m.cells[r][*n_idx];
        if (!n) {
          warn("row '" + m.pair_ids[r] + "' has no " + cmd.n_train_column + "; skipped for outlier flags");
          continue;
        }
        OutlierRow row{m.pair_ids[r], *n, m.target[r], r_idx ? m.cells[r][*r_idx] : std::nullopt,
                       f_idx ? m.cells[r][*f_idx] : std::nullopt};
        const auto res = flag_outliers(row, band, cmd.outlier);
        flags += row.pair_id + "\t" + num(*n, 0) + "\t" + num(m.target[r], 2) + "\t" + num(res.band.mean, 2) + "\t" +
                 num(res.band.std, 2) + "\t" + flags_text(res.flags) + "\n";
        fig += csv_field(row.pair_id) + "," + num(*n, 0) + "," + num(m.target[r], 2) + "," + num(res.band.mean, 4) +
               "," + num(res.band.std, 4) + "\n";
      }
      write_text(cmd.out_dir / "flags.tsv", flags);
      write_text(cmd.out_dir / "scatter_size.csv", fig);
    } else {
      warn("no '" + cmd.n_train_column + "' column; outlier flags and the size scatter are skipped");
    }

    if (m.feature_index(cmd.pbsmt_column) && m.feature_index(cmd.r_column)) {
      const auto s = scatter_data(m, cmd.pbsmt_column, cmd.r_column, cmd.exclude);
      std::string csv = cmd.pbsmt_column == "pbsmt" ? "pair_id,pbsmt,r_score\n"
                                                     : "pair_id," + cmd.pbsmt_column + "," + cmd.r_column + "\n";
      for (const auto& p : s.points) csv += csv_field(p.pair_id) + "," + num(p.x, 4) + "," + num(p.y, 4) + "\n";
      write_text(cmd.out_dir / "scatter_pbsmt.csv", csv);
      out << "pearson(" << cmd.pbsmt_column << ", " << cmd.r_column << ")\t"
          << (s.pearson ? num(*s.pearson, 4) : std::string("null")) << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace fred
