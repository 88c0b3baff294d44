#include <CLI11.hpp>

#include <string>
#include <vector>

#include "fred/fred.h"

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus difficulty metrics (F, E, D, R) for translation benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fred_version()));

  auto* index = app.add_subcommand("index", "Build or query an n-gram count index");
  index->require_subcommand(1);

  std::vector<std::string> build_corpus;
  std::string build_vocab, build_out;
  std::uint64_t build_max = 0;
  auto* build = index->add_subcommand("build", "Index corpus files (one document per line)");
  build->add_option("corpus", build_corpus, "Corpus files")->required();
  build->add_option("--vocab", build_vocab, "Subword vocabulary file")->required();
  build->add_option("-o,--out", build_out, "Index file to write")->required();
  build->add_option("--max-tokens", build_max, "Refuse streams longer than this (0 = 2^40)");

  std::string count_index, count_vocab, count_text;
  int count_order = 0;
  auto* count = index->add_subcommand("count", "Count occurrences of a query's token n-grams");
  count->add_option("--index", count_index, "Index file")->required();
  count->add_option("--vocab", count_vocab, "Subword vocabulary file")->required();
  count->add_option("text", count_text, "Query text")->required();
  count->add_option("--order", count_order, "n-gram order (0 = whole query)")->check(CLI::NonNegativeNumber);

  fred_score_args sargs;
  fred_score_args_init(&sargs);
  std::string s_manifest, s_out;
  std::vector<std::string> s_kinds{"bleu", "chrf", "chrf++"};
  std::vector<std::string> s_formats{"tsv", "json", "markdown"};
  bool s_diag = false;
  auto* score = app.add_subcommand("score", "Score every manifest entry and write reports");
  score->add_option("-m,--manifest", s_manifest, "Dataset manifest")->required();
  score->add_option("-o,--out", s_out, "Output directory")->required();
  score->add_option("-j,--threads", sargs.threads, "Worker threads (0 = FRED_THREADS or all cores)");
  score->add_option("--kinds", s_kinds, "Similarity kinds: bleu chrf chrf++")->delimiter(',');
  score->add_option("-n,--ngram", sargs.exposure_n, "n-gram order for E")->check(CLI::PositiveNumber);
  score->add_option("--formats", s_formats, "Report formats: tsv json markdown")->delimiter(',');
  score->add_flag("--diagnostics", s_diag, "Write per-test-item retrieval diagnostics");

  fred_analyze_args aargs;
  fred_analyze_args_init(&aargs);
  std::string a_matrix, a_out, a_target = "reported", a_band, a_metric = "bleu";
  std::vector<std::string> a_features, a_exclude;
  auto* analyze = app.add_subcommand("analyze", "R² ranking, outlier flags and scatter data");
  analyze->add_option("matrix", a_matrix, "Feature matrix TSV")->required();
  analyze->add_option("-o,--out", a_out, "Output directory")->required();
  analyze->add_option("--target", a_target, "Target column");
  analyze->add_option("--features", a_features, "Feature columns to rank (default all)")->delimiter(',');
  analyze->add_option("--band", a_band, "Reference band TSV (default embedded)");
  analyze->add_option("--band-metric", a_metric, "bleu or chrf");
  analyze->add_option("-k", aargs.k, "Band width in standard deviations");
  analyze->add_option("--r-ref-avg", aargs.r_ref_avg, "Baseline R average");
  analyze->add_option("--r-ref-mult", aargs.r_ref_mult, "HIGH_R multiplier");
  analyze->add_option("--f-threshold", aargs.f_threshold, "HIGH_F threshold");
  analyze->add_option("--exclude", a_exclude, "Pair ids left out of the scatter")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*build) {
    std::vector<const char*> files;
    for (const auto& f : build_corpus) files.push_back(f.c_str());
    return fred_cmd_index_build(files.data(), files.size(), build_vocab.c_str(), build_out.c_str(), build_max);
  }
  if (*count) return fred_cmd_index_count(count_index.c_str(), count_vocab.c_str(), count_text.c_str(), count_order);
  if (*score) {
    const auto kinds = join(s_kinds);
    const auto formats = join(s_formats);
    sargs.manifest = s_manifest.c_str();
    sargs.out_dir = s_out.c_str();
    sargs.kinds = kinds.c_str();
    sargs.formats = formats.c_str();
    sargs.diagnostics = s_diag ? 1 : 0;
    return fred_cmd_score(&sargs);
  }
  if (*analyze) {
    const auto features = join(a_features);
    const auto exclude = join(a_exclude);
    aargs.matrix = a_matrix.c_str();
    aargs.out_dir = a_out.c_str();
    aargs.target = a_target.c_str();
    aargs.features = a_features.empty() ? nullptr : features.c_str();
    aargs.band = a_band.empty() ? nullptr : a_band.c_str();
    aargs.band_metric = a_metric.c_str();
    aargs.exclude = exclude.c_str();
    return fred_cmd_analyze(&aargs);
  }
  return 2;
}
