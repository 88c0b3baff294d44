#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "fred/analysis.hpp"
#include "fred/report.hpp"
#include "fred/simfn.hpp"

namespace fred {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;

struct IndexBuildCommand {
  std::vector<std::filesystem::path> corpus;
  std::filesystem::path vocab;
  std::filesystem::path out;
  std::uint64_t max_tokens = std::uint64_t{1} << 40;
};

struct IndexCountCommand {
  std::filesystem::path index;
  std::filesystem::path vocab;
  std::string text;
  int order = 0;  // 0: the whole query is one gram
};

struct ScoreCommand {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  unsigned threads = 0;
  std::vector<SimilarityKind> kinds{SimilarityKind::Bleu, SimilarityKind::Chrf, SimilarityKind::ChrfPP};
  int exposure_n = 4;
  std::vector<ReportFormat> formats{ReportFormat::Tsv, ReportFormat::Json, ReportFormat::Markdown};
  bool diagnostics = false;
};

struct AnalyzeCommand {
  std::filesystem::path matrix;
  std::filesystem::path out_dir;
  std::string target = "reported";
  std::vector<std::string> features;  // empty: all
  std::optional<std::filesystem::path> band;
  OutlierOptions outlier;
  StrengthThresholds thresholds;
  std::set<std::string> exclude;
  std::string n_train_column = "n_train";
  std::string r_column = "r_score";
  std::string f_column = "f_score";
  std::string pbsmt_column = "pbsmt";
};

/// Each returns an exit code and writes a one-line diagnostic to `err` on
/// failure.
int run_index_build(const IndexBuildCommand& cmd, std::ostream& out, std::ostream& err);
int run_index_count(const IndexCountCommand& cmd, std::ostream& out, std::ostream& err);
int run_score(const ScoreCommand& cmd, std::ostream& out, std::ostream& err);
int run_analyze(const AnalyzeCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace fred
