#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fred/analysis.hpp"
#include "fred/metrics.hpp"

namespace fred {

enum class ReportFormat { Tsv, Json, Markdown };
const char* to_string(ReportFormat f);

struct EntryFailure {
  std::string pair_id;
  std::string message;
};

struct ScoreReport {
  std::vector<FredScores> entries;
  std::vector<EntryFailure> failures;
  std::vector<SimilarityKind> kinds;  // column order of R and D
};

/// Two decimals; E below 0.01 (and above 0) in scientific notation.
std::string format_score(double v);
std::string format_exposure(double v);

/// One record per entry with every computed field, rounded.
std::string scores_tsv(const ScoreReport& report);
/// Full precision.
std::string scores_json(const ScoreReport& report);
/// Lang, N_train, N_token, F, E, D, R, Reported.
std::string combined_table_tsv(const ScoreReport& report);
std::string combined_table_markdown(const ScoreReport& report);
/// FeatureMatrix for `analyze`; R and D use the first kind in report.kinds.
FeatureMatrix feature_matrix(const ScoreReport& report);

std::string diagnostics_tsv(const std::vector<RetrievalItem>& items);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fred
