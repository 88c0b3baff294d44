#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fred {

/// Rows are language pairs. TSV layout: header row, first column pair_id,
/// one column named after the target (default "reported"), every other
/// column a feature. Empty feature cells are missing values.
struct FeatureMatrix {
  std::string target_name = "reported";
  std::vector<std::string> columns;  // features, file order
  std::vector<std::string> pair_ids;
  std::vector<std::vector<std::optional<double>>> cells;  // [row][feature]
  std::vector<double> target;

  std::size_t rows() const { return pair_ids.size(); }
  std::optional<std::size_t> feature_index(const std::string& name) const;
  /// A feature column or the target column; throws NotFound otherwise.
  std::vector<std::optional<double>> column(const std::string& name) const;
  void add_row(std::string pair_id, std::vector<std::optional<double>> values, double target_value);
};

FeatureMatrix parse_feature_matrix(const std::string& text, const std::string& origin = "<matrix>",
                                   const std::string& target = "reported");
FeatureMatrix read_feature_matrix(const std::filesystem::path& path, const std::string& target = "reported");
std::string format_feature_matrix(const FeatureMatrix& m);

struct OlsFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t n = 0;
};

/// Least squares of y on x with intercept. Needs >= 3 points; a constant x
/// (or constant y) gives r2 = 0. Points are summed in sorted order so the
/// result does not depend on input order.
OlsFit fit_ols(const std::vector<double>& x, const std::vector<double>& y);
double univariate_r2(const FeatureMatrix& m, const std::string& feature);

struct StrengthThresholds {
  double strongest = 0.5;
  double moderate = 0.3;
  double low_moderate = 0.2;
  double low = 0.1;
  double negligible = 0.01;
};

std::string strength_label(double r2, const StrengthThresholds& t = {});

struct RankedFeature {
  std::string feature;
  double r2 = 0;
  std::string label;
  std::size_t n = 0;
};

/// Descending by R², ties by feature name. Empty `features` ranks every
/// feature column.
std::vector<RankedFeature> rank_features(const FeatureMatrix& m, const std::vector<std::string>& features = {},
                                         const StrengthThresholds& t = {});

enum class BandMetric { Bleu, Chrf };
const char* to_string(BandMetric m);
std::optional<BandMetric> parse_band_metric(const std::string& name);

struct BandAnchor {
  double size = 0;
  double bleu_mean = 0;
  double bleu_std = 0;
  double chrf_mean = 0;
  double chrf_std = 0;
};

struct ReferenceBand {
  std::vector<BandAnchor> anchors;  // strictly increasing size

  /// High-resource xx->en baselines at 1k/10k/100k/1M training pairs.
  static ReferenceBand embedded();
  /// TSV with header: size, bleu_mean, bleu_std, chrf_mean, chrf_std.
  static ReferenceBand load(const std::filesystem::path& path);
  static ReferenceBand parse(const std::string& text, const std::string& origin = "<band>");
  std::string format() const;
  void validate() const;
};

struct BandPoint {
  double mean = 0;
  double std = 0;
  bool clamped = false;
};

/// Log-linear in n_train between anchors; outside the anchor range the
/// nearest anchor is used and a warning is emitted.
BandPoint interpolate(const ReferenceBand& band, double n_train, BandMetric metric);

enum class OutlierFlag { Over, Under, HighR, HighF };
const char* to_string(OutlierFlag f);

struct OutlierOptions {
  double k = 1.0;
  BandMetric metric = BandMetric::Bleu;
  double r_ref_avg = 3.24;
  double r_ref_mult = 2.0;
  double f_threshold = 0.9;
};

struct OutlierRow {
  std::string pair_id;
  double n_train = 0;
  std::optional<double> reported;
  std::optional<double> r_score;
  std::optional<double> f_score;
};

struct OutlierResult {
  std::string pair_id;
  BandPoint band;
  std::vector<OutlierFlag> flags;
};

OutlierResult flag_outliers(const OutlierRow& row, const ReferenceBand& band, const OutlierOptions& options = {});

struct ScatterPoint {
  std::string pair_id;
  double x = 0;
  double y = 0;
};

struct ScatterResult {
  std::vector<ScatterPoint> points;
  std::optional<double> pearson;  // null when either axis has zero variance
};

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);
/// Rows missing either column or listed in `exclude` are dropped; needs >= 2
/// remaining rows.
ScatterResult scatter_data(const FeatureMatrix& m, const std::string& x, const std::string& y,
                           const std::set<std::string>& exclude = {});

}  // namespace fred
