#include "fred/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fred/error.hpp"

namespace fred {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::optional<double> parse_number(const std::string& cell) {
  const char* b = cell.data();
  const char* e = b + cell.size();
  while (b < e && (*b == ' ')) ++b;
  while (e > b && (e[-1] == ' ')) --e;
  if (b == e) return std::nullopt;
  if (*b == '+') ++b;
  double v = 0;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
    raise(ErrorCode::Format, "not a finite number: '" + cell + "'");
  }
  return v;
}

std::string slurp(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::NotFound, std::string(what) + " not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

std::optional<std::size_t> FeatureMatrix::feature_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<std::optional<double>> FeatureMatrix::column(const std::string& name) const {
  std::vector<std::optional<double>> out;
  out.reserve(rows());
  if (name == target_name) {
    for (double t : target) out.emplace_back(t);
    return out;
  }
  const auto idx = feature_index(name);
  if (!idx) raise(ErrorCode::NotFound, "no column named '" + name + "'");
  for (const auto& row : cells) out.push_back(row[*idx]);
  return out;
}

void FeatureMatrix::add_row(std::string pair_id, std::vector<std::optional<double>> values, double target_value) {
  if (values.size() != columns.size()) raise(ErrorCode::InvalidArgument, "row width does not match the columns");
  pair_ids.push_back(std::move(pair_id));
  cells.push_back(std::move(values));
  target.push_back(target_value);
}

FeatureMatrix parse_feature_matrix(const std::string& text, const std::string& origin, const std::string& target) {
  const auto lines = data_lines(text);
  if (lines.empty()) raise(ErrorCode::Format, origin + ": empty matrix (no header row)");
  const auto header = split_tabs(lines[0]);
  if (header.empty() || header[0] != "pair_id") {
    raise(ErrorCode::Format, origin + ": row 1, column 1: header must start with 'pair_id'");
  }
  FeatureMatrix m;
  m.target_name = target;
  std::optional<std::size_t> target_col;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) raise(ErrorCode::Format, origin + ": row 1, column " + std::to_string(c + 1) + ": empty name");
    const bool dup = std::find(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(c), header[c]) !=
                     header.begin() + static_cast<std::ptrdiff_t>(c);
    if (dup) raise(ErrorCode::Format, origin + ": row 1: duplicate column '" + header[c] + "'");
    if (header[c] == target) {
      target_col = c;
    } else {
      m.columns.push_back(header[c]);
      feature_cols.push_back(c);
    }
  }
  if (!target_col) raise(ErrorCode::Format, origin + ": row 1: no target column '" + target + "'");
  if (lines.size() < 2) raise(ErrorCode::Format, origin + ": empty matrix (header only)");

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto where = origin + ": row " + std::to_string(r + 1);
    const auto cells = split_tabs(lines[r]);
    if (cells.size() != header.size()) {
      raise(ErrorCode::Format, where + ": expected " + std::to_string(header.size()) + " columns, found " +
                                   std::to_string(cells.size()));
    }
    if (cells[0].empty()) raise(ErrorCode::Format, where + ", column 1: empty pair_id");
    auto cell = [&](std::size_t c) -> std::optional<double> {
      try {
        return parse_number(cells[c]);
      } catch (const Error& e) {
        raise(ErrorCode::Format, where + ", column " + std::to_string(c + 1) + " (" + header[c] + "): " + e.what());
      }
    };
    const auto t = cell(*target_col);
    if (!t) raise(ErrorCode::Format, where + ", column " + std::to_string(*target_col + 1) + " (" + target + "): missing target");
    std::vector<std::optional<double>> values;
    for (auto c : feature_cols) values.push_back(cell(c));
    m.add_row(cells[0], std::move(values), *t);
  }
  return m;
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path, const std::string& target) {
  return parse_feature_matrix(slurp(path, "feature matrix"), path.string(), target);
}

std::string format_feature_matrix(const FeatureMatrix& m) {
  std::string out = "pair_id";
  for (const auto& c : m.columns) out += "\t" + c;
  out += "\t" + m.target_name + "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += m.pair_ids[r];
    for (const auto& v : m.cells[r]) out += "\t" + (v ? fmt(*v) : std::string());
    out += "\t" + (std::isfinite(m.target[r]) ? fmt(m.target[r]) : std::string()) + "\n";
  }
  return out;
}

OlsFit fit_ols(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) raise(ErrorCode::InvalidArgument, "x and y differ in length");
  if (x.size() < 3) {
    raise(ErrorCode::InvalidArgument, "R² needs at least 3 usable rows, got " + std::to_string(x.size()));
  }
  std::vector<std::pair<double, double>> pts(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) pts[i] = {x[i], y[i]};
  std::sort(pts.begin(), pts.end());

  OlsFit fit;
  fit.n = pts.size();
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [a, b] : pts) {
    sx += a;
    sy += b;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& [a, b] : pts) {
    sxx += (a - mx) * (a - mx);
    syy += (b - my) * (b - my);
    sxy += (a - mx) * (b - my);
  }
  if (all_equal(x) || sxx == 0) {
    fit.intercept = my;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (all_equal(y) || syy == 0) return fit;
  fit.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

namespace {

void usable(const FeatureMatrix& m, const std::string& feature, std::vector<double>& x, std::vector<double>& y) {
  const auto col = m.column(feature);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!col[r]) continue;
    x.push_back(*col[r]);
    y.push_back(m.target[r]);
  }
}

}  // namespace

double univariate_r2(const FeatureMatrix& m, const std::string& feature) {
  std::vector<double> x, y;
  usable(m, feature, x, y);
  if (x.size() < 3) {
    raise(ErrorCode::InvalidArgument, "feature '" + feature + "': R² needs at least 3 usable rows, got " +
                                          std::to_string(x.size()));
  }
  return fit_ols(x, y).r2;
}

std::string strength_label(double r2, const StrengthThresholds& t) {
  if (r2 >= t.strongest) return "Strongest";
  if (r2 >= t.moderate) return "Moderate";
  if (r2 >= t.low_moderate) return "Low-Moderate";
  if (r2 >= t.low) return "Low";
  if (r2 >= t.negligible) return "Negligible";
  return "None";
}

std::vector<RankedFeature> rank_features(const FeatureMatrix& m, const std::vector<std::string>& features,
                                         const StrengthThresholds& t) {
  const auto& names = features.empty() ? m.columns : features;
  if (names.empty()) raise(ErrorCode::InvalidArgument, "no feature columns to rank");
  std::vector<RankedFeature> out;
  for (const auto& name : names) {
    std::vector<double> x, y;
    usable(m, name, x, y);
    if (x.size() < 3) {
      raise(ErrorCode::InvalidArgument, "feature '" + name + "': R² needs at least 3 usable rows, got " +
                                            std::to_string(x.size()));
    }
    const double r2 = fit_ols(x, y).r2;
    out.push_back({name, r2, strength_label(r2, t), x.size()});
  }
  std::sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.r2 != b.r2) return a.r2 > b.r2;
    return a.feature < b.feature;
  });
  return out;
}

const char* to_string(BandMetric m) { return m == BandMetric::Bleu ? "bleu" : "chrf"; }

std::optional<BandMetric> parse_band_metric(const std::string& name) {
  if (name == "bleu") return BandMetric::Bleu;
  if (name == "chrf" || name == "chrf++") return BandMetric::Chrf;
  return std::nullopt;
}

ReferenceBand ReferenceBand::embedded() {
  ReferenceBand b;
  b.anchors = {
      {1e3, 4.91, 2.25, 23.65, 5.50},
      {1e4, 10.65, 4.93, 34.73, 5.00},
      {1e5, 16.46, 7.50, 43.36, 4.54},
      {1e6, 20.12, 10.19, 49.01, 4.11},
  };
  return b;
}

void ReferenceBand::validate() const {
  if (anchors.empty()) raise(ErrorCode::Validation, "reference band has no anchors");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const auto& a = anchors[i];
    if (!(a.size > 0)) raise(ErrorCode::Validation, "reference band sizes must be positive");
    if (a.bleu_std < 0 || a.chrf_std < 0) raise(ErrorCode::Validation, "reference band stds must be non-negative");
    if (i > 0 && !(a.size > anchors[i - 1].size)) {
      raise(ErrorCode::Validation, "reference band sizes must be strictly increasing");
    }
  }
}

ReferenceBand ReferenceBand::parse(const std::string& text, const std::string& origin) {
  const auto lines = data_lines(text);
  const std::vector<std::string> expected{"size", "bleu_mean", "bleu_std", "chrf_mean", "chrf_std"};
  if (lines.empty() || split_tabs(lines[0]) != expected) {
    raise(ErrorCode::Format, origin + ": row 1: header must be size, bleu_mean, bleu_std, chrf_mean, chrf_std");
  }
  ReferenceBand b;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_tabs(lines[r]);
    const auto where = origin + ": row " + std::to_string(r + 1);
    if (cells.size() != expected.size()) raise(ErrorCode::Format, where + ": expected 5 columns");
    double v[5];
    for (std::size_t c = 0; c < 5; ++c) {
      std::optional<double> x;
      try {
        x = parse_number(cells[c]);
      } catch (const Error& e) {
        raise(ErrorCode::Format, where + ", column " + std::to_string(c + 1) + ": " + e.what());
      }
      if (!x) raise(ErrorCode::Format, where + ", column " + std::to_string(c + 1) + ": missing value");
      v[c] = *x;
    }
    b.anchors.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  b.validate();
  return b;
}

ReferenceBand ReferenceBand::load(const std::filesystem::path& path) {
  return parse(slurp(path, "reference band"), path.string());
}

std::string ReferenceBand::format() const {
  std::string out = "size\tbleu_mean\tbleu_std\tchrf_mean\tchrf_std\n";
  for (const auto& a : anchors) {
    out += fmt(a.size) + "\t" + fmt(a.bleu_mean) + "\t" + fmt(a.bleu_std) + "\t" + fmt(a.chrf_mean) + "\t" +
           fmt(a.chrf_std) + "\n";
  }
  return out;
}

BandPoint interpolate(const ReferenceBand& band, double n_train, BandMetric metric) {
  band.validate();
  if (!(n_train > 0)) raise(ErrorCode::InvalidArgument, "n_train must be positive");
  auto pick = [&](const BandAnchor& a) {
    return metric == BandMetric::Bleu ? std::pair{a.bleu_mean, a.bleu_std} : std::pair{a.chrf_mean, a.chrf_std};
  };
  const auto& lo = band.anchors.front();
  const auto& hi = band.anchors.back();
  if (n_train < lo.size || n_train > hi.size) {
    const auto& a = n_train < lo.size ? lo : hi;
    warn("n_train " + fmt(n_train) + " outside the reference band [" + fmt(lo.size) + ", " + fmt(hi.size) +
         "]; clamped to " + fmt(a.size));
    const auto [m, s] = pick(a);
    return {m, s, true};
  }
  for (std::size_t i = 0; i + 1 < band.anchors.size(); ++i) {
    const auto& a = band.anchors[i];
    const auto& b = band.anchors[i + 1];
    if (n_train > b.size) continue;
    if (n_train == a.size) {
      const auto [m, s] = pick(a);
      return {m, s, false};
    }
    if (n_train == b.size) {
      const auto [m, s] = pick(b);
      return {m, s, false};
    }
    const double t = (std::log(n_train) - std::log(a.size)) / (std::log(b.size) - std::log(a.size));
    const auto [ma, sa] = pick(a);
    const auto [mb, sb] = pick(b);
    return {ma + t * (mb - ma), sa + t * (sb - sa), false};
  }
  const auto [m, s] = pick(hi);
  return {m, s, false};
}

const char* to_string(OutlierFlag f) {
  switch (f) {
    case OutlierFlag::Over:
      return "OVER";
    case OutlierFlag::Under:
      return "UNDER";
    case OutlierFlag::HighR:
      return "HIGH_R";
    case OutlierFlag::HighF:
      return "HIGH_F";
  }
  return "?";
}

OutlierResult flag_outliers(const OutlierRow& row, const ReferenceBand& band, const OutlierOptions& options) {
  if (!(row.n_train > 0)) raise(ErrorCode::InvalidArgument, "n_train must be positive for '" + row.pair_id + "'");
  if (!(options.k >= 0)) raise(ErrorCode::InvalidArgument, "outlier k must be non-negative");
  OutlierResult out;
  out.pair_id = row.pair_id;
  out.band = interpolate(band, row.n_train, options.metric);
  if (row.reported) {
    if (*row.reported > out.band.mean + options.k * out.band.std) out.flags.push_back(OutlierFlag::Over);
    if (*row.reported < out.band.mean - options.k * out.band.std) out.flags.push_back(OutlierFlag::Under);
  }
  if (row.r_score && *row.r_score > options.r_ref_mult * options.r_ref_avg) out.flags.push_back(OutlierFlag::HighR);
  if (row.f_score && *row.f_score >= options.f_threshold) out.flags.push_back(OutlierFlag::HighF);
  return out;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) raise(ErrorCode::InvalidArgument, "x and y differ in length");
  if (x.size() < 2) raise(ErrorCode::InvalidArgument, "Pearson r needs at least 2 rows, got " + std::to_string(x.size()));
  if (all_equal(x) || all_equal(y)) return std::nullopt;
  std::vector<std::pair<double, double>> pts(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) pts[i] = {x[i], y[i]};
  std::sort(pts.begin(), pts.end());
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [a, b] : pts) {
    sx += a;
    sy += b;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& [a, b] : pts) {
    sxx += (a - mx) * (a - mx);
    syy += (b - my) * (b - my);
    sxy += (a - mx) * (b - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ScatterResult scatter_data(const FeatureMatrix& m, const std::string& x, const std::string& y,
                           const std::set<std::string>& exclude) {
  const auto xs = m.column(x);
  const auto ys = m.column(y);
  ScatterResult out;
  std::vector<double> vx, vy;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!xs[r] || !ys[r] || exclude.count(m.pair_ids[r])) continue;
    out.points.push_back({m.pair_ids[r], *xs[r], *ys[r]});
    vx.push_back(*xs[r]);
    vy.push_back(*ys[r]);
  }
  out.pearson = pearson(vx, vy);
  return out;
}

}  // namespace fred
