#pragma once

// Slicing a long discretized trajectory into a panel of curves
// X_{i+1}(t) = xi(i delta + t), paired with their derivatives in coordinates.

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "arhd/basis.hpp"
#include "arhd/io.hpp"

namespace arhd {

struct Trajectory {
  std::vector<double> values;
  double delta = 1.0;
  int m = 1;
  double t0 = 0.0;  // calendar origin, label only

  int n_blocks() const { return m > 0 ? static_cast<int>(values.size()) / m : 0; }

  void validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("trajectory: delta must be positive");
    if (m < 1) throw std::invalid_argument("trajectory: m must be positive");
    if (values.size() % static_cast<std::size_t>(m) != 0)
      throw std::invalid_argument("trajectory: length " + std::to_string(values.size()) +
                                  " is not divisible by m = " + std::to_string(m));
    if (n_blocks() < 3)
      throw std::invalid_argument("trajectory: need at least 3 blocks, got " +
                                  std::to_string(n_blocks()));
  }

  /// Grid values of block i (0-based) as an m-vector.
  Eigen::VectorXd block(int i) const {
    return Eigen::Map<const Eigen::VectorXd>(values.data() + static_cast<std::ptrdiff_t>(i) * m, m);
  }
};

class CurvePanel;
CurvePanel slice(const Trajectory& traj, const BasisSpec& spec);
CurvePanel panel_from_coefficients(const BasisSpec& spec, Eigen::MatrixXd x);
CurvePanel assume_zero_mean(const CurvePanel& panel);
CurvePanel center(const CurvePanel& panel);
CurvePanel center_with(const CurvePanel& panel, const CoeffVec& mean);
CurvePanel uncenter(const CurvePanel& panel);
std::pair<CurvePanel, CurvePanel> split(const CurvePanel& panel, int train_len);

/// Paired sample (X_i, X'_i): X holds W-coordinates (N x n), Xp the
/// L-coordinates of the derivatives, always equal to D_mat * X.
class CurvePanel {
 public:
  const BasisSpec& spec() const { return spec_; }
  const Eigen::MatrixXd& X() const { return x_; }
  const Eigen::MatrixXd& Xp() const { return xp_; }
  const CoeffVec& mean_curve() const { return mean_; }
  bool centered() const { return state_ != Centering::raw; }
  int n() const { return static_cast<int>(x_.cols()); }

  CoeffVec curve(int i) const { return {Space::W, x_.col(i)}; }
  CoeffVec derivative(int i) const { return {Space::L, xp_.col(i)}; }

  /// Raw grid values (m x n, never centered) when the panel came from a trajectory.
  const std::optional<Eigen::MatrixXd>& samples() const { return samples_; }

  /// Columns [first, first + count) as a panel with the same metadata.
  CurvePanel columns(int first, int count) const {
    CurvePanel out = *this;
    out.x_ = x_.middleCols(first, count);
    out.xp_ = xp_.middleCols(first, count);
    if (samples_) out.samples_ = samples_->middleCols(first, count);
    return out;
  }

 private:
  enum class Centering { raw, empirical, assumed };

  CurvePanel(BasisSpec spec, Eigen::MatrixXd x)
      : spec_(spec), x_(std::move(x)), mean_{Space::W, Eigen::VectorXd::Zero(spec.size())} {
    if (x_.rows() != spec_.size())
      throw std::invalid_argument("panel: coefficient matrix has " + std::to_string(x_.rows()) +
                                  " rows, basis has " + std::to_string(spec_.size()));
    refresh_derivatives();
  }

  void refresh_derivatives() { xp_ = derivative_matrix(spec_) * x_; }

  friend CurvePanel slice(const Trajectory&, const BasisSpec&);
  friend CurvePanel panel_from_coefficients(const BasisSpec&, Eigen::MatrixXd);
  friend CurvePanel assume_zero_mean(const CurvePanel&);
  friend CurvePanel center(const CurvePanel&);
  friend CurvePanel center_with(const CurvePanel&, const CoeffVec&);
  friend CurvePanel uncenter(const CurvePanel&);
  friend std::pair<CurvePanel, CurvePanel> split(const CurvePanel&, int);

  BasisSpec spec_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd xp_;
  CoeffVec mean_;
  Centering state_ = Centering::raw;
  std::optional<Eigen::MatrixXd> samples_;
};

inline CurvePanel slice(const Trajectory& traj, const BasisSpec& spec) {
  traj.validate();
  if (std::abs(traj.delta - spec.delta()) > 1e-12 * spec.delta())
    throw std::invalid_argument("slice: trajectory delta differs from basis delta");
  if (traj.m < spec.size())
    throw std::invalid_argument("slice: m = " + std::to_string(traj.m) + " < N = " +
                                std::to_string(spec.size()));
  const int n = traj.n_blocks();
  Eigen::MatrixXd samples =
      Eigen::Map<const Eigen::MatrixXd>(traj.values.data(), traj.m, n);
  Eigen::MatrixXd x(spec.size(), n);
  for (int i = 0; i < n; ++i) {
    const double* begin = traj.values.data() + static_cast<std::ptrdiff_t>(i) * traj.m;
    x.col(i) = project_curve(spec, std::span<const double>(begin, traj.m)).coeffs;
  }
  CurvePanel panel(spec, std::move(x));
  panel.samples_ = std::move(samples);
  return panel;
}

inline CurvePanel panel_from_coefficients(const BasisSpec& spec, Eigen::MatrixXd x) {
  return CurvePanel(spec, std::move(x));
}

/// Marks a panel drawn from a known zero-mean model as centered without
/// subtracting an empirical mean.
inline CurvePanel assume_zero_mean(const CurvePanel& panel) {
  if (panel.centered()) throw std::invalid_argument("assume_zero_mean: panel already centered");
  CurvePanel out = panel;
  out.state_ = CurvePanel::Centering::assumed;
  return out;
}

inline CurvePanel center_with(const CurvePanel& panel, const CoeffVec& mean) {
  if (panel.centered()) throw std::invalid_argument("center: panel already centered");
  if (mean.space != Space::W || mean.size() != panel.spec().size())
    throw std::invalid_argument("center: mean must be a W-coordinate vector of length N");
  CurvePanel out = panel;
  out.x_.colwise() -= mean.coeffs;
  out.refresh_derivatives();
  out.mean_ = mean;
  out.state_ = CurvePanel::Centering::empirical;
  return out;
}

inline CurvePanel center(const CurvePanel& panel) {
  if (panel.n() < 1) throw std::invalid_argument("center: empty panel");
  return center_with(panel, {Space::W, panel.X().rowwise().mean()});
}

inline CurvePanel uncenter(const CurvePanel& panel) {
  CurvePanel out = panel;
  out.x_.colwise() += panel.mean_.coeffs;
  out.refresh_derivatives();
  out.mean_.coeffs.setZero();
  out.state_ = CurvePanel::Centering::raw;
  return out;
}

/// First `train_len` columns and the remainder.  A panel centered on its
/// empirical mean is re-centered on the training part's mean only.
inline std::pair<CurvePanel, CurvePanel> split(const CurvePanel& panel, int train_len) {
  if (train_len < 2 || train_len >= panel.n())
    throw std::invalid_argument("split: train_len must lie in [2, " + std::to_string(panel.n()) +
                                "), got " + std::to_string(train_len));
  if (panel.state_ == CurvePanel::Centering::empirical) {
    auto [train, test] = split(uncenter(panel), train_len);
    CurvePanel train_c = center(train);
    CurvePanel test_c = center_with(test, train_c.mean_curve());
    return {std::move(train_c), std::move(test_c)};
  }
  return {panel.columns(0, train_len), panel.columns(train_len, panel.n() - train_len)};
}

/// Values parsed from a trajectory CSV plus any `# key=value` metadata lines.
struct SeriesCsv {
  std::vector<double> values;
  std::map<std::string, std::string> meta;
};

/// Accepts one value per line or `timestamp,value` pairs, an optional header
/// line, and `#` comment lines.  Missing values are rejected with their line.
inline SeriesCsv parse_series_csv(std::istream& in) {
  SeriesCsv out;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::vector<int> blank_lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) {
      blank_lines.push_back(lineno);
      continue;
    }
    if (sv.front() == '#') {
      sv.remove_prefix(1);
      sv = trim(sv);
      if (auto eq = sv.find('='); eq != std::string_view::npos)
        out.meta[std::string(trim(sv.substr(0, eq)))] = std::string(trim(sv.substr(eq + 1)));
      continue;
    }
    if (!blank_lines.empty() && !out.values.empty())
      throw std::invalid_argument("line " + std::to_string(blank_lines.front()) + ": missing value");
    blank_lines.clear();
    const auto fields = split_fields(sv);
    if (fields.size() > 2)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 1 or 2 fields, got " +
                                  std::to_string(fields.size()));
    const std::string_view field = fields.back();
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (!header_seen && out.values.empty()) {
        // A leading non-numeric row is a header unless its value field is a
        // recognised missing-value marker.
        if (field.empty() || field == "NA" || field == "NaN" || field == "nan")
          throw std::invalid_argument("line " + std::to_string(lineno) + ": missing value");
        header_seen = true;
        continue;
      }
      throw std::invalid_argument("line " + std::to_string(lineno) + ": missing or non-numeric value '" +
                                  std::string(field) + "'");
    }
    out.values.push_back(v);
  }
  return out;
}

inline SeriesCsv read_series_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_series_csv(in);
}

/// CSV text with a `t,value` header; times are grid midpoints offset by t0.
inline std::string trajectory_csv(const Trajectory& traj, const ConfigEcho& echo) {
  std::string out = echo_as_comments(echo);
  out += "t,value\n";
  const double h = traj.delta / traj.m;
  for (std::size_t k = 0; k < traj.values.size(); ++k) {
    const auto block = static_cast<double>(k / static_cast<std::size_t>(traj.m));
    const auto j = static_cast<double>(k % static_cast<std::size_t>(traj.m));
    out += format_double(traj.t0 + block * traj.delta + (j + 0.5) * h) + "," +
           format_double(traj.values[k]) + "\n";
  }
  return out;
}

}  // namespace arhd
