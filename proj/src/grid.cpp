#include "pdwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pdwave/error.hpp"

namespace pdwave {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::GridMismatch: return "grid mismatch";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Degenerate: return "degenerate state";
    case ErrorCode::NotConverged: return "not converged";
    case ErrorCode::Subsonic: return "subsonic";
    case ErrorCode::Instability: return "instability";
    case ErrorCode::Config: return "configuration error";
  }
  return "unknown";
}

Grid::Grid(double half_length, std::size_t point_count)
    : half_length_(half_length), n_(point_count) {
  require(std::isfinite(half_length) && half_length > 0.0,
          "grid half length must be positive and finite, got " +
              std::to_string(half_length));
  require(point_count >= 8, "grid needs at least 8 points, got " +
                                std::to_string(point_count));
  require(point_count % 2 == 0,
          "grid point count must be even, got " + std::to_string(point_count));
  h_ = 2.0 * half_length_ / static_cast<double>(n_);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

double Grid::wavenumber(std::size_t n) const noexcept {
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  auto s = static_cast<std::ptrdiff_t>(n);
  if (s >= half) s -= static_cast<std::ptrdiff_t>(n_);
  return std::numbers::pi * static_cast<double>(s) / half_length_;
}

Grid make_grid(double half_length, std::size_t point_count) {
  return Grid(half_length, point_count);
}

Profile::Profile(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Profile::Profile(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(),
          "profile has " + std::to_string(values_.size()) +
              " values but the grid has " + std::to_string(grid_.size()) +
              " nodes");
  require(all_finite(), "profile values must be finite");
}

Profile Profile::from_function(const Grid& grid,
                               const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
  return Profile(grid, std::move(v));
}

double Profile::max() const {
  return *std::max_element(values_.begin(), values_.end());
}
double Profile::min() const {
  return *std::min_element(values_.begin(), values_.end());
}
double Profile::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}
bool Profile::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

Profile& Profile::operator+=(const Profile& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Profile& Profile::operator-=(const Profile& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Profile& Profile::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void require_same_grid(const Profile& a, const Profile& b) {
  if (!(a.grid() == b.grid())) {
    fail(ErrorCode::GridMismatch,
         "profiles live on different grids (L=" +
             std::to_string(a.grid().half_length()) +
             ", N=" + std::to_string(a.grid().size()) +
             " vs L=" + std::to_string(b.grid().half_length()) +
             ", N=" + std::to_string(b.grid().size()) + ")");
  }
}

double l2_norm(const Profile& w) { return std::sqrt(inner(w, w)); }

double inner(const Profile& v, const Profile& w) {
  require_same_grid(v, w);
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * w[j];
  return v.grid().spacing() * s;
}

double ConeReport::max_defect() const {
  return std::max({evenness_defect, negativity_defect, unimodality_defect});
}

bool ConeReport::in_cone() const { return max_defect() <= tolerance * norm; }

ConeReport cone_check(const Profile& w, double tol) {
  require(tol >= 0.0, "cone tolerance must be nonnegative");
  const Grid& g = w.grid();
  const std::size_t n = g.size();
  ConeReport r;
  r.tolerance = tol;
  r.norm = l2_norm(w);

  for (std::size_t j = 1; j < n; ++j) {
    r.evenness_defect =
        std::max(r.evenness_defect, std::abs(w[j] - w[g.mirror(j)]));
  }
  r.negativity_defect = std::max(0.0, -w.min());

  // Walk x = 0 .. L; the last node x = L is stored at j = 0.
  for (std::size_t j = g.center(); j < n; ++j) {
    const std::size_t next = (j + 1) % n;
    r.unimodality_defect = std::max(r.unimodality_defect, w[next] - w[j]);
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double ax = std::abs(g.node(j));
    if (ax < g.spacing() * (1.0 - 1e-12)) continue;
    const double bound = r.norm / std::sqrt(2.0 * ax);
    r.decay_defect = std::max(r.decay_defect, w[j] - bound);
  }
  return r;
}

double localization_ratio(const Profile& w) {
  const double mean = w.sum() / static_cast<double>(w.size());
  require(mean > 0.0, "localization ratio needs a profile with positive mean");
  return w.max() / mean;
}

double support_width(const Profile& w, double fraction) {
  const double level = fraction * w.max();
  std::size_t count = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] >= level) ++count;
  }
  return static_cast<double>(count) * w.grid().spacing();
}

}  // namespace pdwave
