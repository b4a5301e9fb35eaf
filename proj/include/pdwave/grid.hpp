#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pdwave {

/// Periodic sampling of the comoving coordinate on (-L, L].
///
/// Nodes are x_j = -L + j*h for j = 0..N-1; the node x = -L stands in for
/// x = +L. Wavenumbers follow the discrete transform layout, k_n = pi*n/L.
class Grid {
 public:
  Grid(double half_length, std::size_t point_count);

  double half_length() const noexcept { return half_length_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double period() const noexcept { return 2.0 * half_length_; }

  double node(std::size_t j) const noexcept {
    return -half_length_ + static_cast<double>(j) * h_;
  }
  std::vector<double> nodes() const;

  /// Signed wavenumber of transform slot n (n in 0..N-1, FFT ordering).
  double wavenumber(std::size_t n) const noexcept;
  /// Index of the node x = 0.
  std::size_t center() const noexcept { return n_ / 2; }
  /// Index of the node at -x_j (reflection through the origin).
  std::size_t mirror(std::size_t j) const noexcept { return (n_ - j) % n_; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.half_length_ == b.half_length_ && a.n_ == b.n_;
  }

 private:
  double half_length_;
  std::size_t n_;
  double h_;
};

Grid make_grid(double half_length, std::size_t point_count);

/// A real field sampled on a Grid.
class Profile {
 public:
  explicit Profile(const Grid& grid);
  Profile(const Grid& grid, std::vector<double> values);

  static Profile from_function(const Grid& grid,
                               const std::function<double(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double& operator[](std::size_t j) noexcept { return values_[j]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max() const;
  double min() const;
  double sum() const;
  bool all_finite() const;

  Profile& operator+=(const Profile& other);
  Profile& operator-=(const Profile& other);
  Profile& operator*=(double s);

  friend Profile operator+(Profile a, const Profile& b) { return a += b; }
  friend Profile operator-(Profile a, const Profile& b) { return a -= b; }
  friend Profile operator*(Profile a, double s) { return a *= s; }
  friend Profile operator*(double s, Profile a) { return a *= s; }
  friend Profile operator-(Profile a) { return a *= -1.0; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

void require_same_grid(const Profile& a, const Profile& b);

/// sqrt(h * sum W_j^2)
double l2_norm(const Profile& w);
/// h * sum V_j W_j
double inner(const Profile& v, const Profile& w);

struct ConeReport {
  double evenness_defect = 0.0;
  double negativity_defect = 0.0;
  double unimodality_defect = 0.0;
  // Largest excess of W(x) over ||W||_2 / sqrt(2|x|) for |x| >= h.
  double decay_defect = 0.0;
  double tolerance = 0.0;
  double norm = 0.0;

  double max_defect() const;
  bool in_cone() const;
};

ConeReport cone_check(const Profile& w, double tol);

/// Ratio of the peak value to the mean value over the period.
double localization_ratio(const Profile& w);

/// Total length of the set where W >= fraction * max W.
double support_width(const Profile& w, double fraction);

}  // namespace pdwave
