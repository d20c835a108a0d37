// gas/grid.hpp: uniform momentum lattice and the broadened energy delta.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace decohere::gas {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Symmetric lattice k_i = (i − M)·Δk, i = 0..2M, with M·Δk = k_max.
/// In three dimensions the same lattice is used per Cartesian axis.
class MomentumGrid {
 public:
  MomentumGrid() = default;
  MomentumGrid(double spacing, double k_max) : dk_(spacing) {
    if (!(spacing > 0) || !(k_max > 0)) throw std::invalid_argument("MomentumGrid: spacing and extent must be positive");
    half_ = static_cast<long>(std::llround(k_max / spacing));
    if (half_ < 1) throw std::invalid_argument("MomentumGrid: extent smaller than one spacing");
  }

  double spacing() const { return dk_; }
  double k_max() const { return double(half_) * dk_; }
  std::size_t size() const { return std::size_t(2 * half_ + 1); }
  double operator[](std::size_t i) const { return (long(i) - half_) * dk_; }

  std::vector<double> points() const {
    std::vector<double> p(size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (*this)[i];
    return p;
  }

  /// Index of a lattice momentum; k must sit on the lattice to 1e-9·Δk.
  std::size_t index_of(double k) const {
    const double x = k / dk_;
    const long j = std::lround(x);
    if (std::abs(x - double(j)) > 1e-9 || std::abs(j) > half_)
      throw std::out_of_range("MomentumGrid: k is not a lattice point");
    return std::size_t(j + half_);
  }

  bool contains(double k) const {
    const double x = k / dk_;
    return std::abs(x - std::round(x)) <= 1e-9 && std::abs(std::lround(x)) <= half_;
  }

 private:
  double dk_ = 1.0;
  long half_ = 0;
};

/// Lorentzian stand-in for δ(x): (1/π)·η/(x² + η²).
inline double broadened_delta(double x, double eta) {
  if (!(eta > 0)) throw std::invalid_argument("broadened_delta: eta must be positive");
  return eta / (std::numbers::pi * (x * x + eta * eta));
}

}  // namespace decohere::gas
