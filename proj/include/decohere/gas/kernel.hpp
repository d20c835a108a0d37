// gas/kernel.hpp: momentum-space jump kernel of a gas on a 1D lattice.
//
// A collision moves the particle from k to k − p (p = sΔk). Its rate is
//   W(k, p) = n (2π)² Δk |Ṽ(p)|² ⟨δ_η(ΔE)⟩_targets,
// with ΔE the kinetic-energy change of particle plus target. The jump terms
// are written in Kraus form with A_p = Σ_k √W(k+p, p) |k⟩⟨k+p|, so
//   K[ρ](k′,k) = Σ_p √W(k′+p,p) √W(k+p,p) ρ(k′+p, k+p),
// which is completely positive and reproduces W on the diagonal. Transfers
// leaving the lattice are dropped from both K and the loss Γ = Σ_p A_p†A_p, so
// the generator K[ρ] − ½{Γ,ρ} conserves trace exactly.
#pragma once

#include <limits>

#include "decohere/gas/config.hpp"
#include "decohere/linalg.hpp"

namespace decohere::gas {

class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

enum class KernelLimit {
  heavy_target,    // m2 → ∞: only the particle energy enters, targets drop out
  heavy_particle,  // m1 → ∞: particle energy change linearized as −p·v1
  recoil           // finite masses, full two-body kinetic energy
};

struct KernelOptions {
  double max_transfer = std::numeric_limits<double>::infinity();  // |p| cut
  std::size_t dense_limit = 50'000'000;                           // N·S cap for dense tables
};

/// δ_η needs at least two lattice energy steps across its width.
inline void check_resolution(const GasConfig& cfg) {
  const double step = cfg.v1 * cfg.grid.spacing();
  if (cfg.eta < 2.0 * step)
    throw ResolutionError("kernel: eta = " + std::to_string(cfg.eta) + " is below twice the energy spacing " +
                          std::to_string(step) + "; refine the grid or raise eta");
}

class MomentumKernel {
 public:
  MomentumKernel(GasConfig cfg, KernelLimit limit, KernelOptions opt = {})
      : cfg_(std::move(cfg)), limit_(limit), opt_(opt) {
    check_config(cfg_);
    if (cfg_.dimension() != 1) throw std::invalid_argument("MomentumKernel: only 1D lattices are supported");
    if (limit_ != KernelLimit::heavy_target) check_targets(cfg_);
    check_resolution(cfg_);
    const long n = long(cfg_.grid.size());
    const double dk = cfg_.grid.spacing();
    const double cap = std::floor(opt_.max_transfer / dk + 1e-9);
    smax_ = cap < double(n - 1) ? long(cap) : n - 1;
    if (smax_ < 0) throw std::invalid_argument("MomentumKernel: max_transfer must be non-negative");
    pre_ = cfg_.n * kTwoPi * kTwoPi * dk;
    if (limit_ == KernelLimit::heavy_particle) {
      // independent of the particle momentum: tabulate once per transfer
      hp_.resize(std::size_t(2 * smax_ + 1));
      for (long s = -smax_; s <= smax_; ++s) hp_[std::size_t(s + smax_)] = target_average(double(s) * dk, 0.0, false);
    }
  }

  const GasConfig& config() const { return cfg_; }
  KernelLimit limit() const { return limit_; }
  std::size_t size() const { return cfg_.grid.size(); }
  long max_shift() const { return smax_; }
  double momentum(std::size_t i) const { return cfg_.grid[i]; }

  /// Rate for k_i → k_i − sΔk; zero when the destination is off the lattice.
  double rate(std::size_t i, long s) const {
    const long dest = long(i) - s;
    if (dest < 0 || dest >= long(size()) || std::abs(s) > smax_) return 0.0;
    const double p = double(s) * cfg_.grid.spacing();
    const double v2 = std::norm(cfg_.V(p));
    if (v2 == 0.0) return 0.0;
    const double k = cfg_.grid[i];
    switch (limit_) {
      case KernelLimit::heavy_target:
        return pre_ * v2 * broadened_delta(cfg_.energy(k - p) - cfg_.energy(k), cfg_.eta);
      case KernelLimit::heavy_particle:
        return pre_ * v2 * hp_[std::size_t(s + smax_)];
      case KernelLimit::recoil:
        return pre_ * v2 * target_average(p, cfg_.energy(k - p) - cfg_.energy(k), true);
    }
    return 0.0;
  }

  double loss_rate(std::size_t i) const {
    double g = 0.0;
    for (long s = -smax_; s <= smax_; ++s) g += rate(i, s);
    return g;
  }

  std::vector<double> loss_rates() const {
    std::vector<double> g(size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = loss_rate(i);
    return g;
  }

  /// Σ_p A_p ρ A_p†.
  Matrix apply_jumps(const Matrix& rho) const {
    check_shape(rho);
    const auto& c = table();
    const long n = long(size());
    Matrix out = Matrix::Zero(n, n);
    for (long s = -smax_; s <= smax_; ++s) {
      const auto col = std::size_t(s + smax_);
      for (long b = std::max(0L, -s); b < std::min(n, n - s); ++b) {
        const double cb = c(b + s, col);
        if (cb == 0.0) continue;
        for (long a = std::max(0L, -s); a < std::min(n, n - s); ++a) out(a, b) += c(a + s, col) * cb * rho(a + s, b + s);
      }
    }
    return out;
  }

  /// −i[diag(h), ρ] + K[ρ] − ½{Γ, ρ}; h may be empty.
  Matrix apply_generator(const Matrix& rho, const std::vector<double>& h = {}) const {
    Matrix out = apply_jumps(rho);
    const auto& g = loss();
    const long n = long(size());
    for (long a = 0; a < n; ++a)
      for (long b = 0; b < n; ++b) {
        out(a, b) -= 0.5 * (g[a] + g[b]) * rho(a, b);
        if (!h.empty()) out(a, b) -= kI * (h[a] - h[b]) * rho(a, b);
      }
    return out;
  }

  /// Diagonal of the generator applied to a state with populations P.
  std::vector<double> population_rate(const std::vector<double>& P) const {
    if (P.size() != size()) throw std::invalid_argument("MomentumKernel: population size mismatch");
    std::vector<double> d(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
      if (P[i] == 0.0) continue;
      for (long s = -smax_; s <= smax_; ++s) {
        const double w = rate(i, s) * P[i];
        if (w == 0.0) continue;
        d[std::size_t(long(i) - s)] += w;
        d[i] -= w;
      }
    }
    return d;
  }

  /// d⟨p²/2m1⟩/dt for populations P.
  double energy_drift(const std::vector<double>& P) const {
    if (P.size() != size()) throw std::invalid_argument("MomentumKernel: population size mismatch");
    const double dk = cfg_.grid.spacing();
    double drift = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (P[i] == 0.0) continue;
      const double k = cfg_.grid[i];
      double s_i = 0.0;
      for (long s = -smax_; s <= smax_; ++s) {
        const double w = rate(i, s);
        if (w != 0.0) s_i += w * (cfg_.energy(k - double(s) * dk) - cfg_.energy(k));
      }
      drift += P[i] * s_i;
    }
    return drift;
  }

  /// Explicit jump operators A_p, one per transfer with nonzero rate.
  std::vector<Matrix> dense_jumps() const {
    const auto& c = table();
    const long n = long(size());
    std::vector<Matrix> out;
    for (long s = -smax_; s <= smax_; ++s) {
      Matrix A = Matrix::Zero(n, n);
      for (long src = 0; src < n; ++src) {
        const long dest = src - s;
        if (dest >= 0 && dest < n) A(dest, src) = c(src, std::size_t(s + smax_));
      }
      if (A.cwiseAbs().maxCoeff() > 0.0) out.push_back(std::move(A));
    }
    return out;
  }

 private:
  // Σ_m q_m Σ_j P_j δ_η(ΔE) with the target recoil k₂ → k₂ + p; `particle_de`
  // is the particle's energy change (recoil) or −p·v1 (heavy particle).
  double target_average(double p, double particle_de, bool recoil) const {
    const double de1 = recoil ? particle_de : -p * cfg_.v1;
    double sum = 0.0;
    for (const auto& t : cfg_.targets) {
      double s = 0.0;
      for (std::size_t j = 0; j < t.k2.size(); ++j) {
        const double q2 = t.k2[j];
        const double de2 = (p * p + 2.0 * p * q2) / (2.0 * cfg_.m2);
        s += t.probability(j) * broadened_delta(de1 + de2, cfg_.eta);
      }
      sum += t.weight * s;
    }
    return sum;
  }

  void check_shape(const Matrix& rho) const {
    if (std::size_t(rho.rows()) != size() || std::size_t(rho.cols()) != size())
      throw std::invalid_argument("MomentumKernel: state does not match the lattice");
  }

  // √W(src, s), lazily tabulated.
  const Eigen::MatrixXd& table() const {
    if (table_.size() == 0) {
      const std::size_t S = std::size_t(2 * smax_ + 1);
      if (size() * S > opt_.dense_limit) throw std::length_error("MomentumKernel: lattice too large for dense kernel");
      table_.resize(long(size()), long(S));
      for (std::size_t i = 0; i < size(); ++i)
        for (long s = -smax_; s <= smax_; ++s) table_(long(i), long(s + smax_)) = std::sqrt(rate(i, s));
    }
    return table_;
  }

  const std::vector<double>& loss() const {
    if (loss_.empty()) loss_ = loss_rates();
    return loss_;
  }

  GasConfig cfg_;
  KernelLimit limit_;
  KernelOptions opt_;
  long smax_ = 0;
  double pre_ = 0.0;
  std::vector<double> hp_;
  mutable Eigen::MatrixXd table_;
  mutable std::vector<double> loss_;
};

inline MomentumKernel decoherence_kernel_heavy_target(const GasConfig& cfg, KernelOptions opt = {}) {
  return MomentumKernel(cfg, KernelLimit::heavy_target, opt);
}

inline MomentumKernel decoherence_kernel_heavy_particle(const GasConfig& cfg, KernelOptions opt = {}) {
  return MomentumKernel(cfg, KernelLimit::heavy_particle, opt);
}

/// Finite-mass parent of both limits; depends on the target momentum distributions.
inline MomentumKernel decoherence_kernel_recoil(const GasConfig& cfg, KernelOptions opt = {}) {
  return MomentumKernel(cfg, KernelLimit::recoil, opt);
}

}  // namespace decohere::gas
