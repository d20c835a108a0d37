// young.hpp: double slit behind a medium of thickness L.
//
// The coherent part keeps the vacuum fringes at wavenumber Re k′ with weight
// e^{−2 Im k′ L}; the lost weight reappears as a flat background over a central
// window, so the screen intensity always integrates to one.
#pragma once

#include <limits>
#include <numbers>
#include <ostream>

#include "decohere/evolution.hpp"
#include "decohere/generator.hpp"

namespace decohere {

struct YoungConfig {
  double slit_separation = 1.0;  // D
  double screen_distance = 1e3;  // L, also the medium thickness
  double wavenumber = 10.0;      // vacuum k
  cplx medium_wavenumber{10.0, 0.0};
  std::vector<double> screen;    // uniform, symmetric about 0
  double window = 0.0;           // background window width; 0 → 10 fringe periods
};

inline double fringe_period(const YoungConfig& c) {
  return 2.0 * std::numbers::pi * c.screen_distance / (c.medium_wavenumber.real() * c.slit_separation);
}

inline double damping_factor(const YoungConfig& c) {
  return std::exp(-2.0 * c.medium_wavenumber.imag() * c.screen_distance);
}

/// Ratio of oscillation amplitude to background, 2e^{−2x}/(1 − e^{−2x}) with x = Im k′·L.
inline double visibility_formula(double x) {
  if (x < 0) throw std::domain_error("visibility_formula: negative attenuation");
  const double e = std::exp(-2.0 * x);
  return x == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 * e / (-std::expm1(-2.0 * x));
}

/// `cells` cell-centred points covering [−half_width, half_width].
inline std::vector<double> screen_grid(double half_width, std::size_t cells) {
  if (!(half_width > 0) || cells < 2) throw std::invalid_argument("screen_grid: need a positive width and ≥ 2 cells");
  const double dx = 2.0 * half_width / double(cells);
  std::vector<double> x(cells);
  for (std::size_t i = 0; i < cells; ++i) x[i] = -half_width + (double(i) + 0.5) * dx;
  return x;
}

/// Screen spanning the background window with `per_period` cells per fringe.
inline std::vector<double> default_screen(const YoungConfig& c, std::size_t per_period = 64) {
  const double w = c.window > 0 ? c.window : 10.0 * fringe_period(c);
  const auto cells = std::size_t(std::llround(w / fringe_period(c) * double(per_period)));
  return screen_grid(0.5 * w, std::max<std::size_t>(cells, 2));
}

inline double screen_spacing(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("young: screen needs at least two points");
  const double dx = x[1] - x[0];
  if (!(dx > 0)) throw std::invalid_argument("young: screen points must increase");
  const double scale = std::max(std::abs(x.front()), std::abs(x.back()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] + x[x.size() - 1 - i]) > 1e-9 * scale)
      throw std::invalid_argument("young: screen is not symmetric about the centre");
    if (i > 0 && std::abs(x[i] - x[i - 1] - dx) > 1e-9 * dx) throw std::invalid_argument("young: screen is not uniform");
  }
  return dx;
}

inline void check_young(const YoungConfig& c) {
  if (!(c.slit_separation > 0) || !(c.screen_distance > 0))
    throw std::invalid_argument("young: slit separation and screen distance must be positive");
  if (c.screen_distance < 10.0 * c.slit_separation)
    throw std::invalid_argument("young: far field needs L ≥ 10·D");
  if (!(c.medium_wavenumber.real() > 0)) throw std::invalid_argument("young: Re k′ must be positive");
  if (c.medium_wavenumber.imag() < 0) throw std::domain_error("young: Im k′ < 0 would amplify the beam");
  if (c.window < 0) throw std::invalid_argument("young: negative window");
  screen_spacing(c.screen);
}

struct YoungPattern {
  std::vector<double> x;
  std::vector<double> intensity;
  std::vector<double> vacuum;  // normalized vacuum fringes at Re k′
  double damping = 1.0;        // e^{−2 Im k′ L}
  double background = 0.0;     // B inside the window
  double window = 0.0;         // covered width of the window
  double spacing = 0.0;
};

inline YoungPattern pattern(const YoungConfig& c) {
  check_young(c);
  YoungPattern p;
  p.x = c.screen;
  p.spacing = screen_spacing(c.screen);
  p.damping = damping_factor(c);
  const double q = c.medium_wavenumber.real() * c.slit_separation / (2.0 * c.screen_distance);
  const double half = 0.5 * (c.window > 0 ? c.window : 10.0 * fringe_period(c));
  p.vacuum.resize(p.x.size());
  double norm = 0.0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    norm += p.vacuum[i] = std::pow(std::cos(q * p.x[i]), 2);
    if (std::abs(p.x[i]) <= half) ++inside;
  }
  if (inside == 0) throw std::invalid_argument("young: background window holds no screen point");
  norm *= p.spacing;
  for (auto& v : p.vacuum) v /= norm;
  p.window = double(inside) * p.spacing;
  p.background = -std::expm1(-2.0 * c.medium_wavenumber.imag() * c.screen_distance) / p.window;
  p.intensity.resize(p.x.size());
  for (std::size_t i = 0; i < p.x.size(); ++i)
    p.intensity[i] = p.damping * p.vacuum[i] + (std::abs(p.x[i]) <= half ? p.background : 0.0);
  return p;
}

inline double total_intensity(const YoungPattern& p) {
  double s = 0.0;
  for (double v : p.intensity) s += v;
  return s * p.spacing;
}

namespace detail {

struct Extremum {
  double position;  // fractional index
  double value;
  bool maximum;
};

inline std::vector<Extremum> extrema(const std::vector<double>& y) {
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const double a = y[i - 1], b = y[i], c = y[i + 1];
    const bool mx = b > a && b >= c, mn = b < a && b <= c;
    if (!mx && !mn) continue;
    const double curv = a - 2.0 * b + c;
    double shift = 0.0, value = b;
    if (curv != 0.0) {
      shift = 0.5 * (a - c) / curv;
      value = b - 0.125 * (c - a) * (c - a) / curv;
    }
    out.push_back({double(i) + shift, value, mx});
  }
  return out;
}

}  // namespace detail

struct VisibilityReport {
  double ratio = 0.0;     // (I_max − I_min)/background
  double contrast = 0.0;  // (I_max − I_min)/(I_max + I_min)
  double maximum = 0.0;
  double background = 0.0;
  bool vacuum = false;    // background at the interpolation floor: ratio reported as infinite
};

/// Central maximum against the mean of its two neighbouring minima.
inline VisibilityReport visibility(const std::vector<double>& intensity) {
  const auto ex = detail::extrema(intensity);
  const double centre = 0.5 * double(intensity.size() - 1);
  std::size_t best = ex.size();
  for (std::size_t i = 0; i < ex.size(); ++i)
    if (ex[i].maximum && (best == ex.size() || std::abs(ex[i].position - centre) < std::abs(ex[best].position - centre)))
      best = i;
  if (best == ex.size() || best == 0 || best + 1 >= ex.size())
    throw std::runtime_error("visibility: no central maximum with minima on both sides");
  const auto& lo = ex[best - 1];
  const auto& hi = ex[best + 1];
  if (lo.maximum || hi.maximum) throw std::runtime_error("visibility: extrema do not alternate around the centre");
  VisibilityReport r;
  r.maximum = ex[best].value;
  r.background = std::max(0.5 * (lo.value + hi.value), 0.0);
  // three-point vertices of a cos² fringe are good to ~(π/cells per fringe)⁴
  r.vacuum = r.background <= 1e-4 * r.maximum;
  if (r.vacuum) r.background = 0.0;
  r.contrast = (r.maximum - r.background) / (r.maximum + r.background);
  r.ratio = r.vacuum ? std::numeric_limits<double>::infinity() : (r.maximum - r.background) / r.background;
  return r;
}

/// Mean distance between successive maxima inside the central `window`.
inline double fringe_spacing(const YoungPattern& p, double window = 0.0) {
  const double half = 0.5 * (window > 0 ? window : p.window);
  std::vector<double> peaks;
  for (const auto& e : detail::extrema(p.intensity)) {
    const double x = p.x.front() + e.position * p.spacing;
    if (e.maximum && std::abs(x) <= half) peaks.push_back(x);
  }
  if (peaks.size() < 2) throw std::runtime_error("fringe_spacing: fewer than two maxima in the window");
  return (peaks.back() - peaks.front()) / double(peaks.size() - 1);
}

inline void write_pattern_csv(std::ostream& os, const YoungPattern& p) {
  os << "x[length],intensity[1/length],vacuum[1/length]\n";
  os.precision(17);
  for (std::size_t i = 0; i < p.x.size(); ++i) os << p.x[i] << ',' << p.intensity[i] << ',' << p.vacuum[i] << '\n';
}

// ---------------------------------------------------------------------------
// Crossed terms: particle on a 1D position register, each target coupled to
// the sites within a few ranges of its own position.

struct LocalizedMedium {
  std::size_t sites = 48;
  double spacing = 1.0;
  std::vector<double> target_positions;  // in sites
  double target_range = 1.0;             // in sites
  double support = 4.0;                  // coupling cut at support·range
  double coupling = 0.3;                 // λ
  std::vector<double> weights{0.6, 0.4}; // |0⟩ and |+⟩
  double speed = 1.0;
  double width = 1.0;
};

/// Gaussian packet on the register; `cutoff` > 0 zeroes it beyond cutoff·width.
inline StateVector gaussian_packet(std::size_t sites, double centre, double width, double cutoff = 0.0) {
  if (!(width > 0)) throw std::invalid_argument("gaussian_packet: width must be positive");
  Vector v(as_index(sites));
  for (std::size_t i = 0; i < sites; ++i) {
    const double d = double(i) - centre;
    v(as_index(i)) = cutoff > 0 && std::abs(d) > cutoff * width ? 0.0 : std::exp(-0.25 * d * d / (width * width));
  }
  if (v.norm() == 0.0) throw std::invalid_argument("gaussian_packet: packet lies off the register");
  return make_state(v / v.norm());
}

/// Targets of dimension 2 with K_j = f_j(x) ⊗ (σx + ½σz), f_j a truncated Gaussian.
inline SlabSpec localized_slab(const LocalizedMedium& m) {
  if (m.sites < 2 || !(m.target_range > 0) || !(m.support > 0))
    throw std::invalid_argument("localized_slab: bad register or range");
  Matrix h(2, 2);
  h << 0.5, 1.0, 1.0, -0.5;
  SlabSpec s;
  s.width = m.width;
  s.speed = m.speed;
  s.homogeneous = true;
  const Dims dims{m.sites, 2};
  for (double xj : m.target_positions) {
    Matrix f = Matrix::Zero(as_index(m.sites), as_index(m.sites));
    for (std::size_t i = 0; i < m.sites; ++i) {
      const double d = double(i) - xj;
      if (std::abs(d) <= m.support * m.target_range) f(as_index(i), as_index(i)) = std::exp(-0.5 * d * d / (m.target_range * m.target_range));
    }
    s.collisions.push_back(build_collision(make_operator(kron(f, h), dims), m.coupling));
    TargetEnsemble ens;
    Vector plus = Vector::Constant(2, 1.0 / std::sqrt(2.0));
    ens.push_back({0, basis_state(2, 0), m.weights.at(0), xj * m.spacing});
    ens.push_back({1, make_state(plus), m.weights.at(1), xj * m.spacing});
    s.targets.push_back(std::move(ens));
  }
  return s;
}

struct CrossedTermFeedback {
  double mixture = 0.0;    // ‖Σ 2γ A_M|φ⟩⟨ψ|A_M†‖
  double footprint = 0.0;  // same over A_E
  double total = 0.0;      // both families together
};

/// Source of ρ^mix fed by the |φ⟩⟨ψ| block of ρ^coh, per jump family (Frobenius norm).
inline CrossedTermFeedback crossed_term_feedback(const StateVector& phi, const StateVector& psi,
                                                 const LindbladGenerator& gen) {
  for (const auto* v : {&phi, &psi})
    if (std::abs(v->amplitudes.norm() - 1.0) > 1e-10) throw std::invalid_argument("crossed_term_feedback: packet not normalized");
  if (phi.dim() != gen.dim() || psi.dim() != gen.dim())
    throw std::invalid_argument("crossed_term_feedback: packet does not match the register");
  const auto n = phi.amplitudes.size();
  auto family = [&](const std::vector<Jump>& jumps) {
    Matrix out = Matrix::Zero(n, n);
    for (const auto& j : jumps) out += (2.0 * j.rate) * ((j.op * phi.amplitudes) * (j.op * psi.amplitudes).adjoint());
    return out;
  };
  const Matrix m = family(gen.jumps_mixture), f = family(gen.jumps_footprint);
  return {m.norm(), f.norm(), (m + f).norm()};
}

inline CrossedTermFeedback crossed_term_feedback(const StateVector& phi, const StateVector& psi, const SlabSpec& slab) {
  return crossed_term_feedback(phi, psi, build_generator(slab));
}

struct CrossedTermConfig {
  LocalizedMedium medium;
  double packet_width = 1.0;  // in sites
  double centre = 10.0;       // φ's centre; ψ sits at centre + s
};

/// Targets every `stride` sites across the whole register.
inline std::vector<double> evenly_spaced_targets(std::size_t sites, double stride) {
  std::vector<double> x;
  for (double p = 0.5 * stride; p < double(sites); p += stride) x.push_back(p);
  return x;
}

/// Feedback norm against the packet separation s (in sites).
inline std::vector<CrossedTermFeedback> crossed_term_sweep(const CrossedTermConfig& c, const std::vector<double>& separations) {
  const auto gen = build_generator(localized_slab(c.medium));
  const auto phi = gaussian_packet(c.medium.sites, c.centre, c.packet_width);
  std::vector<CrossedTermFeedback> out;
  for (double s : separations) {
    if (c.centre + s >= double(c.medium.sites)) throw std::invalid_argument("crossed_term_sweep: ψ leaves the register");
    out.push_back(crossed_term_feedback(phi, gaussian_packet(c.medium.sites, c.centre + s, c.packet_width), gen));
  }
  return out;
}

struct MixedInputComparison {
  double max_difference = 0.0;  // max over the trajectory of max |ρ^mix_coh − ρ^mix_inc|
  double mixed_trace = 0.0;     // Tr ρ^mix at the end, for scale
  std::size_t steps = 0;
};

/// ρ^mix from (|φ⟩+|ψ⟩)/√2 against ρ̃(0) = ½|φ⟩⟨φ| + ½|ψ⟩⟨ψ| under the same generator.
inline MixedInputComparison compare_mixed_inputs(const CrossedTermConfig& c, double separation, double t_final,
                                                 double dt) {
  const auto gen = build_generator(localized_slab(c.medium));
  const auto phi = gaussian_packet(c.medium.sites, c.centre, c.packet_width);
  const auto psi = gaussian_packet(c.medium.sites, c.centre + separation, c.packet_width);
  const Vector sum = phi.amplitudes + psi.amplitudes;
  const Matrix coherent = sum * sum.adjoint() / sum.squaredNorm();
  const Matrix incoherent = 0.5 * (phi.amplitudes * phi.amplitudes.adjoint() + psi.amplitudes * psi.amplitudes.adjoint());
  const auto a = split_evolve(make_density(coherent), gen, t_final, dt);
  const auto b = split_evolve(make_density(incoherent), gen, t_final, dt);
  MixedInputComparison r;
  for (std::size_t i = 0; i < a.mixed.size(); ++i)
    r.max_difference = std::max(r.max_difference, (a.mixed[i] - b.mixed[i]).cwiseAbs().maxCoeff());
  r.mixed_trace = a.mixed.back().trace().real();
  r.steps = a.times.size() - 1;
  return r;
}

}  // namespace decohere
