// evolution.hpp: fixed-step RK4 integration of the master equation and of
// the coherent/mixed split.
#pragma once

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "decohere/generator.hpp"

namespace decohere {

struct EvolveOptions {
  std::size_t save_every = 1;             // keep every k-th step (the final state is always kept)
  double step_warning = 0.1;              // warn when dt·scale exceeds this
  double max_trace_drift_per_step = 1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
  std::vector<std::string> warnings;
  Dims dims;

  DensityMatrix at(std::size_t i) const { return DensityMatrix{states.at(i), dims, true}; }
  const Matrix& final_state() const { return states.back(); }
};

struct SplitTrajectory {
  std::vector<double> times;
  std::vector<Matrix> coherent;
  std::vector<Matrix> mixed;
  std::vector<std::string> warnings;
  Dims dims;
};

namespace detail {

struct StepPlan {
  std::size_t steps = 0;
  double dt = 0.0;
  std::vector<std::string> warnings;
};

// dt is shortened so that an integer number of steps lands on t_final.
inline StepPlan plan_steps(const LindbladGenerator& gen, const Matrix& rho0, double t_final, double dt,
                           const EvolveOptions& opt) {
  if (rho0.rows() != rho0.cols() || std::size_t(rho0.rows()) != gen.dim())
    throw std::invalid_argument("evolve: state and generator dimensions differ");
  if (!(dt > 0) || !(t_final >= 0) || !std::isfinite(t_final)) throw std::invalid_argument("evolve: bad time grid");
  if (opt.save_every == 0) throw std::invalid_argument("evolve: save_every must be positive");
  StepPlan p;
  p.steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  p.dt = p.steps == 0 ? dt : t_final / double(p.steps);
  const double s = p.dt * gen.scale();
  if (s > opt.step_warning) {
    std::ostringstream os;
    os << "dt*|generator| = " << s << " exceeds " << opt.step_warning;
    p.warnings.push_back(os.str());
  }
  return p;
}

template <class F, class State>
State rk4_step(const F& f, const State& y, double h) {
  const State k1 = f(y);
  const State k2 = f(y + (0.5 * h) * k1);
  const State k3 = f(y + (0.5 * h) * k2);
  const State k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_drift(double before, double after, const Matrix& rho, const EvolveOptions& opt, double t) {
  if (!rho.allFinite()) throw NumericalError("evolve: non-finite state at t = " + std::to_string(t));
  if (std::abs(after - before) > opt.max_trace_drift_per_step)
    throw NumericalError("evolve: trace drift " + std::to_string(std::abs(after - before)) +
                         " in one step at t = " + std::to_string(t) + "; reduce dt");
}

}  // namespace detail

inline Trajectory evolve(const DensityMatrix& rho0, const LindbladGenerator& gen, double t_final, double dt,
                         const EvolveOptions& opt = {}) {
  auto plan = detail::plan_steps(gen, rho0.elements, t_final, dt, opt);
  Trajectory tr;
  tr.dims = rho0.dims;
  tr.warnings = std::move(plan.warnings);
  Matrix rho = rho0.elements;
  tr.times.push_back(0.0);
  tr.states.push_back(rho);
  const auto f = [&gen](const Matrix& r) -> Matrix { return gen.apply(r); };
  for (std::size_t k = 1; k <= plan.steps; ++k) {
    const double before = rho.trace().real();
    rho = detail::rk4_step(f, rho, plan.dt);
    const double t = double(k) * plan.dt;
    detail::check_drift(before, rho.trace().real(), rho, opt, t);
    if (k % opt.save_every == 0 || k == plan.steps) {
      tr.times.push_back(t);
      tr.states.push_back(rho);
    }
  }
  return tr;
}

/// ρ^coh' = −i(Hρ^coh − ρ^coh H†), ρ^mix' = −i(Hρ^mix − ρ^mix H†) + Σ 2γ A(ρ^coh + ρ^mix)A†,
/// with ρ^coh(0) = ρ0 and ρ^mix(0) = 0. The two are stepped together.
inline SplitTrajectory split_evolve(const DensityMatrix& rho0, const LindbladGenerator& gen, double t_final,
                                    double dt, const EvolveOptions& opt = {}) {
  auto plan = detail::plan_steps(gen, rho0.elements, t_final, dt, opt);
  SplitTrajectory tr;
  tr.dims = rho0.dims;
  tr.warnings = std::move(plan.warnings);
  const auto n = rho0.elements.rows();
  // stacked [coh | mix] so the shared RK4 helper applies
  Matrix y(n, 2 * n);
  y.leftCols(n) = rho0.elements;
  y.rightCols(n).setZero();
  const auto f = [&gen, n](const Matrix& s) -> Matrix {
    Matrix out(n, 2 * n);
    const Matrix coh = s.leftCols(n);
    const Matrix mix = s.rightCols(n);
    out.leftCols(n) = gen.damped_term(coh);
    out.rightCols(n) = gen.damped_term(mix) + gen.jump_term(coh + mix);
    return out;
  };
  tr.times.push_back(0.0);
  tr.coherent.push_back(y.leftCols(n));
  tr.mixed.push_back(y.rightCols(n));
  for (std::size_t k = 1; k <= plan.steps; ++k) {
    const double before = (y.leftCols(n) + y.rightCols(n)).trace().real();
    y = detail::rk4_step(f, y, plan.dt);
    const double t = double(k) * plan.dt;
    detail::check_drift(before, (y.leftCols(n) + y.rightCols(n)).trace().real(), y, opt, t);
    if (k % opt.save_every == 0 || k == plan.steps) {
      tr.times.push_back(t);
      tr.coherent.push_back(y.leftCols(n));
      tr.mixed.push_back(y.rightCols(n));
    }
  }
  return tr;
}

/// CSV: t, trace, purity, min eigenvalue, then re/im of the chosen elements.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& elements = {{0, 0}}) {
  // units in brackets, [1] for dimensionless; time in units of 1/energy (ħ = 1)
  os << "t[time],trace[1],purity[1],min_eigenvalue[1]";
  for (const auto& [i, j] : elements) os << ",re_rho_" << i << '_' << j << "[1],im_rho_" << i << '_' << j << "[1]";
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const Matrix& r = tr.states[k];
    os << tr.times[k] << ',' << r.trace().real() << ',' << purity(r) << ',' << min_eigenvalue(r);
    for (const auto& [i, j] : elements) {
      if (i >= std::size_t(r.rows()) || j >= std::size_t(r.cols()))
        throw std::out_of_range("write_trajectory_csv: element outside the matrix");
      const cplx z = r(as_index(i), as_index(j));
      os << ',' << z.real() << ',' << z.imag();
    }
    os << '\n';
  }
}

}  // namespace decohere
