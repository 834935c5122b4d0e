// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_LIMITS_HPP
#define CHRONOSIM_LIMITS_HPP

#include "chronosim/bounds.hpp"
#include "chronosim/oscillator.hpp"

namespace chronosim {

enum class SqueezeVerdict { semiclassical, squeezed, unclassified };

inline const char* to_string(SqueezeVerdict v) {
  switch (v) {
    case SqueezeVerdict::semiclassical: return "semiclassical";
    case SqueezeVerdict::squeezed: return "squeezed";
    default: return "unclassified";
  }
}

struct SqueezeReport {
  double sigma_t = 0.0;   // std of tbar = t_C / T0 (dimensionless)
  double sigma_H = 0.0;   // std of Hbar = H_C * T0
  double residual = 0.0;  // || L psi - <L> psi ||, L = tbar + i Hbar
  double rs_gap = 0.0;    // relative uncertainty-relation gap
  double tol = 0.0;       // residual tolerance used (10 / sigma)
  bool degenerate = false;
  SqueezeVerdict verdict = SqueezeVerdict::unclassified;
};

// Classify one pure control state. The time operator spectrum is windowed to
// the d consecutive lattice labels centered on the state's circular mean, so
// the variance of the periodic label is well defined for localized states.
inline SqueezeReport squeezing_report(const ClockModel& m, const ClockState& in) {
  SqueezeReport r;
  r.tol = 10.0 / m.sigma;
  ClockState th = basis_change(in, Basis::theta);
  ClockState en = basis_change(in, Basis::energy);
  const int d = m.d;

  // windowed dimensionless time diag: 2 pi * k over S_d(kbar)
  cxd mean_phase = 0.0;
  for (int k = 0; k < d; ++k)
    mean_phase += std::norm(th.amplitudes[k]) *
                  cxd(std::cos(kTwoPi * k / d), std::sin(kTwoPi * k / d));
  double kbar = std::arg(mean_phase) / kTwoPi * d;
  RVec tdiag(d);
  for (int k = 0; k < d; ++k) {
    double kk = k - kbar;
    kk -= d * std::round(kk / d);  // representative in [-d/2, d/2)
    tdiag[k] = kTwoPi * (kk + kbar);
  }
  RVec hdiag(d);
  for (int n = 0; n < d; ++n) hdiag[n] = kTwoPi * n;

  double t1m = 0, t2m = 0, h1m = 0, h2m = 0;
  for (int k = 0; k < d; ++k) {
    double w = std::norm(th.amplitudes[k]);
    t1m += w * tdiag[k];
    t2m += w * sq(tdiag[k]);
  }
  for (int n = 0; n < d; ++n) {
    double w = std::norm(en.amplitudes[n]);
    h1m += w * hdiag[n];
    h2m += w * sq(hdiag[n]);
  }
  r.sigma_t = std::sqrt(std::max(0.0, t2m - sq(t1m)));
  r.sigma_H = std::sqrt(std::max(0.0, h2m - sq(h1m)));

  // residual of the equal-width eigen-equation, lambda = 1
  Vec tpsi = th.amplitudes;
  for (int k = 0; k < d; ++k) tpsi[k] *= tdiag[k];
  Vec hpsi_e = en.amplitudes;
  for (int n = 0; n < d; ++n) hpsi_e[n] *= hdiag[n];
  Vec hpsi = Dft::instance().energy_to_theta(hpsi_e);
  Vec lpsi = tpsi + cxd(0.0, 1.0) * hpsi;
  cxd lam = th.amplitudes.dot(lpsi);
  r.residual = (lpsi - lam * th.amplitudes).norm();

  // relative uncertainty-relation gap for the pair (tbar, Hbar)
  Vec com = tpsi;  // [A,B] psi computed directly: A B psi - B A psi
  {
    Vec btpsi_e = Dft::instance().theta_to_energy(tpsi);
    for (int n = 0; n < d; ++n) btpsi_e[n] *= hdiag[n];
    Vec ba = Dft::instance().energy_to_theta(btpsi_e);
    Vec ab = hpsi;
    for (int k = 0; k < d; ++k) ab[k] *= tdiag[k];
    com = ab - ba;
  }
  cxd cexp = th.amplitudes.dot(cxd(0.0, -1.0) * com);
  double cov = std::real(tpsi.dot(hpsi)) - t1m * h1m;
  double lhs = (t2m - sq(t1m)) * (h2m - sq(h1m));
  double rhs = 0.25 * (sq(std::real(cexp)) + 4.0 * sq(cov));
  r.rs_gap = lhs > 0 ? (lhs - rhs) / lhs : 0.0;

  double scale = std::max(r.sigma_t, r.sigma_H);
  if (scale <= 0.0 || r.sigma_H < 1e-9 * std::max(1.0, scale) ||
      r.sigma_t < 1e-9 * std::max(1.0, scale)) {
    r.degenerate = true;
    r.verdict = SqueezeVerdict::squeezed;
    return r;
  }
  bool widths_equal = std::abs(r.sigma_t - r.sigma_H) / scale <= 0.05;
  bool residual_ok = r.residual <= r.tol;
  r.verdict = (widths_equal && residual_ok) ? SqueezeVerdict::semiclassical
                                            : SqueezeVerdict::squeezed;
  return r;
}

// Density-matrix entry point: only (numerically) pure inputs are classified.
inline SqueezeReport squeezing_report_mixed(const ClockModel& m, const Mat& rho,
                                            double purity_tol = 1e-6) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  int imax;
  es.eigenvalues().maxCoeff(&imax);
  if (es.eigenvalues()[imax] < 1.0 - purity_tol) {
    SqueezeReport r;
    r.verdict = SqueezeVerdict::unclassified;
    return r;
  }
  ClockState s;
  s.basis_tag = Basis::theta;
  s.amplitudes = es.eigenvectors().col(imax);
  return squeezing_report(m, s);
}

// epsilon_quality(tau): cumulative integral of sqrt(tr[V_C^2 rho((t))]).
inline double epsilon_quality(const CycleTrace& tr, double tau) {
  if (tau < 0.0 || tau > tr.ts[tr.ts.size() - 1] + 1e-12)
    throw ConfigError("epsilon_quality: tau outside the trace");
  double acc = 0.0;
  double dt = tr.ts[1] - tr.ts[0];
  for (long i = 1; i < tr.ts.size(); ++i) {
    if (tr.ts[i] <= tau + 1e-15) {
      acc += 0.5 * (tr.quality_integrand[i] + tr.quality_integrand[i - 1]) * dt;
    } else {
      double frac = (tau - tr.ts[i - 1]) / dt;
      if (frac > 0.0) {
        double q_tau = tr.quality_integrand[i - 1] +
                       frac * (tr.quality_integrand[i] - tr.quality_integrand[i - 1]);
        acc += 0.5 * (tr.quality_integrand[i - 1] + q_tau) * frac * dt;
      }
      break;
    }
  }
  return acc;
}

struct IsentropicReport {
  double t_max = 0.0;
  bool capped = false;  // no root before t_cut
  double eps_gate = 0.0;
  double lhs_constant = 0.0;
  double eps_quality_at_tmax = 0.0;
  BoundConstants constants;
};

inline double eps_gate_upper_limit(double lambda = 4.64) {
  return 1.0 - std::sqrt(1.0 - 1.0 / (4.0 * sq(1.0 + lambda)));
}

// Solve for the isentropic-interval length: the largest t with
//   1/(4(1+lambda)^2) = eps_gate (2 - eps_gate)
//                      + 2 eps_quality(t) sqrt(1 - eps_gate).
// eps_quality is nondecreasing, so bisection finds the unique root.
inline IsentropicReport solve_t_max(const CycleTrace& tr, double eps_gate,
                                    const BoundConstants& bc = {}) {
  IsentropicReport rep;
  rep.constants = bc;
  rep.eps_gate = eps_gate;
  rep.lhs_constant = 1.0 / (4.0 * sq(1.0 + bc.lambda));
  if (eps_gate < 0.0 || eps_gate >= eps_gate_upper_limit(bc.lambda))
    throw ConfigError("solve_t_max: eps_gate outside admissible range");
  double target = (rep.lhs_constant - eps_gate * (2.0 - eps_gate)) /
                  (2.0 * std::sqrt(1.0 - eps_gate));
  if (target <= 0.0) {
    rep.t_max = 0.0;
    return rep;
  }
  double tend = tr.ts[tr.ts.size() - 1];
  if (epsilon_quality(tr, tend) < target) {
    rep.t_max = tend;
    rep.capped = true;
    rep.eps_quality_at_tmax = epsilon_quality(tr, tend);
    return rep;
  }
  double lo = 0.0, hi = tend;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (epsilon_quality(tr, mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * tend) break;
  }
  rep.t_max = 0.5 * (lo + hi);
  rep.eps_quality_at_tmax = epsilon_quality(tr, rep.t_max);
  return rep;
}

// Tightest admissible instantaneous initial-cycle-state parameter:
//   || tr_C[Htilde rho0_C] ||_F  *  || Htilde ||_F  *  2 M(1) T0
// with Htilde = H' - H_C (the interaction part).
inline double epsilon_H0(const ConditionalPropagator& prop, const CycleStats& st) {
  const JointHamiltonian& H = prop.hamiltonian();
  const ClockModel& m = prop.model();
  const Vec& c = prop.dissipator().renewal_target.amplitudes;
  const int dL = prop.d_L();
  Mat K = Mat::Zero(dL, dL);
  for (int l = 0; l < H.window_count(); ++l) {
    double w = (c.array().abs2() * H.profile(l).array()).sum();
    K += w * H.drive(l);
  }
  double frob_tr = K.norm();
  double frob2 = 0.0;
  for (int k = 0; k < m.d; ++k) {
    Mat B = Mat::Zero(dL, dL);
    for (int l = 0; l < H.window_count(); ++l)
      B += H.profile(l)[k] * H.drive(l);
    frob2 += B.squaredNorm();
  }
  return frob_tr * std::sqrt(frob2) * 2.0 * st.M1 * m.T0;
}

// Steady-state gate-frequency bounds.
inline BoundReport check_steady_bounds(const CycleStats& st, double eps_H0,
                                       double f, double T0, bool classical,
                                       const BoundConstants& bc = {}) {
  BoundReport rep;
  rep.constants = bc;
  double p = st.P_in * T0 * T0 + eps_H0;
  BoundCheck c2;
  c2.name = "f <= (T0^2 P_in + eps_H0) / ((lambda+1) kappa T0)";
  c2.lhs = f;
  c2.rhs = p / ((bc.lambda + 1.0) * bc.kappa * T0);
  c2.degenerate = p <= 0.0;
  c2.pass = c2.degenerate ? f == 0.0 : c2.lhs <= c2.rhs;
  rep.checks.push_back(c2);
  if (classical) {
    BoundCheck c1;
    c1.name = "f <= sqrt(T0^2 P_in + eps_H0) / ((lambda+1) c0 T0)";
    c1.lhs = f;
    c1.rhs = std::sqrt(std::max(0.0, p)) / ((bc.lambda + 1.0) * bc.c0 * T0);
    c1.degenerate = p <= 0.0;
    c1.pass = c1.degenerate ? f == 0.0 : c1.lhs <= c1.rhs;
    rep.checks.push_back(c1);
  }
  return rep;
}

}  // namespace chronosim

#endif
