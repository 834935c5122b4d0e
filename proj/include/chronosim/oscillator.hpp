// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_OSCILLATOR_HPP
#define CHRONOSIM_OSCILLATOR_HPP

#include <memory>
#include <random>
#include <sstream>

#include "chronosim/dissipator.hpp"
#include "chronosim/run.hpp"

namespace chronosim {

struct GridSpec {
  int pts_per_T0 = 512;
  double t_cut_T0 = 3.0;
  double tail_target = 1e-3;   // adaptive t_cut extension threshold
  double refine_target = 1e-3; // grid doubling threshold for statistics
  int max_pts_per_T0 = 1 << 14;
  double max_t_cut_T0 = 10.0;
};

// No-renewal conditional propagator for G = H' - i V_C via a cached
// non-Hermitian eigendecomposition.
class ConditionalPropagator {
 public:
  ConditionalPropagator(const ClockModel& m, const GateProgram& program,
                        const Dissipator& D)
      : H_(m, program, D.vc_values), D_(D) {
    if (program.length() != m.Ng - 1)
      throw ConfigError("oscillator program must carry Ng-1 gates");
    Mat G = H_.dense();
    Eigen::ComplexEigenSolver<Mat> es(G);
    w_ = es.eigenvalues();
    S_ = es.eigenvectors();
    lu_ = std::make_unique<Eigen::PartialPivLU<Mat>>(S_);
  }

  const JointHamiltonian& hamiltonian() const { return H_; }
  const Dissipator& dissipator() const { return D_; }
  const ClockModel& model() const { return H_.model(); }
  int d_L() const { return H_.d_L(); }

  Vec mode_coefficients(const Vec& psi0) const { return lu_->solve(psi0); }

  // Unnormalized conditional state at time t from precomputed coefficients.
  Vec state_at(double t, const Vec& c0) const {
    Vec c = c0;
    for (int i = 0; i < c.size(); ++i)
      c[i] *= std::exp(cxd(0.0, -1.0) * w_[i] * t);
    return S_ * c;
  }

  double survival(double t, const Vec& c0) const {
    return state_at(t, c0).squaredNorm();
  }

  // 2 <V_C> on the unnormalized state: the renewal-time density.
  double density(const Vec& psi) const {
    const int d = model().d;
    double acc = 0.0;
    for (int a = 0; a < d_L(); ++a)
      acc += (psi.segment(a * d, d).array().abs2() * D_.vc_values.array()).sum();
    return 2.0 * acc;
  }

  // Logical operator sum_k v_k a_k a_k^dag of the unnormalized state.
  Mat logical_renewal_marginal(const Vec& psi) const {
    const int d = model().d;
    Mat M = Mat::Zero(d_L(), d_L());
    for (int a = 0; a < d_L(); ++a)
      for (int b = 0; b < d_L(); ++b)
        M(a, b) = (psi.segment(a * d, d).array() *
                   D_.vc_values.array().cast<cxd>() *
                   psi.segment(b * d, d).conjugate().array())
                      .sum();
    return M;
  }

  // Logical operator <Psi(0)| H' |Psi(0)>_C : the renewal-side energy kernel.
  Mat renewal_energy_kernel() const {
    const int d = model().d;
    const Vec& c = D_.renewal_target.amplitudes;
    Mat K = Mat::Identity(d_L(), d_L()) *
            clock_mean_energy(model(), D_.renewal_target);
    for (int l = 0; l < H_.window_count(); ++l) {
      double w = (c.array().abs2() * H_.profile(l).array()).sum();
      K += w * H_.drive(l);
    }
    return K;
  }

  double hp_expectation(const Vec& psi) const {
    JointState s{psi, d_L(), model().d};
    return std::real(psi.dot(H_.apply(s)));
  }

  // 2 Re <psi| H' V_C |psi> (energy outflow integrand).
  double hp_vc_expectation(const Vec& psi) const {
    const int d = model().d;
    Vec vpsi = psi;
    for (int a = 0; a < d_L(); ++a)
      vpsi.segment(a * d, d).array() *= D_.vc_values.array();
    JointState s{vpsi, d_L(), model().d};
    Vec hvpsi = H_.apply(s);
    return 2.0 * std::real(psi.dot(hvpsi));
  }

 private:
  JointHamiltonian H_;
  Dissipator D_;
  Vec w_;
  Mat S_;
  std::unique_ptr<Eigen::PartialPivLU<Mat>> lu_;
};

// Time-gridded record of one no-renewal cycle.
struct CycleTrace {
  RVec ts;
  RVec survival;
  RVec density;       // 2 <V_C>, unnormalized
  RVec energy;        // <H'> on the unnormalized state
  RVec quality_integrand;  // sqrt(tr[V_C^2 rho((t))])
  double T0 = 0.0, t1 = 0.0;
  double tail_mass = 0.0;
  double E0_conditional = 0.0;  // tr[H' rho(tau|tau)]
  std::shared_ptr<ConditionalPropagator> prop;
  Vec c0;  // mode coefficients of the cycle's initial state
  GridSpec grid;

  int index_of(double t) const {
    double dt = ts[1] - ts[0];
    long i = std::lround(t / dt);
    return static_cast<int>(std::min<long>(std::max<long>(i, 0), ts.size() - 1));
  }
};

namespace detail {

inline void fill_trace(CycleTrace& tr, const Vec& psi0) {
  const auto& P = *tr.prop;
  const ClockModel& m = P.model();
  const int d = m.d;
  long n = std::lround(tr.grid.pts_per_T0 * tr.grid.t_cut_T0);
  tr.ts.resize(n + 1);
  tr.survival.resize(n + 1);
  tr.density.resize(n + 1);
  tr.energy.resize(n + 1);
  tr.quality_integrand.resize(n + 1);
  tr.c0 = P.mode_coefficients(psi0);
  double dt = tr.grid.t_cut_T0 * m.T0 / n;
  double prev = 1.0;
  for (long i = 0; i <= n; ++i) {
    double t = i * dt;
    Vec psi = P.state_at(t, tr.c0);
    tr.ts[i] = t;
    tr.survival[i] = psi.squaredNorm();
    if (tr.survival[i] > prev + 1e-10)
      throw NumericalFault("propagate_conditional: survival increased");
    prev = tr.survival[i];
    tr.density[i] = P.density(psi);
    tr.energy[i] = P.hp_expectation(psi);
    double q2 = 0.0;
    for (int a = 0; a < P.d_L(); ++a)
      q2 += (psi.segment(a * d, d).array().abs2() *
             P.dissipator().vc_values.array().square())
                .sum();
    tr.quality_integrand[i] = std::sqrt(std::max(0.0, q2));
  }
  tr.tail_mass = tr.survival[n];
  tr.E0_conditional = P.hp_expectation(psi0);
}

}  // namespace detail

// Propagate the unnormalized conditional state on a uniform grid; t_cut is
// extended until the tail mass is below target (capped, flagged by throw).
inline CycleTrace propagate_conditional(
    std::shared_ptr<ConditionalPropagator> prop, const Vec& psi0,
    GridSpec grid = {}) {
  CycleTrace tr;
  tr.prop = std::move(prop);
  tr.grid = grid;
  const ClockModel& m = tr.prop->model();
  tr.T0 = m.T0;
  tr.t1 = m.t1();
  bool unitary = tr.prop->dissipator().vc_values.maxCoeff() <= 0.0;
  while (true) {
    detail::fill_trace(tr, psi0);
    if (unitary || tr.tail_mass <= grid.tail_target) break;
    if (tr.grid.t_cut_T0 >= grid.max_t_cut_T0)
      throw NumericalFault("propagate_conditional: no renewal mass before t_cut cap");
    tr.grid.t_cut_T0 *= 2.0;
  }
  return tr;
}

inline CycleTrace propagate_conditional(const ClockModel& m,
                                        const GateProgram& program,
                                        const Dissipator& D,
                                        GridSpec grid = {}) {
  auto prop = std::make_shared<ConditionalPropagator>(m, program, D);
  Vec psi0 = joint_product(program.initial_logical, D.renewal_target).amplitudes;
  return propagate_conditional(prop, psi0, grid);
}

struct CycleStats {
  double eps_r = 0.0;
  double M1 = 0.0;             // seconds
  double E_re = 0.0;           // 1/seconds
  double E_diss = 0.0;         // 1/seconds
  double P_in = 0.0;           // 1/seconds^2
  double P_diss = 0.0;
  double identity_gap = 0.0;   // |E_re - tr[H' rho(tau|tau)]| / tr[...]
  double tail_mass = 0.0;
  int pts_per_T0_used = 0;
};

// Single-pass quadrature statistics on the trace's current grid.
inline CycleStats cycle_statistics_single(const CycleTrace& t) {
    CycleStats s;
    const long n = t.ts.size() - 1;
    double dt = t.ts[1] - t.ts[0];
    // eps_r from the exact relation  int_a^b P dt = surv(a) - surv(b).
    int ja = t.index_of(t.T0 - t.t1), jb = t.index_of(t.T0);
    s.eps_r = 1.0 - (t.survival[ja] - t.survival[jb]);
    const auto& P = *t.prop;
    double m1 = 0.0, ere = 0.0;
    Mat K = P.renewal_energy_kernel();
    RVec inner(n + 1);  // cumulative int_0^t 2 Re <H' V_C>
    double acc = 0.0;
    double prev_g = P.hp_vc_expectation(P.state_at(0.0, t.c0));
    inner[0] = 0.0;
    double prev_dens = t.density[0];
    double prev_t = 0.0;
    double prev_ml = 2.0 * std::real(
        (P.logical_renewal_marginal(P.state_at(0.0, t.c0)).transpose() * K)
            .trace());
    for (long i = 1; i <= n; ++i) {
      Vec psi = P.state_at(t.ts[i], t.c0);
      double g = P.hp_vc_expectation(psi);
      acc += 0.5 * (g + prev_g) * dt;
      inner[i] = acc;
      prev_g = g;
      double ml = 2.0 * std::real(
          (P.logical_renewal_marginal(psi).transpose() * K).trace());
      ere += 0.5 * (ml + prev_ml) * dt;
      prev_ml = ml;
      m1 += 0.5 * (t.density[i] * t.ts[i] + prev_dens * prev_t) * dt;
      prev_dens = t.density[i];
      prev_t = t.ts[i];
    }
    s.M1 = m1;
    s.E_re = ere;
    double ediss = 0.0;
    for (long i = 1; i <= n; ++i)
      ediss += 0.5 * (t.density[i] * inner[i] + t.density[i - 1] * inner[i - 1]) * dt;
    s.E_diss = ediss;
    s.P_in = s.E_re / t.T0;
    s.P_diss = s.E_diss / t.T0;
    s.identity_gap = std::abs(s.E_re - t.E0_conditional) / t.E0_conditional;
    s.tail_mass = t.tail_mass;
    s.pts_per_T0_used = t.grid.pts_per_T0;
    return s;
}

// Statistics with grid refinement: doubled until the first moment and the
// renewal energy shift by less than grid.refine_target (relative).
inline CycleStats renewal_statistics(CycleTrace& tr) {
  Vec psi0 = tr.prop->state_at(0.0, tr.c0);
  CycleStats s = cycle_statistics_single(tr);
  while (tr.grid.pts_per_T0 < tr.grid.max_pts_per_T0) {
    CycleTrace finer = tr;
    finer.grid.pts_per_T0 *= 2;
    detail::fill_trace(finer, psi0);
    CycleStats s2 = cycle_statistics_single(finer);
    double shift = std::abs(s2.E_re - s.E_re) / std::max(1e-300, std::abs(s2.E_re));
    shift = std::max(shift, std::abs(s2.M1 - s.M1) / std::max(1e-300, s2.M1));
    tr = std::move(finer);
    s = s2;
    if (shift < tr.grid.refine_target) break;
  }
  return s;
}

enum class CycleMode { montecarlo, mode_time };

struct CycleRecord {
  double tau = 0.0;            // renewal time of this cycle, seconds
  double max_error = 0.0;      // max trace distance at in-cycle gate times
  int samples = 0;             // number of gate times before renewal
  CycleStats stats;
};

struct MultiCycleReport {
  std::vector<CycleRecord> cycles;
  CycleMode mode = CycleMode::montecarlo;
  std::uint64_t seed = 0;
  int d = 0, Ng = 0;
  double T0 = 0.0;
  double eps_bar = 0.0;
  double gamma_bar0 = 0.0;

  double spread_of_max_errors() const {
    double lo = 1e300, hi = -1e300, mean = 0.0;
    int n = 0;
    for (const auto& c : cycles) {
      if (c.samples == 0) continue;
      lo = std::min(lo, c.max_error);
      hi = std::max(hi, c.max_error);
      mean += c.max_error;
      ++n;
    }
    if (n == 0) return 0.0;
    mean /= n;
    return (hi - lo) / mean;
  }

  std::string to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"schema_version\": \"chronosim.cycles.v1\",\n"
       << "  \"mode\": \"" << (mode == CycleMode::montecarlo ? "montecarlo" : "mode_time")
       << "\",\n  \"seed\": " << seed << ",\n  \"d\": " << d
       << ", \"Ng\": " << Ng << ", \"T0_seconds\": " << T0
       << ", \"eps_bar\": " << eps_bar << ", \"gamma_bar0\": " << gamma_bar0
       << ",\n  \"cycles\": [\n";
    for (size_t i = 0; i < cycles.size(); ++i) {
      const auto& c = cycles[i];
      os << "    {\"tau_seconds\": " << c.tau << ", \"max_error\": "
         << c.max_error << ", \"samples\": " << c.samples
         << ", \"eps_r\": " << c.stats.eps_r << ", \"P_in\": " << c.stats.P_in
         << ", \"P_diss\": " << c.stats.P_diss << "}"
         << (i + 1 < cycles.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
  }
};

namespace detail {

inline double runif(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;  // uniform in [0,1), reproducible
}

// Rank-limited conditional ensemble: weights and pure joint states.
struct Ensemble {
  std::vector<double> w;
  std::vector<Vec> psi;
};

}  // namespace detail

// Multi-cycle run. montecarlo: jump unravelling (renewal time sampled from
// the renewal density via inverse CDF on the grid; jump channel j picked
// proportional to v_j |a_j|^2, output a_j/|a_j| (x) |0>_C). mode_time:
// deterministic renewal at the density mode; the exact renewal marginal is
// carried as a rank <= d_L ensemble. Per cycle, trace distances to the
// idealized targets are recorded at the gate times inside the cycle.
inline MultiCycleReport run_cycles(const ClockModel& m, const GateProgram& program,
                                   const Dissipator& D, int L, CycleMode mode,
                                   std::uint64_t seed, GridSpec grid = {}) {
  if (L < 1) throw ConfigError("run_cycles: L must be >= 1");
  auto prop = std::make_shared<ConditionalPropagator>(m, program, D);
  const int d = m.d;
  const int dL = program.d_L;
  std::mt19937_64 rng(seed);

  MultiCycleReport rep;
  rep.mode = mode;
  rep.seed = seed;
  rep.d = d;
  rep.Ng = m.Ng;
  rep.T0 = m.T0;
  rep.eps_bar = m.eps_bar;
  rep.gamma_bar0 = D.gamma_bar0;

  std::vector<Mat> gate_prefix;  // U(m_j)...U(m_1)
  {
    Mat cur = Mat::Identity(dL, dL);
    gate_prefix.push_back(cur);
    for (const auto& g : program.generators) {
      cur = unitary_of(g) * cur;
      gate_prefix.push_back(cur);
    }
  }

  detail::Ensemble ens;
  ens.w = {1.0};
  ens.psi = {joint_product(program.initial_logical, D.renewal_target).amplitudes};
  std::vector<Vec> logical0 = {program.initial_logical};

  for (int cyc = 0; cyc < L; ++cyc) {
    // Branch traces for this cycle.
    std::vector<Vec> c0s;
    for (const Vec& p : ens.psi) c0s.push_back(prop->mode_coefficients(p));
    // Mixture survival/density on the grid.
    long n = std::lround(grid.pts_per_T0 * grid.t_cut_T0);
    double dt = grid.t_cut_T0 * m.T0 / n;
    RVec surv(n + 1), dens(n + 1);
    for (long i = 0; i <= n; ++i) {
      double s = 0.0, de = 0.0;
      for (size_t b = 0; b < ens.w.size(); ++b) {
        Vec psi = prop->state_at(i * dt, c0s[b]);
        s += ens.w[b] * psi.squaredNorm();
        de += ens.w[b] * prop->density(psi);
      }
      surv[i] = s;
      dens[i] = de;
    }
    if (surv[n] > grid.tail_target * 8.0)
      throw NumericalFault("run_cycles: renewal mass missing before t_cut");

    // Renewal time.
    double tau;
    if (mode == CycleMode::montecarlo) {
      double u = detail::runif(rng) * (1.0 - surv[n]);
      long lo = 0;
      while (lo < n && 1.0 - surv[lo + 1] < u) ++lo;
      double m0 = 1.0 - surv[lo], m1v = 1.0 - surv[lo + 1];
      double frac = m1v > m0 ? (u - m0) / (m1v - m0) : 0.0;
      tau = (lo + frac) * dt;
    } else {
      long best = 0;
      for (long i = 1; i <= n; ++i)
        if (dens[i] > dens[best]) best = i;
      tau = best * dt;
    }

    // Cycle statistics: single-pass quadrature, mixed over branches (the
    // statistical functionals are linear in the unnormalized state).
    CycleRecord rec;
    rec.tau = tau;
    {
      double e0c = 0.0;
      for (size_t b = 0; b < ens.w.size(); ++b) {
        CycleTrace tb;
        tb.prop = prop;
        tb.grid = grid;
        tb.T0 = m.T0;
        tb.t1 = m.t1();
        detail::fill_trace(tb, ens.psi[b]);
        CycleStats sb = cycle_statistics_single(tb);
        rec.stats.eps_r += ens.w[b] * sb.eps_r;
        rec.stats.M1 += ens.w[b] * sb.M1;
        rec.stats.E_re += ens.w[b] * sb.E_re;
        rec.stats.E_diss += ens.w[b] * sb.E_diss;
        rec.stats.tail_mass += ens.w[b] * sb.tail_mass;
        e0c += ens.w[b] * tb.E0_conditional;
      }
      rec.stats.P_in = rec.stats.E_re / m.T0;
      rec.stats.P_diss = rec.stats.E_diss / m.T0;
      rec.stats.identity_gap = std::abs(rec.stats.E_re - e0c) / e0c;
      rec.stats.pts_per_T0_used = grid.pts_per_T0;
    }
    for (int j = 1; j <= m.Ng && j * m.t1() < tau; ++j) {
      double t = j * m.t1();
      std::vector<double> wn;
      std::vector<Vec> sim, ideal;
      double tot = 0.0;
      for (size_t b = 0; b < ens.w.size(); ++b) {
        Vec psi = prop->state_at(t, c0s[b]);
        double nn = psi.squaredNorm();
        wn.push_back(ens.w[b] * nn);
        tot += ens.w[b] * nn;
        sim.push_back(psi / std::sqrt(nn));
      }
      for (double& x : wn) x /= tot;
      std::vector<double> wi(ens.w.begin(), ens.w.end());
      for (size_t b = 0; b < ens.w.size(); ++b) {
        Vec lg = gate_prefix[std::min<size_t>(j, gate_prefix.size() - 1)] * logical0[b];
        ClockState ck = clock_state(m, j * double(d) / m.Ng);
        ideal.push_back(joint_product(lg, ck).amplitudes);
      }
      double e = trace_distance_lowrank(wn, sim, wi, ideal);
      rec.max_error = std::max(rec.max_error, e);
      rec.samples += 1;
    }

    // Renewal: collapse the ensemble.
    if (mode == CycleMode::montecarlo) {
      // pick a branch by its share of the renewal density at tau
      std::vector<double> share;
      double tot = 0.0;
      std::vector<Vec> at_tau;
      for (size_t b = 0; b < ens.w.size(); ++b) {
        Vec psi = prop->state_at(tau, c0s[b]);
        at_tau.push_back(psi);
        double v = ens.w[b] * prop->density(psi);
        share.push_back(v);
        tot += v;
      }
      double u = detail::runif(rng) * tot;
      size_t pick = 0;
      double accu = 0.0;
      for (; pick + 1 < share.size(); ++pick) {
        accu += share[pick];
        if (accu >= u) break;
      }
      const Vec& psi = at_tau[pick];
      // jump channel: site k with probability v_k |a_k|^2
      RVec pk(d);
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int a = 0; a < dL; ++a) s += std::norm(psi[a * d + k]);
        pk[k] = D.vc_values[k] * s;
      }
      double u2 = detail::runif(rng) * pk.sum();
      int kk = 0;
      double a2 = 0.0;
      for (; kk + 1 < d; ++kk) {
        a2 += pk[kk];
        if (a2 >= u2) break;
      }
      Vec chi(dL);
      for (int a = 0; a < dL; ++a) chi[a] = psi[a * d + kk];
      chi /= chi.norm();
      ens.w = {1.0};
      ens.psi = {joint_product(chi, D.renewal_target).amplitudes};
      logical0 = {chi};
    } else {
      // exact conditional marginal at the mode time
      Mat M = Mat::Zero(dL, dL);
      for (size_t b = 0; b < ens.w.size(); ++b)
        M += ens.w[b] * prop->logical_renewal_marginal(prop->state_at(tau, c0s[b]));
      M /= M.trace().real();
      Eigen::SelfAdjointEigenSolver<Mat> es(M);
      ens.w.clear();
      ens.psi.clear();
      logical0.clear();
      for (int i = 0; i < dL; ++i) {
        double w = es.eigenvalues()[i];
        if (w < 1e-12) continue;
        Vec chi = es.eigenvectors().col(i);
        ens.w.push_back(w);
        ens.psi.push_back(joint_product(chi, D.renewal_target).amplitudes);
        logical0.push_back(chi);
      }
    }

    rep.cycles.push_back(rec);
  }
  return rep;
}

struct InvarianceReport {
  double max_abs_deviation = 0.0;
  std::vector<std::pair<std::string, double>> deviations;
  bool pass(double tol = 1e-10) const { return max_abs_deviation <= tol; }
};

// Rerun the one-cycle statistics with T0 -> scale*T0 and compare the
// dimensionless summary quantities.
inline InvarianceReport t0_invariance_check(int d, double eps_bar,
                                            const Overrides& ov,
                                            const std::vector<std::string>& pattern,
                                            double gamma_bar0, double scale,
                                            double T0 = 1.0, GridSpec grid = {}) {
  if (!(scale > 0.0)) throw ConfigError("t0_invariance_check: scale must be positive");
  auto run = [&](double T) {
    ClockModel m = make_model(d, eps_bar, Regime::quantum, T, ov);
    GateProgram prog = cyclic_program(m.Ng - 1, pattern);
    Dissipator D = build_dissipator(m, gamma_bar0, prog.dtilde_sum() + 1);
    CycleTrace tr = propagate_conditional(m, prog, D, grid);
    CycleStats st = renewal_statistics(tr);
    std::vector<std::pair<std::string, double>> q;
    q.emplace_back("f_T0", m.f() * T);
    q.emplace_back("T0sq_P_in", st.P_in * T * T);
    q.emplace_back("T0sq_P_diss", st.P_diss * T * T);
    q.emplace_back("eps_r", st.eps_r);
    q.emplace_back("M1_over_T0", st.M1 / T);
    q.emplace_back("identity_gap", st.identity_gap);
    return q;
  };
  auto a = run(T0);
  auto b = run(scale * T0);
  InvarianceReport rep;
  for (size_t i = 0; i < a.size(); ++i) {
    double dev = std::abs(a[i].second - b[i].second);
    rep.deviations.emplace_back(a[i].first, dev);
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
  }
  return rep;
}

}  // namespace chronosim

#endif
