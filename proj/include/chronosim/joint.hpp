// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_JOINT_HPP
#define CHRONOSIM_JOINT_HPP

#include <memory>
#include <optional>
#include <vector>

#include "chronosim/clock.hpp"
#include "chronosim/gates.hpp"

namespace chronosim {

inline constexpr int kExactBackendCap = 4096;

enum class Method { exact, splitstep };

inline const char* to_string(Method m) {
  return m == Method::exact ? "exact" : "splitstep";
}

// Joint amplitude vector on L (x) C, logical-major: index = a*d + k, with k a
// theta-basis label.
struct JointState {
  Vec amplitudes;
  int d_L = 0;
  int d = 0;

  cxd& at(int a, int k) { return amplitudes[a * d + k]; }
  cxd at(int a, int k) const { return amplitudes[a * d + k]; }
};

inline JointState joint_product(const Vec& logical, const ClockState& clock) {
  JointState s;
  s.d_L = static_cast<int>(logical.size());
  s.d = static_cast<int>(clock.amplitudes.size());
  s.amplitudes.resize(s.d_L * s.d);
  const Vec& c = clock.basis_tag == Basis::theta
                     ? clock.amplitudes
                     : Dft::instance().energy_to_theta(clock.amplitudes);
  for (int a = 0; a < s.d_L; ++a)
    s.amplitudes.segment(a * s.d, s.d) = logical[a] * c;
  return s;
}

// Reduced clock amplitudes are not generally defined; this extracts the
// clock factor for product states (callers assert closeness separately).
inline Vec logical_marginal_diag(const JointState& s) {
  Vec out(s.d_L);
  for (int a = 0; a < s.d_L; ++a)
    out[a] = s.amplitudes.segment(a * s.d, s.d).squaredNorm();
  return out;
}

// Gate-implementing joint Hamiltonian
//   H = 1_L (x) H_C + sum_l D_l (x) diag(profile_l)
// where D_l is the window's drive generator: the program generator with
// eigenphases reversed (phi -> 2pi - phi, folded into (0,2pi]) so that one
// full window crossing applies the program unitary e^{+iG} on L. An optional
// nonnegative clock diagonal V (the renewal coupling) turns the generator
// into H - iV for conditional no-renewal propagation.
class JointHamiltonian {
 public:
  JointHamiltonian(const ClockModel& m, const GateProgram& program,
                   std::optional<RVec> clock_decay = std::nullopt)
      : model_(m), d_L_(program.d_L == 0 ? 1 : program.d_L),
        decay_(std::move(clock_decay)) {
    for (int l = 0; l < program.length(); ++l) {
      const GateGenerator& g = program.generators[l];
      if (static_cast<int>(g.matrix.rows()) != d_L_)
        throw ConfigError("JointHamiltonian: generator dimension mismatch");
      drives_.push_back(drive_of(g));
      profiles_.push_back(potential_profile(m, l + 1).values);
    }
    if (decay_ && decay_->size() != m.d)
      throw ConfigError("JointHamiltonian: decay diagonal length mismatch");
  }

  const ClockModel& model() const { return model_; }
  int d_L() const { return d_L_; }
  int dim() const { return d_L_ * model_.d; }
  bool dissipative() const { return decay_.has_value(); }
  int window_count() const { return static_cast<int>(drives_.size()); }
  const Mat& drive(int l) const { return drives_[l]; }
  const RVec& profile(int l) const { return profiles_[l]; }

  // Matrix-free H|psi> (Hermitian part only).
  Vec apply(const JointState& s) const {
    const int d = model_.d;
    Vec out = Vec::Zero(s.amplitudes.size());
    Vec row(d), erow(d);
    for (int a = 0; a < d_L_; ++a) {
      row = s.amplitudes.segment(a * d, d);
      Dft::instance().theta_to_energy(row, erow);
      for (int n = 0; n < d; ++n) erow[n] *= n * model_.omega0;
      Dft::instance().energy_to_theta(erow, row);
      out.segment(a * d, d) += row;
    }
    for (size_t l = 0; l < drives_.size(); ++l) {
      const RVec& prof = profiles_[l];
      const Mat& D = drives_[l];
      for (int a = 0; a < d_L_; ++a)
        for (int b = 0; b < d_L_; ++b) {
          cxd c = D(a, b);
          if (std::abs(c) < 1e-300) continue;
          out.segment(a * d, d).array() +=
              c * prof.array().cast<cxd>() * s.amplitudes.segment(b * d, d).array();
        }
    }
    return out;
  }

  double mean_energy(const JointState& s) const {
    double e = std::real(s.amplitudes.dot(apply(s)));
    if (e < -1e-10) throw NumericalFault("mean_energy: negative expectation");
    return e;
  }

  // Interaction-term expectation alone (diagnostic).
  double interaction_energy(const JointState& s) const {
    const int d = model_.d;
    cxd acc = 0.0;
    for (size_t l = 0; l < drives_.size(); ++l)
      for (int a = 0; a < d_L_; ++a)
        for (int b = 0; b < d_L_; ++b) {
          cxd c = drives_[l](a, b);
          if (std::abs(c) < 1e-300) continue;
          acc += c * (s.amplitudes.segment(a * d, d).conjugate().array() *
                      profiles_[l].array().cast<cxd>() *
                      s.amplitudes.segment(b * d, d).array())
                         .sum();
        }
    return std::real(acc);
  }

  Mat dense() const {
    const int d = model_.d;
    const int n = dim();
    Mat H = Mat::Zero(n, n);
    // H_C block in the theta basis, repeated per logical index.
    Mat hc = Mat::Zero(d, d);
    {
      Vec col(d), ecol(d);
      for (int k = 0; k < d; ++k) {
        col.setZero();
        col[k] = 1.0;
        Dft::instance().theta_to_energy(col, ecol);
        for (int m = 0; m < d; ++m) ecol[m] *= m * model_.omega0;
        Dft::instance().energy_to_theta(ecol, col);
        hc.col(k) = col;
      }
    }
    for (int a = 0; a < d_L_; ++a)
      H.block(a * d, a * d, d, d) = hc;
    for (size_t l = 0; l < drives_.size(); ++l)
      for (int a = 0; a < d_L_; ++a)
        for (int b = 0; b < d_L_; ++b) {
          cxd c = drives_[l](a, b);
          if (std::abs(c) < 1e-300) continue;
          H.block(a * d, b * d, d, d).diagonal() +=
              c * profiles_[l].cast<cxd>();
        }
    if (decay_)
      for (int a = 0; a < d_L_; ++a)
        H.block(a * d, a * d, d, d).diagonal() -=
            cxd(0.0, 1.0) * decay_->cast<cxd>();
    return H;
  }

  // Evolve by time t from the given state.
  JointState evolve(const JointState& s, double t, Method method,
                    double dt = 0.0) const {
    if (method == Method::exact) return evolve_exact(s, t);
    return evolve_splitstep(s, t, dt);
  }

  JointState evolve_exact(const JointState& s, double t) const {
    if (dim() > kExactBackendCap)
      throw CapabilityError("exact backend refused above d_L*d = 4096");
    ensure_eig();
    JointState out = s;
    if (!dissipative()) {
      Vec c = eig_vecs_.adjoint() * s.amplitudes;
      for (int i = 0; i < c.size(); ++i) {
        double ph = -eig_vals_re_[i] * t;
        c[i] *= cxd(std::cos(ph), std::sin(ph));
      }
      out.amplitudes = eig_vecs_ * c;
    } else {
      Vec c = lu_->solve(s.amplitudes);
      for (int i = 0; i < c.size(); ++i)
        c[i] *= std::exp(cxd(0.0, -1.0) * eig_vals_c_[i] * t);
      out.amplitudes = eig_vecs_ * c;
    }
    return out;
  }

  // Default step: t1/64 halved until two successive refinements agree to
  // 1e-6 in trace distance on the probe state over one gate interval.
  double default_dt(const JointState& probe, double t1) const {
    double dt = t1 / 64.0;
    JointState a = evolve_splitstep(probe, t1, dt);
    while (dt > t1 / 65536.0) {
      JointState b = evolve_splitstep(probe, t1, dt / 2.0);
      Vec an = a.amplitudes / a.amplitudes.norm();
      Vec bn = b.amplitudes / b.amplitudes.norm();
      if (std::sqrt(std::max(0.0, 1.0 - std::norm(an.dot(bn)))) <= 1e-6) break;
      dt /= 2.0;
      a = b;
    }
    return dt;
  }

  JointState evolve_splitstep(const JointState& s, double t, double dt) const {
    if (!(dt > 0.0)) throw ConfigError("splitstep: dt must be positive");
    long nsteps = std::lround(t / dt);
    if (nsteps < 1) nsteps = 1;
    double step = t / static_cast<double>(nsteps);
    ensure_blocks(step);
    const int d = model_.d;
    JointState out = s;
    Vec row(d), erow(d);
    Vec tmp(d_L_);
    for (long it = 0; it < nsteps; ++it) {
      half_free(out, step / 2.0, row, erow);
      for (int k = 0; k < d; ++k) {
        for (int a = 0; a < d_L_; ++a) tmp[a] = out.at(a, k);
        tmp = block_exp_[k] * tmp;
        for (int a = 0; a < d_L_; ++a) out.at(a, k) = tmp[a];
      }
      half_free(out, step / 2.0, row, erow);
    }
    return out;
  }

  double hermiticity_defect() const {
    Mat H = dense();
    if (decay_)
      for (int a = 0; a < d_L_; ++a)
        H.block(a * model_.d, a * model_.d, model_.d, model_.d).diagonal() +=
            cxd(0.0, 1.0) * decay_->cast<cxd>();
    return (H - H.adjoint()).norm();
  }

  // Drive generator: reversed eigenphases, spectrum kept in (0, 2pi].
  static Mat drive_of(const GateGenerator& g) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g.matrix);
    Vec ph(es.eigenvalues().size());
    for (int i = 0; i < ph.size(); ++i) {
      double r = kTwoPi - es.eigenvalues()[i];
      if (r < 1e-12) r = kTwoPi;
      ph[i] = r;
    }
    Mat D = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    return 0.5 * (D + D.adjoint().eval());
  }

 private:
  void ensure_eig() const {
    if (eig_done_) return;
    Mat H = dense();
    if (!dissipative()) {
      Eigen::SelfAdjointEigenSolver<Mat> es(H);
      eig_vals_re_ = es.eigenvalues();
      eig_vecs_ = es.eigenvectors();
    } else {
      Eigen::ComplexEigenSolver<Mat> es(H);
      eig_vals_c_ = es.eigenvalues();
      eig_vecs_ = es.eigenvectors();
      lu_ = std::make_unique<Eigen::PartialPivLU<Mat>>(eig_vecs_);
    }
    eig_done_ = true;
  }

  void ensure_blocks(double dt) const {
    if (blocks_dt_ == dt && !block_exp_.empty()) return;
    const int d = model_.d;
    block_exp_.assign(d, Mat());
    for (int k = 0; k < d; ++k) {
      Mat B = Mat::Zero(d_L_, d_L_);
      for (size_t l = 0; l < drives_.size(); ++l)
        B += profiles_[l][k] * drives_[l];
      Eigen::SelfAdjointEigenSolver<Mat> es(B);
      Vec ph(d_L_);
      for (int i = 0; i < d_L_; ++i) {
        double th = -es.eigenvalues()[i] * dt;
        ph[i] = cxd(std::cos(th), std::sin(th));
      }
      Mat E = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
      if (decay_) E *= std::exp(-(*decay_)[k] * dt);
      block_exp_[k] = E;
    }
    blocks_dt_ = dt;
  }

  void half_free(JointState& s, double tau, Vec& row, Vec& erow) const {
    const int d = model_.d;
    for (int a = 0; a < d_L_; ++a) {
      row = s.amplitudes.segment(a * d, d);
      Dft::instance().theta_to_energy(row, erow);
      for (int n = 0; n < d; ++n) {
        double ph = -n * model_.omega0 * tau;
        erow[n] *= cxd(std::cos(ph), std::sin(ph));
      }
      Dft::instance().energy_to_theta(erow, row);
      s.amplitudes.segment(a * d, d) = row;
    }
  }

  ClockModel model_;
  int d_L_;
  std::vector<Mat> drives_;
  std::vector<RVec> profiles_;
  std::optional<RVec> decay_;

  mutable bool eig_done_ = false;
  mutable RVec eig_vals_re_;
  mutable Vec eig_vals_c_;
  mutable Mat eig_vecs_;
  mutable std::unique_ptr<Eigen::PartialPivLU<Mat>> lu_;
  mutable std::vector<Mat> block_exp_;
  mutable double blocks_dt_ = -1.0;
};

}  // namespace chronosim

#endif
