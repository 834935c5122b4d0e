// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_GATES_HPP
#define CHRONOSIM_GATES_HPP

#include <string>
#include <vector>

#include "chronosim/common.hpp"

namespace chronosim {

// Hermitian generator of a gate unitary, eigenphases folded into (0, 2pi].
struct GateGenerator {
  Mat matrix;            // d_L x d_L Hermitian
  RVec eigenphases;      // in (0, 2pi]
  std::string symbol;
};

inline bool is_unitary(const Mat& U, double tol = 1e-10) {
  Mat I = Mat::Identity(U.rows(), U.cols());
  return (U.adjoint() * U - I).norm() <= tol * std::sqrt(double(U.rows()));
}

// Eigendecompose U, map each eigenphase in [0, 2pi) to (0, 2pi] by sending
// 0 -> 2pi, reassemble the Hermitian generator. e^{i matrix} reproduces U.
inline GateGenerator gate_generator(const Mat& U, const std::string& symbol = "") {
  if (U.rows() != U.cols() || !is_unitary(U))
    throw ConfigError("gate_generator: input is not unitary");
  Eigen::ComplexEigenSolver<Mat> es(U);
  const int n = static_cast<int>(U.rows());
  GateGenerator g;
  g.symbol = symbol;
  g.eigenphases.resize(n);
  Mat V = es.eigenvectors();
  // Gram-Schmidt repair: eigenvectors of a unitary are orthogonal per
  // eigenvalue cluster; re-orthonormalize to guard degenerate clusters.
  Eigen::HouseholderQR<Mat> qr(V);
  Mat Q = qr.householderQ() * Mat::Identity(n, n);
  // Recompute phases against the orthonormal frame: diagonalize Q^dag U Q and
  // keep the diagonal if it is numerically diagonal; otherwise fall back.
  Mat D = Q.adjoint() * U * Q;
  bool diag_ok = true;
  for (int i = 0; i < n && diag_ok; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(D(i, j)) > 1e-9) { diag_ok = false; break; }
  if (!diag_ok) { Q = V; D = Q.adjoint() * U * Q; }
  for (int i = 0; i < n; ++i) {
    double ph = std::arg(D(i, i));           // (-pi, pi]
    if (ph <= 1e-12 && ph > -1e-12) ph = 0.0;
    if (ph < 0.0) ph += kTwoPi;              // [0, 2pi)
    if (ph < 1e-12) ph = kTwoPi;             // 0 -> 2pi
    g.eigenphases[i] = ph;
  }
  g.matrix = Q * g.eigenphases.asDiagonal() * Q.adjoint();
  g.matrix = 0.5 * (g.matrix + g.matrix.adjoint().eval());
  return g;
}

inline Mat exp_i(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian);
  Vec ph(es.eigenvalues().size());
  for (int i = 0; i < ph.size(); ++i)
    ph[i] = cxd(std::cos(es.eigenvalues()[i]), std::sin(es.eigenvalues()[i]));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat unitary_of(const GateGenerator& g) { return exp_i(g.matrix); }

// Count of distinct eigenvalues of the gate unitary (phase clustering with
// tolerance 1e-9).
inline int dtilde(const GateGenerator& g, double tol = 1e-9) {
  std::vector<double> ph(g.eigenphases.data(),
                         g.eigenphases.data() + g.eigenphases.size());
  std::sort(ph.begin(), ph.end());
  int c = 1;
  for (size_t i = 1; i < ph.size(); ++i)
    if (ph[i] - ph[i - 1] > tol) ++c;
  // 2pi and 0+ wrap to the same eigenvalue
  if (c > 1 && (kTwoPi - ph.back()) + ph.front() <= tol) --c;
  return c;
}

// Named presets.
inline Mat pauli_x() { Mat U(2, 2); U << 0, 1, 1, 0; return U; }
inline Mat hadamard() {
  Mat U(2, 2);
  U << 1, 1, 1, -1;
  return U / std::sqrt(2.0);
}
inline Mat t_gate() {
  Mat U = Mat::Identity(2, 2);
  U(1, 1) = cxd(std::cos(kPi / 4), std::sin(kPi / 4));
  return U;
}
inline Mat cnot() {
  Mat U = Mat::Zero(4, 4);
  U(0, 0) = U(1, 1) = U(2, 3) = U(3, 2) = 1;
  return U;
}
inline Mat identity_gate(int n = 2) { return Mat::Identity(n, n); }

inline Mat preset_unitary(const std::string& name) {
  if (name == "X") return pauli_x();
  if (name == "H") return hadamard();
  if (name == "T") return t_gate();
  if (name == "CNOT") return cnot();
  if (name == "I") return identity_gate();
  throw ConfigError("unknown gate preset '" + name + "'");
}

// Ordered gate sequence for one cycle plus the initial logical state.
struct GateProgram {
  std::vector<GateGenerator> generators;
  int d_L = 0;
  Vec initial_logical;

  int length() const { return static_cast<int>(generators.size()); }
  int dtilde_sum() const {
    int s = 0;
    for (const auto& g : generators) s += dtilde(g);
    return s;
  }
};

inline GateProgram program_from_symbols(const std::vector<std::string>& symbols,
                                        int d_L = 2) {
  GateProgram p;
  p.d_L = d_L;
  p.initial_logical = Vec::Zero(d_L);
  p.initial_logical[0] = 1.0;
  for (const auto& s : symbols)
    p.generators.push_back(gate_generator(preset_unitary(s), s));
  return p;
}

// Cyclic single-qubit program of the requested length.
inline GateProgram cyclic_program(int length,
                                  const std::vector<std::string>& pattern = {"X", "H"}) {
  std::vector<std::string> symbols;
  symbols.reserve(length);
  for (int i = 0; i < length; ++i) symbols.push_back(pattern[i % pattern.size()]);
  return program_from_symbols(symbols);
}

}  // namespace chronosim

#endif
