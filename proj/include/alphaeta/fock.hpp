#pragma once

// Coherent states and their mixtures in a truncated number basis.

#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "alphaeta/numeric.hpp"

namespace alphaeta {

using FockVector = Eigen::VectorXcd;
using FockOperator = Eigen::MatrixXcd;

/// Smallest cutoff that keeps the neglected Poisson tail negligible.
inline std::size_t default_fock_cutoff(double energy) {
  return static_cast<std::size_t>(std::ceil(energy + 10.0 * std::sqrt(energy) + 20.0));
}

/// |sqrt(E) e^{i phase}> on levels 0..cutoff, renormalized after truncation.
/// `truncated_mass` receives the Poisson weight dropped by the cutoff.
inline FockVector coherent_state(double energy, double phase, std::size_t cutoff,
                                 double* truncated_mass = nullptr) {
  require(energy >= 0.0, "coherent_state: negative energy");
  FockVector v(static_cast<Eigen::Index>(cutoff + 1));
  double norm = 0.0;
  for (std::size_t n = 0; n <= cutoff; ++n) {
    double mag;
    if (energy == 0.0) {
      mag = n == 0 ? 1.0 : 0.0;
    } else {
      double dn = static_cast<double>(n);
      mag = std::exp(-0.5 * energy + 0.5 * dn * std::log(energy) - 0.5 * std::lgamma(dn + 1.0));
    }
    v[static_cast<Eigen::Index>(n)] = std::polar(mag, static_cast<double>(n) * phase);
    norm += mag * mag;
  }
  if (truncated_mass) *truncated_mass = 1.0 - norm;
  return v / std::sqrt(norm);
}

/// Sum of |eigenvalues| of a Hermitian operator.
inline double trace_norm(const FockOperator& hermitian) {
  Eigen::SelfAdjointEigenSolver<FockOperator> solver(hermitian, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, "trace_norm: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().sum();
}

inline double hermiticity_defect(const FockOperator& op) { return (op - op.adjoint()).cwiseAbs().maxCoeff(); }

/// |<a|b>|^2 for coherent states, exact (no truncation).
inline double coherent_overlap_sq(double energy, double phase_a, double phase_b) {
  return std::exp(-2.0 * energy * (1.0 - std::cos(phase_a - phase_b)));
}

}  // namespace alphaeta
