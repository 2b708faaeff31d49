#pragma once

// Measurement models for a single coherent-state qumode: heterodyne and
// canonical phase outcomes, wedge quantization, and the legitimate
// receiver's key-assisted bit decision.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "alphaeta/numeric.hpp"
#include "alphaeta/rng.hpp"
#include "alphaeta/signal.hpp"

namespace alphaeta {

/// Per-quadrature standard deviation of heterodyne noise about the mean
/// amplitude sqrt(E) e^{i theta}.
inline constexpr double kQuadratureStd = 0.5;

struct HeterodynePoint {
  double q1 = 0.0;
  double q2 = 0.0;

  bool at_origin() const { return q1 == 0.0 && q2 == 0.0; }
  double phase() const { return wrap_angle(std::atan2(q2, q1)); }
};

struct PhaseOutcome {
  double theta = 0.0;
};

struct WedgeIndex {
  std::uint32_t j = 0;
  bool operator==(const WedgeIndex&) const = default;
};

inline HeterodynePoint heterodyne_sample(double energy, double theta, Rng& rng) {
  require(energy >= 0.0, "heterodyne_sample: negative energy");
  std::normal_distribution<double> noise(0.0, kQuadratureStd);
  double a = std::sqrt(energy);
  HeterodynePoint p;
  p.q1 = a * std::cos(theta) + noise(rng);
  p.q2 = a * std::sin(theta) + noise(rng);
  return p;
}

inline HeterodynePoint heterodyne_sample(const QumodeRecord& record, Rng& rng) {
  return heterodyne_sample(record.energy, record.theta(), rng);
}

/// Density of the heterodyne outcome phase, measured relative to the signal
/// phase (offset in radians).
inline double heterodyne_phase_density(double energy, double offset) {
  double rho = std::sqrt(energy) / kQuadratureStd;
  double c = std::cos(offset), s = std::sin(offset);
  double v = std::exp(-0.5 * rho * rho) +
             std::sqrt(2.0 * kPi) * rho * c * std::exp(-0.5 * rho * rho * s * s) * normal_cdf(rho * c);
  return v / (2.0 * kPi);
}

/// Probability that the heterodyne phase lands in the wedge centred
/// `offset_steps` wedges away from the signal phase.
inline double heterodyne_wedge_mass(double energy, unsigned M, long offset_steps) {
  double w = kPi / static_cast<double>(M);
  double lo = (static_cast<double>(offset_steps) - 0.5) * w;
  double hi = (static_cast<double>(offset_steps) + 0.5) * w;
  auto f = [energy](double t) { return heterodyne_phase_density(energy, t); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 6, 1e-12);
}

/// Canonical phase distribution of a coherent state of energy E, centred at
/// zero, from the Fock expansion truncated at n_max = E + 10 sqrt(E) + 20.
/// The density is (1/2pi)[A_0 + 2 sum_k A_k cos(k phi)] with
/// A_k = sum_n c_n c_{n+k}, so the CDF is available in closed form.
class CanonicalPhaseDistribution {
 public:
  static constexpr double kMaxEnergy = 400.0;

  explicit CanonicalPhaseDistribution(double energy, std::size_t min_grid = 1u << 14,
                                      double cdf_tol = 1e-6, double max_energy = kMaxEnergy)
      : energy_(energy) {
    require(energy >= 0.0, "canonical phase: negative energy");
    if (energy > max_energy)
      throw BudgetExceeded("canonical phase: energy " + std::to_string(energy) +
                           " exceeds the Fock cutoff budget (E <= " + std::to_string(max_energy) + ")");
    cutoff_ = static_cast<std::size_t>(std::ceil(energy + 10.0 * std::sqrt(energy) + 20.0));
    std::vector<double> c(cutoff_ + 1);
    double norm = 0.0;
    for (std::size_t n = 0; n <= cutoff_; ++n) {
      double ln = energy > 0.0 ? -0.5 * energy + 0.5 * static_cast<double>(n) * std::log(energy) -
                                     0.5 * std::lgamma(static_cast<double>(n) + 1.0)
                               : (n == 0 ? 0.0 : -INFINITY);
      c[n] = std::exp(ln);
      norm += c[n] * c[n];
    }
    truncated_mass_ = 1.0 - norm;
    for (auto& v : c) v /= std::sqrt(norm);
    a_.assign(cutoff_ + 1, 0.0);
    for (std::size_t k = 0; k <= cutoff_; ++k)
      for (std::size_t n = 0; n + k <= cutoff_; ++n) a_[k] += c[n] * c[n + k];

    std::size_t grid = min_grid;
    for (;;) {
      build_grid(grid);
      // Largest error of the piecewise-linear CDF at cell midpoints.
      double worst = 0.0;
      for (std::size_t i = 0; i < grid; ++i) {
        double mid = (static_cast<double>(i) + 0.5) * step_;
        double interp = 0.5 * (cdf_[i] + cdf_[i + 1]);
        worst = std::max(worst, std::abs(exact_cdf(mid) - interp));
      }
      if (worst < cdf_tol || grid >= (1u << 22)) break;
      grid *= 2;
    }
  }

  double energy() const { return energy_; }
  std::size_t cutoff() const { return cutoff_; }
  std::size_t grid_size() const { return cdf_.size() - 1; }
  double truncated_mass() const { return truncated_mass_; }

  /// Density at offset phi from the signal phase.
  double density(double phi) const {
    const std::complex<double> step(std::cos(phi), std::sin(phi));
    std::complex<double> rot = step;
    double v = a_[0];
    for (std::size_t k = 1; k < a_.size(); ++k, rot *= step) v += 2.0 * a_[k] * rot.real();
    return v / (2.0 * kPi);
  }

  /// P(offset in [0, phi)) for phi in [0, 2pi].
  double exact_cdf(double phi) const {
    const std::complex<double> step(std::cos(phi), std::sin(phi));
    std::complex<double> rot = step;
    double v = a_[0] * phi;
    for (std::size_t k = 1; k < a_.size(); ++k, rot *= step)
      v += 2.0 * a_[k] * rot.imag() / static_cast<double>(k);
    return v / (2.0 * kPi);
  }

  /// Rectangle-rule integral of the density over the grid.
  double grid_normalization() const {
    double total = 0.0;
    for (double d : density_) total += d * step_;
    return total;
  }

  /// Offset in [0, 2pi) drawn by inverse CDF on the grid.
  double sample_offset(Rng& rng) const {
    double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cdf_.begin())) - 1;
    i = std::min(i, grid_size() - 1);
    double span = cdf_[i + 1] - cdf_[i];
    double frac = span > 0.0 ? (u - cdf_[i]) / span : 0.5;
    return wrap_angle((static_cast<double>(i) + frac) * step_);
  }

 private:
  void build_grid(std::size_t grid) {
    step_ = 2.0 * kPi / static_cast<double>(grid);
    density_.assign(grid, 0.0);
    cdf_.assign(grid + 1, 0.0);
    for (std::size_t i = 0; i < grid; ++i) {
      double phi = static_cast<double>(i) * step_;
      density_[i] = density(phi);
      cdf_[i] = exact_cdf(phi);
    }
    cdf_[grid] = 1.0;
    // Truncation leaves the CDF exactly periodic; clamp rounding noise.
    for (auto& v : cdf_) v = std::clamp(v, 0.0, 1.0);
    for (std::size_t i = 1; i <= grid; ++i) cdf_[i] = std::max(cdf_[i], cdf_[i - 1]);
  }

  double energy_;
  std::size_t cutoff_ = 0;
  double truncated_mass_ = 0.0;
  std::vector<double> a_;
  double step_ = 0.0;
  std::vector<double> density_;
  std::vector<double> cdf_;
};

enum class PhaseMode { exact, lorentzian };

/// Width of the wrapped-Cauchy phase model at energy E.
inline double lorentzian_width(double energy) { return 1.0 / (4.0 * std::sqrt(energy)); }

/// Draws canonical-phase outcomes for records of one fixed energy.
class PhaseSampler {
 public:
  PhaseSampler(double energy, PhaseMode mode) : energy_(energy), mode_(mode) {
    require(energy >= 0.0, "phase sampler: negative energy");
    if (mode == PhaseMode::exact) exact_ = std::make_shared<CanonicalPhaseDistribution>(energy);
  }

  double energy() const { return energy_; }

  PhaseOutcome sample(double theta, Rng& rng) const {
    if (mode_ == PhaseMode::exact) return {wrap_angle(theta + exact_->sample_offset(rng))};
    if (energy_ == 0.0) return {2.0 * kPi * uniform01(rng)};
    double gamma = lorentzian_width(energy_);
    double u = uniform01(rng);
    return {wrap_angle(theta + gamma * std::tan(kPi * (u - 0.5)))};
  }

 private:
  double energy_;
  PhaseMode mode_;
  std::shared_ptr<const CanonicalPhaseDistribution> exact_;
};

inline PhaseOutcome phase_sample(const QumodeRecord& record, Rng& rng, PhaseMode mode) {
  return PhaseSampler(record.energy, mode).sample(record.theta(), rng);
}

/// Index of the nearest of the 2M phases j pi/M; wedges are half-open
/// [theta_j - pi/2M, theta_j + pi/2M).
inline WedgeIndex wedge_quantize(double phase, unsigned M) {
  require(M >= 1, "wedge_quantize: M must be positive");
  double x = wrap_angle(phase) / (kPi / static_cast<double>(M));
  auto j = static_cast<std::uint64_t>(std::floor(x + 0.5));
  return {static_cast<std::uint32_t>(j % (2ULL * M))};
}

inline WedgeIndex wedge_quantize(const PhaseOutcome& outcome, unsigned M) {
  return wedge_quantize(outcome.theta, M);
}

inline WedgeIndex wedge_quantize(const HeterodynePoint& point, unsigned M) {
  if (point.at_origin()) throw InputError("wedge_quantize: heterodyne point at the origin has no phase");
  return wedge_quantize(point.phase(), M);
}

/// Bob's bit decision for basis z: the bit whose mapper phase is nearer the
/// outcome. For heterodyne this is the sign of the projection onto the basis
/// axis.
inline unsigned bob_decide(const HeterodynePoint& point, std::uint32_t z, unsigned M) {
  require(z < M, "bob_decide: keystream symbol out of range");
  double axis = steps_to_radians(z, M);
  double proj = point.q1 * std::cos(axis) + point.q2 * std::sin(axis);
  return proj >= 0.0 ? basis_polarity(z) : 1U - basis_polarity(z);
}

inline unsigned bob_decide(const PhaseOutcome& outcome, std::uint32_t z, unsigned M) {
  require(z < M, "bob_decide: keystream symbol out of range");
  double d = angle_diff(outcome.theta, steps_to_radians(z, M));
  return std::abs(d) <= kPi / 2.0 ? basis_polarity(z) : 1U - basis_polarity(z);
}

enum class BobModel { heterodyne, helstrom };

inline double helstrom_two_state_error(double energy) {
  return 0.5 * (1.0 - std::sqrt(1.0 - std::exp(-4.0 * energy)));
}

/// Closed-form bit error of Bob's decision at received energy E.
inline double bob_error_reference(double energy, BobModel model) {
  require(energy >= 0.0, "bob_error_reference: negative energy");
  return model == BobModel::heterodyne ? q_function(2.0 * std::sqrt(energy))
                                       : helstrom_two_state_error(energy);
}

struct MeasurementRow {
  std::size_t i = 0;
  std::string model;
  double q1 = 0.0, q2 = 0.0, theta_meas = 0.0;
  std::uint32_t wedge_j = 0;
};

inline void write_measurement_csv(std::ostream& os, const std::vector<MeasurementRow>& rows) {
  os << "i,model,q1,q2,theta_meas,wedge_j\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.i << ',' << r.model << ',' << r.q1 << ',' << r.q2 << ',' << r.theta_meas << ','
       << r.wedge_j << '\n';
}

}  // namespace alphaeta
