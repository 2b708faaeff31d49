#pragma once

// Phase encryption: maps (data bit, keystream symbol) to one of 2M coherent
// state phases on the circle, and models line attenuation.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "alphaeta/numeric.hpp"

namespace alphaeta {

struct AlphaEtaParams {
  double S = 0.0;    // mean photon number at the transmitter
  unsigned M = 2;    // number of bases
  double eta = 1.0;  // line transmittance

  unsigned m() const { return log2_exact(M); }

  void validate() const {
    require(S > 0.0, "params: S must be positive");
    require(M >= 2 && is_power_of_two(M), "params: M must be a power of two >= 2");
    require(eta > 0.0 && eta <= 1.0, "params: eta must lie in (0, 1]");
  }

  static AlphaEtaParams from_json(const nlohmann::json& j) {
    AlphaEtaParams p;
    p.S = j.value("S", 0.0);
    p.M = j.value("M", 2u);
    p.eta = j.value("eta", 1.0);
    p.validate();
    return p;
  }
};

/// Line transmittance for a fibre of `km` kilometres at `db_per_km` loss.
inline double transmittance_from_loss(double db_per_km, double km) {
  return std::pow(10.0, -db_per_km * km / 10.0);
}

/// Parity of the keystream symbol, which selects the bit labelling of its basis.
inline unsigned basis_polarity(std::uint32_t z) { return z & 1U; }

/// Mapper phase as an integer number of pi/M steps in [0, 2M):
/// theta(x, z) = [z/M + (x xor Pol(z))] pi.
/// M = 1 is accepted here (one basis, two antipodal states).
inline std::uint32_t mapper_steps(unsigned x, std::uint32_t z, unsigned M) {
  require(M >= 1, "mapper: M must be positive");
  require(z < M, "mapper: keystream symbol out of range");
  require(x <= 1, "mapper: data bit must be 0 or 1");
  return (z + M * ((x ^ basis_polarity(z)) & 1U)) % (2 * M);
}

inline double steps_to_radians(std::uint32_t steps, unsigned M) {
  return static_cast<double>(steps) * kPi / static_cast<double>(M);
}

inline double mapper(unsigned x, std::uint32_t z, unsigned M) {
  return steps_to_radians(mapper_steps(x, z, M), M);
}

/// Phase-assignment table (x, z) -> steps. Alternative mappers plug in by
/// supplying a different table; `standard` is the parity-interleaved mapper.
class PhaseAssignment {
 public:
  static PhaseAssignment standard(unsigned M) {
    PhaseAssignment a;
    a.M_ = M;
    for (unsigned x = 0; x < 2; ++x)
      for (std::uint32_t z = 0; z < M; ++z) a.steps_.push_back(mapper_steps(x, z, M));
    return a;
  }

  static PhaseAssignment from_table(unsigned M, std::vector<std::uint32_t> steps) {
    require(steps.size() == 2 * static_cast<std::size_t>(M), "phase assignment: need 2M entries");
    std::vector<bool> used(2 * M, false);
    for (auto s : steps) {
      require(s < 2 * M, "phase assignment: step out of range");
      require(!used[s], "phase assignment: table is not injective");
      used[s] = true;
    }
    PhaseAssignment a;
    a.M_ = M;
    a.steps_ = std::move(steps);
    return a;
  }

  unsigned M() const { return M_; }
  std::uint32_t steps(unsigned x, std::uint32_t z) const {
    require(z < M_ && x <= 1, "phase assignment: (x, z) out of range");
    return steps_[x * M_ + z];
  }

 private:
  unsigned M_ = 0;
  std::vector<std::uint32_t> steps_;
};

/// One transmitted qumode with its ground truth.
struct QumodeRecord {
  std::size_t index = 0;
  unsigned x = 0;
  std::uint32_t z = 0;
  std::uint32_t theta_steps = 0;  // theta / (pi/M)
  unsigned M = 2;
  double energy = 0.0;

  double theta() const { return steps_to_radians(theta_steps, M); }
  double amplitude() const { return std::sqrt(energy); }
};

inline std::vector<QumodeRecord> encrypt_sequence(const std::vector<std::uint8_t>& bits,
                                                  const std::vector<std::uint32_t>& keystream,
                                                  const AlphaEtaParams& params,
                                                  const PhaseAssignment* assignment = nullptr) {
  require(bits.size() == keystream.size(), "encrypt_sequence: data and keystream lengths differ");
  params.validate();
  PhaseAssignment standard;
  if (!assignment) {
    standard = PhaseAssignment::standard(params.M);
    assignment = &standard;
  }
  require(assignment->M() == params.M, "encrypt_sequence: phase assignment built for another M");
  std::vector<QumodeRecord> out;
  out.reserve(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    QumodeRecord r;
    r.index = i + 1;
    r.x = bits[i] & 1U;
    r.z = keystream[i];
    r.theta_steps = assignment->steps(r.x, r.z);
    r.M = params.M;
    r.energy = params.S;
    out.push_back(r);
  }
  return out;
}

inline QumodeRecord apply_channel(QumodeRecord record, double eta) {
  require(eta > 0.0 && eta <= 1.0, "apply_channel: eta must lie in (0, 1]");
  record.energy *= eta;
  return record;
}

inline void write_qumode_csv(std::ostream& os, const std::vector<QumodeRecord>& records) {
  os << "i,x,z,theta_steps,energy\n";
  os.precision(17);
  for (const auto& r : records)
    os << r.index << ',' << r.x << ',' << r.z << ',' << r.theta_steps << ',' << r.energy << '\n';
}

}  // namespace alphaeta
