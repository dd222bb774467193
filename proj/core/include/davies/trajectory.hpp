#pragma once

#include <cstdint>
#include <vector>

#include "davies/event.hpp"
#include "davies/linalg.hpp"
#include "davies/model.hpp"
#include "davies/rng.hpp"

namespace davies {

enum class SamplerMode { kSideOnly, kTwoChannel };

struct JumpRecord {
  double time = 0.0;
  Channel channel = Channel::kSide;
};

struct Trajectory {
  std::uint64_t index = 0;
  std::vector<JumpRecord> records;
  double horizon = 0.0;
  // Normalized conditional state at the horizon.
  DensityMatrix terminal_state = DensityMatrix::ground();
};

inline constexpr double kBisectionTolerance = 1e-10;
inline constexpr double kCapSurvivalFloor = 1e-12;
inline constexpr double kJumpThreshold = 1e-14;

// Side-only observation: no-jump probability Tr(rho Z_x(I)).
double survival(const Model& m, const DensityMatrix& rho, double x);
// Inverts survival at u in (0, 1); +infinity when no side photon can come.
double sample_waiting_time(const Model& m, const DensityMatrix& rho, double u);
// rho -> V rho V* / Tr(rho V*V). Throws DomainError from a de-excited state.
DensityMatrix apply_side_jump(const Model& m, const DensityMatrix& rho);
// Normalized Schroedinger-picture image of rho under Z_x.
DensityMatrix evolve_no_jump(const Model& m, const DensityMatrix& rho, double x);

// Waiting-time sampler for one model and observation mode. Side-only mode
// evolves with Z between side jumps; two-channel mode evolves with
// Y = Ad[B] and jumps through z I + V_f or V_s.
class Sampler {
 public:
  Sampler(const Model& m, SamplerMode mode);

  SamplerMode mode() const { return mode_; }
  // Horizon beyond which a waiting time counts as infinite.
  double cap() const { return cap_; }

  double survival(const DensityMatrix& rho, double x) const;
  double waiting_time(const DensityMatrix& rho, double u) const;
  DensityMatrix evolve(const DensityMatrix& rho, double x) const;
  DensityMatrix jump(const DensityMatrix& rho, Channel c) const;
  // Side when u * (r_f + r_s) <= r_s, with r_c the jump rate of channel c.
  Channel choose_channel(const DensityMatrix& rho, double u) const;

  Trajectory sample(const DensityMatrix& rho0, double horizon, const SeedSpec& seed) const;

 private:
  Model model_;
  SamplerMode mode_;
  double cap_;
  SemigroupEvaluator z_;
  Complex2x2 jump_f_matrix_;
};

Trajectory sample_trajectory(const Model& m, const DensityMatrix& rho0, double horizon,
                             const SeedSpec& seed, SamplerMode mode);

// Trajectories 0..n-1 for one master seed. The output does not depend on the
// number of threads.
std::vector<Trajectory> sample_batch(const Model& m, const DensityMatrix& rho0, double horizon,
                                     std::uint64_t master_seed, std::size_t n, SamplerMode mode,
                                     unsigned threads = 1);

struct LikelihoodAudit {
  // Survival factors times jump densities along the sampled path.
  double product_form = 0.0;
  // Tr(rho Z_{x1} J_s Z_{x2} ... J_s Z_{x_{k+1}}(I)).
  double trace_form = 0.0;
};

// Side-only trajectories only.
LikelihoodAudit trajectory_likelihood(const Model& m, const DensityMatrix& rho0,
                                      const Trajectory& traj);

}  // namespace davies
