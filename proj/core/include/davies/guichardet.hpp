#pragma once

#include <span>
#include <vector>

#include "davies/davies_map.hpp"
#include "davies/event.hpp"
#include "davies/linalg.hpp"
#include "davies/model.hpp"

namespace davies {

// A finite subset of the real line, stored as strictly increasing times.
struct GPoint {
  std::vector<double> times;

  std::size_t size() const { return times.size(); }
  // Throws ValidationError unless finite and strictly increasing.
  void validate() const;
};

struct KernelArgs {
  GPoint sigma_f;
  GPoint sigma_s;
  GPoint tau_f;
  GPoint tau_s;
};

// Integral-sum kernel u_t(sigma_f, sigma_s, tau_f, tau_s): alternating
// product of exp(-dt/2 V*V) factors with insertions V_f, -V_f*, V_s, -V_s*.
// Zero when any time lies outside [0, t]. Throws ValidationError when the
// four sets are not pairwise disjoint.
Complex2x2 kernel_u(const Model& m, double t, const KernelArgs& args);

struct OracleOptions {
  int n_max = 4;
  // Largest number of tau_f points kept in the integral-sum expansion.
  int m_tau = 6;
  int quad_order = 24;
};

// (U_t pi(z chi_[0,t]) (x) pi(0))(omega_f, omega_s), the unnormalized output
// amplitude at a Guichardet point. Throws CapacityError beyond n_max points.
Complex2x2 u_on_coherent(const Model& m, double t, const GPoint& omega_f, const GPoint& omega_s,
                         const OracleOptions& opts = {});

// e^{-t|z|^2} integral over E of Ad[amplitude], sector by sector.
MapResult oracle_davies_map(const Model& m, const Event& e, const OracleOptions& opts = {});

struct JumpLimitEntry {
  double t = 0.0;
  bool no_data = false;
  double forward_distance = 0.0;
  double side_distance = 0.0;
};

struct JumpLimitReport {
  std::vector<JumpLimitEntry> entries;
  // Least-squares slopes of log(distance) against log(t).
  double forward_slope = 0.0;
  double side_slope = 0.0;
  bool forward_decreasing = true;
  bool side_decreasing = true;
};

// Distances of (1/t) E^t[one forward photon] and (1/t) E^t[one side photon]
// from J_f and J_s, with the oracle supplying the left-hand sides.
JumpLimitReport jump_limit_check(const Model& m, std::span<const double> t_list,
                                 const OracleOptions& opts = {});

}  // namespace davies
