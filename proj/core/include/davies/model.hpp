#pragma once

#include <span>
#include <vector>

#include "davies/linalg.hpp"

namespace davies {

// Resonance-fluorescence model: a 2-level atom decaying into a forward and a
// side channel with amplitudes kappa_f, kappa_s (|kappa_f|^2 + |kappa_s|^2 = 1),
// driven through the forward channel by a coherent field of amplitude z.
// Time is measured in units of the inverse total decay rate.
class Model {
 public:
  Complex kappa_f() const { return kappa_f_; }
  Complex kappa_s() const { return kappa_s_; }
  Complex z() const { return z_; }

  double forward_weight() const { return std::norm(kappa_f_); }
  double side_weight() const { return std::norm(kappa_s_); }
  double drive_intensity() const { return std::norm(z_); }

  // V = E21 lowers the excited level e1 to the ground level e2.
  static Complex2x2 V();
  // P = V* V, the excited-state projector diag(1, 0).
  static Complex2x2 P();
  Complex2x2 Vf() const { return kappa_f_ * V(); }
  Complex2x2 Vs() const { return kappa_s_ * V(); }

 private:
  friend Model build_model(Complex kappa_f, Complex kappa_s, Complex z);
  Model(Complex kf, Complex ks, Complex z) : kappa_f_(kf), kappa_s_(ks), z_(z) {}

  Complex kappa_f_;
  Complex kappa_s_;
  Complex z_;
};

// Throws ValidationError when |kappa_f|^2 + |kappa_s|^2 deviates from 1 by
// more than 1e-9; smaller drift is removed by rescaling both amplitudes.
Model build_model(Complex kappa_f, Complex kappa_s, Complex z);

// kappa_f = kappa_s = 1/sqrt(2), z = 1.
Model symmetric_model();

// Renewal-process limits need a driven atom that can emit sideways.
bool renewal_preconditions(const Model& m);

// Undriven Lindblad generator L(A) = sum_j Vj* A Vj - 1/2 {Vj* Vj, A}, H = 0.
Superop lindblad_generator(const Model& m);

// G = -1/2 (|z|^2 I + V*V + 2 z Vf*), so that B_t = exp(t G).
Complex2x2 no_jump_generator(const Model& m);
// Contraction semigroup B_t; throws DomainError for t < 0.
Complex2x2 no_jump_B(const Model& m, double t);

// No-photon evolution Y_t(A) = B_t* A B_t.
Superop y_map(const Model& m, double t);
// Y_t = exp(t L0) with L0(A) = G* A + A G.
Superop l0_generator(const Model& m);

// Jump operations J_f = Ad[z I + Vf] and J_s = Ad[Vs].
Superop jump_f(const Model& m);
Superop jump_s(const Model& m);

// Evolution between side-channel detections, forward channel unobserved.
Superop z_generator(const Model& m);
Superop z_map(const Model& m, double t);

// L0 + J_f + J_s.
Superop master_generator(const Model& m);
// -1/2 {V*V, .} + [z Vf* - conj(z) Vf, .] + V* . V, assembled term by term.
Superop master_generator_commutator_form(const Model& m);
// exp(t (L0 + J_f + J_s)).
Superop master_map(const Model& m, double t);

// The constant K = 2|z|^2 |kappa_f|^2 + 1.
double interaction_rate_constant(const Model& m);
// Largest eigenvalue of J_f(I) + J_s(I): the supremum over states of the
// instantaneous total detection rate, and the derivative at t = 0 of
// I - B_t* B_t.
double detection_rate_bound(const Model& m);

struct BoundedRateEntry {
  double t = 0.0;
  // Smallest eigenvalue of t K I - (I - B_t* B_t).
  double min_slack = 0.0;
  bool holds = false;
};

struct BoundedRateReport {
  double K = 0.0;
  double detection_rate_bound = 0.0;
  std::vector<BoundedRateEntry> entries;
  bool all_hold = true;
};

inline constexpr double kBoundedRateSlack = 1e-10;

BoundedRateReport bounded_rate_check(const Model& m, std::span<const double> t_grid);

}  // namespace davies
