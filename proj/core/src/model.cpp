#include "davies/model.hpp"

#include <cmath>

#include "davies/errors.hpp"

namespace davies {

Complex2x2 Model::V() { return unit(1, 0); }
Complex2x2 Model::P() { return unit(0, 0); }

Model build_model(Complex kappa_f, Complex kappa_s, Complex z) {
  for (Complex c : {kappa_f, kappa_s, z})
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ValidationError("model parameters must be finite");
  const double norm = std::norm(kappa_f) + std::norm(kappa_s);
  if (std::abs(norm - 1.0) > 1e-9)
    throw ValidationError("|kappa_f|^2 + |kappa_s|^2 must equal 1 (got " + std::to_string(norm) +
                          ")");
  const double scale = 1.0 / std::sqrt(norm);
  return Model(kappa_f * scale, kappa_s * scale, z);
}

Model symmetric_model() {
  const double k = 1.0 / std::sqrt(2.0);
  return build_model(k, k, 1.0);
}

bool renewal_preconditions(const Model& m) {
  return m.drive_intensity() > 0.0 && m.side_weight() > 0.0;
}

Superop lindblad_generator(const Model& m) {
  const Complex2x2 p = Model::P();
  const Complex2x2 id = Complex2x2::Identity();
  return ad_map(m.Vf()) + ad_map(m.Vs()) - 0.5 * (sandwich(p, id) + sandwich(id, p));
}

Complex2x2 no_jump_generator(const Model& m) {
  const Complex2x2 id = Complex2x2::Identity();
  return -0.5 * (m.drive_intensity() * id + Model::P() + 2.0 * m.z() * m.Vf().adjoint());
}

Complex2x2 no_jump_B(const Model& m, double t) {
  if (t < 0.0) throw DomainError("no_jump_B: negative time");
  return mat_exp(no_jump_generator(m), t);
}

Superop y_map(const Model& m, double t) { return ad_map(no_jump_B(m, t)); }

Superop l0_generator(const Model& m) {
  const Complex2x2 g = no_jump_generator(m);
  const Complex2x2 id = Complex2x2::Identity();
  return sandwich(g.adjoint(), id) + sandwich(id, g);
}

Superop jump_f(const Model& m) {
  return ad_map(m.z() * Complex2x2::Identity() + m.Vf());
}

Superop jump_s(const Model& m) { return ad_map(m.Vs()); }

Superop z_generator(const Model& m) { return l0_generator(m) + jump_f(m); }

Superop z_map(const Model& m, double t) {
  if (t < 0.0) throw DomainError("z_map: negative time");
  return superop_exp(z_generator(m), t);
}

Superop master_generator(const Model& m) { return l0_generator(m) + jump_f(m) + jump_s(m); }

Superop master_generator_commutator_form(const Model& m) {
  const Complex2x2 id = Complex2x2::Identity();
  const Complex2x2 v = Model::V();
  const Complex2x2 p = v.adjoint() * v;
  const Complex2x2 drive = m.z() * m.Vf().adjoint() - std::conj(m.z()) * m.Vf();
  const Superop anticommutator = sandwich(p, id) + sandwich(id, p);
  const Superop commutator = sandwich(drive, id) - sandwich(id, drive);
  return -0.5 * anticommutator + commutator + sandwich(v.adjoint(), v);
}

Superop master_map(const Model& m, double t) { return superop_exp(master_generator(m), t); }

double interaction_rate_constant(const Model& m) {
  return 2.0 * m.drive_intensity() * m.forward_weight() + 1.0;
}

double detection_rate_bound(const Model& m) {
  const Complex2x2 id = Complex2x2::Identity();
  const Complex2x2 rate = jump_f(m)(id) + jump_s(m)(id);
  Eigen::SelfAdjointEigenSolver<Complex2x2> solver(0.5 * (rate + rate.adjoint()),
                                                   Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(1);
}

BoundedRateReport bounded_rate_check(const Model& m, std::span<const double> t_grid) {
  BoundedRateReport report;
  report.K = interaction_rate_constant(m);
  report.detection_rate_bound = detection_rate_bound(m);
  const Complex2x2 id = Complex2x2::Identity();
  for (double t : t_grid) {
    const Complex2x2 b = no_jump_B(m, t);
    const Complex2x2 gap = t * report.K * id - (id - b.adjoint() * b);
    BoundedRateEntry e;
    e.t = t;
    e.min_slack = min_hermitian_eigenvalue(gap);
    e.holds = e.min_slack >= -kBoundedRateSlack;
    report.all_hold = report.all_hold && e.holds;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace davies
