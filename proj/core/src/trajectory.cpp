#include "davies/trajectory.hpp"

#include <cmath>
#include <limits>
#include <exception>
#include <mutex>
#include <thread>

#include "davies/errors.hpp"

namespace davies {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Tr(rho A) as a bilinear pairing on vectorized matrices.
Vec4 trace_left(const DensityMatrix& rho) { return vec(rho.matrix().transpose()); }

double side_cap(const Model& m) { return 50.0 * (1.0 + 1.0 / m.side_weight()); }

double two_channel_cap(const Model& m) {
  return m.drive_intensity() > 0.0 ? 50.0 * (1.0 + 1.0 / m.drive_intensity()) : 100.0;
}

template <class Survival>
double invert_survival(const Survival& s, double u, double initial_step, double cap) {
  double lo = 0.0;
  double hi = std::min(initial_step, cap);
  while (s(hi) > u) {
    if (hi >= cap) return s(cap) < kCapSurvivalFloor ? cap : kInfinity;
    lo = hi;
    hi = std::min(2.0 * hi, cap);
  }
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (s(mid) > u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void check_u(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("waiting-time draw must lie in (0, 1)");
}

}  // namespace

Sampler::Sampler(const Model& m, SamplerMode mode)
    : model_(m),
      mode_(mode),
      cap_(mode == SamplerMode::kSideOnly ? side_cap(m) : two_channel_cap(m)),
      z_(z_generator(m)),
      jump_f_matrix_(m.z() * Complex2x2::Identity() + m.Vf()) {}

double Sampler::survival(const DensityMatrix& rho, double x) const {
  if (!(x >= 0.0)) throw DomainError("survival needs x >= 0");
  if (mode_ == SamplerMode::kSideOnly)
    return z_.functional(trace_left(rho), vec(Complex2x2::Identity()))(x).real();
  const Complex2x2 b = no_jump_B(model_, x);
  return (b * rho.matrix() * b.adjoint()).trace().real();
}

double Sampler::waiting_time(const DensityMatrix& rho, double u) const {
  check_u(u);
  const double step = 1.0 / (1.0 + model_.drive_intensity());
  if (mode_ == SamplerMode::kSideOnly) {
    if (model_.side_weight() == 0.0) return kInfinity;
    const auto f = z_.functional(trace_left(rho), vec(Complex2x2::Identity()));
    return invert_survival([&](double x) { return f(x).real(); }, u, step, cap_);
  }
  return invert_survival([&](double x) { return survival(rho, x); }, u, step, cap_);
}

DensityMatrix Sampler::evolve(const DensityMatrix& rho, double x) const {
  if (mode_ == SamplerMode::kSideOnly) return DensityMatrix::normalized(z_.at(x).dual()(rho.matrix()));
  const Complex2x2 b = no_jump_B(model_, x);
  return DensityMatrix::normalized(b * rho.matrix() * b.adjoint());
}

DensityMatrix Sampler::jump(const DensityMatrix& rho, Channel c) const {
  if (c == Channel::kSide) return apply_side_jump(model_, rho);
  const Complex2x2 out = jump_f_matrix_ * rho.matrix() * jump_f_matrix_.adjoint();
  if (!(out.trace().real() > kJumpThreshold))
    throw DomainError("forward jump from a state with vanishing forward rate");
  return DensityMatrix::normalized(out);
}

Channel Sampler::choose_channel(const DensityMatrix& rho, double u) const {
  const double rf = (rho.matrix() * jump_f(model_)(Complex2x2::Identity())).trace().real();
  const double rs = (rho.matrix() * jump_s(model_)(Complex2x2::Identity())).trace().real();
  return u * (rf + rs) <= rs ? Channel::kSide : Channel::kForward;
}

Trajectory Sampler::sample(const DensityMatrix& rho0, double horizon, const SeedSpec& seed) const {
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw ValidationError("horizon must be finite and non-negative");
  Trajectory traj;
  traj.index = seed.trajectory_index;
  traj.horizon = horizon;
  RandomStream rng(seed);
  DensityMatrix rho = rho0;
  double t = 0.0;
  for (;;) {
    const double x = waiting_time(rho, rng.uniform());
    if (!(t + x < horizon)) {
      traj.terminal_state = evolve(rho, horizon - t);
      break;
    }
    double next = t + x;
    if (!(next > t)) next = std::nextafter(t, kInfinity);
    const DensityMatrix before = evolve(rho, next - t);
    const Channel c = mode_ == SamplerMode::kSideOnly ? Channel::kSide
                                                      : choose_channel(before, rng.uniform());
    traj.records.push_back({next, c});
    rho = jump(before, c);
    t = next;
  }
  return traj;
}

double survival(const Model& m, const DensityMatrix& rho, double x) {
  if (!(x >= 0.0)) throw DomainError("survival needs x >= 0");
  return (rho.matrix() * z_map(m, x)(Complex2x2::Identity())).trace().real();
}

double sample_waiting_time(const Model& m, const DensityMatrix& rho, double u) {
  return Sampler(m, SamplerMode::kSideOnly).waiting_time(rho, u);
}

DensityMatrix apply_side_jump(const Model& m, const DensityMatrix& rho) {
  (void)m;
  const Complex2x2 v = Model::V();
  const double rate = (rho.matrix() * Model::P()).trace().real();
  if (!(rate > kJumpThreshold)) throw DomainError("jump from de-excited state");
  return DensityMatrix::normalized(v * rho.matrix() * v.adjoint());
}

DensityMatrix evolve_no_jump(const Model& m, const DensityMatrix& rho, double x) {
  return DensityMatrix::normalized(z_map(m, x).dual()(rho.matrix()));
}

Trajectory sample_trajectory(const Model& m, const DensityMatrix& rho0, double horizon,
                             const SeedSpec& seed, SamplerMode mode) {
  return Sampler(m, mode).sample(rho0, horizon, seed);
}

std::vector<Trajectory> sample_batch(const Model& m, const DensityMatrix& rho0, double horizon,
                                     std::uint64_t master_seed, std::size_t n, SamplerMode mode,
                                     unsigned threads) {
  const Sampler sampler(m, mode);
  std::vector<Trajectory> out(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, n == 0 ? 1 : n));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < n; i += workers)
      out[i] = sampler.sample(rho0, horizon, SeedSpec{master_seed, i});
  };
  if (workers == 1) {
    work(0);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        work(w);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

LikelihoodAudit trajectory_likelihood(const Model& m, const DensityMatrix& rho0,
                                      const Trajectory& traj) {
  const Sampler sampler(m, SamplerMode::kSideOnly);
  const SemigroupEvaluator z(z_generator(m));
  const Superop js = jump_s(m);
  const Vec4 p = vec(Model::P());

  LikelihoodAudit audit;
  double product = 1.0;
  Superop word = Superop::identity();
  DensityMatrix rho = rho0;
  double t = 0.0;
  for (const JumpRecord& r : traj.records) {
    if (r.channel != Channel::kSide)
      throw ValidationError("likelihood audit needs a side-only trajectory");
    const double x = r.time - t;
    product *= m.side_weight() * z.functional(trace_left(rho), p)(x).real();
    word = word * z.at(x) * js;
    rho = sampler.jump(sampler.evolve(rho, x), Channel::kSide);
    t = r.time;
  }
  const double last = traj.horizon - t;
  product *= sampler.survival(rho, last);
  word = word * z.at(last);
  audit.product_form = product;
  audit.trace_form = (rho0.matrix() * word(Complex2x2::Identity())).trace().real();
  return audit;
}

}  // namespace davies
