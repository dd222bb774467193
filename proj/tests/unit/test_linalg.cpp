#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "davies/errors.hpp"
#include "davies/linalg.hpp"
#include "davies/model.hpp"

using namespace davies;

namespace {

Complex2x2 E21() {
  Complex2x2 v = Complex2x2::Zero();
  v(1, 0) = 1.0;
  return v;
}

// Plain Taylor series with many terms, used as an independent reference.
Mat4 taylor_exp(const Mat4& g, double t) {
  Mat4 term = Mat4::Identity(), sum = Mat4::Identity();
  for (int k = 1; k < 200; ++k) {
    term = term * g * (t / k);
    sum += term;
  }
  return sum;
}

Superop random_generator(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> n;
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) g(i, k) = Complex(n(rng), n(rng));
  const double r = g.eigenvalues().cwiseAbs().maxCoeff();
  return Superop(g * (radius / r));
}

}  // namespace

TEST(MatExp, ZeroTimeIsIdentity) {
  Complex2x2 m;
  m << Complex(1, 2), Complex(-3, 0.5), Complex(0.2, -1), Complex(4, 4);
  EXPECT_LT(frobenius_dist(mat_exp(m, 0.0), Complex2x2::Identity()), 1e-15);
}

TEST(MatExp, Diagonal) {
  Complex2x2 d = Complex2x2::Zero();
  d(0, 0) = 1.0;
  for (double t : {0.0, 0.3, 1.0, 2.5}) {
    Complex2x2 want = Complex2x2::Zero();
    want(0, 0) = std::exp(t);
    want(1, 1) = 1.0;
    EXPECT_LT(frobenius_dist(mat_exp(d, t), want), 1e-13 * std::exp(t));
  }
}

TEST(MatExp, Nilpotent) {
  EXPECT_LT(frobenius_dist(mat_exp(E21(), 1.0), Complex2x2::Identity() + E21()), 1e-15);
}

TEST(MatExp, NonFiniteInputThrows) {
  Complex2x2 m = Complex2x2::Zero();
  m(0, 1) = std::nan("");
  EXPECT_THROW(mat_exp(m, 1.0), DomainError);
}

TEST(SuperopExp, ZeroGenerator) {
  EXPECT_LT(frobenius_dist(superop_exp(Superop::zero(), 3.0), Superop::identity()), 1e-15);
}

TEST(SuperopExp, NegativeTimeThrows) {
  EXPECT_THROW(superop_exp(Superop::identity(), -0.1), DomainError);
}

TEST(SuperopExp, SemigroupAndSeriesReference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Superop g = random_generator(rng, 5.0 * u(rng));
    const double s = u(rng), t = u(rng);
    const Superop st = superop_exp(g, s) * superop_exp(g, t);
    const Superop direct = superop_exp(g, s + t);
    EXPECT_LT(frobenius_dist(st, direct), 1e-10 * (1.0 + frobenius_norm(direct)));
    EXPECT_LT((direct.matrix() - taylor_exp(g.matrix(), s + t)).norm(),
              1e-10 * (1.0 + frobenius_norm(direct)));
  }
}

TEST(SuperopExp, MasterGeneratorIsUnital) {
  const Model m = symmetric_model();
  for (double t : {0.1, 1.0, 5.0})
    EXPECT_LT(frobenius_dist(superop_exp(master_generator(m), t)(Complex2x2::Identity()),
                             Complex2x2::Identity()),
              1e-12);
}

TEST(AdMap, Examples) {
  Complex2x2 a;
  a << Complex(1, 0), Complex(2, 1), Complex(0, -1), Complex(3, 0);
  EXPECT_LT(frobenius_dist(ad_map(Complex2x2::Identity())(a), a), 1e-15);
  Complex2x2 p = Complex2x2::Zero();
  p(0, 0) = 1.0;
  EXPECT_LT(frobenius_dist(ad_map(E21())(Complex2x2::Identity()), p), 1e-15);
  EXPECT_LT(ad_map(E21())(p).norm(), 1e-15);
}

TEST(AdMap, MatchesDirectProductOnRandomInputs) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int rep = 0; rep < 10; ++rep) {
    Complex2x2 m, a;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        m(i, k) = Complex(n(rng), n(rng));
        a(i, k) = Complex(n(rng), n(rng));
      }
    EXPECT_LT(frobenius_dist(ad_map(m)(a), m.adjoint() * a * m), 1e-13);
  }
}

TEST(Superop, CompositionIsMatrixProduct) {
  Complex2x2 b;
  b << Complex(0.5, 0.1), Complex(0.2, 0), Complex(0, 0.3), Complex(1, -1);
  Complex2x2 a;
  a << Complex(1, 0), Complex(2, 1), Complex(0, -1), Complex(3, 0);
  const Superop s1 = ad_map(b), s2 = ad_map(E21());
  EXPECT_LT(frobenius_dist((s1 * s2)(a), s1(s2(a))), 1e-14);
}

TEST(Superop, DualPairing) {
  Complex2x2 b;
  b << Complex(0.5, 0.1), Complex(0.2, 0), Complex(0, 0.3), Complex(1, -1);
  const Superop s = ad_map(b) + 0.5 * ad_map(E21());
  Complex2x2 rho, a;
  rho << Complex(0.3, 0), Complex(0.1, 0.2), Complex(0.1, -0.2), Complex(0.7, 0);
  a << Complex(1, 0), Complex(2, 1), Complex(0, -1), Complex(3, 0);
  EXPECT_NEAR(std::abs((s.dual()(rho) * a).trace() - (rho * s(a)).trace()), 0.0, 1e-14);
}

TEST(FrobeniusDist, Examples) {
  Complex2x2 a;
  a << Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(7, 8);
  EXPECT_EQ(frobenius_dist(a, a), 0.0);
  EXPECT_NEAR(frobenius_dist(Complex2x2::Identity(), Complex2x2::Zero()), std::sqrt(2.0), 1e-15);
  Complex2x2 p = Complex2x2::Zero(), q = Complex2x2::Zero();
  p(0, 0) = 1.0;
  q(1, 1) = 1.0;
  EXPECT_NEAR(frobenius_dist(p, q), std::sqrt(2.0), 1e-15);
}

TEST(Choi, AdjointMapsAreCompletelyPositive) {
  Complex2x2 b;
  b << Complex(0.5, 0.1), Complex(0.2, 0), Complex(0, 0.3), Complex(1, -1);
  EXPECT_TRUE(is_completely_positive(ad_map(b)));
  EXPECT_FALSE(is_completely_positive(-1.0 * ad_map(b)));
}

TEST(Choi, TransposeIsNotCompletelyPositive) {
  Mat4 t = Mat4::Zero();
  // vec basis E11, E21, E12, E22; transpose swaps E21 and E12.
  t(0, 0) = t(3, 3) = 1.0;
  t(1, 2) = t(2, 1) = 1.0;
  EXPECT_LT(choi_min_eigenvalue(Superop(t)), -0.5);
}
