#include "davies/linalg.hpp"

#include <cmath>

#include "davies/errors.hpp"

namespace davies {
namespace {

// Infinity norm (max row sum).
template <typename Mat>
double inf_norm(const Mat& a) {
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Mat>
Mat scaled_taylor_exp(const Mat& a) {
  const double norm = inf_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat scaled = a / std::ldexp(1.0, squarings);

  Mat sum = Mat::Identity();
  Mat term = Mat::Identity();
  for (int k = 1; k < 64; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-16 * sum.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// (e^x - e^y) / (x - y), stable for x close to y.
Complex exp_divided_difference(Complex x, Complex y) {
  const Complex d = 0.5 * (x - y);
  Complex sinhc;
  if (std::abs(d) < 1e-3) {
    const Complex d2 = d * d;
    sinhc = 1.0 + d2 / 6.0 * (1.0 + d2 / 20.0 * (1.0 + d2 / 42.0));
  } else {
    sinhc = std::sinh(d) / d;
  }
  return std::exp(0.5 * (x + y)) * sinhc;
}

bool all_finite(const Mat4& a) { return a.allFinite(); }

}  // namespace

Vec4 vec(const Complex2x2& a) { return Vec4(a(0, 0), a(1, 0), a(0, 1), a(1, 1)); }

Complex2x2 devec(const Vec4& v) {
  Complex2x2 a;
  a << v(0), v(2), v(1), v(3);
  return a;
}

Complex2x2 unit(int i, int j) {
  Complex2x2 e = Complex2x2::Zero();
  e(i, j) = 1.0;
  return e;
}

bool all_finite(const Complex2x2& a) { return a.allFinite(); }

bool is_hermitian(const Complex2x2& a, double tol) { return (a - a.adjoint()).norm() <= tol; }

double min_hermitian_eigenvalue(const Complex2x2& a) {
  const Complex2x2 h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Complex2x2> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Superop Superop::dual() const {
  // vec(X^T) = T vec(X) swaps the E21 and E12 slots; the dual is T M^T T.
  Mat4 t = Mat4::Zero();
  t(0, 0) = t(3, 3) = 1.0;
  t(1, 2) = t(2, 1) = 1.0;
  return Superop(t * m_.transpose() * t);
}

Complex2x2 mat_exp(const Complex2x2& m, double t) {
  if (!all_finite(m) || !std::isfinite(t)) throw DomainError("mat_exp: non-finite input");
  const Complex2x2 a = t * m;
  const Complex a00 = a(0, 0), a01 = a(0, 1), a10 = a(1, 0), a11 = a(1, 1);
  const Complex zero(0.0, 0.0);

  Complex2x2 r;
  if (a01 == zero && a10 == zero) {
    r << std::exp(a00), zero, zero, std::exp(a11);
    return r;
  }
  if (a10 == zero) {
    r << std::exp(a00), a01 * exp_divided_difference(a00, a11), zero, std::exp(a11);
    return r;
  }
  if (a01 == zero) {
    r << std::exp(a00), zero, a10 * exp_divided_difference(a00, a11), std::exp(a11);
    return r;
  }
  const Complex2x2 sq = a * a;
  if (sq.isZero(0.0)) return Complex2x2::Identity() + a;
  return scaled_taylor_exp(a);
}

Superop superop_exp(const Superop& g, double t) {
  if (!std::isfinite(t)) throw DomainError("superop_exp: non-finite time");
  if (t < 0.0) throw DomainError("superop_exp: negative time (only forward semigroups)");
  if (!all_finite(g.matrix())) throw DomainError("superop_exp: non-finite generator");
  if (t == 0.0) return Superop::identity();
  return Superop(scaled_taylor_exp(Mat4(t * g.matrix())));
}

Superop sandwich(const Complex2x2& b, const Complex2x2& c) {
  // vec(B A C) = (C^T (x) B) vec(A)
  Mat4 k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = c(j, i) * b;
  return Superop(k);
}

Superop ad_map(const Complex2x2& m) { return sandwich(m.adjoint(), m); }

double frobenius_dist(const Complex2x2& a, const Complex2x2& b) { return (a - b).norm(); }

double frobenius_dist(const Superop& a, const Superop& b) {
  return (a.matrix() - b.matrix()).norm();
}

double frobenius_norm(const Superop& a) { return a.matrix().norm(); }

Mat4 choi_matrix(const Superop& s) {
  Mat4 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c.block<2, 2>(2 * i, 2 * j) = s(unit(i, j));
  return c;
}

double choi_min_eigenvalue(const Superop& s) {
  const Mat4 c = choi_matrix(s);
  const Mat4 h = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_completely_positive(const Superop& s, double tol) {
  const Mat4 c = choi_matrix(s);
  if ((c - c.adjoint()).norm() > tol) return false;
  return choi_min_eigenvalue(s) >= -tol;
}

double spectral_abscissa(const Superop& g) {
  Eigen::ComplexEigenSolver<Mat4> solver(g.matrix(), false);
  return solver.eigenvalues().real().maxCoeff();
}

SemigroupEvaluator::SemigroupEvaluator(const Superop& generator) : generator_(generator) {
  Eigen::ComplexEigenSolver<Mat4> solver(generator.matrix(), true);
  if (solver.info() != Eigen::Success) return;
  vectors_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues();
  Eigen::FullPivLU<Mat4> lu(vectors_);
  if (!lu.isInvertible()) return;
  inverse_ = lu.inverse();
  const double condition = vectors_.norm() * inverse_.norm();
  const Mat4 rebuilt = vectors_ * eigenvalues_.asDiagonal() * inverse_;
  const double scale = std::max(1.0, generator.matrix().norm());
  spectral_ = condition < 1e4 && (rebuilt - generator.matrix()).norm() <= 1e-12 * scale;
}

Superop SemigroupEvaluator::at(double x) const {
  if (!spectral_) return superop_exp(generator_, x);
  if (x < 0.0 || !std::isfinite(x)) throw DomainError("SemigroupEvaluator: invalid time");
  const Eigen::Vector4cd e = (x * eigenvalues_).array().exp();
  return Superop(vectors_ * e.asDiagonal() * inverse_);
}

SemigroupEvaluator::Functional SemigroupEvaluator::functional(const Vec4& left,
                                                              const Vec4& right) const {
  Functional f;
  f.spectral_ = spectral_;
  f.left_ = left;
  f.right_ = right;
  if (spectral_) {
    const Eigen::RowVector4cd l = left.transpose() * vectors_;
    const Eigen::Vector4cd r = inverse_ * right;
    f.weights_ = l.transpose().cwiseProduct(r);
    f.rates_ = eigenvalues_;
  } else {
    f.generator_ = generator_;
  }
  return f;
}

Complex SemigroupEvaluator::Functional::operator()(double x) const {
  if (!spectral_) return left_.transpose() * superop_exp(generator_, x).matrix() * right_;
  Complex sum(0.0, 0.0);
  for (int i = 0; i < 4; ++i) sum += weights_(i) * std::exp(rates_(i) * x);
  return sum;
}

DensityMatrix DensityMatrix::from_matrix(const Complex2x2& rho, double tol) {
  if (!all_finite(rho)) throw ValidationError("density matrix has non-finite entries");
  if (!is_hermitian(rho, tol)) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw ValidationError("density matrix trace is not 1");
  if (min_hermitian_eigenvalue(rho) < -tol)
    throw ValidationError("density matrix has a negative eigenvalue");
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix DensityMatrix::normalized(const Complex2x2& unnormalized) {
  if (!all_finite(unnormalized)) throw DomainError("cannot normalize non-finite matrix");
  const Complex2x2 h = 0.5 * (unnormalized + unnormalized.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw DomainError("cannot normalize a matrix with non-positive trace");
  return DensityMatrix(h / tr);
}

DensityMatrix DensityMatrix::excited() { return DensityMatrix(unit(0, 0)); }
DensityMatrix DensityMatrix::ground() { return DensityMatrix(unit(1, 1)); }
DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(0.5 * Complex2x2::Identity());
}

}  // namespace davies
