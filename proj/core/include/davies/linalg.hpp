#pragma once

#include <Eigen/Dense>
#include <complex>

namespace davies {

using Complex = std::complex<double>;
using Complex2x2 = Eigen::Matrix2cd;
using Vec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr Complex kI{0.0, 1.0};

// Column-stacking vectorization; basis order (E11, E21, E12, E22).
Vec4 vec(const Complex2x2& a);
Complex2x2 devec(const Vec4& v);

// Matrix unit E_ij (zero-based indices).
Complex2x2 unit(int i, int j);

bool all_finite(const Complex2x2& a);
bool is_hermitian(const Complex2x2& a, double tol);
// Smallest eigenvalue of the Hermitian part of a.
double min_hermitian_eigenvalue(const Complex2x2& a);

// A linear map on 2x2 matrices, stored as the 4x4 matrix acting on vec(A).
// Composition is the matrix product: (a * b)(A) == a(b(A)).
class Superop {
 public:
  Superop() : m_(Mat4::Zero()) {}
  explicit Superop(const Mat4& m) : m_(m) {}

  static Superop identity() { return Superop(Mat4::Identity()); }
  static Superop zero() { return Superop(); }

  const Mat4& matrix() const { return m_; }

  Complex2x2 operator()(const Complex2x2& a) const { return devec(m_ * vec(a)); }

  // The predual (Schroedinger-picture) map S' with Tr(S'(rho) A) == Tr(rho S(A)).
  Superop dual() const;

  Superop& operator+=(const Superop& o) {
    m_ += o.m_;
    return *this;
  }
  Superop& operator-=(const Superop& o) {
    m_ -= o.m_;
    return *this;
  }
  Superop& operator*=(Complex c) {
    m_ *= c;
    return *this;
  }

  friend Superop operator+(Superop a, const Superop& b) { return a += b; }
  friend Superop operator-(Superop a, const Superop& b) { return a -= b; }
  friend Superop operator*(const Superop& a, const Superop& b) { return Superop(a.m_ * b.m_); }
  friend Superop operator*(Complex c, Superop a) { return a *= c; }
  friend Superop operator*(double c, Superop a) { return a *= Complex(c, 0.0); }

 private:
  Mat4 m_;
};

// exp(t M). Closed forms for diagonal, triangular and nilpotent inputs;
// scaling and squaring with a truncated Taylor series otherwise.
// Throws DomainError on non-finite input.
Complex2x2 mat_exp(const Complex2x2& m, double t);

// exp(t G) for t >= 0. Throws DomainError for t < 0 or non-finite input.
Superop superop_exp(const Superop& g, double t);

// A -> b A c
Superop sandwich(const Complex2x2& b, const Complex2x2& c);
// Heisenberg-picture conjugation Ad[M](A) = M* A M.
Superop ad_map(const Complex2x2& m);

double frobenius_dist(const Complex2x2& a, const Complex2x2& b);
double frobenius_dist(const Superop& a, const Superop& b);
double frobenius_norm(const Superop& a);

// Choi matrix sum_ij E_ij (x) S(E_ij).
Mat4 choi_matrix(const Superop& s);
double choi_min_eigenvalue(const Superop& s);
bool is_completely_positive(const Superop& s, double tol = 1e-12);

// max Re(lambda) over the spectrum of the 4x4 generator.
double spectral_abscissa(const Superop& g);

// Evaluates exp(x G) for one fixed generator at many x. Uses an
// eigendecomposition when the eigenvector basis is well conditioned and
// falls back to superop_exp otherwise.
class SemigroupEvaluator {
 public:
  explicit SemigroupEvaluator(const Superop& generator);

  const Superop& generator() const { return generator_; }
  bool spectral() const { return spectral_; }

  Superop at(double x) const;

  // x -> left^T exp(x G) right, precomputed for repeated scalar evaluation.
  class Functional {
   public:
    Complex operator()(double x) const;

   private:
    friend class SemigroupEvaluator;
    bool spectral_ = false;
    Eigen::Vector4cd weights_;
    Eigen::Vector4cd rates_;
    Superop generator_;
    Vec4 left_;
    Vec4 right_;
  };

  Functional functional(const Vec4& left, const Vec4& right) const;

 private:
  Superop generator_;
  bool spectral_ = false;
  Eigen::Vector4cd eigenvalues_;
  Mat4 vectors_;
  Mat4 inverse_;
};

class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  // Validates Hermiticity, unit trace and positivity within tol.
  static DensityMatrix from_matrix(const Complex2x2& rho, double tol = kTolerance);
  // Hermitizes and rescales a positive, nonzero-trace matrix.
  static DensityMatrix normalized(const Complex2x2& unnormalized);

  // e1 is the excited level (V e1 = e2), e2 the ground level.
  static DensityMatrix excited();
  static DensityMatrix ground();
  static DensityMatrix maximally_mixed();

  const Complex2x2& matrix() const { return rho_; }
  double excited_population() const { return rho_(0, 0).real(); }

 private:
  explicit DensityMatrix(const Complex2x2& rho) : rho_(rho) {}
  Complex2x2 rho_;
};

}  // namespace davies
