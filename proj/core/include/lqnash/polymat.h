#pragma once

// Polynomials and polynomial matrices with real floating-point coefficients.
//
// Coefficients are stored in ascending degree. Arithmetic zeroes any
// coefficient whose magnitude falls below kPolyTrim times the magnitude of the
// terms that produced it, so exact cancellations (the leading terms of
// D~'(-s)D~(s) - D'(-s)D(s), say) come out as exact zeros.

#include <span>
#include <vector>

#include "lqnash/numerics.h"

namespace lqnash {

inline constexpr double kPolyTrim = 1e-9;
/// Remainder truncation used by the Euclidean algorithm.
inline constexpr double kGcdTolerance = 1e-8;
/// Closed right half-plane margin: roots with Re >= -kRhpMargin count.
inline constexpr double kRhpMargin = 1e-7;
/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = -1;
/// Largest min(rows, cols) for which minors are enumerated.
inline constexpr Index kMaxMinorDimension = 4;

class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> ascending);
  Poly(std::initializer_list<double> ascending)
      : Poly(std::vector<double>(ascending)) {}

  static Poly constant(double c) { return Poly({c}); }
  /// c * s^k
  static Poly monomial(double c, int k);
  /// prod (s - r) over real roots.
  static Poly from_real_roots(std::span<const double> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  double coeff(int k) const;
  double leading() const { return is_zero() ? 0.0 : coeffs_.back(); }
  const std::vector<double>& coeffs() const { return coeffs_; }

  Complex operator()(Complex s) const;
  double operator()(double s) const;

  double max_abs() const;
  /// Euclidean norm of the coefficient vector.
  double norm() const;

  /// p(s) -> p(-s).
  Poly reflect() const;
  Poly monic() const;
  Poly abs() const;

  /// Zeroes coefficients with |c| <= rel * max|c| and drops leading zeros.
  Poly& trim(double rel = kPolyTrim);
  /// Zeroes coefficients with |c| <= threshold.
  Poly& chop(double threshold);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(double c, const Poly& a);
  Poly operator-() const;
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  bool operator==(const Poly&) const = default;

 private:
  void drop_leading_zeros();
  std::vector<double> coeffs_;
};

struct PolyDivision {
  Poly quotient;
  Poly remainder;
};
/// Long division a = q*b + r with deg r < deg b; remainder coefficients that
/// are below `tol` relative to the terms that formed them are zeroed.
PolyDivision divide(const Poly& a, const Poly& b, double tol = kGcdTolerance);

/// Monic greatest common divisor by the Euclidean algorithm with relative
/// remainder truncation. gcd(0, 0) is the zero polynomial.
Poly gcd(const Poly& a, const Poly& b, double tol = kGcdTolerance);

/// All complex roots, via companion-matrix eigenvalues.
ComplexVector roots(const Poly& p);

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(Index rows, Index cols);
  PolyMatrix(std::initializer_list<std::initializer_list<Poly>> rows);

  static PolyMatrix constant(const Matrix& m);
  static PolyMatrix identity(Index n);
  /// s*I - A.
  static PolyMatrix pencil(const Matrix& a);
  /// sum_k coeffs[k] s^k.
  static PolyMatrix from_coefficients(std::span<const Matrix> coeffs);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Poly& operator()(Index i, Index j) { return entries_[i * cols_ + j]; }
  const Poly& operator()(Index i, Index j) const {
    return entries_[i * cols_ + j];
  }

  /// Max entry degree (kZeroDegree for the zero matrix).
  int degree() const;
  /// Matrix of the s^k coefficients.
  Matrix coefficient(int k) const;
  bool is_zero() const;

  PolyMatrix transpose() const;
  /// P'(-s).
  PolyMatrix paraconjugate() const;
  ComplexMatrix eval(Complex s) const;
  Matrix eval(double s) const;

  PolyMatrix block(Index row, Index col, Index rows, Index cols) const;
  PolyMatrix middle_cols(Index start, Index count) const {
    return block(0, start, rows_, count);
  }
  PolyMatrix select(std::span<const Index> row_ids,
                    std::span<const Index> col_ids) const;

  /// sqrt of the sum of squared coefficients over all entries.
  double coeff_norm() const;
  double max_abs_coeff() const;
  /// Zeroes coefficients below rel times the largest coefficient magnitude
  /// anywhere in the matrix.
  PolyMatrix& trim(double rel = kPolyTrim);

  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const Matrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const PolyMatrix& a, const Matrix& b);
  friend PolyMatrix operator*(double c, const PolyMatrix& a);

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Poly> entries_;
};

/// Coefficient-norm distance ||A - B||_coeff.
double coeff_distance(const PolyMatrix& a, const PolyMatrix& b);

/// sigma_k = max degree in column k (kZeroDegree for a zero column).
std::vector<int> column_degrees(const PolyMatrix& p);
/// Row k of column j holds the s^{sigma_j} coefficient of entry (k, j).
Matrix leading_column_coefficients(const PolyMatrix& p);
/// Leading column-coefficient matrix has full column rank.
bool is_column_reduced(const PolyMatrix& p, double tol = tol::kRank);

/// Determinant by cofactor expansion (square, at most 6x6). Coefficients
/// that are negligible against the matching coefficient of the permanent of
/// |P| are zeroed.
Poly determinant(const PolyMatrix& p);

/// Normal rank: max numeric rank of P(s_k) over 2*deg+3 points on a circle of
/// radius 1 + max|coeff|, cross-checked against minors when
/// min(rows, cols) <= kMaxMinorDimension.
Index poly_rank(const PolyMatrix& p);
/// Largest k with a k x k minor that is not identically zero.
Index poly_rank_by_minors(const PolyMatrix& p);

struct ColumnCompression {
  PolyMatrix transform;   // unimodular L, cols x cols
  PolyMatrix compressed;  // rows x rank, full column rank
  Index rank = 0;
};
/// Finds unimodular L with P*L = [P_tilde 0]. Full-rank inputs return L = I.
ColumnCompression compress_columns(const PolyMatrix& p);

struct RhpRoot {
  Complex location;
  int multiplicity = 1;
  /// |Re(location)| <= delta.
  bool boundary = false;
  /// Unit null vector of T(location); empty for scalar searches.
  ComplexVector null_direction;
};

struct RhpRootSearch {
  /// The input vanishes identically; every s is a root.
  bool degenerate = false;
  /// Monic polynomial whose roots were searched.
  Poly gcd;
  std::vector<RhpRoot> roots;
};

/// Roots of p with Re >= -delta.
RhpRootSearch rhp_roots(const Poly& p, double delta = kRhpMargin);
/// Closed-RHP common zeros of the maximal minors of a tall T (rows >= cols).
RhpRootSearch rhp_roots(const PolyMatrix& tall, double delta = kRhpMargin);

}  // namespace lqnash
