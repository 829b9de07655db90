#include "lqnash/polymat.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace lqnash {

namespace {

using Coeffs = std::vector<double>;

// value/magnitude accumulators: mag[k] bounds the absolute size of the terms
// that were summed into val[k].
void accumulate_product(Coeffs& val, Coeffs& mag, const Coeffs& a,
                        const Coeffs& b, double sign = 1.0) {
  if (a.empty() || b.empty()) return;
  const std::size_t need = a.size() + b.size() - 1;
  if (val.size() < need) {
    val.resize(need, 0.0);
    mag.resize(need, 0.0);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      val[i + j] += sign * a[i] * b[j];
      mag[i + j] += std::abs(a[i] * b[j]);
    }
  }
}

void accumulate_sum(Coeffs& val, Coeffs& mag, const Coeffs& a,
                    double sign = 1.0) {
  if (val.size() < a.size()) {
    val.resize(a.size(), 0.0);
    mag.resize(a.size(), 0.0);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    val[i] += sign * a[i];
    mag[i] += std::abs(a[i]);
  }
}

Poly settle(Coeffs val, const Coeffs& mag, double rel = kPolyTrim) {
  for (std::size_t k = 0; k < val.size(); ++k) {
    if (std::abs(val[k]) <= rel * mag[k]) val[k] = 0.0;
  }
  return Poly(std::move(val));
}

}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw PreconditionError("Poly: non-finite coefficient");
  }
  drop_leading_zeros();
}

Poly Poly::monomial(double c, int k) {
  std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
  v.back() = c;
  return Poly(std::move(v));
}

Poly Poly::from_real_roots(std::span<const double> roots) {
  Poly out = constant(1.0);
  for (double r : roots) out = out * Poly({-r, 1.0});
  return out;
}

void Poly::drop_leading_zeros() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Poly::coeff(int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

Complex Poly::operator()(Complex s) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Poly::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Poly::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Poly::norm() const {
  double acc = 0.0;
  for (double c : coeffs_) acc += c * c;
  return std::sqrt(acc);
}

Poly Poly::reflect() const {
  Coeffs out = coeffs_;
  for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
  return Poly(std::move(out));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return (1.0 / leading()) * *this;
}

Poly Poly::abs() const {
  Coeffs out = coeffs_;
  for (double& c : out) c = std::abs(c);
  return Poly(std::move(out));
}

Poly& Poly::trim(double rel) { return chop(rel * max_abs()); }

Poly& Poly::chop(double threshold) {
  for (double& c : coeffs_) {
    if (std::abs(c) <= threshold) c = 0.0;
  }
  drop_leading_zeros();
  return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
  Coeffs val, mag;
  accumulate_sum(val, mag, a.coeffs_);
  accumulate_sum(val, mag, b.coeffs_);
  return settle(std::move(val), mag);
}

Poly operator-(const Poly& a, const Poly& b) {
  Coeffs val, mag;
  accumulate_sum(val, mag, a.coeffs_);
  accumulate_sum(val, mag, b.coeffs_, -1.0);
  return settle(std::move(val), mag);
}

Poly operator*(const Poly& a, const Poly& b) {
  Coeffs val, mag;
  accumulate_product(val, mag, a.coeffs_, b.coeffs_);
  return settle(std::move(val), mag);
}

Poly operator*(double c, const Poly& a) {
  Coeffs out = a.coeffs_;
  for (double& x : out) x *= c;
  return Poly(std::move(out));
}

Poly Poly::operator-() const { return -1.0 * *this; }

PolyDivision divide(const Poly& a, const Poly& b, double tol) {
  if (b.is_zero()) throw PreconditionError("divide: division by zero polynomial");
  const int db = b.degree();
  Coeffs rem = a.coeffs();
  Coeffs mag(rem.size());
  std::transform(rem.begin(), rem.end(), mag.begin(),
                 [](double c) { return std::abs(c); });
  Coeffs quot(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0,
              0.0);
  const double lead = b.leading();
  for (int k = a.degree(); k >= db; --k) {
    const double c = rem[static_cast<std::size_t>(k)] / lead;
    quot[static_cast<std::size_t>(k - db)] = c;
    for (int j = 0; j <= db; ++j) {
      const std::size_t idx = static_cast<std::size_t>(k - db + j);
      rem[idx] -= c * b.coeff(j);
      mag[idx] += std::abs(c * b.coeff(j));
    }
    rem[static_cast<std::size_t>(k)] = 0.0;
  }
  Poly remainder = settle(std::move(rem), mag, tol);
  // A remainder that is negligible against the dividend is no remainder.
  if (remainder.max_abs() <= tol * std::max(a.max_abs(), 1e-300)) remainder = Poly();
  return {Poly(std::move(quot)), std::move(remainder)};
}

Poly gcd(const Poly& a, const Poly& b, double tol) {
  Poly x = a.monic();
  Poly y = b.monic();
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    Poly r = divide(x, y, tol).remainder;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

ComplexVector roots(const Poly& p) {
  if (p.is_zero()) throw PreconditionError("roots: zero polynomial");
  const int n = p.degree();
  if (n == 0) return ComplexVector(0);
  const Poly m = p.monic();
  Matrix companion = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -m.coeff(i);
  return eig(companion);
}

// ---------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows * cols)) {
  if (rows < 0 || cols < 0) throw DimensionError("PolyMatrix: negative size");
}

PolyMatrix::PolyMatrix(std::initializer_list<std::initializer_list<Poly>> rows) {
  rows_ = static_cast<Index>(rows.size());
  cols_ = rows_ > 0 ? static_cast<Index>(rows.begin()->size()) : 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != cols_) {
      throw DimensionError("PolyMatrix: ragged initializer");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

PolyMatrix PolyMatrix::constant(const Matrix& m) {
  PolyMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = Poly::constant(m(i, j));
  }
  return out;
}

PolyMatrix PolyMatrix::identity(Index n) {
  return constant(Matrix::Identity(n, n));
}

PolyMatrix PolyMatrix::pencil(const Matrix& a) {
  require_square(a, "PolyMatrix::pencil");
  PolyMatrix out = constant(-a);
  for (Index i = 0; i < a.rows(); ++i) out(i, i) = Poly({-a(i, i), 1.0});
  return out;
}

PolyMatrix PolyMatrix::from_coefficients(std::span<const Matrix> coeffs) {
  if (coeffs.empty()) return {};
  const Index r = coeffs[0].rows();
  const Index c = coeffs[0].cols();
  PolyMatrix out(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) {
      Coeffs v;
      for (const Matrix& m : coeffs) {
        if (m.rows() != r || m.cols() != c) {
          throw DimensionError("from_coefficients: inconsistent sizes");
        }
        v.push_back(m(i, j));
      }
      out(i, j) = Poly(std::move(v));
    }
  }
  return out;
}

int PolyMatrix::degree() const {
  int d = kZeroDegree;
  for (const Poly& p : entries_) d = std::max(d, p.degree());
  return d;
}

Matrix PolyMatrix::coefficient(int k) const {
  Matrix out(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).coeff(k);
  }
  return out;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Poly& p) { return p.is_zero(); });
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix out(cols_, rows_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

PolyMatrix PolyMatrix::paraconjugate() const {
  PolyMatrix out(cols_, rows_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).reflect();
  }
  return out;
}

ComplexMatrix PolyMatrix::eval(Complex s) const {
  ComplexMatrix out(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j)(s);
  }
  return out;
}

Matrix PolyMatrix::eval(double s) const {
  Matrix out(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j)(s);
  }
  return out;
}

PolyMatrix PolyMatrix::block(Index row, Index col, Index rows,
                             Index cols) const {
  if (row < 0 || col < 0 || row + rows > rows_ || col + cols > cols_) {
    throw DimensionError("PolyMatrix::block out of range");
  }
  PolyMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = (*this)(row + i, col + j);
  }
  return out;
}

PolyMatrix PolyMatrix::select(std::span<const Index> row_ids,
                              std::span<const Index> col_ids) const {
  PolyMatrix out(static_cast<Index>(row_ids.size()),
                 static_cast<Index>(col_ids.size()));
  for (std::size_t i = 0; i < row_ids.size(); ++i) {
    for (std::size_t j = 0; j < col_ids.size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) =
          (*this)(row_ids[i], col_ids[j]);
    }
  }
  return out;
}

double PolyMatrix::coeff_norm() const {
  double acc = 0.0;
  for (const Poly& p : entries_) acc += p.norm() * p.norm();
  return std::sqrt(acc);
}

double PolyMatrix::max_abs_coeff() const {
  double m = 0.0;
  for (const Poly& p : entries_) m = std::max(m, p.max_abs());
  return m;
}

PolyMatrix& PolyMatrix::trim(double rel) {
  const double threshold = rel * max_abs_coeff();
  for (Poly& p : entries_) p.chop(threshold);
  return *this;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionError("PolyMatrix +: dimension mismatch");
  }
  PolyMatrix out(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.entries_.size(); ++k) {
    out.entries_[k] = a.entries_[k] + b.entries_[k];
  }
  return out;
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionError("PolyMatrix -: dimension mismatch");
  }
  PolyMatrix out(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.entries_.size(); ++k) {
    out.entries_[k] = a.entries_[k] - b.entries_[k];
  }
  return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionError("PolyMatrix *: inner dimensions " +
                         std::to_string(a.cols_) + " vs " +
                         std::to_string(b.rows_));
  }
  PolyMatrix out(a.rows_, b.cols_);
  for (Index i = 0; i < a.rows_; ++i) {
    for (Index j = 0; j < b.cols_; ++j) {
      Coeffs val, mag;
      for (Index k = 0; k < a.cols_; ++k) {
        accumulate_product(val, mag, a(i, k).coeffs(), b(k, j).coeffs());
      }
      out(i, j) = settle(std::move(val), mag);
    }
  }
  return out;
}

PolyMatrix operator*(const Matrix& a, const PolyMatrix& b) {
  return PolyMatrix::constant(a) * b;
}

PolyMatrix operator*(const PolyMatrix& a, const Matrix& b) {
  return a * PolyMatrix::constant(b);
}

PolyMatrix operator*(double c, const PolyMatrix& a) {
  PolyMatrix out = a;
  for (Poly& p : out.entries_) p = c * p;
  return out;
}

double coeff_distance(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("coeff_distance: dimension mismatch");
  }
  double acc = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const Poly& x = a(i, j);
      const Poly& y = b(i, j);
      const int d = std::max(x.degree(), y.degree());
      for (int k = 0; k <= d; ++k) {
        const double diff = x.coeff(k) - y.coeff(k);
        acc += diff * diff;
      }
    }
  }
  return std::sqrt(acc);
}

std::vector<int> column_degrees(const PolyMatrix& p) {
  std::vector<int> out(static_cast<std::size_t>(p.cols()), kZeroDegree);
  for (Index j = 0; j < p.cols(); ++j) {
    for (Index i = 0; i < p.rows(); ++i) {
      out[static_cast<std::size_t>(j)] =
          std::max(out[static_cast<std::size_t>(j)], p(i, j).degree());
    }
  }
  return out;
}

Matrix leading_column_coefficients(const PolyMatrix& p) {
  const std::vector<int> sigma = column_degrees(p);
  Matrix out = Matrix::Zero(p.rows(), p.cols());
  for (Index j = 0; j < p.cols(); ++j) {
    const int d = sigma[static_cast<std::size_t>(j)];
    if (d == kZeroDegree) continue;
    for (Index i = 0; i < p.rows(); ++i) out(i, j) = p(i, j).coeff(d);
  }
  return out;
}

bool is_column_reduced(const PolyMatrix& p, double tol) {
  if (p.cols() == 0) return true;
  const std::vector<int> sigma = column_degrees(p);
  if (std::find(sigma.begin(), sigma.end(), kZeroDegree) != sigma.end()) {
    return false;
  }
  return numeric_rank(leading_column_coefficients(p), tol) == p.cols();
}

// ---------------------------------------------------------------- minors

Poly determinant(const PolyMatrix& p) {
  if (p.rows() != p.cols()) throw DimensionError("determinant: not square");
  const Index n = p.rows();
  if (n == 0) return Poly::constant(1.0);
  if (n > 6) throw DimensionError("determinant: unsupported size (> 6)");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Coeffs val, mag;
  do {
    // Sign from the inversion count.
    int inversions = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) {
          ++inversions;
        }
      }
    }
    Coeffs term{1.0};
    Coeffs term_abs{1.0};
    bool zero = false;
    for (Index i = 0; i < n && !zero; ++i) {
      const Poly& e = p(i, perm[static_cast<std::size_t>(i)]);
      if (e.is_zero()) {
        zero = true;
        break;
      }
      Coeffs next, next_abs, scratch;
      accumulate_product(next, scratch, term, e.coeffs());
      Coeffs scratch2;
      accumulate_product(next_abs, scratch2, term_abs, e.abs().coeffs());
      term = std::move(next);
      term_abs = std::move(next_abs);
    }
    if (zero) continue;
    const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
    if (val.size() < term.size()) {
      val.resize(term.size(), 0.0);
      mag.resize(term.size(), 0.0);
    }
    for (std::size_t k = 0; k < term.size(); ++k) {
      val[k] += sign * term[k];
      mag[k] += term_abs[k];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return settle(std::move(val), mag);
}

namespace {

// Calls fn for every k-subset of {0..n-1} (ascending order).
template <typename Fn>
bool for_each_subset(Index n, Index k, Fn&& fn) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return false;
  while (true) {
    if (fn(std::span<const Index>(idx))) return true;
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

std::vector<Poly> maximal_minors(const PolyMatrix& tall) {
  std::vector<Poly> out;
  std::vector<Index> all_cols(static_cast<std::size_t>(tall.cols()));
  std::iota(all_cols.begin(), all_cols.end(), 0);
  for_each_subset(tall.rows(), tall.cols(), [&](std::span<const Index> rows) {
    out.push_back(determinant(tall.select(rows, all_cols)));
    return false;
  });
  return out;
}

Index sampled_rank(const PolyMatrix& p) {
  const int deg = std::max(p.degree(), 0);
  const int samples = 2 * deg + 3;
  const double radius = 1.0 + p.max_abs_coeff();
  Index best = 0;
  for (int k = 0; k < samples; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + 0.5) / samples + 0.1234;
    ComplexMatrix m = p.eval(std::polar(radius, theta));
    for (Index j = 0; j < m.cols(); ++j) {
      const double n = m.col(j).norm();
      if (n > 0.0) m.col(j) /= n;
    }
    for (Index i = 0; i < m.rows(); ++i) {
      const double n = m.row(i).norm();
      if (n > 0.0) m.row(i) /= n;
    }
    best = std::max(best, numeric_rank(m, tol::kRank));
  }
  return best;
}

}  // namespace

Index poly_rank_by_minors(const PolyMatrix& p) {
  const Index kmax = std::min(p.rows(), p.cols());
  if (kmax > kMaxMinorDimension) {
    throw DimensionError("poly_rank_by_minors: unsupported size");
  }
  for (Index k = kmax; k >= 1; --k) {
    const bool found = for_each_subset(p.rows(), k, [&](std::span<const Index> rows) {
      return for_each_subset(p.cols(), k, [&](std::span<const Index> cols) {
        return !determinant(p.select(rows, cols)).is_zero();
      });
    });
    if (found) return k;
  }
  return 0;
}

Index poly_rank(const PolyMatrix& p) {
  if (p.rows() == 0 || p.cols() == 0 || p.is_zero()) return 0;
  const Index sampled = sampled_rank(p);
  if (std::min(p.rows(), p.cols()) <= kMaxMinorDimension &&
      std::max(p.rows(), p.cols()) <= 8) {
    const Index by_minors = poly_rank_by_minors(p);
    if (by_minors != sampled) {
      throw NumericalError("poly_rank: sampled rank " + std::to_string(sampled) +
                           " disagrees with minor rank " +
                           std::to_string(by_minors));
    }
  }
  return sampled;
}

// ---------------------------------------------------------------- RHP roots

namespace {

struct Cluster {
  Complex location;
  int multiplicity;
};

std::vector<Cluster> cluster_roots(std::vector<Complex> rts) {
  std::sort(rts.begin(), rts.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Cluster> out;
  std::vector<bool> used(rts.size(), false);
  for (std::size_t i = 0; i < rts.size(); ++i) {
    if (used[i]) continue;
    Complex sum = rts[i];
    int count = 1;
    used[i] = true;
    const double radius = 1e-5 * std::max(1.0, std::abs(rts[i]));
    for (std::size_t j = i + 1; j < rts.size(); ++j) {
      if (!used[j] && std::abs(rts[j] - rts[i]) <= radius) {
        used[j] = true;
        sum += rts[j];
        ++count;
      }
    }
    out.push_back({sum / static_cast<double>(count), count});
  }
  return out;
}

std::vector<Complex> closed_rhp(const ComplexVector& rts, double delta) {
  std::vector<Complex> out;
  for (const Complex& r : rts) {
    if (r.real() >= -delta) out.push_back(r);
  }
  return out;
}

ComplexVector normalized_null_direction(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  ComplexVector v = svd.matrixV().col(m.cols() - 1);
  Index big = 0;
  for (Index k = 1; k < v.size(); ++k) {
    if (std::abs(v(k)) > std::abs(v(big))) big = k;
  }
  const Complex phase = v(big) / std::abs(v(big));
  v /= phase;
  v(big) = std::abs(v(big));
  return v / v.norm();
}

bool near_any(const Complex& r, const std::vector<Cluster>& set) {
  return std::any_of(set.begin(), set.end(), [&](const Cluster& c) {
    return std::abs(c.location - r) <= 1e-4 * std::max(1.0, std::abs(r));
  });
}

}  // namespace

RhpRootSearch rhp_roots(const Poly& p, double delta) {
  RhpRootSearch out;
  if (p.is_zero()) {
    out.degenerate = true;
    return out;
  }
  out.gcd = p.monic();
  for (const Cluster& c : cluster_roots(closed_rhp(roots(p), delta))) {
    RhpRoot r;
    r.location = c.location;
    r.multiplicity = c.multiplicity;
    r.boundary = std::abs(c.location.real()) <= delta;
    out.roots.push_back(r);
  }
  return out;
}

RhpRootSearch rhp_roots(const PolyMatrix& tall, double delta) {
  if (tall.rows() < tall.cols()) {
    throw DimensionError("rhp_roots: expected a tall matrix (rows >= cols)");
  }
  if (tall.cols() > kMaxMinorDimension) {
    throw DimensionError("rhp_roots: unsupported size");
  }
  RhpRootSearch out;
  std::vector<Poly> minors;
  for (Poly& m : maximal_minors(tall)) {
    if (!m.is_zero()) minors.push_back(std::move(m));
  }
  if (minors.empty()) {
    out.degenerate = true;
    return out;
  }
  Poly g;
  for (const Poly& m : minors) g = gcd(g, m);
  out.gcd = g;
  if (g.degree() <= 0) return out;

  const std::vector<Cluster> clusters =
      cluster_roots(closed_rhp(roots(g), delta));

  // Independent route: roots of the lowest-degree minor at which every other
  // minor also vanishes.
  const auto lowest = std::min_element(
      minors.begin(), minors.end(),
      [](const Poly& a, const Poly& b) { return a.degree() < b.degree(); });
  if (lowest->degree() <= 8) {
    std::vector<Complex> common;
    for (const Complex& r : closed_rhp(roots(*lowest), delta)) {
      const bool shared = std::all_of(minors.begin(), minors.end(), [&](const Poly& m) {
        return std::abs(m(r)) <= 1e-6 * m.abs()(std::abs(r));
      });
      if (shared) common.push_back(r);
    }
    const std::vector<Cluster> check = cluster_roots(common);
    const bool agree =
        std::all_of(clusters.begin(), clusters.end(),
                    [&](const Cluster& c) { return near_any(c.location, check); }) &&
        std::all_of(check.begin(), check.end(),
                    [&](const Cluster& c) { return near_any(c.location, clusters); });
    if (!agree) {
      throw NumericalError(
          "rhp_roots: gcd of minors and root clustering disagree");
    }
  }

  for (const Cluster& c : clusters) {
    RhpRoot r;
    r.location = c.location;
    r.multiplicity = c.multiplicity;
    r.boundary = std::abs(c.location.real()) <= delta;
    r.null_direction = normalized_null_direction(tall.eval(c.location));
    out.roots.push_back(r);
  }
  return out;
}

}  // namespace lqnash
