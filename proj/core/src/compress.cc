#include <algorithm>
#include <numeric>
#include <string>

#include "lqnash/polymat.h"

namespace lqnash {

namespace {

// Coefficient size beyond which the elimination is considered to have blown
// up (relative to the input's largest coefficient).
constexpr double kGrowthBound = 1e12;

// Column operation W(:, k) -= q * W(:, j) on both the working matrix and the
// accumulated transform.
void subtract_column_multiple(PolyMatrix& w, PolyMatrix& l, Index k, Index j,
                              const Poly& q) {
  for (Index i = 0; i < w.rows(); ++i) w(i, k) -= q * w(i, j);
  for (Index i = 0; i < l.rows(); ++i) l(i, k) -= q * l(i, j);
}

}  // namespace

ColumnCompression compress_columns(const PolyMatrix& p) {
  const Index cols = p.cols();
  ColumnCompression out;
  out.rank = poly_rank(p);
  if (out.rank == cols) {
    out.transform = PolyMatrix::identity(cols);
    out.compressed = p;
    return out;
  }

  PolyMatrix w = p;
  PolyMatrix l = PolyMatrix::identity(cols);
  const double scale = std::max(1.0, p.max_abs_coeff());
  std::vector<Index> active(static_cast<std::size_t>(cols));
  std::iota(active.begin(), active.end(), 0);
  std::vector<Index> pivots;

  for (Index r = 0; r < p.rows() && !active.empty(); ++r) {
    // Euclid across the active columns on row r until one nonzero remains.
    while (true) {
      std::vector<Index> nonzero;
      for (Index k : active) {
        if (!w(r, k).is_zero()) nonzero.push_back(k);
      }
      if (nonzero.size() <= 1) {
        if (nonzero.size() == 1) {
          pivots.push_back(nonzero[0]);
          std::erase(active, nonzero[0]);
        }
        break;
      }
      const Index j = *std::min_element(
          nonzero.begin(), nonzero.end(), [&](Index a, Index b) {
            return w(r, a).degree() < w(r, b).degree();
          });
      for (Index k : nonzero) {
        if (k == j) continue;
        const PolyDivision div = divide(w(r, k), w(r, j));
        subtract_column_multiple(w, l, k, j, div.quotient);
        // The division already decided which coefficients cancelled.
        w(r, k) = div.remainder;
      }
      if (l.max_abs_coeff() > kGrowthBound * scale ||
          w.max_abs_coeff() > kGrowthBound * scale) {
        throw NumericalError("compress_columns: coefficient growth exceeded bound");
      }
    }
  }

  // Remaining active columns are zero in every row by construction.
  if (static_cast<Index>(active.size()) != cols - out.rank ||
      static_cast<Index>(pivots.size()) != out.rank) {
    throw NumericalError("compress_columns: found " +
                         std::to_string(active.size()) + " null columns, expected " +
                         std::to_string(cols - out.rank));
  }

  std::vector<Index> order = pivots;
  order.insert(order.end(), active.begin(), active.end());
  std::vector<Index> all_rows(static_cast<std::size_t>(cols));
  std::iota(all_rows.begin(), all_rows.end(), 0);
  out.transform = l.select(all_rows, order);

  const PolyMatrix product = p * out.transform;
  const PolyMatrix null_part = product.middle_cols(out.rank, cols - out.rank);
  const double budget =
      1e-8 * std::max(1.0, p.coeff_norm() * out.transform.coeff_norm());
  if (null_part.coeff_norm() > budget) {
    throw NumericalError("compress_columns: trailing columns are not null");
  }
  if (cols <= 6) {
    const Poly det = determinant(out.transform);
    if (det.degree() != 0) {
      throw NumericalError("compress_columns: transform is not unimodular");
    }
  }
  out.compressed = product.middle_cols(0, out.rank);
  return out;
}

}  // namespace lqnash
