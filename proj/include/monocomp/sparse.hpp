#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monocomp {

/// Compressed sparse row real matrix. Column indices are sorted within each
/// row and carry no duplicates; both invariants are established by the
/// triplet builder and preserved by every operation here.
class SparseMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);  // all zero

  /// Coalesces duplicates by summation in (row, col) order.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  std::span<const std::size_t> row_cols(std::size_t r) const;
  std::span<const double> row_values(std::size_t r) const;

  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<double> multiply_transpose(std::span<const double> y) const;

  SparseMatrix transpose() const;

  /// Keeps rows whose index is not listed; `sorted_rows` must be ascending.
  SparseMatrix delete_rows(const std::vector<std::size_t>& sorted_rows) const;

  /// Multiplies row r by d[r] (diagonal scaling from the left).
  SparseMatrix scale_rows(const std::vector<double>& d) const;

  SparseMatrix scaled(double s) const;

  bool is_identity() const;
  double entry(std::size_t r, std::size_t c) const;

  /// diag(A^T A): column sums of squares.
  std::vector<double> column_sq_norms() const;
  std::vector<double> column_sums() const;

  std::vector<std::vector<double>> to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_;  // size rows_+1
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// Stacks blocks vertically; all blocks must share the column count.
SparseMatrix vstack(const std::vector<const SparseMatrix*>& blocks);

/// Kronecker product; throws if the result's index space would overflow.
SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b);

/// n x n operator with first row (1,0,...,0) and (-1,1) bands below,
/// scaled by `scale`. Applied to nodal values it returns the first value
/// followed by consecutive differences (left boundary value eliminated).
SparseMatrix backward_difference(std::size_t n, double scale);

/// (m-1) x m interior difference with (-1,1) bands, scaled.
SparseMatrix interior_difference(std::size_t m, double scale);

/// (n+1) x n difference with both boundary values eliminated: first row
/// (1,0,..), (-1,1) bands, last row (0,..,0,-1); transpose-product is the
/// 1-D Dirichlet Laplacian tridiag(-1,2,-1) times scale^2.
SparseMatrix dirichlet_difference(std::size_t n, double scale);

/// qscale * A^T A + L^T diag(w) L, assembled exactly symmetric (upper
/// triangle accumulated in a fixed order and mirrored).
SparseMatrix normal_operator(const SparseMatrix& a, const SparseMatrix& l,
                             std::span<const double> w, double qscale);

}  // namespace monocomp
