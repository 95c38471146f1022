#include "monocomp/sparse.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace monocomp {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_offsets_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row >= rows || t.col >= cols)
      throw std::out_of_range("sparse triplet out of range");
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t i = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const std::size_t c = triplets[i].col;
      double v = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
        v += triplets[i++].value;
      m.col_indices_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_offsets_[r + 1] = m.col_indices_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  m.col_indices_.resize(n);
  m.values_.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.col_indices_[i] = i;
    m.row_offsets_[i + 1] = i + 1;
  }
  return m;
}

SparseMatrix SparseMatrix::diagonal(const std::vector<double>& d) {
  SparseMatrix m = identity(d.size());
  m.values_ = d;
  return m;
}

std::span<const std::size_t> SparseMatrix::row_cols(std::size_t r) const {
  return {col_indices_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
}

std::span<const double> SparseMatrix::row_values(std::size_t r) const {
  return {values_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      acc += values_[k] * x[col_indices_[k]];
    y[r] = acc;
  }
  return y;
}

std::vector<double> SparseMatrix::multiply_transpose(std::span<const double> y) const {
  if (y.size() != rows_) throw std::invalid_argument("matvec_t: size mismatch");
  std::vector<double> x(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      x[col_indices_[k]] += values_[k] * yr;
  }
  return x;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<std::size_t> count(cols_, 0);
  for (std::size_t c : col_indices_) ++count[c];
  for (std::size_t c = 0; c < cols_; ++c) t.row_offsets_[c + 1] = t.row_offsets_[c] + count[c];
  t.col_indices_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<std::size_t> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const std::size_t pos = next[col_indices_[k]]++;
      t.col_indices_[pos] = r;
      t.values_[pos] = values_[k];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::delete_rows(const std::vector<std::size_t>& sorted_rows) const {
  SparseMatrix out(rows_ - sorted_rows.size(), cols_);
  std::size_t di = 0, or_ = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (di < sorted_rows.size() && sorted_rows[di] == r) {
      ++di;
      continue;
    }
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      out.col_indices_.push_back(col_indices_[k]);
      out.values_.push_back(values_[k]);
    }
    out.row_offsets_[++or_] = out.col_indices_.size();
  }
  if (di != sorted_rows.size()) throw std::out_of_range("delete_rows: bad row list");
  return out;
}

SparseMatrix SparseMatrix::scale_rows(const std::vector<double>& d) const {
  if (d.size() != rows_) throw std::invalid_argument("scale_rows: size mismatch");
  SparseMatrix out = *this;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      out.values_[k] *= d[r];
  return out;
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix out = *this;
  for (double& v : out.values_) v *= s;
  return out;
}

bool SparseMatrix::is_identity() const {
  if (rows_ != cols_ || nnz() != rows_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_offsets_[r + 1] != r + 1) return false;
    if (col_indices_[r] != r || values_[r] != 1.0) return false;
  }
  return true;
}

double SparseMatrix::entry(std::size_t r, std::size_t c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_offsets_[r] + static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> SparseMatrix::column_sq_norms() const {
  std::vector<double> d(cols_, 0.0);
  for (std::size_t k = 0; k < nnz(); ++k) d[col_indices_[k]] += values_[k] * values_[k];
  return d;
}

std::vector<double> SparseMatrix::column_sums() const {
  std::vector<double> d(cols_, 0.0);
  for (std::size_t k = 0; k < nnz(); ++k) d[col_indices_[k]] += values_[k];
  return d;
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
  std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      d[r][col_indices_[k]] += values_[k];
  return d;
}

SparseMatrix vstack(const std::vector<const SparseMatrix*>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("vstack: no blocks");
  const std::size_t cols = blocks.front()->cols();
  std::size_t rows = 0;
  for (const auto* b : blocks) {
    if (b->cols() != cols) throw std::invalid_argument("vstack: column mismatch");
    rows += b->rows();
  }
  std::vector<SparseMatrix::Triplet> trips;
  std::size_t base = 0;
  for (const auto* b : blocks) {
    for (std::size_t r = 0; r < b->rows(); ++r) {
      const auto cs = b->row_cols(r);
      const auto vs = b->row_values(r);
      for (std::size_t k = 0; k < cs.size(); ++k)
        trips.push_back({base + r, cs[k], vs[k]});
    }
    base += b->rows();
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(trips));
}

SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b) {
  const auto guard = [](std::size_t x, std::size_t y) {
    if (y != 0 && x > std::numeric_limits<std::size_t>::max() / y)
      throw std::overflow_error("kronecker: index space overflow");
    return x * y;
  };
  const std::size_t rows = guard(a.rows(), b.rows());
  const std::size_t cols = guard(a.cols(), b.cols());
  guard(a.nnz(), b.nnz());
  std::vector<SparseMatrix::Triplet> trips;
  trips.reserve(a.nnz() * b.nnz());
  for (std::size_t ra = 0; ra < a.rows(); ++ra) {
    const auto ca = a.row_cols(ra);
    const auto va = a.row_values(ra);
    for (std::size_t rb = 0; rb < b.rows(); ++rb) {
      const auto cb = b.row_cols(rb);
      const auto vb = b.row_values(rb);
      for (std::size_t i = 0; i < ca.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j)
          trips.push_back({ra * b.rows() + rb, ca[i] * b.cols() + cb[j], va[i] * vb[j]});
    }
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(trips));
}

SparseMatrix backward_difference(std::size_t n, double scale) {
  if (n < 2) throw std::invalid_argument("backward_difference: n must be >= 2");
  std::vector<SparseMatrix::Triplet> trips;
  trips.push_back({0, 0, scale});
  for (std::size_t i = 1; i < n; ++i) {
    trips.push_back({i, i - 1, -scale});
    trips.push_back({i, i, scale});
  }
  return SparseMatrix::from_triplets(n, n, std::move(trips));
}

SparseMatrix interior_difference(std::size_t m, double scale) {
  if (m < 2) throw std::invalid_argument("interior_difference: m must be >= 2");
  std::vector<SparseMatrix::Triplet> trips;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    trips.push_back({i, i, -scale});
    trips.push_back({i, i + 1, scale});
  }
  return SparseMatrix::from_triplets(m - 1, m, std::move(trips));
}

SparseMatrix dirichlet_difference(std::size_t n, double scale) {
  if (n < 1) throw std::invalid_argument("dirichlet_difference: n must be >= 1");
  std::vector<SparseMatrix::Triplet> trips;
  trips.push_back({0, 0, scale});
  for (std::size_t i = 1; i < n; ++i) {
    trips.push_back({i, i - 1, -scale});
    trips.push_back({i, i, scale});
  }
  trips.push_back({n, n - 1, -scale});
  return SparseMatrix::from_triplets(n + 1, n, std::move(trips));
}

SparseMatrix normal_operator(const SparseMatrix& a, const SparseMatrix& l,
                             std::span<const double> w, double qscale) {
  if (a.cols() != l.cols()) throw std::invalid_argument("normal_operator: column mismatch");
  if (w.size() != l.rows()) throw std::invalid_argument("normal_operator: weight length mismatch");
  const std::size_t n = a.cols();
  // Accumulate the upper triangle row-by-row via outer products, then mirror;
  // the (i,j) and (j,i) values are the same summation, so the result is
  // symmetric bit-for-bit.
  std::vector<SparseMatrix::Triplet> trips;
  const auto accumulate = [&](const SparseMatrix& m, const double* rowscale, double factor) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const double f = factor * (rowscale ? rowscale[r] : 1.0);
      if (f == 0.0 && rowscale) {
        // keep the structural pattern so repeated assemblies share sparsity
        const auto cs = m.row_cols(r);
        for (std::size_t i = 0; i < cs.size(); ++i)
          for (std::size_t j = i; j < cs.size(); ++j)
            trips.push_back({cs[i], cs[j], 0.0});
        continue;
      }
      const auto cs = m.row_cols(r);
      const auto vs = m.row_values(r);
      for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i; j < cs.size(); ++j)
          trips.push_back({cs[i], cs[j], f * vs[i] * vs[j]});
    }
  };
  accumulate(a, nullptr, qscale);
  accumulate(l, w.data(), 1.0);
  SparseMatrix upper = SparseMatrix::from_triplets(n, n, std::move(trips));
  std::vector<SparseMatrix::Triplet> full;
  full.reserve(2 * upper.nnz());
  for (std::size_t r = 0; r < n; ++r) {
    const auto cs = upper.row_cols(r);
    const auto vs = upper.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      full.push_back({r, cs[k], vs[k]});
      if (cs[k] != r) full.push_back({cs[k], r, vs[k]});
    }
  }
  return SparseMatrix::from_triplets(n, n, std::move(full));
}

}  // namespace monocomp
