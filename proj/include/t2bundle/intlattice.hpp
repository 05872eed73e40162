#pragma once

// Integer lattices: Smith and column Hermite forms, membership with witness,
// quotient modules Z^r / L and rank over Q.

#include "t2bundle/integer.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace t2b {

using IntVector = std::vector<Int>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
  IntMatrix(size_t rows, size_t cols, std::vector<Int> entries)
      : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (e_.size() != rows_ * cols_) {
      throw std::invalid_argument("IntMatrix: entry count does not match dimensions");
    }
  }

  static IntMatrix identity(size_t n) {
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  // Matrix whose columns are the given vectors, all of length rows.
  static IntMatrix from_columns(size_t rows, std::vector<IntVector> const& cols) {
    IntMatrix m(rows, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) {
        throw std::invalid_argument("IntMatrix::from_columns: column has wrong length");
      }
      for (size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Int& operator()(size_t i, size_t j) { return e_[i * cols_ + j]; }
  Int const& operator()(size_t i, size_t j) const { return e_[i * cols_ + j]; }

  bool operator==(IntMatrix const& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }

  IntMatrix operator*(IntMatrix const& o) const {
    if (cols_ != o.rows_) {
      throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    }
    IntMatrix r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) {
        Int const& x = (*this)(i, k);
        if (x == 0) continue;
        for (size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
      }
    return r;
  }

  IntVector operator*(IntVector const& v) const {
    if (cols_ != v.size()) {
      throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    }
    IntVector r(rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  IntVector column(size_t j) const {
    IntVector v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void swap_rows(size_t i, size_t k) {
    for (size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }
  void swap_cols(size_t j, size_t k) {
    for (size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }
  // row i += q * row k
  void add_row(size_t i, size_t k, Int const& q) {
    for (size_t j = 0; j < cols_; ++j) (*this)(i, j) += q * (*this)(k, j);
  }
  // col j += q * col k
  void add_col(size_t j, size_t k, Int const& q) {
    for (size_t i = 0; i < rows_; ++i) (*this)(i, j) += q * (*this)(i, k);
  }
  void negate_row(size_t i) {
    for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(size_t j) {
    for (size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  std::string str() const {
    std::string s = "[";
    for (size_t i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (size_t j = 0; j < cols_; ++j) {
        if (j) s += ",";
        s += (*this)(i, j).str();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Int> e_;
};

// Fraction-free (Bareiss) determinant of a square matrix.
inline Int determinant(IntMatrix m) {
  size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// Rank over Q by fraction-free elimination.
inline size_t rank(IntMatrix m) {
  size_t r = 0;
  Int prev = 1;
  for (size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    size_t p = r;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (size_t i = r + 1; i < m.rows(); ++i) {
      for (size_t j = col + 1; j < m.cols(); ++j)
        m(i, j) = (m(i, j) * m(r, col) - m(i, col) * m(r, j)) / prev;
      m(i, col) = 0;
    }
    prev = m(r, col);
    ++r;
  }
  return r;
}

struct SmithForm {
  IntMatrix U, D, V;  // U * M * V == D
};

// Smith normal form with smallest-absolute-value pivoting.
inline SmithForm smith_normal_form(IntMatrix const& M) {
  size_t m = M.rows(), n = M.cols();
  SmithForm f{IntMatrix::identity(m), M, IntMatrix::identity(n)};
  IntMatrix& D = f.D;
  for (size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      size_t pi = m, pj = n;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j)
          if (D(i, j) != 0 && (pi == m || abs(D(i, j)) < abs(D(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) {
        return f;  // the remaining block is zero
      }
      if (pi != t) {
        D.swap_rows(t, pi);
        f.U.swap_rows(t, pi);
      }
      if (pj != t) {
        D.swap_cols(t, pj);
        f.V.swap_cols(t, pj);
      }
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Int q = D(i, t) / D(t, t);
        D.add_row(i, t, -q);
        f.U.add_row(i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Int q = D(t, j) / D(t, t);
        D.add_col(j, t, -q);
        f.V.add_col(j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (size_t i = t + 1; i < m && divides; ++i)
        for (size_t j = t + 1; j < n && divides; ++j)
          if (D(i, j) % D(t, t) != 0) {
            D.add_row(t, i, 1);
            f.U.add_row(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      f.U.negate_row(t);
    }
  }
  return f;
}

// Invariant factors (nonzero diagonal of the Smith form).
inline std::vector<Int> invariant_factors(IntMatrix const& M) {
  SmithForm f = smith_normal_form(M);
  std::vector<Int> d;
  for (size_t i = 0; i < std::min(M.rows(), M.cols()); ++i)
    if (f.D(i, i) != 0) d.push_back(f.D(i, i));
  return d;
}

struct HermiteForm {
  IntMatrix H, W;                 // M * W == H, H in column echelon form
  std::vector<size_t> pivot_rows;  // pivot_rows[j] = row of the pivot of column j
};

// Column Hermite form: unimodular column operations only.
inline HermiteForm column_hermite(IntMatrix const& M) {
  size_t m = M.rows(), n = M.cols();
  HermiteForm h{M, IntMatrix::identity(n), {}};
  IntMatrix& H = h.H;
  size_t p = 0;
  for (size_t i = 0; i < m && p < n; ++i) {
    while (true) {
      size_t best = n;
      for (size_t j = p; j < n; ++j)
        if (H(i, j) != 0 && (best == n || abs(H(i, j)) < abs(H(i, best)))) best = j;
      if (best == n) break;
      if (best != p) {
        H.swap_cols(p, best);
        h.W.swap_cols(p, best);
      }
      bool done = true;
      for (size_t j = p + 1; j < n; ++j) {
        if (H(i, j) == 0) continue;
        Int q = H(i, j) / H(i, p);
        H.add_col(j, p, -q);
        h.W.add_col(j, p, -q);
        if (H(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (H(i, p) == 0) continue;
    if (H(i, p) < 0) {
      H.negate_col(p);
      h.W.negate_col(p);
    }
    for (size_t j = 0; j < p; ++j) {
      Int q = floor_div(H(i, j), H(i, p));
      if (q != 0) {
        H.add_col(j, p, -q);
        h.W.add_col(j, p, -q);
      }
    }
    h.pivot_rows.push_back(i);
    ++p;
  }
  return h;
}

// Coefficients c with sum c_i * generators[i] == target, or nullopt.
inline std::optional<IntVector> member_with_witness(IntVector const& target,
                                                    std::vector<IntVector> const& generators) {
  size_t dim = target.size();
  IntMatrix G = IntMatrix::from_columns(dim, generators);
  HermiteForm h = column_hermite(G);
  size_t n = generators.size();
  IntVector y(n);
  size_t p = 0;
  for (size_t i = 0; i < dim; ++i) {
    Int r = target[i];
    for (size_t j = 0; j < p; ++j) r -= h.H(i, j) * y[j];
    if (p < h.pivot_rows.size() && h.pivot_rows[p] == i) {
      if (r % h.H(i, p) != 0) return std::nullopt;
      y[p] = r / h.H(i, p);
      ++p;
    } else if (r != 0) {
      return std::nullopt;
    }
  }
  IntVector c = h.W * y;
  if (G * c != target) {
    throw std::logic_error("member_with_witness: witness failed verification");
  }
  return c;
}

struct QuotientModule {
  size_t rank = 0;            // free rank
  std::vector<Int> torsion;   // invariant factors > 1, each dividing the next

  bool operator==(QuotientModule const& o) const {
    return rank == o.rank && torsion == o.torsion;
  }
  bool trivial() const { return rank == 0 && torsion.empty(); }
};

// Structure of Z^dim / <generators>.
inline QuotientModule quotient(std::vector<IntVector> const& generators, size_t dim = 2) {
  QuotientModule q;
  std::vector<Int> d = invariant_factors(IntMatrix::from_columns(dim, generators));
  q.rank = dim - d.size();
  for (Int const& x : d)
    if (x > 1) q.torsion.push_back(x);
  return q;
}

// Unimodular G with v * G == (gcd(v), 0, ..., 0) for a nonzero row vector v.
inline IntMatrix unimodular_reduce(IntVector const& v) {
  bool nonzero = std::any_of(v.begin(), v.end(), [](Int const& x) { return x != 0; });
  if (!nonzero) {
    throw std::invalid_argument("unimodular_reduce: zero vector");
  }
  IntMatrix row(1, v.size(), v);
  return column_hermite(row).W;
}

}  // namespace t2b
