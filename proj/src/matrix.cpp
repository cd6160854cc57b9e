#include "capk/matrix.hpp"

#include <sstream>
#include <utility>

namespace capk {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : init) {
    if (r.size() != cols_) throw ShapeError("ragged matrix literal");
    for (long v : r) a_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(const Vec& d) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows,
                                  const std::vector<Vec>& cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

Vec IntMatrix::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec IntMatrix::row(std::size_t i) const {
  return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

void IntMatrix::set_column(std::size_t j, const Vec& v) {
  if (v.size() != rows_) throw ShapeError("column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_) throw ShapeError("hconcat row mismatch");
  IntMatrix m(rows_, cols_ + rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < rhs.cols_; ++j) m(i, cols_ + j) = rhs(i, j);
  }
  return m;
}

IntMatrix IntMatrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  IntMatrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

bool IntMatrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw ShapeError("matrix product shape mismatch");
  IntMatrix m(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) m(i, j) += a * rhs(k, j);
    }
  return m;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("sum shape");
  IntMatrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += rhs.a_[i];
  return m;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("diff shape");
  IntMatrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= rhs.a_[i];
  return m;
}

Vec IntMatrix::operator*(const Vec& v) const {
  if (v.size() != cols_) throw ShapeError("matrix-vector shape mismatch");
  Vec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

void IntMatrix::add_row(std::size_t i, std::size_t j, const Int& k) {
  if (k == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += k * (*this)(j, c);
}

void IntMatrix::add_col(std::size_t i, std::size_t j, const Int& k) {
  if (k == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) += k * (*this)(r, j);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
}

void IntMatrix::negate_col(std::size_t i) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) = -(*this)(r, i);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

namespace {

// Nearest-integer quotient keeps remainders at most half the pivot.
Int round_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int twice_r = 2 * r;
  if (abs(twice_r) > abs(b)) ++q;
  return q;
}

struct SmithWorker {
  SmithForm& s;

  void row_add(std::size_t i, std::size_t j, const Int& k) {
    s.D.add_row(i, j, k);
    s.U.add_row(i, j, k);
    s.Uinv.add_col(j, i, -k);
  }
  void row_swap(std::size_t i, std::size_t j) {
    s.D.swap_rows(i, j);
    s.U.swap_rows(i, j);
    s.Uinv.swap_cols(i, j);
  }
  void row_negate(std::size_t i) {
    s.D.negate_row(i);
    s.U.negate_row(i);
    s.Uinv.negate_col(i);
  }
  void col_add(std::size_t i, std::size_t j, const Int& k) {
    s.D.add_col(i, j, k);
    s.V.add_col(i, j, k);
    s.Vinv.add_row(j, i, -k);
  }
  void col_swap(std::size_t i, std::size_t j) {
    s.D.swap_cols(i, j);
    s.V.swap_cols(i, j);
    s.Vinv.swap_rows(i, j);
  }

  bool place_min_pivot(std::size_t t) {
    const IntMatrix& D = s.D;
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = t; i < D.rows(); ++i)
      for (std::size_t j = t; j < D.cols(); ++j)
        if (D(i, j) != 0 && (!found || abs(D(i, j)) < abs(D(bi, bj)))) {
          bi = i;
          bj = j;
          found = true;
        }
    if (!found) return false;
    row_swap(t, bi);
    col_swap(t, bj);
    return true;
  }

  void run() {
    const std::size_t n = std::min(s.D.rows(), s.D.cols());
    for (std::size_t t = 0; t < n; ++t) {
      if (!place_min_pivot(t)) break;
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < s.D.rows(); ++i) {
          if (s.D(i, t) == 0) continue;
          row_add(i, t, -round_div(s.D(i, t), s.D(t, t)));
          if (s.D(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < s.D.cols(); ++j) {
          if (s.D(t, j) == 0) continue;
          col_add(j, t, -round_div(s.D(t, j), s.D(t, t)));
          if (s.D(t, j) != 0) clean = false;
        }
        if (!clean) {
          place_min_pivot(t);
          continue;
        }
        bool divisible = true;
        for (std::size_t i = t + 1; i < s.D.rows() && divisible; ++i)
          for (std::size_t j = t + 1; j < s.D.cols(); ++j)
            if (!mpz_divisible_p(s.D(i, j).get_mpz_t(), s.D(t, t).get_mpz_t())) {
              row_add(t, i, 1);
              divisible = false;
              break;
            }
        if (divisible) break;
      }
      if (s.D(t, t) < 0) row_negate(t);
    }
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm s;
  s.D = m;
  s.U = s.Uinv = IntMatrix::identity(m.rows());
  s.V = s.Vinv = IntMatrix::identity(m.cols());
  SmithWorker{s}.run();
  const std::size_t n = std::min(m.rows(), m.cols());
  s.diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.diag[i] = s.D(i, i);
    if (s.diag[i] != 0) ++s.rank;
  }
  return s;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  std::size_t k = m.cols() - s.rank;
  return s.V.submatrix(0, s.rank, m.cols(), k);
}

std::optional<Vec> solve_integer(const IntMatrix& m, const Vec& b) {
  if (b.size() != m.rows()) throw ShapeError("solve: rhs length mismatch");
  SmithForm s = smith_normal_form(m);
  Vec ub = s.U * b;
  Vec y(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i < s.rank) {
      if (!mpz_divisible_p(ub[i].get_mpz_t(), s.diag[i].get_mpz_t()))
        return std::nullopt;
      y[i] = ub[i] / s.diag[i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

IntMatrix hermite_rows(const IntMatrix& m) {
  IntMatrix a = m;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    for (std::size_t i = row + 1; i < a.rows(); ++i) {
      while (a(i, col) != 0) {
        Int q = a(row, col) / a(i, col);
        a.add_row(row, i, -q);
        a.swap_rows(row, i);
      }
    }
    if (a(row, col) == 0) continue;
    if (a(row, col) < 0) a.negate_row(row);
    for (std::size_t i = 0; i < row; ++i)
      a.add_row(i, row, -floor_div(a(i, col), a(row, col)));
    ++row;
  }
  return a.submatrix(0, 0, row, a.cols());
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

}  // namespace capk
