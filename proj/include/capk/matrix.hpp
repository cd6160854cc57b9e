#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "capk/integer.hpp"

namespace capk {

// Dense row-major integer matrix with arbitrary precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(const Vec& d);
  static IntMatrix from_columns(std::size_t rows, const std::vector<Vec>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  Vec column(std::size_t j) const;
  Vec row(std::size_t i) const;
  void set_column(std::size_t j, const Vec& v);
  IntMatrix transpose() const;
  IntMatrix hconcat(const IntMatrix& rhs) const;
  IntMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const;
  bool is_zero() const;

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix operator+(const IntMatrix& rhs) const;
  IntMatrix operator-(const IntMatrix& rhs) const;
  Vec operator*(const Vec& v) const;
  bool operator==(const IntMatrix& rhs) const = default;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  // row_i += k * row_j
  void add_row(std::size_t i, std::size_t j, const Int& k);
  // col_i += k * col_j
  void add_col(std::size_t i, std::size_t j, const Int& k);
  void negate_row(std::size_t i);
  void negate_col(std::size_t i);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

// U * m * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... and
// zeros last.  Inverses of U and V are tracked alongside.
struct SmithForm {
  IntMatrix U, Uinv, D, V, Vinv;
  Vec diag;  // min(rows, cols) entries
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& m);

// Generators (columns) of the integer kernel {x : m x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

// Some integer x with m x = b, if one exists.
std::optional<Vec> solve_integer(const IntMatrix& m, const Vec& b);

// Row Hermite normal form of the lattice spanned by the rows of m:
// upper triangular, positive pivots, entries above a pivot reduced into
// [0, pivot).  Zero rows are dropped.
IntMatrix hermite_rows(const IntMatrix& m);

// Exact determinant (Bareiss).
Int determinant(const IntMatrix& m);

// Rank over Q.
std::size_t rank(const IntMatrix& m);

}  // namespace capk
