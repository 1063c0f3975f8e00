#pragma once

// Exact integer linear algebra over arbitrary-precision integers: Smith
// normal form, integer kernels and cokernels, exterior-power traces.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crystalk {

using Integer = mpz_class;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
      for (long v : r) entries_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("IntMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Block-diagonal sum of square or rectangular blocks.
  static IntMatrix block_diagonal(std::span<const IntMatrix> blocks) {
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) r += b.rows(), c += b.cols();
    IntMatrix m(r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
      r0 += b.rows();
      c0 += b.cols();
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Integer> entries() const noexcept { return entries_; }
  std::span<const Integer> row(std::size_t r) const {
    return std::span<const Integer>(entries_).subspan(r * cols_, cols_);
  }

  std::vector<std::vector<Integer>> to_rows() const {
    std::vector<std::vector<Integer>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntMatrix columns(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw std::out_of_range("IntMatrix::columns");
    IntMatrix m(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
    return m;
  }
  IntMatrix column(std::size_t c) const { return columns(c, 1); }

  IntMatrix row_block(std::size_t first, std::size_t count) const {
    if (first + count > rows_) throw std::out_of_range("IntMatrix::row_block");
    IntMatrix m(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
    return m;
  }

  IntMatrix hconcat(const IntMatrix& other) const {
    if (other.rows_ != rows_) throw std::invalid_argument("hconcat: row mismatch");
    IntMatrix m(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
    }
    return m;
  }

  IntMatrix vconcat(const IntMatrix& other) const {
    if (other.cols_ != cols_) throw std::invalid_argument("vconcat: column mismatch");
    IntMatrix m(rows_ + other.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < other.rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = other(i, j);
    return m;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Integer& x) { return sgn(x) == 0; });
  }

  Integer max_abs() const {
    Integer best = 0;
    for (const auto& x : entries_)
      if (abs(x) > best) best = abs(x);
    return best;
  }

  // Elementary operations. Row ops act on the left, column ops on the right.
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (sgn(k) == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (sgn(k) == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

  friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.entries_ == y.entries_;
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("IntMatrix product: dimension mismatch");
    IntMatrix p(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const Integer& xik = x(i, k);
        if (sgn(xik) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) p(i, j) += xik * y(k, j);
      }
    return p;
  }

  friend IntMatrix operator+(IntMatrix x, const IntMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("IntMatrix sum: shape mismatch");
    for (std::size_t i = 0; i < x.entries_.size(); ++i) x.entries_[i] += y.entries_[i];
    return x;
  }

  friend IntMatrix operator-(IntMatrix x, const IntMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("IntMatrix difference: shape mismatch");
    for (std::size_t i = 0; i < x.entries_.size(); ++i) x.entries_[i] -= y.entries_[i];
    return x;
  }

  friend IntMatrix operator-(IntMatrix x) {
    for (auto& e : x.entries_) e = -e;
    return x;
  }

  friend IntMatrix operator*(const Integer& k, IntMatrix x) {
    for (auto& e : x.entries_) e *= k;
    return x;
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? "," : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

inline std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

/// U·M·V = D with U, V unimodular and D diagonal with a divisibility chain.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  std::vector<Integer> divisors;  // length min(rows, cols); zeros trail

  std::size_t rank() const {
    return static_cast<std::size_t>(
        std::count_if(divisors.begin(), divisors.end(), [](const Integer& d) { return sgn(d) != 0; }));
  }
};

struct CokernelShape {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors >= 2, divisibility chain

  Integer torsion_order() const {
    Integer o = 1;
    for (const auto& t : torsion) o *= t;
    return o;
  }
  friend bool operator==(const CokernelShape&, const CokernelShape&) = default;
};

/// Pivot on the smallest nonzero |entry| of the trailing block; this keeps
/// remainders small and makes the result a deterministic function of M.
inline SmithDecomposition smith_normal_form(const IntMatrix& M) {
  const std::size_t m = M.rows(), n = M.cols();
  SmithDecomposition s{IntMatrix::identity(m), M, IntMatrix::identity(n), {}};
  IntMatrix& D = s.D;
  const std::size_t k = std::min(m, n);
  Integer q;

  for (std::size_t t = 0; t < k; ++t) {
    bool exhausted = false;
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> pivot;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const Integer& x = D(i, j);
          if (sgn(x) == 0) continue;
          if (!pivot || abs(x) < best) {
            best = abs(x);
            pivot = {i, j};
          }
        }
      if (!pivot) {
        exhausted = true;
        break;
      }
      D.swap_rows(t, pivot->first);
      s.U.swap_rows(t, pivot->first);
      D.swap_cols(t, pivot->second);
      s.V.swap_cols(t, pivot->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(D(i, t)) == 0) continue;
        q = D(i, t) / D(t, t);
        D.add_row_multiple(i, t, -q);
        s.U.add_row_multiple(i, t, -q);
        if (sgn(D(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(D(t, j)) == 0) continue;
        q = D(t, j) / D(t, t);
        D.add_col_multiple(j, t, -q);
        s.V.add_col_multiple(j, t, -q);
        if (sgn(D(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into the pivot row and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            D.add_row_multiple(t, i, 1);
            s.U.add_row_multiple(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (exhausted) break;
  }

  s.divisors.resize(k);
  for (std::size_t t = 0; t < k; ++t) {
    if (sgn(D(t, t)) < 0) {
      D.negate_row(t);
      s.U.negate_row(t);
    }
    s.divisors[t] = D(t, t);
  }
  return s;
}

/// Basis (as columns) of {x : M x = 0}; always saturated.
inline IntMatrix kernel_basis(const IntMatrix& M) {
  const auto s = smith_normal_form(M);
  const std::size_t r = s.rank();
  return s.V.columns(r, M.cols() - r);
}

inline CokernelShape cokernel(const IntMatrix& M) {
  const auto s = smith_normal_form(M);
  CokernelShape c;
  c.free_rank = M.rows() - s.rank();
  for (const auto& d : s.divisors)
    if (d > 1) c.torsion.push_back(d);
  return c;
}

/// Basis (as columns) of the lattice spanned by the columns of G.
inline IntMatrix lattice_basis(const IntMatrix& G) {
  const auto s = smith_normal_form(G);
  return (G * s.V).columns(0, s.rank());
}

/// Solves B·X = Y over Z for B of full column rank. Throws when some column
/// of Y is not in the integer span of B.
inline IntMatrix solve_integer(const IntMatrix& B, const IntMatrix& Y) {
  if (B.rows() != Y.rows()) throw std::invalid_argument("solve_integer: row mismatch");
  const auto s = smith_normal_form(B);
  const std::size_t r = s.rank();
  if (r != B.cols()) throw std::invalid_argument("solve_integer: basis is not of full column rank");
  const IntMatrix UY = s.U * Y;
  IntMatrix Z(B.cols(), Y.cols());
  for (std::size_t j = 0; j < Y.cols(); ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      if (!mpz_divisible_p(UY(i, j).get_mpz_t(), s.divisors[i].get_mpz_t()))
        throw std::domain_error("solve_integer: target not in the integer span");
      Z(i, j) = UY(i, j) / s.divisors[i];
    }
    for (std::size_t i = r; i < B.rows(); ++i)
      if (sgn(UY(i, j)) != 0) throw std::domain_error("solve_integer: target not in the rational span");
  }
  return s.V * Z;
}

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(const IntMatrix& M) {
  if (!M.is_square()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = M.rows();
  if (n == 0) return 1;
  IntMatrix a = M;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix& M) { return M.is_square() && abs(determinant(M)) == 1; }

inline IntMatrix unimodular_inverse(const IntMatrix& M) {
  if (!M.is_square()) throw std::invalid_argument("unimodular_inverse: matrix not square");
  const auto s = smith_normal_form(M);
  for (const auto& d : s.divisors)
    if (d != 1) throw std::domain_error("unimodular_inverse: matrix is not unimodular");
  return s.V * s.U;
}

/// Coefficients of det(I + tA); entry k is tr Λ^k(A). Faddeev–LeVerrier,
/// whose divisions are exact for integer matrices.
inline std::vector<Integer> exterior_trace_poly(const IntMatrix& A) {
  if (!A.is_square()) throw std::invalid_argument("exterior_trace_poly: matrix not square");
  const std::size_t n = A.rows();
  // charpoly det(xI - A) = sum_k c[k] x^(n-k), c[0] = 1
  std::vector<Integer> c(n + 1);
  c[0] = 1;
  IntMatrix Mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Mk = A * Mk;
    for (std::size_t i = 0; i < n; ++i) Mk(i, i) += c[k - 1];
    const IntMatrix AM = A * Mk;
    Integer tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += AM(i, i);
    mpz_divexact_ui(tr.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
    c[k] = -tr;
  }
  // det(I + tA) = sum_k e_k t^k with e_k = (-1)^k c[k]
  std::vector<Integer> e(n + 1);
  for (std::size_t k = 0; k <= n; ++k) e[k] = (k % 2 == 0) ? c[k] : Integer(-c[k]);
  return e;
}

inline constexpr long kDefaultEntryCap = 4;

/// Seeded product of elementary unimodular operations. Operations that would
/// push an entry above `cap` in absolute value are skipped.
inline IntMatrix random_unimodular(std::size_t n, std::uint64_t seed, std::size_t steps,
                                   long cap = kDefaultEntryCap) {
  if (n == 0) throw std::invalid_argument("random_unimodular: n must be >= 1");
  IntMatrix P = IntMatrix::identity(n);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::uint64_t draw = rng();
    if (n == 1) {
      if (draw & 1u) P.negate_row(0);
      continue;
    }
    const auto i = static_cast<std::size_t>(draw % n);
    auto j = static_cast<std::size_t>((draw / n) % (n - 1));
    if (j >= i) ++j;
    const auto op = (draw >> 40) % 8;
    if (op == 0) {
      P.swap_rows(i, j);
      continue;
    }
    const Integer k = (op % 2 == 0) ? 1 : -1;
    bool fits = true;
    for (std::size_t c = 0; c < n && fits; ++c)
      if (abs(P(i, c) + k * P(j, c)) > cap) fits = false;
    if (fits) P.add_row_multiple(i, j, k);
  }
  return P;
}

}  // namespace crystalk
