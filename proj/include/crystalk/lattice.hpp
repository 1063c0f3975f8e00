#pragma once

// Z/2-lattices: Z^n with an integral involution A. Every such lattice is a
// direct sum of trivial (Z), sign (Z_-) and regular (Z[Z/2]) summands; the
// multiplicities (a, b, c) are complete invariants.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crystalk/intlin.hpp"

namespace crystalk {

enum class InvolutionErrorKind { NotSquare, NotInvolution };

class InvolutionError : public std::invalid_argument {
 public:
  InvolutionError(InvolutionErrorKind kind, std::string what, std::size_t row = 0, std::size_t col = 0)
      : std::invalid_argument(std::move(what)), kind_(kind), row_(row), col_(col) {}
  InvolutionErrorKind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  InvolutionErrorKind kind_;
  std::size_t row_, col_;
};

class InvolutiveLattice {
 public:
  std::size_t n() const noexcept { return matrix_.rows(); }
  const IntMatrix& matrix() const noexcept { return matrix_; }

 private:
  explicit InvolutiveLattice(IntMatrix A) : matrix_(std::move(A)) {}
  friend InvolutiveLattice validate_involution(IntMatrix A);
  IntMatrix matrix_;
};

inline InvolutiveLattice validate_involution(IntMatrix A) {
  if (A.rows() == 0 || !A.is_square())
    throw InvolutionError(InvolutionErrorKind::NotSquare,
                          "matrix is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                              ", expected a nonempty square matrix");
  const IntMatrix sq = A * A;
  for (std::size_t i = 0; i < sq.rows(); ++i)
    for (std::size_t j = 0; j < sq.cols(); ++j) {
      const Integer expected = (i == j) ? 1 : 0;
      if (sq(i, j) != expected)
        throw InvolutionError(InvolutionErrorKind::NotInvolution,
                              "A*A differs from the identity at entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + "): got " + sq(i, j).get_str() + ", expected " +
                                  expected.get_str(),
                              i, j);
    }
  return InvolutiveLattice(std::move(A));
}

struct StructureInvariants {
  std::size_t a = 0;  // trivial summands
  std::size_t b = 0;  // sign summands
  std::size_t c = 0;  // regular summands

  std::size_t n() const noexcept { return a + b + 2 * c; }
  /// Rank of the fixed sublattice ker(A - I).
  std::size_t fixed_rank() const noexcept { return a + c; }
  friend auto operator<=>(const StructureInvariants&, const StructureInvariants&) = default;
};

enum class ActionClass { Trivial, FreeOutsideOrigin, MixedSplit, MixedNonSplit };

inline std::string_view to_string(ActionClass c) {
  switch (c) {
    case ActionClass::Trivial: return "Trivial";
    case ActionClass::FreeOutsideOrigin: return "FreeOutsideOrigin";
    case ActionClass::MixedSplit: return "MixedSplit";
    case ActionClass::MixedNonSplit: return "MixedNonSplit";
  }
  return "?";
}

inline ActionClass action_class_from_string(std::string_view s) {
  for (auto c : {ActionClass::Trivial, ActionClass::FreeOutsideOrigin, ActionClass::MixedSplit,
                 ActionClass::MixedNonSplit})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown action class: " + std::string(s));
}

enum class Block { Triv, Sign, Reg };

inline std::string_view to_string(Block b) {
  switch (b) {
    case Block::Triv: return "Triv";
    case Block::Sign: return "Sign";
    case Block::Reg: return "Reg";
  }
  return "?";
}

/// diag(I_a, -I_b, swap, ..., swap).
inline IntMatrix canonical_matrix(const StructureInvariants& inv) {
  const std::size_t n = inv.n();
  IntMatrix m(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < inv.a; ++i, ++k) m(k, k) = 1;
  for (std::size_t i = 0; i < inv.b; ++i, ++k) m(k, k) = -1;
  for (std::size_t i = 0; i < inv.c; ++i, k += 2) {
    m(k, k + 1) = 1;
    m(k + 1, k) = 1;
  }
  return m;
}

namespace detail {

// Number of invariant factors equal to 2 in the cokernel of the inclusion
// image(norm) -> ker; this is the F2-dimension of a Tate cohomology group.
// Factors other than 1 and 2 cannot occur for an involution.
inline std::size_t tate_dimension(const IntMatrix& kernel, const IntMatrix& norm_image) {
  if (kernel.cols() == 0) return 0;
  const IntMatrix coords = solve_integer(kernel, norm_image);
  const auto s = smith_normal_form(coords);
  std::size_t twos = 0;
  for (const auto& d : s.divisors) {
    if (d == 2)
      ++twos;
    else if (d != 1)
      throw std::logic_error("Tate cohomology of an involution has an invariant factor " + d.get_str());
  }
  return twos;
}

using F2Vector = std::vector<std::uint8_t>;

inline F2Vector mod2_column(const IntMatrix& m, std::size_t col) {
  F2Vector v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = mpz_odd_p(m(i, col).get_mpz_t()) ? 1 : 0;
  return v;
}

// Incremental F2 echelon basis; `insert` reports whether v was independent.
class F2Span {
 public:
  explicit F2Span(std::size_t dim) : dim_(dim) {}
  bool insert(F2Vector v) {
    for (const auto& [pivot, row] : rows_)
      if (v[pivot]) xor_into(v, row);
    for (std::size_t i = 0; i < dim_; ++i)
      if (v[i]) {
        rows_.emplace_back(i, std::move(v));
        return true;
      }
    return false;
  }
  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  static void xor_into(F2Vector& v, const F2Vector& w) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] ^= w[i];
  }
  std::size_t dim_;
  std::vector<std::pair<std::size_t, F2Vector>> rows_;
};

// Extends independent vectors to a basis of F2^dim, returned as matrix columns.
inline std::vector<F2Vector> extend_to_basis(const std::vector<F2Vector>& vs, std::size_t dim) {
  F2Span span(dim);
  std::vector<F2Vector> basis;
  for (const auto& v : vs) {
    if (!span.insert(v)) throw std::logic_error("extend_to_basis: dependent input");
    basis.push_back(v);
  }
  for (std::size_t i = 0; i < dim && basis.size() < dim; ++i) {
    F2Vector e(dim, 0);
    e[i] = 1;
    if (span.insert(e)) basis.push_back(std::move(e));
  }
  return basis;
}

// Lifts an invertible F2 matrix (given by columns) to an integer unimodular
// matrix congruent to it mod 2. Gauss–Jordan over F2 writes the matrix as a
// product of swaps and transvections, each of which lifts to GL_n(Z).
inline IntMatrix lift_f2_invertible(const std::vector<F2Vector>& columns) {
  const std::size_t n = columns.size();
  std::vector<F2Vector> m(n, F2Vector(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m[i][j] = columns[j][i];

  struct RowOp {
    bool swap;
    std::size_t dst, src;
  };
  std::vector<RowOp> ops;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && !m[p][col]) ++p;
    if (p == n) throw std::logic_error("lift_f2_invertible: singular matrix");
    if (p != col) {
      std::swap(m[p], m[col]);
      ops.push_back({true, col, p});
    }
    for (std::size_t i = 0; i < n; ++i)
      if (i != col && m[i][col]) {
        for (std::size_t k = 0; k < n; ++k) m[i][k] ^= m[col][k];
        ops.push_back({false, i, col});
      }
  }
  // E_m ... E_1 M = I, so M = E_1 ... E_m since every E_i is an involution mod 2.
  IntMatrix L = IntMatrix::identity(n);
  for (const auto& op : ops) {
    if (op.swap)
      L.swap_cols(op.dst, op.src);
    else
      L.add_col_multiple(op.src, op.dst, 1);  // right-multiply by I + e_dst e_src^T
  }
  return L;
}

}  // namespace detail

/// Tate-cohomology invariants: a = dim ker(A-I)/(A+I)Z^n,
/// b = dim ker(A+I)/(A-I)Z^n, c = (n - a - b)/2.
inline StructureInvariants invariants(const InvolutiveLattice& L) {
  const IntMatrix& A = L.matrix();
  const std::size_t n = L.n();
  const IntMatrix I = IntMatrix::identity(n);
  const IntMatrix plus = A + I, minus = A - I;
  StructureInvariants inv;
  inv.a = detail::tate_dimension(kernel_basis(minus), plus);
  inv.b = detail::tate_dimension(kernel_basis(plus), -minus);
  if (inv.a + inv.b > n || (n - inv.a - inv.b) % 2 != 0)
    throw std::logic_error("inconsistent Tate dimensions for an involution");
  inv.c = (n - inv.a - inv.b) / 2;
  return inv;
}

inline ActionClass classify(const StructureInvariants& inv) {
  const std::size_t n = inv.n();
  if (inv.a == n) return ActionClass::Trivial;
  if (inv.b == n) return ActionClass::FreeOutsideOrigin;
  if (inv.c == 0) return ActionClass::MixedSplit;
  return ActionClass::MixedNonSplit;
}

inline ActionClass classify(const InvolutiveLattice& L) {
  const ActionClass c = classify(invariants(L));
  if (c == ActionClass::FreeOutsideOrigin && L.matrix() != -IntMatrix::identity(L.n()))
    throw std::logic_error("pure sign invariants but A != -I");
  return c;
}

struct LatticeDecomposition {
  IntMatrix basis;  // U: columns are the new basis; U^-1 A U is canonical
  std::vector<Block> blocks;
  StructureInvariants invariants;
};

/// Explicit basis realizing diag(I_a, -I_b, swap^c).
///
/// With L+ = ker(A-I) and L- = ker(A+I), the quotient L/(L+ ⊕ L-) embeds in
/// L+/2L+ ⊕ L-/2L- as the graph of an isomorphism between subspaces of
/// dimension c. Adapting bases of L+ and L- to that graph and taking
/// w_i = (u_i + v_i)/2 gives regular pairs (w_i, A w_i); the leftover basis
/// vectors of L+ and L- are the trivial and sign summands.
inline LatticeDecomposition decompose(const InvolutiveLattice& L) {
  const IntMatrix& A = L.matrix();
  const std::size_t n = L.n();
  const IntMatrix I = IntMatrix::identity(n);
  const IntMatrix Kp = kernel_basis(A - I);
  const IntMatrix Km = kernel_basis(A + I);
  const std::size_t p = Kp.cols(), q = Km.cols();

  // x -> (x + Ax, x - Ax) in L+ and L- coordinates.
  const IntMatrix Cp = p ? solve_integer(Kp, A + I) : IntMatrix(0, n);
  const IntMatrix Cm = q ? solve_integer(Km, I - A) : IntMatrix(0, n);
  const IntMatrix G = Cp.vconcat(Cm);

  std::vector<detail::F2Vector> us, vs;
  detail::F2Span graph(p + q);
  for (std::size_t j = 0; j < n; ++j) {
    auto g = detail::mod2_column(G, j);
    if (!graph.insert(g)) continue;
    us.emplace_back(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(p));
    vs.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(p), g.end());
  }
  const std::size_t k = us.size();

  const IntMatrix Pp = p ? detail::lift_f2_invertible(detail::extend_to_basis(us, p)) : IntMatrix(0, 0);
  const IntMatrix Pm = q ? detail::lift_f2_invertible(detail::extend_to_basis(vs, q)) : IntMatrix(0, 0);
  const IntMatrix U_plus = p ? Kp * Pp : IntMatrix(n, 0);
  const IntMatrix U_minus = q ? Km * Pm : IntMatrix(n, 0);

  LatticeDecomposition out;
  out.invariants = {p - k, q - k, k};
  out.basis = IntMatrix(n, n);
  std::size_t col = 0;
  auto put = [&](const IntMatrix& v) {
    for (std::size_t i = 0; i < n; ++i) out.basis(i, col) = v(i, 0);
    ++col;
  };
  for (std::size_t i = k; i < p; ++i, out.blocks.push_back(Block::Triv)) put(U_plus.column(i));
  for (std::size_t i = k; i < q; ++i, out.blocks.push_back(Block::Sign)) put(U_minus.column(i));
  for (std::size_t i = 0; i < k; ++i) {
    IntMatrix w = U_plus.column(i) + U_minus.column(i);
    for (std::size_t r = 0; r < n; ++r) {
      if (!mpz_even_p(w(r, 0).get_mpz_t())) throw std::logic_error("decompose: regular pair not divisible by 2");
      mpz_divexact_ui(w(r, 0).get_mpz_t(), w(r, 0).get_mpz_t(), 2);
    }
    put(w);
    put(A * w);
    out.blocks.push_back(Block::Reg);
  }

  if (A * out.basis != out.basis * canonical_matrix(out.invariants) || !is_unimodular(out.basis))
    throw std::logic_error("decompose: basis does not realize the canonical form");
  return out;
}

}  // namespace crystalk
