#pragma once

// Brute-force verifiers. Each recomputes a quantity of lattice / repring /
// toruskt by a different method: explicit exterior-algebra actions solved
// over Q, enumeration of torsion points on the torus, and Tor computed from
// explicit periodic free resolutions realized as integer matrices.

#include <gmpxx.h>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "crystalk/intlin.hpp"
#include "crystalk/lattice.hpp"
#include "crystalk/repring.hpp"
#include "crystalk/toruskt.hpp"
#include "json.hpp"

namespace crystalk::oracle {

class DimensionTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxExteriorDim = 8;
inline constexpr std::uint64_t kMaxGridPoints = 1'000'000;

/// Rank over Q by Gaussian elimination in exact fractions.
inline std::size_t rational_rank(const IntMatrix& M) {
  const std::size_t rows = M.rows(), cols = M.cols();
  std::vector<mpq_class> a(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] = M(i, j);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t p = rank;
    while (p < rows && sgn(a[p * cols + col]) == 0) ++p;
    if (p == rows) continue;
    if (p != rank)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[p * cols + j], a[rank * cols + j]);
    const mpq_class pivot = a[rank * cols + col];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (sgn(a[i * cols + col]) == 0) continue;
      const mpq_class f = a[i * cols + col] / pivot;
      for (std::size_t j = col; j < cols; ++j) a[i * cols + j] -= f * a[rank * cols + j];
    }
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Exterior algebra action

/// Matrix of Λ^*(A) on the basis e_S (S a subset of {0..n-1}, as bitmask);
/// column S holds the coordinates of the wedge of the columns A e_i, i in S.
inline IntMatrix exterior_action(const IntMatrix& A) {
  const std::size_t n = A.rows();
  if (!A.is_square()) throw std::invalid_argument("exterior_action: matrix not square");
  if (n > kMaxExteriorDim)
    throw DimensionTooLarge("exterior algebra oracle supports n <= " + std::to_string(kMaxExteriorDim) +
                            ", got " + std::to_string(n));
  const std::size_t N = std::size_t{1} << n;
  IntMatrix M(N, N);
  M(0, 0) = 1;
  for (std::size_t S = 1; S < N; ++S) {
    const auto h = static_cast<std::size_t>(std::bit_width(S) - 1);  // highest element of S
    const std::size_t rest = S & ~(std::size_t{1} << h);
    // e_rest-image ∧ (A e_h)
    for (std::size_t T = 0; T < N; ++T) {
      const Integer& coef = M(T, rest);
      if (sgn(coef) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if ((T >> j) & 1u) continue;
        const Integer& ajh = A(j, h);
        if (sgn(ajh) == 0) continue;
        const int above = std::popcount(T >> (j + 1));
        const std::size_t U = T | (std::size_t{1} << j);
        if (above % 2 == 0)
          M(U, S) += coef * ajh;
        else
          M(U, S) -= coef * ajh;
      }
    }
  }
  return M;
}

/// Invariant / anti-invariant dimensions of Λ^even and Λ^odd, by solving
/// (Λ^k A ∓ I) x = 0 over Q degree by degree.
inline CohomologyAction exterior_action_invariants(const IntMatrix& A) {
  const IntMatrix M = exterior_action(A);
  const std::size_t n = A.rows(), N = M.rows();
  CohomologyAction out;
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t S = 0; S < N; ++S)
      if (static_cast<std::size_t>(std::popcount(S)) == k) idx.push_back(S);
    const std::size_t m = idx.size();
    IntMatrix minus(m, m), plus(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const Integer& x = M(idx[i], idx[j]);
        minus(i, j) = x - (i == j ? 1 : 0);
        plus(i, j) = x + (i == j ? 1 : 0);
      }
    const std::size_t inv = m - rational_rank(minus);
    const std::size_t anti = m - rational_rank(plus);
    if (inv + anti != m) throw std::logic_error("exterior action is not a diagonalizable involution");
    if (k % 2 == 0) {
      out.even_inv += inv;
      out.even_anti += anti;
    } else {
      out.odd_inv += inv;
      out.odd_anti += anti;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed points on a grid of torsion points

struct GridFixedSet {
  std::uint64_t components = 0;  // |F[d]| / d^dim
  std::size_t dim = 0;           // log2(|F[2d]| / |F[d]|)
  std::uint64_t clusters = 0;    // union-find clusters of F[d] under in-fixed-set unit steps
  std::uint64_t points_d = 0, points_2d = 0;
};

namespace detail {

inline std::vector<std::uint64_t> fixed_grid_points(const std::vector<std::int64_t>& a, std::size_t n,
                                                    std::uint64_t d) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= d;
  std::vector<std::uint64_t> out;
  std::vector<std::int64_t> y(n, 0);
  const auto di = static_cast<std::int64_t>(d);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (std::size_t i = 0; i < n; ++i, r /= d) y[i] = static_cast<std::int64_t>(r % d);
    bool fixed = true;
    for (std::size_t i = 0; i < n && fixed; ++i) {
      std::int64_t s = -y[i];
      for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * y[j];
      if (((s % di) + di) % di != 0) fixed = false;
    }
    if (fixed) out.push_back(idx);
  }
  return out;
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t x, std::size_t y) {
    x = find(x), y = find(y);
    if (x == y) return false;
    parent[std::max(x, y)] = std::min(x, y);
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace detail

/// Enumerates x in (1/d)Z^n / Z^n with A x = x. The fixed set is T^f x
/// (finite group), so it has d^f * (#components) points of order dividing d
/// when d is even; comparing d and 2d yields f. Clusters link grid points by
/// unit steps δ in {-1,0,1}^n whose segment stays in the fixed set, i.e.
/// (A - I)δ = 0; in adapted coordinates these match the components.
inline GridFixedSet fixed_grid_components(const IntMatrix& A, std::uint64_t d = 4) {
  if (!A.is_square() || A.rows() == 0) throw std::invalid_argument("fixed_grid_components: need a square matrix");
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("fixed_grid_components: denominator must be even");
  const std::size_t n = A.rows();
  std::uint64_t grid = 1;
  for (std::size_t i = 0; i < n; ++i) {
    grid *= 2 * d;
    if (grid > kMaxGridPoints)
      throw GridTooLarge("grid oracle needs (2d)^n <= " + std::to_string(kMaxGridPoints) + " (n=" +
                         std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
  auto reduced = [&](std::uint64_t m) {
    std::vector<std::int64_t> a(n * n);
    const Integer mm = static_cast<unsigned long>(m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), A(i, j).get_mpz_t(), mm.get_mpz_t());
        a[i * n + j] = static_cast<std::int64_t>(r.get_si());
      }
    return a;
  };
  const auto pts = detail::fixed_grid_points(reduced(d), n, d);
  const auto pts2 = detail::fixed_grid_points(reduced(2 * d), n, 2 * d);

  GridFixedSet g;
  g.points_d = pts.size();
  g.points_2d = pts2.size();
  if (g.points_d == 0 || g.points_2d % g.points_d != 0) throw std::logic_error("grid oracle: inconsistent counts");
  std::uint64_t ratio = g.points_2d / g.points_d;
  while (ratio > 1) {
    if (ratio % 2 != 0) throw std::logic_error("grid oracle: growth ratio is not a power of 2");
    ratio /= 2;
    ++g.dim;
  }
  std::uint64_t torus_pts = 1;
  for (std::size_t i = 0; i < g.dim; ++i) torus_pts *= d;
  if (g.points_d % torus_pts != 0) throw std::logic_error("grid oracle: point count not divisible by d^dim");
  g.components = g.points_d / torus_pts;

  // unit steps tangent to the fixed set
  std::vector<std::vector<std::int64_t>> steps;
  std::vector<std::int64_t> delta(n);
  std::uint64_t cube = 1;
  for (std::size_t i = 0; i < n; ++i) cube *= 3;
  for (std::uint64_t c = 1; c < cube; ++c) {
    std::uint64_t r = c;
    for (std::size_t i = 0; i < n; ++i, r /= 3) delta[i] = static_cast<std::int64_t>(r % 3) - 1;
    bool tangent = true;
    for (std::size_t i = 0; i < n && tangent; ++i) {
      Integer s = -delta[i];
      for (std::size_t j = 0; j < n; ++j) s += A(i, j) * static_cast<long>(delta[j]);
      tangent = sgn(s) == 0;
    }
    if (tangent) steps.push_back(delta);
  }
  std::uint64_t grid_d = 1;
  for (std::size_t i = 0; i < n; ++i) grid_d *= d;
  std::vector<std::int64_t> slot(grid_d, -1);
  for (std::size_t i = 0; i < pts.size(); ++i) slot[pts[i]] = static_cast<std::int64_t>(i);
  detail::UnionFind uf(pts.size());
  g.clusters = pts.size();
  const auto di = static_cast<std::int64_t>(d);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::uint64_t r = pts[i];
    std::vector<std::int64_t> y(n);
    for (std::size_t k = 0; k < n; ++k, r /= d) y[k] = static_cast<std::int64_t>(r % d);
    for (const auto& s : steps) {
      std::uint64_t idx = 0, mul = 1;
      for (std::size_t k = 0; k < n; ++k, mul *= d)
        idx += static_cast<std::uint64_t>(((y[k] + s[k]) % di + di) % di) * mul;
      const auto j = slot[idx];
      if (j < 0) throw std::logic_error("grid oracle: tangent step left the fixed set");
      if (uf.unite(i, static_cast<std::size_t>(j))) --g.clusters;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Resolutions over R = Z[t]/(t^2 - 1)

/// x + y t
struct RElement {
  long x = 0, y = 0;
};

struct RMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<RElement> entries;
  RElement operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

/// Finitely presented Z-module Z^m / relations with t acting by `t`.
struct ModulePresentation {
  IntMatrix t;
  IntMatrix relations;  // m x q, columns are relations
};

inline ModulePresentation presentation(ModuleClass c) {
  switch (c) {
    case ModuleClass::FreeR: return {IntMatrix{{0, 1}, {1, 0}}, IntMatrix(2, 0)};
    case ModuleClass::TrivZ: return {IntMatrix{{1}}, IntMatrix(1, 0)};
    case ModuleClass::SignZ: return {IntMatrix{{-1}}, IntMatrix(1, 0)};
    case ModuleClass::TorF2: return {IntMatrix{{1}}, IntMatrix{{2}}};
  }
  throw std::invalid_argument("presentation: unknown class");
}

/// Free resolution P_length -> ... -> P_0 -> M; d[k] maps P_k to P_(k-1)
/// (d[0] unused). Trivial and sign modules resolve 2-periodically by t -/+ 1;
/// F2 = R/(t-1, 2) has kernel Z ⊕ Z_- after one step and is then periodic.
struct Resolution {
  std::vector<std::size_t> ranks;
  std::vector<RMatrix> d;
};

inline Resolution resolution(ModuleClass c, std::size_t length) {
  Resolution r;
  r.ranks.resize(length + 1);
  r.d.resize(length + 1);
  const RElement tm1{-1, 1}, tp1{1, 1}, two{2, 0}, zero{0, 0};
  for (std::size_t k = 0; k <= length; ++k) {
    switch (c) {
      case ModuleClass::FreeR: r.ranks[k] = k == 0 ? 1 : 0; break;
      case ModuleClass::TrivZ:
      case ModuleClass::SignZ: r.ranks[k] = 1; break;
      case ModuleClass::TorF2: r.ranks[k] = k == 0 ? 1 : 2; break;
    }
  }
  for (std::size_t k = 1; k <= length; ++k) {
    RMatrix m{r.ranks[k - 1], r.ranks[k], {}};
    switch (c) {
      case ModuleClass::FreeR: break;
      case ModuleClass::TrivZ: m.entries = {k % 2 == 1 ? tm1 : tp1}; break;
      case ModuleClass::SignZ: m.entries = {k % 2 == 1 ? tp1 : tm1}; break;
      case ModuleClass::TorF2:
        if (k == 1)
          m.entries = {tm1, two};
        else if (k == 2)
          m.entries = {tp1, tm1, zero, tm1};
        else if (k % 2 == 1)
          m.entries = {tm1, zero, zero, tp1};
        else
          m.entries = {tp1, zero, zero, tm1};
        break;
    }
    r.d[k] = std::move(m);
  }
  return r;
}

/// The Z-matrix of d ⊗_R N: block (i, j) is x I + y T for d(i, j) = x + y t.
inline IntMatrix realize(const RMatrix& d, const IntMatrix& T) {
  const std::size_t m = T.rows();
  IntMatrix out(d.rows * m, d.cols * m);
  for (std::size_t i = 0; i < d.rows; ++i)
    for (std::size_t j = 0; j < d.cols; ++j) {
      const auto e = d(i, j);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          out(i * m + a, j * m + b) = Integer(e.y) * T(a, b) + (a == b ? Integer(e.x) : Integer(0));
    }
  return out;
}

inline IntMatrix repeat_diagonal(const IntMatrix& block, std::size_t copies) {
  std::vector<IntMatrix> blocks(copies, block);
  return IntMatrix::block_diagonal(blocks);
}

/// A subquotient cycles/boundaries of Z^N with t acting by T, identified as
/// an abelian group and as a member of the repring module class.
struct ModuleShape {
  CokernelShape abelian;
  RModuleSum module;
  IntMatrix free_action;  // t on the torsion-free quotient
};

inline ModuleShape subquotient(const IntMatrix& cycles, const IntMatrix& boundaries, const IntMatrix& T) {
  ModuleShape out;
  const std::size_t z = cycles.cols();
  if (z == 0) return out;
  const IntMatrix X = boundaries.cols() ? solve_integer(cycles, boundaries) : IntMatrix(z, 0);
  const IntMatrix S = solve_integer(cycles, T * cycles);
  const auto snf = smith_normal_form(X);
  const std::size_t r = snf.rank();
  const IntMatrix Sp = snf.U * S * unimodular_inverse(snf.U);

  std::vector<Integer> order(z, 0);  // 0 = free generator
  for (std::size_t i = 0; i < r; ++i) order[i] = snf.divisors[i];
  std::uint64_t torsion_gens = 0;
  for (std::size_t i = 0; i < z; ++i) {
    if (order[i] == 1) continue;
    if (order[i] == 0) break;
    out.abelian.torsion.push_back(order[i]);
    if (order[i] != 2) throw std::domain_error("subquotient: torsion Z/" + order[i].get_str() + " outside the class");
    ++torsion_gens;
    for (std::size_t j = 0; j < z; ++j) {
      const Integer expect = (i == j) ? 1 : 0;
      if (sgn(order[j]) == 0 && sgn(Sp(j, i)) != 0)
        throw std::domain_error("subquotient: t maps torsion outside torsion");
      if (order[j] > 1 && !mpz_divisible_p(Integer(Sp(j, i) - expect).get_mpz_t(), order[j].get_mpz_t()))
        throw std::domain_error("subquotient: t acts nontrivially on 2-torsion");
    }
  }
  out.abelian.free_rank = z - r;
  out.free_action = IntMatrix(z - r, z - r);
  for (std::size_t i = r; i < z; ++i)
    for (std::size_t j = r; j < z; ++j) out.free_action(i - r, j - r) = Sp(i, j);
  out.module[ModuleClass::TorF2] = torsion_gens;
  if (z > r) {
    const auto inv = invariants(validate_involution(out.free_action));
    out.module[ModuleClass::TrivZ] = inv.a;
    out.module[ModuleClass::SignZ] = inv.b;
    out.module[ModuleClass::FreeR] = inv.c;
  }
  return out;
}

/// {x : D x in span(target_relations)} as a lattice basis.
inline IntMatrix preimage_of_relations(const IntMatrix& D, const IntMatrix& target_relations) {
  const std::size_t cols = D.cols();
  if (cols == 0) return IntMatrix(0, 0);
  const IntMatrix K = kernel_basis(D.hconcat(target_relations));
  if (K.cols() == 0) return IntMatrix(cols, 0);
  return lattice_basis(K.row_block(0, cols));
}

/// H_k(P ⊗_R N) for a resolution P of M; with N = R itself this checks that
/// the resolution is exact.
inline ModuleShape complex_homology(const Resolution& P, const ModulePresentation& N, std::size_t k) {
  if (k + 1 >= P.ranks.size()) throw std::invalid_argument("complex_homology: resolution too short");
  const std::size_t m = N.t.rows();
  const std::size_t dim_k = m * P.ranks[k];
  const IntMatrix T_k = repeat_diagonal(N.t, P.ranks[k]);
  const IntMatrix rel_k = repeat_diagonal(N.relations, P.ranks[k]);
  if (dim_k == 0) return {};

  IntMatrix cycles;
  if (k == 0) {
    cycles = IntMatrix::identity(dim_k);
  } else {
    const IntMatrix D = realize(P.d[k], N.t);
    cycles = preimage_of_relations(D, repeat_diagonal(N.relations, P.ranks[k - 1]));
  }
  IntMatrix bounds = realize(P.d[k + 1], N.t).hconcat(rel_k);
  return subquotient(cycles, bounds, T_k);
}

inline ModuleShape resolution_tor(ModuleClass M, ModuleClass N, std::size_t degree) {
  if (degree > 2) throw std::invalid_argument("resolution_tor: degree must be <= 2");
  return complex_homology(resolution(M, degree + 1), presentation(N), degree);
}

/// Exactness of the resolution of M through degree `length - 1`.
inline bool resolution_is_exact(ModuleClass M, std::size_t length) {
  const auto P = resolution(M, length);
  const auto R = presentation(ModuleClass::FreeR);
  if (complex_homology(P, R, 0).module != RModuleSum::of(M)) return false;
  for (std::size_t k = 1; k < length; ++k) {
    const auto h = complex_homology(P, R, k);
    if (h.abelian.free_rank != 0 || !h.abelian.torsion.empty()) return false;
  }
  return true;
}

inline ModuleShape module_shape(const ModulePresentation& N) {
  return subquotient(IntMatrix::identity(N.t.rows()), N.relations, N.t);
}

namespace detail {

inline std::size_t f2_rank(const IntMatrix& M) {
  crystalk::detail::F2Span span(M.rows());
  for (std::size_t j = 0; j < M.cols(); ++j) span.insert(crystalk::detail::mod2_column(M, j));
  return span.rank();
}

inline std::uint64_t prime_part(Integer x, std::uint64_t p) {
  std::uint64_t part = 1;
  while (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
    mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), p);
    part *= p;
  }
  return part;
}

// ((I ± T) Z^m + relations) / relations
inline ModuleShape image_of(const ModulePresentation& N, const IntMatrix& E) {
  const IntMatrix gens = (E * IntMatrix::identity(N.t.rows())).hconcat(N.relations);
  const IntMatrix span = lattice_basis(gens);
  return subquotient(span, N.relations, N.t);
}

}  // namespace detail

/// M_p computed from the presentation. Minimal sites: eigenspace dimension of
/// t on M ⊗ Q. Odd sites: 2 is a unit, so M_p is ((1 ± t)M)_(p). Dyadic:
/// M ⊗ Z_(2); rank counts generators of the free quotient over F2.
inline LocalizedShape localize_oracle(ModuleClass c, const PrimeSite& site) {
  const auto N = presentation(c);
  const auto shape = module_shape(N);
  const std::size_t f = shape.free_action.rows();
  const IntMatrix If = IntMatrix::identity(f);
  LocalizedShape out;
  switch (site.kind()) {
    case SiteKind::MinPlus: out.free_rank = f - rational_rank(shape.free_action - If); break;
    case SiteKind::MinMinus: out.free_rank = f - rational_rank(shape.free_action + If); break;
    case SiteKind::OddPlus:
    case SiteKind::OddMinus: {
      const IntMatrix Im = IntMatrix::identity(N.t.rows());
      const auto img = detail::image_of(N, site.kind() == SiteKind::OddPlus ? Im + N.t : Im - N.t);
      out.free_rank = img.abelian.free_rank;
      for (const auto& d : img.abelian.torsion)
        if (auto part = detail::prime_part(d, site.prime()); part > 1) out.torsion_factors.push_back(part);
      out.torsion_flag = !out.torsion_factors.empty();
      break;
    }
    case SiteKind::Dyadic: {
      out.free_rank = f - detail::f2_rank(shape.free_action - If);
      for (const auto& d : shape.abelian.torsion)
        if (auto part = detail::prime_part(d, 2); part > 1) out.torsion_factors.push_back(part);
      out.torsion_flag = !out.torsion_factors.empty();
      out.non_regular = shape.module[ModuleClass::FreeR] > 0;
      break;
    }
  }
  return out;
}

inline OneMinusT one_minus_t_oracle(ModuleClass c) {
  const auto N = presentation(c);
  const IntMatrix E = IntMatrix::identity(N.t.rows()) - N.t;
  OneMinusT out;
  out.kernel = subquotient(preimage_of_relations(E, N.relations), N.relations, N.t).module;
  out.image = detail::image_of(N, E).module;
  const auto whole = module_shape(N);
  const auto quotient = subquotient(IntMatrix::identity(N.t.rows()), (E).hconcat(N.relations), N.t);
  out.image_index = to_u64(quotient.abelian.torsion_order() / whole.abelian.torsion_order());
  return out;
}

/// Regenerates the repring tables from resolutions and presentations.
/// Odd-prime localizations are computed for every listed prime and must agree.
inline ModuleTables generate_tables(const std::vector<std::uint64_t>& odd_primes = {3, 5, 7}) {
  ModuleTables t;
  t.odd_primes_checked = odd_primes;
  for (auto x : kModuleClasses) {
    const auto xi = static_cast<std::size_t>(x);
    if (!resolution_is_exact(x, 4)) throw std::logic_error("resolution of " + std::string(to_string(x)) + " not exact");
    for (auto y : kModuleClasses) {
      const auto yi = static_cast<std::size_t>(y);
      t.tensor[xi][yi] = resolution_tor(x, y, 0).module;
      t.tor1[xi][yi] = resolution_tor(x, y, 1).module;
    }
    for (auto k : kSiteKinds) {
      auto& slot = t.localize[xi][static_cast<std::size_t>(k)];
      if (k == SiteKind::OddPlus || k == SiteKind::OddMinus) {
        bool first = true;
        for (auto p : odd_primes) {
          const auto s = localize_oracle(x, k == SiteKind::OddPlus ? PrimeSite::odd_plus(p) : PrimeSite::odd_minus(p));
          if (!first && !(s == slot)) throw std::logic_error("odd-prime localization depends on p");
          slot = s;
          first = false;
        }
      } else {
        slot = localize_oracle(x, k == SiteKind::MinPlus    ? PrimeSite::min_plus()
                                  : k == SiteKind::MinMinus ? PrimeSite::min_minus()
                                                            : PrimeSite::dyadic());
      }
    }
    t.one_minus_t[xi] = one_minus_t_oracle(x);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Corpus

struct CorpusMember {
  StructureInvariants canonical;
  IntMatrix matrix;
};

struct Corpus {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<CorpusMember> members;
};

/// All (a, b, c) with a + b + 2c = n: c ascending, then a descending.
inline std::vector<StructureInvariants> canonical_classes(std::size_t n) {
  std::vector<StructureInvariants> out;
  for (std::size_t c = 0; 2 * c <= n; ++c)
    for (std::size_t a = n - 2 * c + 1; a-- > 0;) out.push_back({a, n - 2 * c - a, c});
  return out;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Corpus involution_corpus(std::size_t n, std::uint64_t seed, std::size_t count) {
  if (n == 0) throw std::invalid_argument("involution_corpus: n must be >= 1");
  Corpus corpus{n, seed, {}};
  const auto classes = canonical_classes(n);
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const IntMatrix C = canonical_matrix(classes[ci]);
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t s = splitmix64(seed ^ splitmix64((ci << 32) | i));
      const IntMatrix P = random_unimodular(n, s, 4 * n);
      IntMatrix A = P * C * unimodular_inverse(P);
      if (A * A != IntMatrix::identity(n)) throw std::logic_error("corpus: generated matrix is not an involution");
      corpus.members.push_back({classes[ci], std::move(A)});
    }
  }
  return corpus;
}

inline nlohmann::json matrix_to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : m.row(i)) {
      if (x.fits_slong_p())
        r.push_back(x.get_si());
      else
        r.push_back(x.get_str());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix must be an array of rows");
  std::vector<std::vector<Integer>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw std::invalid_argument("matrix row must be an array");
    auto& row = rows.emplace_back();
    for (const auto& x : r) {
      if (x.is_number_integer())
        row.emplace_back(x.get<long>());
      else if (x.is_string())
        row.emplace_back(x.get<std::string>());
      else
        throw std::invalid_argument("matrix entries must be integers");
    }
  }
  return IntMatrix::from_rows(rows);
}

inline nlohmann::json to_json(const Corpus& c) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : c.members)
    members.push_back({{"invariants", crystalk::to_json(m.canonical)}, {"matrix", matrix_to_json(m.matrix)}});
  return {{"n", c.n}, {"seed", c.seed}, {"members", members}};
}

inline Corpus corpus_from_json(const nlohmann::json& j) {
  Corpus c{j.at("n").get<std::size_t>(), j.at("seed").get<std::uint64_t>(), {}};
  for (const auto& m : j.at("members")) {
    const auto& inv = m.at("invariants");
    c.members.push_back({{inv.at("a").get<std::size_t>(), inv.at("b").get<std::size_t>(), inv.at("c").get<std::size_t>()},
                         matrix_from_json(m.at("matrix"))});
  }
  return c;
}

}  // namespace crystalk::oracle
