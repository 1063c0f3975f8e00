#pragma once

// Z/2-equivariant K-theory of the torus T^n = R^n/Z^n under an integral
// involution, two ways: the delocalized fixed-point rank formula, and the
// Künneth/localization assembly for split mixed actions T^r x T^(n-r).
// The group C*-algebra answer is read off by dualizing.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crystalk/intlin.hpp"
#include "crystalk/lattice.hpp"
#include "crystalk/repring.hpp"
#include "json.hpp"

namespace crystalk {

class ScopeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two routes that must agree did not. Never expected to fire.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline std::uint64_t pow2(std::size_t k) {
  if (k >= 64) throw std::overflow_error("2^" + std::to_string(k) + " does not fit in 64 bits");
  return std::uint64_t{1} << k;
}

inline std::uint64_t to_u64(const Integer& x) {
  if (sgn(x) < 0 || !x.fits_ulong_p()) throw std::overflow_error("value out of range: " + x.get_str());
  return x.get_ui();
}

/// Fixed set of A on T^n: `components` disjoint copies of a torus of dimension `dim`.
struct FixedSetDescription {
  std::size_t dim = 0;
  std::uint64_t components = 0;

  /// Ranks of K^0 and K^1 of the fixed set.
  std::uint64_t k_even() const { return dim == 0 ? components : components * pow2(dim - 1); }
  std::uint64_t k_odd() const { return dim == 0 ? 0 : components * pow2(dim - 1); }
  friend bool operator==(const FixedSetDescription&, const FixedSetDescription&) = default;
};

/// Dimensions of the +1/-1 eigenspaces of the induced action on even/odd
/// rational cohomology of T^n.
struct CohomologyAction {
  std::uint64_t even_inv = 0, odd_inv = 0, even_anti = 0, odd_anti = 0;
  friend bool operator==(const CohomologyAction&, const CohomologyAction&) = default;
};

inline FixedSetDescription fixed_set(const InvolutiveLattice& L) {
  const IntMatrix minus = L.matrix() - IntMatrix::identity(L.n());
  const auto coker = cokernel(minus);
  FixedSetDescription f;
  f.dim = coker.free_rank;  // rank ker(A - I) = rank coker(A - I) for square A
  f.components = to_u64(coker.torsion_order());
  const auto inv = invariants(L);
  if (f.components != pow2(inv.b) || f.dim != inv.fixed_rank())
    throw InvariantViolation("fixed set: SNF component count disagrees with lattice invariants");
  return f;
}

inline CohomologyAction cohomology_invariants(const InvolutiveLattice& L) {
  const std::size_t n = L.n();
  const auto traces = exterior_trace_poly(L.matrix());
  Integer even_tr = 0, odd_tr = 0;
  for (std::size_t k = 0; k <= n; ++k) (k % 2 == 0 ? even_tr : odd_tr) += traces[k];
  const Integer half_dim = Integer(1) << static_cast<mp_bitcnt_t>(n - 1);  // 2^(n-1), per parity
  CohomologyAction c;
  // An involution on a space of dimension d with trace tr has (d + tr)/2 invariants.
  c.even_inv = to_u64((half_dim + even_tr) / 2);
  c.even_anti = to_u64((half_dim - even_tr) / 2);
  c.odd_inv = to_u64((half_dim + odd_tr) / 2);
  c.odd_anti = to_u64((half_dim - odd_tr) / 2);
  return c;
}

struct TwistedRanks {
  std::uint64_t k0_minus = 0, k1_minus = 0;
  friend bool operator==(const TwistedRanks&, const TwistedRanks&) = default;
};

/// Ranks of K^*_{Z/2}(T^n x R_-). The invariant-cohomology term shifts
/// parity and swaps to anti-invariants; the fixed-set term keeps its parity.
inline TwistedRanks twisted_ranks(const CohomologyAction& coh, const FixedSetDescription& fix) {
  return {coh.odd_anti + fix.k_even(), coh.even_anti + fix.k_odd()};
}

inline TwistedRanks twisted_ranks(const InvolutiveLattice& L) {
  return twisted_ranks(cohomology_invariants(L), fixed_set(L));
}

enum class ScopeFlag { ClosedForm, RationalOnly };

/// Wire names used in reports.
inline std::string_view to_string(ScopeFlag s) {
  return s == ScopeFlag::ClosedForm ? "PaperValidated" : "RationalOnly";
}

inline ScopeFlag scope_flag_from_string(std::string_view s) {
  if (s == to_string(ScopeFlag::ClosedForm)) return ScopeFlag::ClosedForm;
  if (s == to_string(ScopeFlag::RationalOnly)) return ScopeFlag::RationalOnly;
  throw std::invalid_argument("unknown scope flag: " + std::string(s));
}

struct ModuleStructure {
  RModuleSum k0, k1;
  friend bool operator==(const ModuleStructure&, const ModuleStructure&) = default;
};

struct CertificateStep {
  std::string step;
  nlohmann::json input;
  nlohmann::json output;
  std::string anchor;
  friend bool operator==(const CertificateStep&, const CertificateStep&) = default;
};

using CertificateTrace = std::vector<CertificateStep>;

struct KRankReport {
  std::uint64_t k0 = 0, k1 = 0;
  ScopeFlag scope = ScopeFlag::ClosedForm;
  std::optional<ModuleStructure> module_structure;
  std::optional<CertificateTrace> certificate;
  std::optional<std::string> caveat;
  friend bool operator==(const KRankReport&, const KRankReport&) = default;
};

inline nlohmann::json to_json(const LocalizedShape& s) {
  return {{"free_rank", s.free_rank},
          {"torsion_flag", s.torsion_flag},
          {"torsion_factors", s.torsion_factors},
          {"non_regular", s.non_regular}};
}

inline nlohmann::json to_json(const StructureInvariants& inv) {
  return {{"a", inv.a}, {"b", inv.b}, {"c", inv.c}};
}

/// Alternating rank sum around the 6-term sequence
/// K^1 -> K^0_- -> K^0_G -> K^0 -> K^1_- -> K^1_G -> K^1; zero when the
/// ranks are compatible with exactness.
inline std::int64_t hexagon_alternating_sum(std::size_t n, const TwistedRanks& tw, std::uint64_t k0,
                                            std::uint64_t k1) {
  const auto plain = static_cast<std::int64_t>(pow2(n - 1));
  return plain - static_cast<std::int64_t>(tw.k0_minus) + static_cast<std::int64_t>(k0) - plain +
         static_cast<std::int64_t>(tw.k1_minus) - static_cast<std::int64_t>(k1);
}

inline std::string regular_summand_caveat(const StructureInvariants& inv) {
  return "lattice has " + std::to_string(inv.c) +
         " regular Z[Z/2] summand(s): it does not split as trivial x fixed-point-free, so the closed form "
         "3*2^(n-2) does not apply; ranks are rational ranks from the delocalized fixed-point formula and "
         "integral torsion is not determined";
}

/// sum over g in Z/2 of rk K^*(fixed set of g)^{centralizer}.
inline KRankReport k_ranks_delocalized(const InvolutiveLattice& L) {
  const auto coh = cohomology_invariants(L);
  const auto fix = fixed_set(L);
  KRankReport r;
  r.k0 = coh.even_inv + fix.k_even();
  r.k1 = coh.odd_inv + fix.k_odd();
  r.scope = invariants(L).c == 0 ? ScopeFlag::ClosedForm : ScopeFlag::RationalOnly;
  return r;
}

namespace detail {

inline std::vector<PrimeSite> sites_containing_J(const ModuleTables& t) {
  std::vector<PrimeSite> s{PrimeSite::min_minus()};
  for (auto p : t.odd_primes_checked) s.push_back(PrimeSite::odd_minus(p));
  return s;
}

inline std::vector<PrimeSite> sites_containing_I(const ModuleTables& t) {
  std::vector<PrimeSite> s{PrimeSite::min_plus()};
  for (auto p : t.odd_primes_checked) s.push_back(PrimeSite::odd_plus(p));
  s.push_back(PrimeSite::dyadic());
  return s;
}

struct GradedModule {
  RModuleSum even, odd;
};

// Z/2-graded tensor product and the degree-shifted Tor_1 term.
inline GradedModule graded_tensor(const GradedModule& x, const GradedModule& y, const ModuleTables& t) {
  return {tensor(x.even, y.even, t) + tensor(x.odd, y.odd, t), tensor(x.odd, y.even, t) + tensor(x.even, y.odd, t)};
}

inline GradedModule graded_tor(const GradedModule& x, const GradedModule& y, const ModuleTables& t) {
  return {tor1(x.even, y.odd, t) + tor1(x.odd, y.even, t), tor1(x.even, y.even, t) + tor1(x.odd, y.odd, t)};
}

inline nlohmann::json to_json(const GradedModule& g) {
  return {{"k0", crystalk::to_json(g.even)}, {"k1", crystalk::to_json(g.odd)}};
}

}  // namespace detail

/// Split mixed actions only: T^n = X x Y with X = T^r trivial and Y = T^(n-r)
/// carrying -I. The factors are K_G(X) = R^(2^(r-1)) in both degrees and
/// K_G(Y) = J^(2^(n-r-1)) ⊕ I^(2^(n-r)) in degree 0, zero in degree 1.
inline KRankReport kunneth_assembly(const InvolutiveLattice& L, const ModuleTables& t = builtin_tables()) {
  const auto inv = invariants(L);
  const auto cls = classify(inv);
  if (cls != ActionClass::MixedSplit)
    throw ScopeError("Kunneth assembly needs a split mixed action (class MixedSplit), got " +
                     std::string(to_string(cls)) + " with (a,b,c)=(" + std::to_string(inv.a) + "," +
                     std::to_string(inv.b) + "," + std::to_string(inv.c) + ")");
  const std::size_t n = L.n(), r = inv.a, s = inv.b;
  CertificateTrace cert;

  // 1. Product decomposition and factor modules.
  const auto dec = decompose(L);
  const detail::GradedModule X{RModuleSum::of(ModuleClass::FreeR, pow2(r - 1)),
                               RModuleSum::of(ModuleClass::FreeR, pow2(r - 1))};
  const detail::GradedModule Y{RModuleSum::of(ModuleClass::TrivZ, pow2(s - 1)) +
                                   RModuleSum::of(ModuleClass::SignZ, pow2(s)),
                               RModuleSum{}};
  {
    nlohmann::json blocks = nlohmann::json::array();
    for (auto b : dec.blocks) blocks.push_back(std::string(to_string(b)));
    cert.push_back({"decomposition",
                    {{"invariants", to_json(inv)}, {"class", std::string(to_string(cls))}},
                    {{"r", r},
                     {"n_minus_r", s},
                     {"blocks", blocks},
                     {"basis_unimodular", true},
                     {"X_trivial_torus", detail::to_json(X)},
                     {"Y_sign_torus", detail::to_json(Y)}},
                    "torus splits as trivial T^r x sign T^(n-r)"});
  }

  // 2. Kunneth at primes containing J, away from the dyadic point.
  const auto T = detail::graded_tensor(X, Y, t);
  bool all_torsion_free = true;
  nlohmann::json j_sites = nlohmann::json::array();
  for (const auto& p : detail::sites_containing_J(t)) {
    const auto l0 = localize(T.even, p, t), l1 = localize(T.odd, p, t);
    all_torsion_free = all_torsion_free && !l0.torsion_flag && !l1.torsion_flag;
    j_sites.push_back({{"site", p.name()}, {"k0", to_json(l0)}, {"k1", to_json(l1)}});
  }
  cert.push_back({"localized_kunneth",
                  {{"X", detail::to_json(X)}, {"Y", detail::to_json(Y)}},
                  {{"tensor", detail::to_json(T)}, {"sites", j_sites}},
                  "Kunneth short exact sequence at primes containing J, p != (J,2)"});

  // 3. Tor_1 vanishes because K_G(X) is free.
  const auto Tor = detail::graded_tor(X, Y, t);
  nlohmann::json tor_sites = nlohmann::json::array();
  for (const auto& p : detail::sites_containing_J(t)) {
    const auto l0 = localize(Tor.even, p, t), l1 = localize(Tor.odd, p, t);
    if (l0.free_rank || l1.free_rank || l0.torsion_flag || l1.torsion_flag)
      throw InvariantViolation("Tor_1 term does not vanish at " + p.name());
    tor_sites.push_back(p.name());
  }
  if (!Tor.even.is_zero() || !Tor.odd.is_zero()) throw InvariantViolation("Tor_1 term does not vanish");
  cert.push_back({"tor_vanishing",
                  {{"X_free", X.even[ModuleClass::FreeR] == X.even.rank() / 2 && X.even.is_torsion_free()}},
                  {{"tor1", detail::to_json(Tor)}, {"vanishes_at", tor_sites}},
                  "Tor_1 over R_p with a free factor is zero"});

  // 4. Z-torsion: at primes containing I, K_G(T^n)_p sits inside
  //    K(T^n)_p = J_p^(2^(n-1)); at primes containing J it is the tensor above.
  const auto ambient = RModuleSum::of(ModuleClass::TrivZ, pow2(n - 1));
  nlohmann::json i_sites = nlohmann::json::array();
  for (const auto& p : detail::sites_containing_I(t)) {
    const auto amb = localize(ambient, p, t);
    const auto l0 = localize(T.even, p, t), l1 = localize(T.odd, p, t);
    all_torsion_free = all_torsion_free && !amb.torsion_flag;
    // At the dyadic point free_rank counts generators, so no rank bound.
    if (p.kind() == SiteKind::Dyadic) {
      i_sites.push_back({{"site", p.name()}, {"ambient", to_json(amb)}, {"rank_bound_holds", nullptr}});
      continue;
    }
    const bool bound_ok = l0.free_rank <= amb.free_rank && l1.free_rank <= amb.free_rank;
    if (!bound_ok) throw InvariantViolation("submodule rank bound fails at " + p.name());
    i_sites.push_back({{"site", p.name()}, {"ambient", to_json(amb)}, {"rank_bound_holds", bound_ok}});
  }
  if (!all_torsion_free) throw InvariantViolation("a localized module carries torsion");
  cert.push_back({"zt_argument",
                  {{"ambient_plain_k_theory", crystalk::to_json(ambient)}, {"J_sites", j_sites}},
                  {{"I_sites", i_sites}, {"all_torsion_flags_false", true}, {"z_torsion_zero", true}},
                  "Z-torsion vanishes locally at every prime, hence globally"});

  // 5. Ranks: R ⊗ Q = Q x Q, so rank = rank at (I) + rank at (J).
  KRankReport rep;
  rep.k0 = localize(T.even, PrimeSite::min_plus(), t).free_rank +
           localize(T.even, PrimeSite::min_minus(), t).free_rank;
  rep.k1 = localize(T.odd, PrimeSite::min_plus(), t).free_rank +
           localize(T.odd, PrimeSite::min_minus(), t).free_rank;
  const std::uint64_t product = (X.even.rank() / 2) * Y.even.rank();  // rk K^*(X) * rk K^0_G(Y)
  if (rep.k0 != T.even.rank() || rep.k1 != T.odd.rank() || rep.k0 != product || rep.k1 != product)
    throw InvariantViolation("assembled ranks disagree with the product rank formula");
  cert.push_back({"rank_formula",
                  {{"tensor", detail::to_json(T)}},
                  {{"k0", rep.k0}, {"k1", rep.k1}, {"product_rk_KX_times_rk_KGY", product}},
                  "rank = rk K^*(X) * rk K^*_G(Y) = 3*2^(n-2)"});

  rep.scope = ScopeFlag::ClosedForm;
  rep.certificate = std::move(cert);
  return rep;
}

/// Dispatch by action class. Trivial and free actions carry R-module
/// structure; split mixed actions use the Kunneth assembly; lattices with
/// regular summands get rational ranks only.
inline KRankReport integral_k_theory(const InvolutiveLattice& L, const ModuleTables& t = builtin_tables()) {
  const auto inv = invariants(L);
  const auto cls = classify(L);
  const std::size_t n = L.n();
  const auto deloc = k_ranks_delocalized(L);
  KRankReport rep;

  auto module_certificate = [&](const ModuleStructure& m, std::string_view anchor) {
    CertificateTrace cert;
    cert.push_back({"factor_structure",
                    {{"invariants", to_json(inv)}, {"class", std::string(to_string(cls))}},
                    {{"k0", to_json(m.k0)}, {"k1", to_json(m.k1)}},
                    std::string(anchor)});
    nlohmann::json sites = nlohmann::json::array();
    bool torsion_free = true;
    for (const auto& p : detail::sites_containing_J(t)) {
      const auto l0 = localize(m.k0, p, t), l1 = localize(m.k1, p, t);
      torsion_free = torsion_free && !l0.torsion_flag && !l1.torsion_flag;
      sites.push_back({{"site", p.name()}, {"k0", to_json(l0)}, {"k1", to_json(l1)}});
    }
    for (const auto& p : detail::sites_containing_I(t)) {
      const auto l0 = localize(m.k0, p, t), l1 = localize(m.k1, p, t);
      torsion_free = torsion_free && !l0.torsion_flag && !l1.torsion_flag;
      sites.push_back({{"site", p.name()}, {"k0", to_json(l0)}, {"k1", to_json(l1)}});
    }
    if (!torsion_free || !m.k0.is_torsion_free() || !m.k1.is_torsion_free())
      throw InvariantViolation("module structure carries torsion");
    cert.push_back({"zt_argument", {{"sites", sites}}, {{"all_torsion_flags_false", true}, {"z_torsion_zero", true}},
                    "Z-torsion vanishes locally at every prime, hence globally"});
    return cert;
  };

  switch (cls) {
    case ActionClass::Trivial: {
      const ModuleStructure m{RModuleSum::of(ModuleClass::FreeR, pow2(n - 1)),
                              RModuleSum::of(ModuleClass::FreeR, pow2(n - 1))};
      rep.k0 = m.k0.rank();
      rep.k1 = m.k1.rank();
      rep.certificate = module_certificate(m, "trivial action: K_G(T^n) = R (x) K(T^n)");
      rep.module_structure = m;
      break;
    }
    case ActionClass::FreeOutsideOrigin: {
      const ModuleStructure m{RModuleSum::of(ModuleClass::TrivZ, pow2(n - 1)) +
                                  RModuleSum::of(ModuleClass::SignZ, pow2(n)),
                              RModuleSum{}};
      rep.k0 = m.k0.rank();
      rep.k1 = m.k1.rank();
      rep.certificate = module_certificate(m, "A = -I: K^0_G = J^(2^(n-1)) + I^(2^n), K^1_G = 0");
      rep.module_structure = m;
      break;
    }
    case ActionClass::MixedSplit:
      rep = kunneth_assembly(L, t);
      break;
    case ActionClass::MixedNonSplit:
      rep = deloc;
      rep.scope = ScopeFlag::RationalOnly;
      rep.caveat = regular_summand_caveat(inv);
      return rep;
  }
  if (rep.k0 != deloc.k0 || rep.k1 != deloc.k1)
    throw InvariantViolation("integral ranks disagree with the delocalized formula");
  rep.scope = ScopeFlag::ClosedForm;
  return rep;
}

/// K_*(C*_r(Z^n x| Z/2)) via K_*^Gamma(R^n). With a torsion-freeness
/// certificate the universal coefficient theorem collapses to Hom(-, Z)
/// degreewise; otherwise only rational ranks are available.
struct CStarReport {
  KRankReport cohomology;
  std::uint64_t k_homology0 = 0, k_homology1 = 0;
  bool integral = false;
  ScopeFlag scope = ScopeFlag::ClosedForm;
  std::optional<std::string> caveat;
  friend bool operator==(const CStarReport&, const CStarReport&) = default;
};

inline CStarReport group_cstar_k(const InvolutiveLattice& L, const ModuleTables& t = builtin_tables()) {
  CStarReport out;
  out.cohomology = integral_k_theory(L, t);
  out.k_homology0 = out.cohomology.k0;
  out.k_homology1 = out.cohomology.k1;
  out.integral = out.cohomology.certificate.has_value() && out.cohomology.scope == ScopeFlag::ClosedForm;
  out.scope = out.cohomology.scope;
  if (!out.integral)
    out.caveat = (out.cohomology.caveat ? *out.cohomology.caveat + "; " : std::string()) +
                 "K-homology ranks are rational ranks (dualization over Q)";
  return out;
}

}  // namespace crystalk
