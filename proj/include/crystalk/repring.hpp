#pragma once

// R = R(Z/2) = Z[t]/(t^2 - 1), its prime ideals, and a closed class of
// finitely generated R-modules: sums of R, Z (t = +1), Z_- (t = -1) and
// F2 = R/(t - 1, 2). Modules are carried as multiplicities; tensor, Tor_1,
// localization and (1 - t) behave additively and are read from tables that
// the resolution oracle regenerates and checksums.

#include <openssl/evp.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace crystalk {

enum class ModuleClass : std::size_t { FreeR = 0, TrivZ = 1, SignZ = 2, TorF2 = 3 };
inline constexpr std::array kModuleClasses{ModuleClass::FreeR, ModuleClass::TrivZ, ModuleClass::SignZ,
                                           ModuleClass::TorF2};

inline std::string_view to_string(ModuleClass c) {
  switch (c) {
    case ModuleClass::FreeR: return "FreeR";
    case ModuleClass::TrivZ: return "TrivZ";
    case ModuleClass::SignZ: return "SignZ";
    case ModuleClass::TorF2: return "TorF2";
  }
  return "?";
}

inline ModuleClass module_class_from_string(std::string_view s) {
  for (auto c : kModuleClasses)
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown module class: " + std::string(s));
}

/// Formal direct sum R^f ⊕ Z^t ⊕ Z_-^s ⊕ F2^e. Note Z ≅ J = (t+1) ≅ R/I and
/// Z_- ≅ I = (t-1) ≅ R/J.
class RModuleSum {
 public:
  constexpr RModuleSum() = default;
  constexpr RModuleSum(std::uint64_t free_r, std::uint64_t triv, std::uint64_t sign, std::uint64_t tor_f2)
      : mult_{free_r, triv, sign, tor_f2} {}

  static constexpr RModuleSum of(ModuleClass c, std::uint64_t k = 1) {
    RModuleSum m;
    m.mult_[static_cast<std::size_t>(c)] = k;
    return m;
  }

  constexpr std::uint64_t operator[](ModuleClass c) const { return mult_[static_cast<std::size_t>(c)]; }
  constexpr std::uint64_t& operator[](ModuleClass c) { return mult_[static_cast<std::size_t>(c)]; }

  /// Rank as an abelian group.
  constexpr std::uint64_t rank() const {
    return 2 * (*this)[ModuleClass::FreeR] + (*this)[ModuleClass::TrivZ] + (*this)[ModuleClass::SignZ];
  }
  constexpr bool is_zero() const { return mult_ == std::array<std::uint64_t, 4>{}; }
  constexpr bool is_torsion_free() const { return (*this)[ModuleClass::TorF2] == 0; }

  constexpr RModuleSum& operator+=(const RModuleSum& o) {
    for (std::size_t i = 0; i < 4; ++i) mult_[i] += o.mult_[i];
    return *this;
  }
  friend constexpr RModuleSum operator+(RModuleSum a, const RModuleSum& b) { return a += b; }
  friend constexpr RModuleSum operator*(std::uint64_t k, RModuleSum a) {
    for (auto& m : a.mult_) m *= k;
    return a;
  }
  friend constexpr bool operator==(const RModuleSum&, const RModuleSum&) = default;

 private:
  std::array<std::uint64_t, 4> mult_{};
};

inline std::string to_string(const RModuleSum& m) {
  std::string s;
  for (auto c : kModuleClasses) {
    if (m[c] == 0) continue;
    if (!s.empty()) s += " + ";
    s += std::string(to_string(c));
    if (m[c] != 1) s += "^" + std::to_string(m[c]);
  }
  return s.empty() ? "0" : s;
}

enum class SiteKind : std::size_t { MinPlus = 0, MinMinus = 1, Dyadic = 2, OddPlus = 3, OddMinus = 4 };
inline constexpr std::array kSiteKinds{SiteKind::MinPlus, SiteKind::MinMinus, SiteKind::Dyadic, SiteKind::OddPlus,
                                       SiteKind::OddMinus};

inline std::string_view to_string(SiteKind k) {
  switch (k) {
    case SiteKind::MinPlus: return "MinPlus";
    case SiteKind::MinMinus: return "MinMinus";
    case SiteKind::Dyadic: return "Dyadic";
    case SiteKind::OddPlus: return "OddPlus";
    case SiteKind::OddMinus: return "OddMinus";
  }
  return "?";
}

/// A prime ideal of R. MinPlus = I = (t-1), MinMinus = J = (t+1),
/// Dyadic = (t-1, 2) = (t+1, 2), OddPlus(p) = (t-1, p), OddMinus(p) = (t+1, p).
class PrimeSite {
 public:
  static PrimeSite min_plus() { return PrimeSite(SiteKind::MinPlus, 0); }
  static PrimeSite min_minus() { return PrimeSite(SiteKind::MinMinus, 0); }
  static PrimeSite dyadic() { return PrimeSite(SiteKind::Dyadic, 2); }
  static PrimeSite odd_plus(std::uint64_t p) { return PrimeSite(SiteKind::OddPlus, check_odd_prime(p)); }
  static PrimeSite odd_minus(std::uint64_t p) { return PrimeSite(SiteKind::OddMinus, check_odd_prime(p)); }

  SiteKind kind() const noexcept { return kind_; }
  std::uint64_t prime() const noexcept { return p_; }

  bool contains_I() const noexcept {
    return kind_ == SiteKind::MinPlus || kind_ == SiteKind::OddPlus || kind_ == SiteKind::Dyadic;
  }
  bool contains_J() const noexcept {
    return kind_ == SiteKind::MinMinus || kind_ == SiteKind::OddMinus || kind_ == SiteKind::Dyadic;
  }
  bool is_minimal() const noexcept { return kind_ == SiteKind::MinPlus || kind_ == SiteKind::MinMinus; }

  std::string name() const {
    std::string s(to_string(kind_));
    if (kind_ == SiteKind::OddPlus || kind_ == SiteKind::OddMinus) s += "(" + std::to_string(p_) + ")";
    return s;
  }
  friend bool operator==(const PrimeSite&, const PrimeSite&) = default;

 private:
  PrimeSite(SiteKind k, std::uint64_t p) : kind_(k), p_(p) {}
  static std::uint64_t check_odd_prime(std::uint64_t p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("odd prime site needs an odd prime, got " + std::to_string(p));
    for (std::uint64_t d = 3; d * d <= p; d += 2)
      if (p % d == 0) throw std::invalid_argument(std::to_string(p) + " is not prime");
    return p;
  }
  SiteKind kind_;
  std::uint64_t p_;
};

/// Shape of M_p over the local ring R_p. `free_rank` is the minimal number of
/// generators of M_p modulo torsion; `non_regular` marks a free summand at the
/// dyadic point, where R_p = Z_(2)[Z/2] is local but not regular.
struct LocalizedShape {
  std::uint64_t free_rank = 0;
  bool torsion_flag = false;
  std::vector<std::uint64_t> torsion_factors;
  bool non_regular = false;

  LocalizedShape& operator+=(const LocalizedShape& o) {
    free_rank += o.free_rank;
    torsion_flag = torsion_flag || o.torsion_flag;
    torsion_factors.insert(torsion_factors.end(), o.torsion_factors.begin(), o.torsion_factors.end());
    non_regular = non_regular || o.non_regular;
    return *this;
  }
  friend bool operator==(const LocalizedShape&, const LocalizedShape&) = default;
};

/// Kernel and image of multiplication by (1 - t). `image_index` is the index
/// of the image in its saturation (2 on Z_-, where 1 - t acts as 2).
struct OneMinusT {
  RModuleSum kernel;
  RModuleSum image;
  std::uint64_t image_index = 1;
  friend bool operator==(const OneMinusT&, const OneMinusT&) = default;
};

struct ModuleTables {
  std::array<std::array<RModuleSum, 4>, 4> tensor{};
  std::array<std::array<RModuleSum, 4>, 4> tor1{};
  std::array<std::array<LocalizedShape, 5>, 4> localize{};
  std::array<OneMinusT, 4> one_minus_t{};
  std::vector<std::uint64_t> odd_primes_checked;
  friend bool operator==(const ModuleTables&, const ModuleTables&) = default;
};

inline constexpr int kTableFormatVersion = 1;

/// Tables shipped with the library (frozen from the resolution oracle).
inline const ModuleTables& builtin_tables() {
  static const ModuleTables tables = [] {
    using C = ModuleClass;
    const auto R = RModuleSum::of(C::FreeR), Z = RModuleSum::of(C::TrivZ), Zm = RModuleSum::of(C::SignZ),
               F = RModuleSum::of(C::TorF2), O = RModuleSum{};
    ModuleTables t;
    t.tensor = {{{R, Z, Zm, F}, {Z, Z, F, F}, {Zm, F, Zm, F}, {F, F, F, F}}};
    t.tor1 = {{{O, O, O, O}, {O, F, O, F}, {O, O, F, F}, {O, F, F, 2 * F}}};
    auto shape = [](std::uint64_t rank, bool torsion = false, bool non_regular = false) {
      LocalizedShape s;
      s.free_rank = rank;
      s.torsion_flag = torsion;
      if (torsion) s.torsion_factors = {2};
      s.non_regular = non_regular;
      return s;
    };
    // columns: MinPlus, MinMinus, Dyadic, OddPlus, OddMinus
    t.localize = {{{shape(1), shape(1), shape(1, false, true), shape(1), shape(1)},
                   {shape(1), shape(0), shape(1), shape(1), shape(0)},
                   {shape(0), shape(1), shape(1), shape(0), shape(1)},
                   {shape(0), shape(0), shape(0, true), shape(0), shape(0)}}};
    t.one_minus_t = {{{Z, Zm, 1}, {Z, O, 1}, {O, Zm, 2}, {F, O, 1}}};
    t.odd_primes_checked = {3, 5, 7};
    return t;
  }();
  return tables;
}

inline RModuleSum tensor(const RModuleSum& M, const RModuleSum& N, const ModuleTables& t = builtin_tables()) {
  RModuleSum out;
  for (auto x : kModuleClasses)
    for (auto y : kModuleClasses)
      if (M[x] && N[y])
        out += (M[x] * N[y]) * t.tensor[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  return out;
}

inline RModuleSum tor1(const RModuleSum& M, const RModuleSum& N, const ModuleTables& t = builtin_tables()) {
  RModuleSum out;
  for (auto x : kModuleClasses)
    for (auto y : kModuleClasses)
      if (M[x] && N[y]) out += (M[x] * N[y]) * t.tor1[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  return out;
}

inline LocalizedShape localize(const RModuleSum& M, const PrimeSite& site, const ModuleTables& t = builtin_tables()) {
  LocalizedShape out;
  for (auto c : kModuleClasses) {
    const auto& entry = t.localize[static_cast<std::size_t>(c)][static_cast<std::size_t>(site.kind())];
    for (std::uint64_t i = 0; i < M[c]; ++i) out += entry;
  }
  return out;
}

inline OneMinusT mult_one_minus_t(const RModuleSum& M, const ModuleTables& t = builtin_tables()) {
  OneMinusT out;
  for (auto c : kModuleClasses) {
    const auto& e = t.one_minus_t[static_cast<std::size_t>(c)];
    out.kernel += M[c] * e.kernel;
    out.image += M[c] * e.image;
    for (std::uint64_t i = 0; i < M[c]; ++i) out.image_index *= e.image_index;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table file: canonical JSON with a SHA-256 checksum over the "tables" value.

inline nlohmann::json to_json(const RModuleSum& m) {
  nlohmann::json j = nlohmann::json::object();
  for (auto c : kModuleClasses) j[std::string(to_string(c))] = m[c];
  return j;
}

inline RModuleSum module_sum_from_json(const nlohmann::json& j) {
  RModuleSum m;
  for (auto c : kModuleClasses) m[c] = j.at(std::string(to_string(c))).get<std::uint64_t>();
  return m;
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

inline nlohmann::json tables_body_json(const ModuleTables& t) {
  nlohmann::json tensor_j, tor_j, loc_j, omt_j;
  for (auto x : kModuleClasses) {
    const auto xs = std::string(to_string(x));
    const auto xi = static_cast<std::size_t>(x);
    for (auto y : kModuleClasses) {
      const auto ys = std::string(to_string(y));
      tensor_j[xs][ys] = to_json(t.tensor[xi][static_cast<std::size_t>(y)]);
      tor_j[xs][ys] = to_json(t.tor1[xi][static_cast<std::size_t>(y)]);
    }
    for (auto k : kSiteKinds) {
      const auto& s = t.localize[xi][static_cast<std::size_t>(k)];
      loc_j[xs][std::string(to_string(k))] = {{"free_rank", s.free_rank},
                                             {"torsion_flag", s.torsion_flag},
                                             {"torsion_factors", s.torsion_factors},
                                             {"non_regular", s.non_regular}};
    }
    const auto& o = t.one_minus_t[xi];
    omt_j[xs] = {{"kernel", to_json(o.kernel)}, {"image", to_json(o.image)}, {"image_index", o.image_index}};
  }
  return {{"tensor", tensor_j}, {"tor1", tor_j}, {"localize", loc_j}, {"one_minus_t", omt_j},
          {"odd_primes_checked", t.odd_primes_checked}};
}

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
inline std::string render_tables(const ModuleTables& t) {
  const nlohmann::json body = tables_body_json(t);
  const nlohmann::json file = {{"format_version", kTableFormatVersion},
                               {"tables", body},
                               {"checksum", "sha256:" + sha256_hex(body.dump())}};
  return file.dump(2) + "\n";
}

inline ModuleTables parse_tables(std::string_view text) {
  const auto file = nlohmann::json::parse(text);
  if (file.at("format_version").get<int>() != kTableFormatVersion)
    throw std::runtime_error("module table: unsupported format_version");
  const auto& body = file.at("tables");
  const std::string expected = "sha256:" + sha256_hex(body.dump());
  if (file.at("checksum").get<std::string>() != expected)
    throw std::runtime_error("module table: checksum mismatch");

  ModuleTables t;
  for (auto x : kModuleClasses) {
    const auto xs = std::string(to_string(x));
    const auto xi = static_cast<std::size_t>(x);
    for (auto y : kModuleClasses) {
      const auto ys = std::string(to_string(y));
      t.tensor[xi][static_cast<std::size_t>(y)] = module_sum_from_json(body.at("tensor").at(xs).at(ys));
      t.tor1[xi][static_cast<std::size_t>(y)] = module_sum_from_json(body.at("tor1").at(xs).at(ys));
    }
    for (auto k : kSiteKinds) {
      const auto& j = body.at("localize").at(xs).at(std::string(to_string(k)));
      auto& s = t.localize[xi][static_cast<std::size_t>(k)];
      s.free_rank = j.at("free_rank").get<std::uint64_t>();
      s.torsion_flag = j.at("torsion_flag").get<bool>();
      s.torsion_factors = j.at("torsion_factors").get<std::vector<std::uint64_t>>();
      s.non_regular = j.at("non_regular").get<bool>();
    }
    const auto& o = body.at("one_minus_t").at(xs);
    t.one_minus_t[xi] = {module_sum_from_json(o.at("kernel")), module_sum_from_json(o.at("image")),
                         o.at("image_index").get<std::uint64_t>()};
  }
  t.odd_primes_checked = body.at("odd_primes_checked").get<std::vector<std::uint64_t>>();
  return t;
}

inline ModuleTables load_tables(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open module table file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tables(ss.str());
}

}  // namespace crystalk
