#pragma once

// Link profiles (Alexander polynomials of all sublinks plus linking numbers),
// the normalized polynomials P^L_{L_S} and the necessary conditions on them.

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lfk/bridge.hpp"
#include "lfk/error.hpp"
#include "lfk/laurent.hpp"

namespace lfk {

using Mask = unsigned;

inline int popcount(Mask m) { return std::popcount(m); }

// Components of a mask in increasing order (0-based).
inline std::vector<int> members(Mask m) {
  std::vector<int> out;
  for (int i = 0; m >> i; ++i)
    if (m >> i & 1) out.push_back(i);
  return out;
}

// "13" for components 1 and 3.
inline std::string mask_key(Mask m) {
  std::string s;
  for (int i : members(m)) s += static_cast<char>('1' + i);
  return s;
}

inline Mask parse_mask_key(const std::string& key, int l) {
  Mask m = 0;
  for (char c : key) {
    int i = c - '1';
    // digits strictly increasing, so each sublink has one spelling
    if (i < 0 || i >= l || (m >> i) != 0) throw error(errc::parse_error, "bad sublink key '" + key + "'");
    m |= 1u << i;
  }
  if (m == 0) throw error(errc::parse_error, "empty sublink key");
  return m;
}

enum class SignFlag { plus, minus, automatic };

inline std::string sign_name(SignFlag s) {
  switch (s) {
    case SignFlag::plus: return "+";
    case SignFlag::minus: return "-";
    case SignFlag::automatic: return "auto";
  }
  return "?";
}

inline SignFlag parse_sign(const std::string& s) {
  if (s == "+") return SignFlag::plus;
  if (s == "-") return SignFlag::minus;
  if (s == "auto") return SignFlag::automatic;
  throw error(errc::parse_error, "sign flag must be +, - or auto, got '" + s + "'");
}

class LinkProfile {
 public:
  LinkProfile() = default;

  LinkProfile(int l, std::vector<std::vector<long>> lk) : l_(l), lk_(std::move(lk)) {
    if (l < 1 || l > kMaxVars) throw error(errc::unsupported_components, "profiles support 1..3 components");
    if (static_cast<int>(lk_.size()) != l) throw error(errc::invalid_link, "linking matrix has the wrong size");
    for (int i = 0; i < l; ++i) {
      if (static_cast<int>(lk_[i].size()) != l) throw error(errc::invalid_link, "linking matrix has the wrong size");
      lk_[i][i] = 0;
    }
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        if (lk_[i][j] != lk_[j][i]) throw error(errc::invalid_link, "linking matrix must be symmetric");
  }

  int l() const { return l_; }
  Mask full() const { return (1u << l_) - 1; }
  long lk(int i, int j) const { return lk_[i][j]; }
  const std::vector<std::vector<long>>& lk_matrix() const { return lk_; }

  // lk(L_i, L_M) for a sublink M (L_i itself excluded).
  long lk_with(int i, Mask m) const {
    long s = 0;
    for (int k : members(m))
      if (k != i) s += lk_[i][k];
    return s;
  }

  void set_delta(Mask m, MultiLaurent d) {
    check_mask(m);
    if (d.nvars() != popcount(m))
      throw error(errc::invalid_link, "Alexander polynomial of sublink " + mask_key(m) + " needs " +
                                          std::to_string(popcount(m)) + " variables");
    if (popcount(m) == 1) {
      Integer at_one = 0;
      for (const auto& [e, c] : d.terms()) at_one += c;
      if (at_one != 1 && at_one != -1)
        throw error(errc::invalid_link, "a knot Alexander polynomial must evaluate to +-1 at 1");
      // knots are normalized by Delta(1) = 1
      if (at_one == -1) d = -d;
    }
    delta_[m] = std::move(d);
  }

  void set_sign(Mask m, SignFlag s) {
    check_mask(m);
    if (popcount(m) < 2) return;
    signs_[m] = s;
  }

  SignFlag sign(Mask m) const {
    auto it = signs_.find(m);
    return it == signs_.end() ? SignFlag::plus : it->second;
  }

  const MultiLaurent& raw_delta(Mask m) const {
    auto it = delta_.find(m);
    if (it == delta_.end()) throw error(errc::invalid_link, "missing Alexander polynomial for sublink " + mask_key(m));
    return it->second;
  }

  // Delta_M with its sign flag applied; automatic counts as +.
  MultiLaurent delta(Mask m) const {
    const MultiLaurent& d = raw_delta(m);
    return sign(m) == SignFlag::minus ? -d : d;
  }

  // Sublinks (two or more components) whose sign is automatic.
  std::vector<Mask> automatic_signs() const {
    std::vector<Mask> out;
    for (Mask m = 1; m <= full(); ++m)
      if (popcount(m) >= 2 && sign(m) == SignFlag::automatic) out.push_back(m);
    return out;
  }

  // Every assignment of +/- to the automatic flags.
  std::vector<LinkProfile> sign_resolutions() const {
    auto autos = automatic_signs();
    std::vector<LinkProfile> out;
    for (unsigned bits = 0; bits < (1u << autos.size()); ++bits) {
      LinkProfile p = *this;
      for (std::size_t k = 0; k < autos.size(); ++k)
        p.signs_[autos[k]] = (bits >> k & 1) ? SignFlag::minus : SignFlag::plus;
      out.push_back(std::move(p));
    }
    return out;
  }

  std::string sign_summary() const {
    std::string s;
    for (Mask m = 1; m <= full(); ++m) {
      if (popcount(m) < 2) continue;
      if (!s.empty()) s += ' ';
      s += mask_key(m) + ":" + sign_name(sign(m));
    }
    return s;
  }

  // The sublink on the components of m, renumbered in increasing order.
  LinkProfile subprofile(Mask m) const {
    check_mask(m);
    auto comp = members(m);
    const int k = static_cast<int>(comp.size());
    std::vector<std::vector<long>> lk(k, std::vector<long>(k, 0));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) lk[a][b] = lk_[comp[a]][comp[b]];
    LinkProfile p(k, lk);
    for (Mask sub = 1; sub < (1u << k); ++sub) {
      Mask orig = 0;
      for (int a = 0; a < k; ++a)
        if (sub >> a & 1) orig |= 1u << comp[a];
      p.delta_[sub] = raw_delta(orig);
      if (popcount(sub) >= 2) p.signs_[sub] = sign(orig);
    }
    return p;
  }

  // Exponent cosets: a sublink M with two or more components has u_j exponents in
  // (lk(L_j, M - L_j) + 1)/2 + Z; knots have integer exponents.
  void validate() const {
    for (Mask m = 1; m <= full(); ++m) {
      const MultiLaurent& d = raw_delta(m);
      auto comp = members(m);
      for (int p = 0; p < static_cast<int>(comp.size()); ++p) {
        auto par = d.parity(p);
        if (!par) continue;
        int want = comp.size() == 1 ? 0 : static_cast<int>(mod_pos(lk_with(comp[p], m) + 1, 2L));
        if (*par != want)
          throw error(errc::coset_violation, "Alexander polynomial of sublink " + mask_key(m) +
                                                 " has exponents of u" + std::to_string(comp[p] + 1) +
                                                 " off the expected coset");
      }
    }
  }

 private:
  void check_mask(Mask m) const {
    if (m == 0 || m > full()) throw error(errc::invalid_argument, "sublink mask out of range");
  }

  int l_ = 1;
  std::vector<std::vector<long>> lk_{{0}};
  std::map<Mask, MultiLaurent> delta_;
  std::map<Mask, SignFlag> signs_;
};

inline LinkProfile unknot_profile() {
  LinkProfile p(1, {{0}});
  p.set_delta(1, MultiLaurent::constant(1, 1));
  return p;
}

// Two-bridge links have two unknotted components.
inline LinkProfile profile_from_expansion(const EvenExpansion& e, SignFlag sign = SignFlag::automatic) {
  long lk = linking_number(e);
  LinkProfile p(2, {{0, lk}, {lk, 0}});
  p.set_delta(1, MultiLaurent::constant(1, 1));
  p.set_delta(2, MultiLaurent::constant(1, 1));
  p.set_delta(3, alexander(e));
  p.set_sign(3, sign);
  p.validate();
  return p;
}

inline LinkProfile profile_from_two_bridge(const TwoBridge& L, SignFlag sign = SignFlag::automatic) {
  return profile_from_expansion(even_expansion(L), sign);
}

// ---- normalized family ---------------------------------------------------

struct FamilyEntry {
  std::vector<int> vars;  // components carried by the variables, increasing
  std::variant<MultiLaurent, TailPoly> poly;

  bool is_tail() const { return std::holds_alternative<TailPoly>(poly); }
  const MultiLaurent& finite() const { return std::get<MultiLaurent>(poly); }
  const TailPoly& tail() const { return std::get<TailPoly>(poly); }
};

struct NormalizedFamily {
  int l = 1;
  std::map<Mask, FamilyEntry> entries;  // keyed by S, a proper subset (0 = empty set)

  const FamilyEntry& at(Mask s) const {
    auto it = entries.find(s);
    if (it == entries.end()) throw error(errc::invalid_argument, "no P^L for S = " + mask_key(s));
    return it->second;
  }
  const FamilyEntry& empty_set() const { return at(0); }
};

inline NormalizedFamily normalized_family(const LinkProfile& prof) {
  prof.validate();
  const int l = prof.l();
  const Mask all = prof.full();
  NormalizedFamily fam;
  fam.l = l;
  for (Mask S = 0; S < all; ++S) {
    if ((S & all) != S) continue;
    const Mask M = all & ~S;
    FamilyEntry entry;
    entry.vars = members(M);
    const MultiLaurent d = prof.delta(M);
    if (entry.vars.size() == 1) {
      const int j = entry.vars[0];
      int shift = static_cast<int>(prof.lk_with(j, S));
      entry.poly = TailPoly(j, d.shifted(ExponentVec{shift}));
    } else {
      ExponentVec shift = ExponentVec::zero(popcount(M));
      for (int p = 0; p < popcount(M); ++p) shift[p] = 1 + static_cast<int>(prof.lk_with(entry.vars[p], S));
      entry.poly = d.shifted(shift);
    }
    // every exponent of u_j must lie in lk(L_j, L - L_j)/2 + Z
    const MultiLaurent& body = entry.is_tail() ? entry.tail().numerator() : entry.finite();
    for (int p = 0; p < static_cast<int>(entry.vars.size()); ++p) {
      auto par = body.parity(p);
      int want = static_cast<int>(mod_pos(prof.lk_with(entry.vars[p], all), 2L));
      if (par && *par != want)
        throw error(errc::coset_violation, "P^L for S = {" + mask_key(S) + "} leaves the lattice in u" +
                                               std::to_string(entry.vars[p] + 1));
    }
    fam.entries.emplace(S, std::move(entry));
  }
  return fam;
}

// Doubled coordinates of a point of H(L).
using LatticePoint = std::vector<int>;

inline std::string point_str(const LatticePoint& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    if (s[i] % 2 == 0) os << s[i] / 2;
    else os << s[i] << "/2";
  }
  os << ')';
  return os.str();
}

// Sum of the coefficients of P^L_{L_S} over monomials with s'_r = s_r and
// s'_j >= s_j for the other remaining components.
inline Integer r_sum(const NormalizedFamily& fam, Mask S, const LatticePoint& s, int r) {
  if (S >> r & 1) throw error(errc::invalid_argument, "r must not lie in S");
  const FamilyEntry& e = fam.at(S);
  if (e.is_tail()) return e.tail().coeff(s[r]);
  Integer sum = 0;
  for (const auto& [x, c] : e.finite().terms()) {
    bool keep = true;
    for (int p = 0; p < static_cast<int>(e.vars.size()) && keep; ++p) {
      int comp = e.vars[p];
      keep = comp == r ? x[p] == s[r] : x[p] >= s[comp];
    }
    if (keep) sum += c;
  }
  return sum;
}

// The alternating sum over S not containing r; 0 or 1 for L-space links.
inline Integer theorem_value(const NormalizedFamily& fam, const LatticePoint& s, int r) {
  const int l = fam.l;
  const Mask all = (1u << l) - 1;
  Integer v = 0;
  for (Mask S = 0; S < all; ++S) {
    if (S >> r & 1) continue;
    Integer term = r_sum(fam, S, s, r);
    v += ((l - 1 - popcount(S)) % 2 == 0) ? term : Integer(-term);
  }
  return v;
}

struct LatticeBox {
  LatticePoint lo, hi;  // doubled, inclusive, same parity as the lattice

  bool contains(const LatticePoint& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) n *= static_cast<std::size_t>((hi[i] - lo[i]) / 2 + 1);
    return n;
  }

  // Calls f on every point; coordinate `outer` varies slowest, descending.
  template <class F>
  void for_each_descending(F&& f, const std::vector<int>& nesting) const {
    LatticePoint x = hi;
    const int n = static_cast<int>(lo.size());
    if (n == 0) return;
    while (true) {
      f(x);
      int k = n - 1;
      while (k >= 0) {
        int c = nesting[k];
        if (x[c] > lo[c]) {
          x[c] -= 2;
          break;
        }
        x[c] = hi[c];
        --k;
      }
      if (k < 0) return;
    }
  }

  template <class F>
  void for_each(F&& f) const {
    std::vector<int> nesting(lo.size());
    for (std::size_t i = 0; i < nesting.size(); ++i) nesting[i] = static_cast<int>(i);
    for_each_descending(f, nesting);
  }

  nlohmann::json to_json() const { return {{"lo2", lo}, {"hi2", hi}}; }
};

// Per-coordinate range of every exponent appearing in the family.
inline LatticeBox newton_box(const NormalizedFamily& fam, const LinkProfile& prof) {
  const int l = fam.l;
  std::vector<std::optional<int>> lo(l), hi(l);
  auto note = [&](int comp, int e) {
    lo[comp] = lo[comp] ? std::min(*lo[comp], e) : e;
    hi[comp] = hi[comp] ? std::max(*hi[comp], e) : e;
  };
  for (const auto& [S, e] : fam.entries) {
    const MultiLaurent& body = e.is_tail() ? e.tail().numerator() : e.finite();
    for (const auto& [x, c] : body.terms())
      for (int p = 0; p < static_cast<int>(e.vars.size()); ++p) note(e.vars[p], x[p]);
  }
  LatticeBox box;
  for (int i = 0; i < l; ++i) {
    int parity = static_cast<int>(mod_pos(prof.lk_with(i, prof.full()), 2L));
    if (!lo[i]) lo[i] = hi[i] = parity;
    box.lo.push_back(*lo[i]);
    box.hi.push_back(*hi[i]);
  }
  return box;
}

struct TheoremViolation {
  LatticePoint s;
  int r = 0;
  Integer value;
};

struct TheoremReport {
  LatticeBox box;
  std::vector<TheoremViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string first_failure() const {
    if (violations.empty()) return "";
    const auto& v = violations.front();
    return "sum " + v.value.str() + " at s=" + point_str(v.s) + ", r=" + std::to_string(v.r + 1);
  }
};

inline TheoremReport theorem_alex_check(const LinkProfile& prof, int margin = 2) {
  if (margin < 2) throw error(errc::invalid_argument, "box margin must be at least 2");
  const NormalizedFamily fam = normalized_family(prof);
  const int l = prof.l();
  TheoremReport rep;
  rep.box = newton_box(fam, prof);
  for (int i = 0; i < l; ++i) {
    rep.box.lo[i] -= 2 * margin;
    rep.box.hi[i] += 2 * margin;
  }
  rep.box.for_each([&](const LatticePoint& s) {
    for (int r = 0; r < l; ++r) {
      Integer v = theorem_value(fam, s, r);
      if (v != 0 && v != 1) rep.violations.push_back({s, r, v});
      // the value must be constant past the box
      for (int i = 0; i < l; ++i) {
        int step = s[i] == rep.box.lo[i] ? -2 : s[i] == rep.box.hi[i] ? 2 : 0;
        if (step == 0) continue;
        LatticePoint t = s;
        t[i] += step;
        if (theorem_value(fam, t, r) != v)
          throw error(errc::region_unstable, "value changes past the box at s=" + point_str(s));
      }
    }
  });
  std::sort(rep.violations.begin(), rep.violations.end(), [](const auto& a, const auto& b) {
    return a.s != b.s ? a.s < b.s : a.r < b.r;
  });
  return rep;
}

// ---- two-component corollary ---------------------------------------------

struct CorollaryReport {
  bool ok = true;
  char clause = 0;  // 'a', 'b', 'c' or 't' (tail coefficient outside {0,1})
  std::string reason;
  std::vector<int> passing_signs;  // global signs of Delta_L (+1, -1) that pass
};

namespace detail {

// Checks one fixed sign of P^L_empty; returns the failure or nothing.
inline std::optional<std::pair<char, std::string>> corollary_failure(const MultiLaurent& P, const TailPoly& t_for_u1,
                                                                   const TailPoly& t_for_u2) {
  for (const auto& [e, c] : P.terms())
    if (c != 1 && c != -1)
      return std::make_pair('a', "coefficient " + c.str() + " at " + point_str(e.doubled()));
  for (int r = 0; r < 2; ++r) {
    const TailPoly& tail = r == 0 ? t_for_u1 : t_for_u2;
    // rows u_r^j, scanned from the highest exponent of the other variable
    std::map<int, std::vector<std::pair<int, Integer>>> rows;
    for (const auto& [e, c] : P.terms()) rows[e[r]].emplace_back(e[1 - r], c);
    for (auto& [j, row] : rows) {
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t k = 1; k < row.size(); ++k)
        if (row[k].second == row[k - 1].second)
          return std::make_pair('b', "row u" + std::to_string(r + 1) + "^" + point_str({j}) + " does not alternate");
      Integer a = tail.coeff(j);
      Integer want = a == 0 ? -1 : 1;
      if (row.front().second != want)
        return std::make_pair('c', "leading coefficient " + row.front().second.str() + " in row u" +
                                       std::to_string(r + 1) + "^" + point_str({j}) + " with tail coefficient " +
                                       a.str());
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline CorollaryReport cor_alex2_check(const LinkProfile& prof) {
  if (prof.l() != 2) throw error(errc::invalid_argument, "the two-component check needs l = 2");
  const NormalizedFamily fam = normalized_family(prof);
  const MultiLaurent& P = fam.empty_set().finite();
  // P^L_{L_2} is a series in u1, P^L_{L_1} in u2
  const TailPoly& t1 = fam.at(2).tail();
  const TailPoly& t2 = fam.at(1).tail();
  CorollaryReport rep;
  for (const TailPoly* t : {&t1, &t2}) {
    bool bad = t->limit() != 0 && t->limit() != 1;
    for (const auto& [e, c] : t->numerator().terms()) {
      Integer a = t->coeff(e[0]);
      if (a != 0 && a != 1) bad = true;
    }
    if (bad) {
      rep.ok = false;
      rep.clause = 't';
      rep.reason = "tail coefficients of P^L for a knot component are not all 0 or 1";
      return rep;
    }
  }
  auto plus = detail::corollary_failure(P, t1, t2);
  auto minus = detail::corollary_failure(-P, t1, t2);
  if (!plus) rep.passing_signs.push_back(1);
  if (!minus) rep.passing_signs.push_back(-1);
  if (plus) {
    rep.ok = false;
    rep.clause = plus->first;
    rep.reason = plus->second;
  }
  return rep;
}

// The corollary with the sign of Delta_L left open: passes when either sign does.
inline CorollaryReport cor_alex2_check_any_sign(const LinkProfile& prof) {
  CorollaryReport rep = cor_alex2_check(prof);
  if (!rep.passing_signs.empty()) {
    rep.ok = true;
    rep.clause = 0;
    rep.reason.clear();
  }
  return rep;
}

// ---- JSON ------------------------------------------------------------------

inline nlohmann::json to_json(const LinkProfile& p) {
  nlohmann::json delta = nlohmann::json::object(), signs = nlohmann::json::object();
  for (Mask m = 1; m <= p.full(); ++m) {
    delta[mask_key(m)] = to_json(p.raw_delta(m));
    if (popcount(m) >= 2) signs[mask_key(m)] = sign_name(p.sign(m));
  }
  return {{"l", p.l()}, {"lk", p.lk_matrix()}, {"delta", delta}, {"signs", signs}};
}

inline LinkProfile profile_from_json(const nlohmann::json& j) {
  try {
    int l = j.at("l").get<int>();
    if (l < 1 || l > kMaxVars) throw error(errc::unsupported_components, "profiles support 1..3 components");
    std::vector<std::vector<long>> lk(l, std::vector<long>(l, 0));
    if (j.contains("lk")) lk = j.at("lk").get<std::vector<std::vector<long>>>();
    LinkProfile p(l, lk);
    for (const auto& [key, poly] : j.at("delta").items()) p.set_delta(parse_mask_key(key, l), laurent_from_json(poly));
    for (Mask m = 1; m <= p.full(); ++m) p.raw_delta(m);
    if (j.contains("signs"))
      for (const auto& [key, s] : j.at("signs").items()) p.set_sign(parse_mask_key(key, l), parse_sign(s.get<std::string>()));
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& ex) {
    throw error(errc::parse_error, ex.what());
  }
}

inline LinkProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw error(errc::parse_error, path + ": " + ex.what());
  }
  return profile_from_json(j);
}

}  // namespace lfk
