#pragma once

// Two-bridge links b(alpha, beta), all-even continued fractions and the
// Alexander polynomial recursion over them.

#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lfk/error.hpp"
#include "lfk/integer.hpp"
#include "lfk/laurent.hpp"

namespace lfk {

struct TwoBridge {
  long alpha = 2;
  long beta = 1;

  // Validates and reduces beta into (-alpha, alpha) modulo 2*alpha.
  static TwoBridge make(long alpha, long beta) {
    if (alpha <= 0 || alpha % 2 != 0)
      throw error(errc::invalid_link, "alpha must be a positive even integer, got " + std::to_string(alpha));
    if (beta % 2 == 0) throw error(errc::invalid_link, "beta must be odd, got " + std::to_string(beta));
    if (std::gcd(alpha, beta) != 1)
      throw error(errc::invalid_link, "gcd(alpha, beta) must be 1");
    long b = mod_pos(beta, 2 * alpha);
    if (b > alpha) b -= 2 * alpha;
    return TwoBridge{alpha, b};
  }

  long beta_mod() const { return mod_pos(beta, 2 * alpha); }

  std::string str() const {
    return "b(" + std::to_string(alpha) + "," + std::to_string(beta) + ")";
  }

  friend bool operator==(const TwoBridge&, const TwoBridge&) = default;
};

// D(p1, q1, p2, ..., pn) standing for C(2p1, 2q1, ..., 2pn).
struct EvenExpansion {
  std::vector<long> p;
  std::vector<long> q;

  int n() const { return static_cast<int>(p.size()); }

  std::vector<long> interleaved() const {
    std::vector<long> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
      out.push_back(p[i]);
      if (i < q.size()) out.push_back(q[i]);
    }
    return out;
  }

  static EvenExpansion from_interleaved(const std::vector<long>& v) {
    if (v.empty() || v.size() % 2 == 0)
      throw error(errc::invalid_expansion, "expansion needs an odd number of entries");
    EvenExpansion e;
    for (std::size_t i = 0; i < v.size(); ++i) (i % 2 == 0 ? e.p : e.q).push_back(v[i]);
    return e;
  }

  std::string str() const {
    std::ostringstream os;
    os << "D(";
    auto v = interleaved();
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
  }

  friend bool operator==(const EvenExpansion&, const EvenExpansion&) = default;
};

namespace detail {

inline void check_shape(const EvenExpansion& e) {
  if (e.p.empty() || e.q.size() + 1 != e.p.size())
    throw error(errc::invalid_expansion, "need n p-entries and n-1 q-entries");
}

}  // namespace detail

// Evaluates 2p1 + 1/(2q1 + 1/(... + 1/2pn)) without validating the result.
inline std::pair<Integer, Integer> evaluate_fraction(const std::vector<long>& interleaved) {
  if (interleaved.empty()) throw error(errc::invalid_expansion, "empty expansion");
  // x = num/den, evaluated from the last term
  Integer num = 2 * Integer(interleaved.back()), den = 1;
  for (auto it = interleaved.rbegin() + 1; it != interleaved.rend(); ++it) {
    if (num == 0) throw error(errc::zero_denominator, "a continued fraction tail vanishes");
    Integer next = 2 * Integer(*it) * num + den;
    den = num;
    num = next;
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Integer g = gcd(num, den);
  if (g != 0) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

// (alpha, beta) of D(...), normalized so alpha > 0.
inline TwoBridge fraction_of(const EvenExpansion& e) {
  detail::check_shape(e);
  for (long v : e.interleaved())
    if (v == 0) throw error(errc::invalid_expansion, "expansion entries must be nonzero");
  auto [num, den] = evaluate_fraction(e.interleaved());
  // alpha/beta = num/den with alpha > 0
  Integer alpha = num, beta = den;
  if (alpha < 0) {
    alpha = -alpha;
    beta = -beta;
  }
  if (!fits_int64(alpha) || alpha > std::numeric_limits<long>::max() / 4)
    throw error(errc::invalid_link, "alpha out of range");
  long a = alpha.convert_to<long>(), b = beta.convert_to<long>();
  if (a % 2 != 0 || b % 2 == 0 || std::labs(b) >= a)
    throw error(errc::invalid_link, e.str() + " evaluates to " + std::to_string(a) + "/" + std::to_string(b));
  return TwoBridge{a, b};
}

inline EvenExpansion even_expansion(const TwoBridge& link) {
  TwoBridge L = TwoBridge::make(link.alpha, link.beta);
  std::vector<long> terms;
  long num = L.alpha, den = L.beta;
  while (true) {
    // the even quotient a with |num - a*den| < |den|; unique by parity
    long ad = std::labs(den);
    long sgn = den < 0 ? -1 : 1;
    long a = 2 * floor_div(num + ad, 2 * ad) * sgn;
    long r = num - a * den;
    if (std::labs(r) >= ad || a == 0)
      throw error(errc::invalid_link, "even expansion failed for " + L.str());
    terms.push_back(a / 2);
    if (r == 0) break;
    num = den;
    den = r;
  }
  EvenExpansion e = EvenExpansion::from_interleaved(terms);
  if (!(fraction_of(e) == L)) throw error(errc::invalid_link, "even expansion does not round-trip for " + L.str());
  return e;
}

// Classification of 2-bridge links: same alpha and beta' = beta^{+-1} mod 2 alpha,
// plus beta + alpha and beta^{-1} + alpha when one component may be reversed.
inline bool equivalent(const TwoBridge& a, const TwoBridge& b, bool allow_orientation_reversal) {
  if (a.alpha != b.alpha) return false;
  const long m = 2 * a.alpha;
  long x = mod_pos(a.beta, m), y = mod_pos(b.beta, m);
  if (x == y || mod_pos(x * y, m) == 1) return true;
  if (!allow_orientation_reversal) return false;
  return mod_pos(x + a.alpha, m) == y || mod_pos(x * y, m) == mod_pos(1 + a.alpha, m);
}

inline MultiLaurent F_poly(long r) {
  MultiLaurent f(2);
  if (r > 0) {
    for (long i = 0; i < r; ++i) f.add_term(ExponentVec::diagonal(2, static_cast<int>(2 * i)), 1);
  } else if (r < 0) {
    for (long i = r; i < 0; ++i) f.add_term(ExponentVec::diagonal(2, static_cast<int>(2 * i)), -1);
  }
  return f;
}

inline MultiLaurent uu_power(long k) { return MultiLaurent::monomial(ExponentVec::diagonal(2, static_cast<int>(2 * k))); }

// All of Delta_0 .. Delta_n.
inline std::vector<MultiLaurent> delta_sequence(const EvenExpansion& e) {
  detail::check_shape(e);
  for (long v : e.interleaved())
    if (v == 0) throw error(errc::invalid_expansion, "expansion entries must be nonzero");
  const MultiLaurent one = MultiLaurent::constant(2, 1);
  const MultiLaurent u1m = MultiLaurent::variable(2, 0) - one;
  const MultiLaurent u2m = MultiLaurent::variable(2, 1) - one;
  std::vector<MultiLaurent> d{MultiLaurent(2), F_poly(e.p[0])};
  for (int k = 2; k <= e.n(); ++k) {
    const MultiLaurent Fk = F_poly(e.p[k - 1]);
    const MultiLaurent Fprev = F_poly(e.p[k - 2]);
    const long qk = e.q[k - 2];
    MultiLaurent a = (u1m * u2m * Fk * Integer(qk) + one) * d[k - 1];
    MultiLaurent b = exact_div(uu_power(e.p[k - 2]) * Fk * (d[k - 1] - d[k - 2]), Fprev);
    d.push_back(a + b);
  }
  return d;
}

inline MultiLaurent delta_recursion(const EvenExpansion& e) { return delta_sequence(e).back(); }

inline long linking_number(const EvenExpansion& e) {
  return -std::accumulate(e.p.begin(), e.p.end(), 0L);
}

// Delta_L up to a global sign: (u1 u2)^{(1 - l_n)/2} Delta_n.
inline MultiLaurent alexander(const EvenExpansion& e) {
  long l = -linking_number(e);
  return delta_recursion(e).shifted(ExponentVec::diagonal(2, static_cast<int>(1 - l)));
}

inline MultiLaurent alexander(const TwoBridge& L) { return alexander(even_expansion(L)); }

// Predicted degree range [lo, hi] of either variable in Delta_n.
inline std::pair<long, long> delta_degree_bounds(const EvenExpansion& e) {
  long l = 0, lt = 0;
  for (long v : e.p) {
    l += v;
    lt += std::labs(v);
  }
  return {(l - lt) / 2, (l + lt) / 2 - 1};
}

struct DiagonalReport {
  bool top_ok = true;     // Delta_n^{[n-1]}
  bool second_ok = true;  // Delta_n^{[n-2]}, vacuous for n = 1
  std::string detail;
  bool ok() const { return top_ok && second_ok; }
};

inline DiagonalReport diagonal_identities_check(const EvenExpansion& e) {
  const int n = e.n();
  const MultiLaurent delta = delta_recursion(e);
  const MultiLaurent one = MultiLaurent::constant(2, 1);
  const MultiLaurent mu1 = -MultiLaurent::variable(2, 0);
  auto power = [&](const MultiLaurent& x, int k) {
    MultiLaurent r = one;
    for (int i = 0; i < k; ++i) r = r * x;
    return r;
  };
  // q(n)/q_skip and F(n)/F_{p_skip}; skip = -1 keeps every factor
  auto qprod = [&](int skip) {
    Integer r = 1;
    for (int i = 0; i < n - 1; ++i)
      if (i != skip) r *= e.q[i];
    return r;
  };
  auto Fprod = [&](int skip) {
    MultiLaurent r = one;
    for (int i = 0; i < n; ++i)
      if (i != skip) r = r * F_poly(e.p[i]);
    return r;
  };

  DiagonalReport rep;
  const MultiLaurent top = qprod(-1) * power(mu1, n - 1) * Fprod(-1);
  if (diagonal(delta, 2 * (n - 1)) != top) {
    rep.top_ok = false;
    rep.detail = "diagonal " + std::to_string(n - 1) + ": got " + diagonal(delta, 2 * (n - 1)).str() +
                 ", expected " + top.str();
    return rep;
  }
  if (n < 2) return rep;

  const MultiLaurent base = power(mu1, n - 2);
  const MultiLaurent uu1 = uu_power(1) + one;
  MultiLaurent P1 = Integer(n - 1) * (uu1 * Fprod(-1) * base) * qprod(-1);
  MultiLaurent P2(2), P3(2);
  // indices below are 0-based: q_{i-1} pairs with F_{p_i} for i = 2..n
  for (int i = 1; i < n; ++i) P2 += qprod(i - 1) * (Fprod(i) * base);
  for (int i = 0; i < n - 1; ++i) P3 += qprod(i) * (uu_power(e.p[i]) * Fprod(i) * base);
  const MultiLaurent second = P1 + P2 + P3;
  if (diagonal(delta, 2 * (n - 2)) != second) {
    rep.second_ok = false;
    rep.detail = "diagonal " + std::to_string(n - 2) + ": got " + diagonal(delta, 2 * (n - 2)).str() +
                 ", expected " + second.str();
  }
  return rep;
}

// ---- signatures ----------------------------------------------------------

using RationalMatrix = std::vector<std::vector<Rational>>;

// n x n: A11 = p, Aii = 2 for i >= 2, -1 on the off-diagonals.
inline RationalMatrix goeritz_matrix(int n, long p) {
  if (n < 1) throw error(errc::invalid_argument, "Goeritz matrix size must be positive");
  RationalMatrix a(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) {
    a[i][i] = i == 0 ? Rational(p) : Rational(2);
    if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = -1;
  }
  return a;
}

// Signature by exact symmetric congruence, rows kept sparse.
inline int congruence_signature(const RationalMatrix& dense) {
  const std::size_t n = dense.size();
  for (const auto& row : dense)
    if (row.size() != n) throw error(errc::invalid_argument, "matrix is not square");
  using Row = std::map<std::size_t, Rational>;
  std::vector<Row> a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (dense[i][j].is_zero() && dense[j][i].is_zero()) continue;
      if (dense[i][j] != dense[j][i]) throw error(errc::invalid_argument, "matrix is not symmetric");
      a[i][j] = a[j][i] = dense[i][j];
    }
  auto get = [&](std::size_t i, std::size_t j) {
    auto it = a[i].find(j);
    return it == a[i].end() ? Rational(0) : it->second;
  };
  auto put = [&](std::size_t i, std::size_t j, const Rational& v) {
    if (v == 0) a[i].erase(j);
    else a[i][j] = v;
  };
  int sig = 0;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> piv;
    for (std::size_t i = 0; i < n && !piv; ++i)
      if (!done[i] && a[i].count(i)) piv = i;
    if (!piv) {
      // zero diagonal: add row/column j to i so that a[i][i] = 2 a[i][j] != 0
      for (std::size_t i = 0; i < n && !piv; ++i) {
        if (done[i] || a[i].empty()) continue;
        const std::size_t j = a[i].begin()->first;
        Row merged = a[i];
        for (const auto& [k, v] : a[j]) merged[k] += v;
        merged[i] = get(i, i) + 2 * get(i, j) + get(j, j);
        std::erase_if(merged, [](const auto& kv) { return kv.second == 0; });
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) put(k, i, merged.count(k) ? merged[k] : Rational(0));
        a[i] = std::move(merged);
        piv = i;
      }
      if (!piv) break;  // the remaining block is zero
    }
    const std::size_t p = *piv;
    const Rational d = a[p].at(p);
    sig += d > 0 ? 1 : -1;
    done[p] = true;
    const Row prow = a[p];
    for (const auto& [i, aip] : prow) {
      if (i == p) continue;
      const Rational f = aip / d;
      for (const auto& [k, v] : prow)
        if (k != p) put(i, k, get(i, k) - f * v);
      a[i].erase(p);
    }
    a[p].clear();
  }
  return sig;
}

struct SignatureInfo {
  int sigma = 0;
  int goeritz_n = 0;
  long goeritz_p = 0;
  int mirror = 1;  // sigma = mirror * signature(A_n(p))
  std::string family;
};

// Every b(qk-1, +-k) / b(q'k+1, +-k) form the link matches, with both
// computations of the signature attached.
inline std::vector<SignatureInfo> signature_candidates(const TwoBridge& L) {
  if (L.alpha <= 0) throw error(errc::unsupported_form, "alpha must be positive");
  std::vector<SignatureInfo> out;
  auto consider = [&](long k, int sign, int closed, int gn, long gp, const std::string& fam) {
    if (k >= L.alpha) return;
    if (!equivalent(L, TwoBridge::make(L.alpha, sign * k), false)) return;
    SignatureInfo s;
    s.goeritz_n = gn;
    s.goeritz_p = gp;
    s.mirror = sign;
    s.family = fam;
    s.sigma = sign * closed;
    int computed = sign * congruence_signature(goeritz_matrix(gn, gp));
    if (computed != s.sigma)
      throw error(errc::unsupported_form, "Goeritz signature " + std::to_string(computed) +
                                               " disagrees with " + std::to_string(s.sigma) + " for " + L.str());
    out.push_back(s);
  };
  for (long k = 1; k <= L.alpha + 1; k += 2) {
    if ((L.alpha + 1) % k == 0) {
      long q = (L.alpha + 1) / k;
      if (!(k == 1 && q == 1)) {
        std::string fam = "b(" + std::to_string(q) + "*" + std::to_string(k) + "-1,";
        consider(k, 1, static_cast<int>(q - 2), static_cast<int>(q), 1 - k, fam + std::to_string(k) + ")");
        consider(k, -1, static_cast<int>(q - 2), static_cast<int>(q), 1 - k, fam + "-" + std::to_string(k) + ")");
      }
    }
    if ((L.alpha - 1) % k == 0) {
      long q = (L.alpha - 1) / k;
      std::string fam = "b(" + std::to_string(q) + "*" + std::to_string(k) + "+1,";
      consider(k, 1, static_cast<int>(q), static_cast<int>(q), 1 + k, fam + std::to_string(k) + ")");
      consider(k, -1, static_cast<int>(q), static_cast<int>(q), 1 + k, fam + "-" + std::to_string(k) + ")");
    }
  }
  return out;
}

inline SignatureInfo signature_info(const TwoBridge& link) {
  TwoBridge L = TwoBridge::make(link.alpha, link.beta);
  auto c = signature_candidates(L);
  if (c.empty()) throw error(errc::unsupported_form, L.str() + " matches no family with a known Goeritz matrix");
  for (const auto& s : c)
    if (s.sigma != c.front().sigma)
      throw error(errc::unsupported_form, L.str() + " matches families with different signatures");
  return c.front();
}

inline int signature(const TwoBridge& L) { return signature_info(L).sigma; }

// ---- text and JSON -------------------------------------------------------

namespace detail {

inline long parse_long(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw error(errc::parse_error, "not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw error(errc::parse_error, "not an integer: '" + s + "'");
  return v;
}

inline std::string trim(std::string s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

}  // namespace detail

// "20/-3"
inline TwoBridge parse_two_bridge(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) throw error(errc::parse_error, "expected alpha/beta, got '" + text + "'");
  return TwoBridge::make(detail::parse_long(detail::trim(text.substr(0, slash))),
                         detail::parse_long(detail::trim(text.substr(slash + 1))));
}

// "(-3,-1,1)" or "-3,-1,1"
inline EvenExpansion parse_expansion(const std::string& text) {
  std::string s = detail::trim(text);
  if (!s.empty() && s.front() == '(') s.erase(0, 1);
  if (!s.empty() && s.back() == ')') s.pop_back();
  std::vector<long> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(detail::parse_long(detail::trim(item)));
  return EvenExpansion::from_interleaved(v);
}

inline nlohmann::json to_json(const TwoBridge& L) {
  EvenExpansion e = even_expansion(L);
  return {{"alpha", L.alpha}, {"beta", L.beta}, {"expansion", {{"p", e.p}, {"q", e.q}}}};
}

}  // namespace lfk
