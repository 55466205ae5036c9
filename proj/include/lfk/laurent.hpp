#pragma once

// Exact Laurent polynomials in up to three variables with exponents on the
// half-integer lattice. Exponents are stored doubled, so u^(3/2) has e2 = 3.

#include <algorithm>
#include <array>
#include <compare>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfk/error.hpp"
#include "lfk/integer.hpp"

namespace lfk {

inline constexpr int kMaxVars = 3;

class ExponentVec {
 public:
  ExponentVec() = default;

  ExponentVec(std::initializer_list<int> doubled) {
    if (doubled.size() > kMaxVars)
      throw error(errc::invalid_argument, "at most 3 variables are supported");
    n_ = static_cast<int>(doubled.size());
    std::copy(doubled.begin(), doubled.end(), e2_.begin());
  }

  static ExponentVec zero(int n) {
    if (n < 0 || n > kMaxVars) throw error(errc::invalid_argument, "variable count out of range");
    ExponentVec v;
    v.n_ = n;
    return v;
  }

  static ExponentVec from_doubled(const std::vector<int>& doubled) {
    if (doubled.size() > kMaxVars)
      throw error(errc::invalid_argument, "at most 3 variables are supported");
    ExponentVec v;
    v.n_ = static_cast<int>(doubled.size());
    std::copy(doubled.begin(), doubled.end(), v.e2_.begin());
    return v;
  }

  // The same exponent in every variable, e.g. (u1 u2)^k with k = e2/2.
  static ExponentVec diagonal(int n, int e2) {
    ExponentVec v = zero(n);
    for (int i = 0; i < n; ++i) v.e2_[i] = e2;
    return v;
  }

  int size() const { return n_; }
  int operator[](int i) const { return e2_[i]; }
  int& operator[](int i) { return e2_[i]; }

  std::vector<int> doubled() const { return {e2_.begin(), e2_.begin() + n_}; }

  bool integral() const {
    for (int i = 0; i < n_; ++i)
      if (e2_[i] % 2 != 0) return false;
    return true;
  }

  ExponentVec operator+(const ExponentVec& o) const {
    check_same(o);
    ExponentVec r = *this;
    for (int i = 0; i < n_; ++i) r.e2_[i] += o.e2_[i];
    return r;
  }

  ExponentVec operator-(const ExponentVec& o) const {
    check_same(o);
    ExponentVec r = *this;
    for (int i = 0; i < n_; ++i) r.e2_[i] -= o.e2_[i];
    return r;
  }

  ExponentVec operator-() const {
    ExponentVec r = *this;
    for (int i = 0; i < n_; ++i) r.e2_[i] = -r.e2_[i];
    return r;
  }

  // Lexicographic on doubled exponents; equal sizes are assumed.
  auto operator<=>(const ExponentVec&) const = default;

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < n_; ++i) {
      if (i) os << ',';
      if (e2_[i] % 2 == 0) os << e2_[i] / 2;
      else os << e2_[i] << "/2";
    }
    os << ')';
    return os.str();
  }

 private:
  void check_same(const ExponentVec& o) const {
    if (o.n_ != n_) throw error(errc::invalid_argument, "exponent vectors of different length");
  }

  std::array<int, kMaxVars> e2_{};
  int n_ = 0;
};

class MultiLaurent {
 public:
  using TermMap = std::map<ExponentVec, Integer>;

  MultiLaurent() = default;
  explicit MultiLaurent(int nvars) : n_(nvars) {
    if (nvars < 1 || nvars > kMaxVars)
      throw error(errc::invalid_argument, "variable count must be 1..3");
  }

  static MultiLaurent constant(int nvars, const Integer& c) {
    return monomial(ExponentVec::zero(nvars), c);
  }

  static MultiLaurent monomial(const ExponentVec& e, const Integer& c = 1) {
    MultiLaurent p(e.size());
    p.add_term(e, c);
    return p;
  }

  // u_i for the 0-based variable index i.
  static MultiLaurent variable(int nvars, int i) {
    ExponentVec e = ExponentVec::zero(nvars);
    e[i] = 2;
    return monomial(e);
  }

  int nvars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  Integer coeff(const ExponentVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  // Adds c*u^e, enforcing the single-coset invariant per variable.
  void add_term(const ExponentVec& e, const Integer& c) {
    if (e.size() != n_) throw error(errc::invalid_argument, "exponent length does not match nvars");
    if (c == 0) return;
    if (!terms_.empty()) {
      const ExponentVec& ref = terms_.begin()->first;
      for (int i = 0; i < n_; ++i)
        if (((ref[i] - e[i]) % 2) != 0)
          throw error(errc::coset_mismatch,
                      "exponent " + e.str() + " is off the coset of " + ref.str());
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Doubled exponent parity of variable i, or nullopt for the zero polynomial.
  std::optional<int> parity(int i) const {
    if (terms_.empty()) return std::nullopt;
    return ((terms_.begin()->first[i] % 2) + 2) % 2;
  }

  int min_exp2(int i) const {
    require_nonzero();
    int m = terms_.begin()->first[i];
    for (const auto& [e, c] : terms_) m = std::min(m, e[i]);
    return m;
  }

  int max_exp2(int i) const {
    require_nonzero();
    int m = terms_.begin()->first[i];
    for (const auto& [e, c] : terms_) m = std::max(m, e[i]);
    return m;
  }

  MultiLaurent shifted(const ExponentVec& by) const {
    MultiLaurent r(n_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e + by, c);
    return r;
  }

  MultiLaurent operator-() const {
    MultiLaurent r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  MultiLaurent& operator+=(const MultiLaurent& o) {
    adopt_nvars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  MultiLaurent& operator-=(const MultiLaurent& o) {
    adopt_nvars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  MultiLaurent& operator*=(const Integer& k) {
    if (k == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= k;
    return *this;
  }

  friend MultiLaurent operator+(MultiLaurent a, const MultiLaurent& b) { return a += b; }
  friend MultiLaurent operator-(MultiLaurent a, const MultiLaurent& b) { return a -= b; }
  friend MultiLaurent operator*(MultiLaurent a, const Integer& k) { return a *= k; }
  friend MultiLaurent operator*(const Integer& k, MultiLaurent a) { return a *= k; }

  friend MultiLaurent operator*(const MultiLaurent& a, const MultiLaurent& b) {
    if (a.n_ != b.n_) throw error(errc::invalid_argument, "multiplying polynomials in different rings");
    MultiLaurent r(a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }

  friend bool operator==(const MultiLaurent& a, const MultiLaurent& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest terms first reads more naturally
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Integer mag = c < 0 ? Integer(-c) : c;
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = true;
      for (int i = 0; i < n_; ++i)
        if (e[i] != 0) unit = false;
      if (mag != 1 || unit) os << mag;
      bool need_star = (mag != 1 || unit);
      for (int i = 0; i < n_; ++i) {
        if (e[i] == 0) continue;
        if (need_star) os << '*';
        need_star = true;
        os << 'u' << (i + 1);
        if (e[i] == 2) continue;
        os << '^';
        if (e[i] % 2 == 0) {
          if (e[i] < 0) os << '(' << e[i] / 2 << ')';
          else os << e[i] / 2;
        } else {
          os << '(' << e[i] << "/2)";
        }
      }
    }
    return os.str();
  }

 private:
  void require_nonzero() const {
    if (terms_.empty()) throw error(errc::invalid_argument, "degree of the zero polynomial");
  }

  void adopt_nvars(const MultiLaurent& o) {
    if (n_ == 0) n_ = o.n_;
    if (o.n_ != 0 && o.n_ != n_)
      throw error(errc::invalid_argument, "adding polynomials in different rings");
  }

  int n_ = 0;
  TermMap terms_;
};

// (sum_{i>=0} u^{-i}) * numerator for a one-variable numerator. The coefficient at
// exponent e is the sum of numerator coefficients at exponents >= e on the same coset.
// It never enters ring arithmetic; only coefficient extraction consumes it.
class TailPoly {
 public:
  TailPoly() = default;
  TailPoly(int var, MultiLaurent numerator) : var_(var), num_(std::move(numerator)) {
    if (num_.nvars() != 1) throw error(errc::invalid_argument, "tail numerator must be univariate");
  }

  // scale * u^t * sum_{i>=0} u^{-i}
  static TailPoly geometric(int var, int threshold2, int scale) {
    return TailPoly(var, MultiLaurent::monomial(ExponentVec{threshold2}, scale));
  }

  int var() const { return var_; }
  const MultiLaurent& numerator() const { return num_; }

  Integer coeff(int e2) const {
    Integer s = 0;
    for (const auto& [e, c] : num_.terms())
      if (e[0] >= e2 && ((e[0] - e2) % 2) == 0) s += c;
    return s;
  }

  // Value of every coefficient far below the numerator's support.
  Integer limit() const {
    Integer s = 0;
    for (const auto& [e, c] : num_.terms()) s += c;
    return s;
  }

  bool is_geometric() const {
    return num_.size() == 1 && abs(num_.terms().begin()->second) == 1;
  }
  int threshold2() const { return num_.terms().begin()->first[0]; }
  int scale() const { return num_.terms().begin()->second.convert_to<int>(); }

  friend bool operator==(const TailPoly&, const TailPoly&) = default;

  std::string str() const {
    return "(" + num_.str() + ")*sum_{i>=0} u" + std::to_string(var_ + 1) + "^(-i)";
  }

 private:
  int var_ = 0;
  MultiLaurent num_{1};
};

inline Integer coeff(const MultiLaurent& p, const ExponentVec& e) { return p.coeff(e); }
inline Integer coeff(const TailPoly& p, const ExponentVec& e) { return p.coeff(e[0]); }

// Quotient q with q * den == num, or not_divisible.
inline MultiLaurent exact_div(const MultiLaurent& num, const MultiLaurent& den) {
  if (den.is_zero()) throw error(errc::invalid_argument, "division by the zero polynomial");
  const int n = den.nvars();
  if (num.nvars() != 0 && num.nvars() != n)
    throw error(errc::invalid_argument, "dividing polynomials in different rings");
  MultiLaurent q(n);
  if (num.is_zero()) return q;

  // Degrees in each variable add under multiplication, which bounds the quotient.
  std::array<int, kMaxVars> lo{}, hi{};
  for (int i = 0; i < n; ++i) {
    lo[i] = num.min_exp2(i) - den.min_exp2(i);
    hi[i] = num.max_exp2(i) - den.max_exp2(i);
    if (lo[i] > hi[i]) throw error(errc::not_divisible, num.str() + " by " + den.str());
  }
  const auto& [dlead_e, dlead_c] = *den.terms().rbegin();
  MultiLaurent rem = num;
  while (!rem.is_zero()) {
    const auto& [rlead_e, rlead_c] = *rem.terms().rbegin();
    ExponentVec e = rlead_e - dlead_e;
    for (int i = 0; i < n; ++i)
      if (e[i] < lo[i] || e[i] > hi[i])
        throw error(errc::not_divisible, num.str() + " by " + den.str());
    if (rlead_c % dlead_c != 0) throw error(errc::not_divisible, num.str() + " by " + den.str());
    Integer c = rlead_c / dlead_c;
    q.add_term(e, c);
    rem -= den.shifted(e) * c;
  }
  return q;
}

// Terms with exponent_1 - exponent_2 == i, where i2 = 2i.
inline MultiLaurent diagonal(const MultiLaurent& p, int i2) {
  if (p.nvars() != 2) throw error(errc::invalid_argument, "diagonal needs two variables");
  MultiLaurent r(2);
  for (const auto& [e, c] : p.terms())
    if (e[0] - e[1] == i2) r.add_term(e, c);
  return r;
}

// Keep the terms whose exponent of variable `var` (0-based) equals j2/2, as a
// polynomial in the remaining variable.
inline MultiLaurent restrict_to(const MultiLaurent& p, int var, int j2) {
  if (p.nvars() != 2) throw error(errc::invalid_argument, "restrict needs two variables");
  if (var < 0 || var > 1) throw error(errc::invalid_argument, "restrict variable must be 0 or 1");
  MultiLaurent r(1);
  for (const auto& [e, c] : p.terms())
    if (e[var] == j2) r.add_term(ExponentVec{e[1 - var]}, c);
  return r;
}

// Exact value at u1 = x, u2 = y with x, y in {1, -1}.
inline Integer eval_signs(const MultiLaurent& p, int x, int y) {
  if (p.nvars() != 2) throw error(errc::invalid_argument, "eval_signs needs two variables");
  if ((x != 1 && x != -1) || (y != 1 && y != -1))
    throw error(errc::invalid_argument, "eval_signs evaluates at +-1 only");
  Integer v = 0;
  for (const auto& [e, c] : p.terms()) {
    if (!e.integral())
      throw error(errc::half_integer_exponent, "cannot evaluate " + e.str() + " at -1");
    bool neg = (x == -1 && (e[0] / 2) % 2 != 0) != (y == -1 && (e[1] / 2) % 2 != 0);
    v += neg ? Integer(-c) : c;
  }
  return v;
}

// u_i -> u_i^{-1} in every variable.
inline MultiLaurent invert_variables(const MultiLaurent& p) {
  MultiLaurent r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term(-e, c);
  return r;
}

// Variable i of the result is variable perm[i] of p.
inline MultiLaurent permute_variables(const MultiLaurent& p, const std::vector<int>& perm) {
  MultiLaurent r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    ExponentVec f = ExponentVec::zero(p.nvars());
    for (int i = 0; i < p.nvars(); ++i) f[i] = e[perm[i]];
    r.add_term(f, c);
  }
  return r;
}

inline nlohmann::json integer_to_json(const Integer& v) {
  if (fits_int64(v)) return v.convert_to<std::int64_t>();
  return v.str();
}

inline Integer integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw error(errc::parse_error, "expected an integer, got " + j.dump());
}

inline nlohmann::json to_json(const MultiLaurent& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"e2", e.doubled()}, {"c", integer_to_json(c)}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

inline MultiLaurent laurent_from_json(const nlohmann::json& j) {
  try {
    MultiLaurent p(j.at("nvars").get<int>());
    for (const auto& t : j.at("terms")) {
      ExponentVec e = ExponentVec::from_doubled(t.at("e2").get<std::vector<int>>());
      if (e.size() != p.nvars()) throw error(errc::parse_error, "term exponent length mismatch");
      p.add_term(e, integer_from_json(t.at("c")));
    }
    return p;
  } catch (const nlohmann::json::exception& ex) {
    throw error(errc::parse_error, ex.what());
  }
}

}  // namespace lfk
