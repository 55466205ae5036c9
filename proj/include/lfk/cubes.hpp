#pragma once

// Edge-labelled hypercubes {0,1}^n and the homology of their total corner.
// A vertex is a bitmask: bit j set means coordinate j+1 is 1.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfk/error.hpp"

namespace lfk {

inline constexpr int kMaxCubeDim = 4;

// Finite graded vector space over F2: grading -> dimension.
class GradedVS {
 public:
  GradedVS() = default;
  GradedVS(std::initializer_list<std::pair<const int, int>> init) {
    for (const auto& [g, d] : init) add(g, d);
  }

  void add(int grading, int dim = 1) {
    if (dim < 0) throw error(errc::invalid_argument, "negative dimension");
    if (dim == 0) return;
    dims_[grading] += dim;
  }

  int dim(int grading) const {
    auto it = dims_.find(grading);
    return it == dims_.end() ? 0 : it->second;
  }

  int total() const {
    int t = 0;
    for (const auto& [g, d] : dims_) t += d;
    return t;
  }

  bool is_zero() const { return dims_.empty(); }
  long euler() const {
    long x = 0;
    for (const auto& [g, d] : dims_) x += (g % 2 == 0) ? d : -d;
    return x;
  }

  const std::map<int, int>& dims() const { return dims_; }

  // Same space with every grading moved by `by`.
  GradedVS shifted(int by) const {
    GradedVS r;
    for (const auto& [g, d] : dims_) r.add(g + by, d);
    return r;
  }

  friend bool operator==(const GradedVS&, const GradedVS&) = default;
  friend bool operator<(const GradedVS& a, const GradedVS& b) { return a.dims_ < b.dims_; }

  // Highest grading first, e.g. "F(4)+F(3)^2"; "0" when empty.
  std::string str() const {
    if (dims_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = dims_.rbegin(); it != dims_.rend(); ++it) {
      if (!first) os << '+';
      first = false;
      os << "F(" << it->first << ')';
      if (it->second != 1) os << '^' << it->second;
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (auto it = dims_.rbegin(); it != dims_.rend(); ++it) a.push_back({{"grading", it->first}, {"dim", it->second}});
    return a;
  }

 private:
  std::map<int, int> dims_;
};

class CubeLabeling {
 public:
  static constexpr int kUnset = -1;

  CubeLabeling() = default;
  explicit CubeLabeling(int n) : n_(n) {
    if (n < 1 || n > kMaxCubeDim) throw error(errc::dimension_unsupported, "cube dimension must be 1..4");
    labels_.assign(static_cast<std::size_t>(1 << n) * n, kUnset);
  }

  static CubeLabeling constant(int n, int value) {
    CubeLabeling c(n);
    for (const auto& [v, j] : c.edges()) c.set(v, j, value);
    return c;
  }

  int n() const { return n_; }
  int vertices() const { return 1 << n_; }

  // Directed edges (v, j) from v to v + e_j, for v with bit j clear.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < vertices(); ++v)
      for (int j = 0; j < n_; ++j)
        if (!(v >> j & 1)) out.emplace_back(v, j);
    return out;
  }

  int get(int v, int j) const {
    check_edge(v, j);
    return labels_[static_cast<std::size_t>(v) * n_ + j];
  }

  void set(int v, int j, int label) {
    check_edge(v, j);
    if (label != 0 && label != 1 && label != kUnset)
      throw error(errc::invalid_labeling, "edge labels must be 0 or 1");
    labels_[static_cast<std::size_t>(v) * n_ + j] = static_cast<std::int8_t>(label);
  }

  bool complete() const {
    for (const auto& [v, j] : edges())
      if (get(v, j) == kUnset) return false;
    return true;
  }

  friend bool operator==(const CubeLabeling&, const CubeLabeling&) = default;
  friend bool operator<(const CubeLabeling& a, const CubeLabeling& b) {
    return a.n_ != b.n_ ? a.n_ < b.n_ : a.labels_ < b.labels_;
  }

  // Restriction to the face where coordinate `dir` is fixed to `side`.
  CubeLabeling face(int dir, int side) const {
    CubeLabeling f(n_ - 1);
    for (int w = 0; w < f.vertices(); ++w)
      for (int j = 0; j < n_ - 1; ++j) {
        if (w >> j & 1) continue;
        f.set(w, j, get(lift(w, dir, side), j < dir ? j : j + 1));
      }
    return f;
  }

  // Vertex of the full cube for a face vertex w (face at coordinate dir = side).
  static int lift(int w, int dir, int side) {
    int low = w & ((1 << dir) - 1);
    int high = (w >> dir) << (dir + 1);
    return low | high | (side << dir);
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, j] : edges()) {
      if (!first) os << ' ';
      first = false;
      os << vertex_name(v, n_) << "->" << vertex_name(v | (1 << j), n_) << ':';
      int l = get(v, j);
      if (l == kUnset) os << '?';
      else os << l;
    }
    return os.str();
  }

  static std::string vertex_name(int v, int n) {
    std::string s;
    for (int j = 0; j < n; ++j) s.push_back((v >> j & 1) ? '1' : '0');
    return s;
  }

 private:
  void check_edge(int v, int j) const {
    if (j < 0 || j >= n_ || v < 0 || v >= vertices() || (v >> j & 1))
      throw error(errc::invalid_argument, "no directed edge from vertex " + std::to_string(v) + " in direction " +
                                              std::to_string(j));
  }

  int n_ = 0;
  std::vector<std::int8_t> labels_;
};

// Every square face commutes: l(v,i) + l(v+e_i,j) == l(v,j) + l(v+e_j,i).
inline bool validate(const CubeLabeling& c) {
  if (!c.complete()) throw error(errc::incomplete_labels, "labeling has unset edges");
  for (int v = 0; v < c.vertices(); ++v)
    for (int i = 0; i < c.n(); ++i)
      for (int j = i + 1; j < c.n(); ++j) {
        if ((v >> i & 1) || (v >> j & 1)) continue;
        if (c.get(v, i) + c.get(v | 1 << i, j) != c.get(v, j) + c.get(v | 1 << j, i)) return false;
      }
  return true;
}

// Path label sum from the origin to each vertex.
inline std::vector<int> path_sums(const CubeLabeling& c) {
  if (!validate(c)) throw error(errc::invalid_labeling, "labeling is not path consistent: " + c.str());
  std::vector<int> h(c.vertices(), 0);
  for (int v = 1; v < c.vertices(); ++v) {
    int j = 0;
    while (!(v >> j & 1)) ++j;
    h[v] = h[v & ~(1 << j)] + c.get(v & ~(1 << j), j);
  }
  return h;
}

// Top grading of each vertex's homology given the origin's.
inline std::vector<int> vertex_gradings(const CubeLabeling& c, int origin_grading) {
  std::vector<int> g = path_sums(c);
  for (int& x : g) x = origin_grading + 2 * x;
  return g;
}

inline long euler_char(const CubeLabeling& c) {
  if (!validate(c)) throw error(errc::invalid_labeling, "labeling is not path consistent: " + c.str());
  if (c.n() == 1) return c.get(0, 0);
  return euler_char(c.face(0, 1)) - euler_char(c.face(0, 0));
}

namespace detail {

// Grading of generator x_v of the free realization.
inline std::vector<int> realization_gradings(const CubeLabeling& c, int origin_grading) {
  std::vector<int> g = vertex_gradings(c, origin_grading);
  for (int v = 0; v < c.vertices(); ++v) g[v] += c.n() - __builtin_popcount(static_cast<unsigned>(v));
  return g;
}

inline int f2_rank(std::vector<std::uint64_t> rows) {
  int rank = 0;
  for (int bit = 0; bit < 64; ++bit) {
    std::uint64_t mask = std::uint64_t(1) << bit;
    auto it = std::find_if(rows.begin() + rank, rows.end(), [&](std::uint64_t r) { return r & mask; });
    if (it == rows.end()) continue;
    std::iter_swap(rows.begin() + rank, it);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != static_cast<std::size_t>(rank) && (rows[i] & mask)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

inline void check_origin(int origin_grading) {
  if (origin_grading % 2 != 0)
    throw error(errc::odd_grading, "origin grading must be even, got " + std::to_string(origin_grading));
}

}  // namespace detail

// Homology of the free realization, computed grading by grading over F2.
inline GradedVS oracle_corner_homology(const CubeLabeling& c, int origin_grading) {
  detail::check_origin(origin_grading);
  if (!validate(c)) throw error(errc::invalid_labeling, "labeling is not path consistent: " + c.str());
  const int n = c.n();
  const std::vector<int> top = detail::realization_gradings(c, origin_grading);

  // basis of grading G: vertices v with top[v] >= G and top[v] - G even (U^k x_v)
  auto basis = [&](int G) {
    std::vector<int> b;
    for (int v = 0; v < c.vertices(); ++v)
      if (top[v] >= G && (top[v] - G) % 2 == 0) b.push_back(v);
    return b;
  };
  // d: grading G -> G-1, rows indexed by source, bits by target position
  auto rank_d = [&](int G) {
    std::vector<int> src = basis(G), dst = basis(G - 1);
    std::vector<std::uint64_t> rows;
    for (int v : src) {
      std::uint64_t r = 0;
      for (int j = 0; j < n; ++j) {
        if (v >> j & 1) continue;
        int w = v | 1 << j;
        // U^k x_v maps to U^{k+l} x_w, present whenever top[w] >= G - 1
        auto pos = std::find(dst.begin(), dst.end(), w);
        if (pos != dst.end()) r ^= std::uint64_t(1) << (pos - dst.begin());
      }
      rows.push_back(r);
    }
    return detail::f2_rank(rows);
  };
  auto homology_at = [&](int G) {
    return static_cast<int>(basis(G).size()) - rank_d(G) - rank_d(G + 1);
  };

  int lo = origin_grading - 2, hi = origin_grading + 2 * n + 4;
  for (int attempt = 0; attempt < 3; ++attempt) {
    bool stable = homology_at(lo) == 0 && homology_at(lo + 1) == 0 && homology_at(hi) == 0 &&
                  homology_at(hi - 1) == 0;
    if (stable) {
      GradedVS h;
      for (int G = lo; G <= hi; ++G) h.add(G, homology_at(G));
      return h;
    }
    lo -= 4;
    hi += 4;
  }
  throw error(errc::truncation_unstable, "corner homology does not vanish at the window edge");
}

// Graded Smith normal form of the corner differential over F[U]. Every entry
// is 0 or a power of U fixed by the gradings, so the matrix is a bit matrix.
inline GradedVS corner_homology(const CubeLabeling& c, int origin_grading) {
  if (c.n() > 3)
    throw error(errc::dimension_unsupported, "the hypercube graph does not determine corner homology for n >= 4");
  detail::check_origin(origin_grading);
  if (!validate(c)) throw error(errc::invalid_labeling, "labeling is not path consistent: " + c.str());
  const int N = c.vertices();
  const std::vector<int> T = detail::realization_gradings(c, origin_grading);

  // m[r][s]: component of d(x_s) along x_r
  std::vector<std::vector<int>> m(N, std::vector<int>(N, 0));
  for (const auto& [v, j] : c.edges()) m[v | 1 << j][v] = 1;
  auto expo = [&](int r, int s) { return (T[r] - T[s] + 1) / 2; };

  std::vector<bool> row_live(N, true), col_live(N, true);
  GradedVS h;
  int pivots = 0;
  while (true) {
    int br = -1, bs = -1;
    for (int r = 0; r < N; ++r)
      for (int s = 0; s < N; ++s)
        if (row_live[r] && col_live[s] && m[r][s] && (br < 0 || expo(r, s) < expo(br, bs))) {
          br = r;
          bs = s;
        }
    if (br < 0) break;
    for (int r = 0; r < N; ++r)
      if (r != br && row_live[r] && m[r][bs])
        for (int s = 0; s < N; ++s) m[r][s] ^= m[br][s];
    for (int s = 0; s < N; ++s)
      if (s != bs && col_live[s] && m[br][s])
        for (int r = 0; r < N; ++r) m[r][s] ^= m[r][bs];
    row_live[br] = col_live[bs] = false;
    ++pivots;
    // F[U]/U^e generated at grading T[br]
    for (int k = 0; k < expo(br, bs); ++k) h.add(T[br] - 2 * k);
  }
  if (N - 2 * pivots != 0) throw error(errc::invalid_labeling, "corner complex has free homology");
  return h;
}

struct Completion {
  std::vector<CubeLabeling> options;  // one (unique) or two (all-0, all-1)
  bool dichotomy() const { return options.size() == 2; }
};

// Fill the edges leaving the origin of an otherwise complete labeling.
inline Completion complete_subgraph(const CubeLabeling& partial) {
  const int n = partial.n();
  for (const auto& [v, j] : partial.edges())
    if (v != 0 && partial.get(v, j) == CubeLabeling::kUnset)
      throw error(errc::incomplete_labels, "only edges at the origin may be unset");
  Completion out;
  for (int bits = 0; bits < (1 << n); ++bits) {
    CubeLabeling c = partial;
    bool clash = false;
    for (int j = 0; j < n; ++j) {
      int want = bits >> j & 1;
      int have = partial.get(0, j);
      if (have != CubeLabeling::kUnset && have != want) clash = true;
      c.set(0, j, want);
    }
    if (!clash && validate(c)) out.options.push_back(c);
  }
  if (out.options.empty()) throw error(errc::no_valid_extension, "no labeling of the origin edges is consistent");
  if (out.options.size() > 2) throw error(errc::invalid_labeling, "more than two origin completions");
  if (out.options.size() == 2) {
    // only all-0 and all-1 can both be valid
    for (int j = 0; j < n; ++j)
      if (out.options[0].get(0, j) != 0 || out.options[1].get(0, j) != 1)
        throw error(errc::invalid_labeling, "two completions that are not all-0 / all-1");
  }
  return out;
}

// Every valid labeling of {0,1}^n, edges assigned in order and each square
// checked as soon as its last edge is set.
inline std::vector<CubeLabeling> all_valid_labelings(int n) {
  CubeLabeling c(n);
  const auto edges = c.edges();
  std::map<std::pair<int, int>, std::size_t> order;
  for (std::size_t k = 0; k < edges.size(); ++k) order[edges[k]] = k;
  // squares (v, i, j) grouped by the position of their last edge
  std::vector<std::vector<std::array<int, 3>>> closes(edges.size());
  for (int v = 0; v < c.vertices(); ++v)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if ((v >> i & 1) || (v >> j & 1)) continue;
        std::size_t last = std::max({order[{v, i}], order[{v | 1 << i, j}], order[{v, j}], order[{v | 1 << j, i}]});
        closes[last].push_back({v, i, j});
      }
  std::vector<CubeLabeling> out;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == edges.size()) {
      out.push_back(c);
      return;
    }
    for (int bit = 0; bit < 2; ++bit) {
      c.set(edges[k].first, edges[k].second, bit);
      bool ok = true;
      for (const auto& [v, i, j] : closes[k])
        if (c.get(v, i) + c.get(v | 1 << i, j) != c.get(v, j) + c.get(v | 1 << j, i)) ok = false;
      if (ok) self(self, k + 1);
    }
    c.set(edges[k].first, edges[k].second, CubeLabeling::kUnset);
  };
  rec(rec, 0);
  return out;
}

// "00->10:1" with coordinate 1 first.
inline void parse_edge(CubeLabeling& c, const std::string& spec) {
  auto arrow = spec.find("->"), colon = spec.rfind(':');
  if (arrow == std::string::npos || colon == std::string::npos || colon < arrow)
    throw error(errc::parse_error, "edge must look like 00->10:1, got '" + spec + "'");
  std::string a = spec.substr(0, arrow), b = spec.substr(arrow + 2, colon - arrow - 2), l = spec.substr(colon + 1);
  auto vertex = [&](const std::string& s) {
    if (static_cast<int>(s.size()) != c.n()) throw error(errc::parse_error, "vertex '" + s + "' has the wrong length");
    int v = 0;
    for (int j = 0; j < c.n(); ++j) {
      if (s[j] != '0' && s[j] != '1') throw error(errc::parse_error, "vertex '" + s + "' is not binary");
      if (s[j] == '1') v |= 1 << j;
    }
    return v;
  };
  int va = vertex(a), vb = vertex(b);
  int diff = va ^ vb;
  if ((va & vb) != va || __builtin_popcount(static_cast<unsigned>(diff)) != 1)
    throw error(errc::parse_error, "'" + a + "->" + b + "' is not an edge");
  if (l != "0" && l != "1") throw error(errc::parse_error, "edge label must be 0 or 1");
  c.set(va, __builtin_ctz(static_cast<unsigned>(diff)), l == "1" ? 1 : 0);
}

}  // namespace lfk
