#pragma once

// The lattice graph T(L) of edge labels, its grading field, and HFL^- of an
// L-space link with at most three components computed from a LinkProfile.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfk/cubes.hpp"
#include "lfk/error.hpp"
#include "lfk/lspace.hpp"

namespace lfk {

inline constexpr int kDefaultMargin = 2;

// m(L) in doubled coordinates.
inline LatticePoint m_of(const LinkProfile& prof) {
  const int l = prof.l();
  if (l == 1) {
    const MultiLaurent& d = prof.delta(1);
    return {d.max_exp2(0)};
  }
  const NormalizedFamily fam = normalized_family(prof);
  const MultiLaurent& P = fam.empty_set().finite();
  LatticePoint m(l);
  for (int i = 0; i < l; ++i) {
    std::optional<int> best;
    if (!P.is_zero()) best = P.max_exp2(i);
    for (int j = 0; j < l; ++j) {
      if (j == i) continue;
      LatticePoint sub = m_of(prof.subprofile(prof.full() & ~(1u << j)));
      int idx = i < j ? i : i - 1;
      int cand = sub[idx] + static_cast<int>(prof.lk(i, j));
      best = best ? std::max(*best, cand) : cand;
    }
    m[i] = *best;
  }
  return m;
}

// Coefficient of u^s in P^L_empty (the series form for knots).
inline Integer p_empty_coeff(const NormalizedFamily& fam, const LatticePoint& s) {
  const FamilyEntry& e = fam.empty_set();
  if (e.is_tail()) return e.tail().coeff(s[0]);
  return e.finite().coeff(ExponentVec::from_doubled(s));
}

struct TGraphOptions {
  int margin = kDefaultMargin;
  // nesting of the sweep: coordinates listed from slowest to fastest varying
  std::vector<int> sweep;
};

class TGraph {
 public:
  int l() const { return l_; }
  const LatticeBox& box() const { return box_; }
  const LatticePoint& m() const { return m_; }
  const LinkProfile& profile() const { return prof_; }
  const NormalizedFamily& family() const { return fam_; }

  // Label of the edge x -> x + e_j (x in doubled coordinates).
  int label_from(const LatticePoint& x, int j) const {
    if (l_ == 1) return knot_label(x[0] + 2);
    if (box_.contains(x)) {
      int v = labels_[index(x) * l_ + j];
      if (v < 0) throw error(errc::invalid_argument, "edge label at " + point_str(x) + " not filled yet");
      return v;
    }
    if (!stable(x)) throw error(errc::invalid_argument, "edge query below the box at " + point_str(x));
    return rule_label(x, j);
  }

  // Label of the edge s - e_j -> s.
  int label(const LatticePoint& s, int j) const {
    LatticePoint x = s;
    x[j] -= 2;
    return label_from(x, j);
  }

  // Top grading of H_*(A^-_x); x may range over the box and one step past its top.
  int grading(const LatticePoint& x) const {
    if (l_ == 1) return knot_grading(x[0]);
    auto it = g_.find(x);
    if (it == g_.end()) throw error(errc::invalid_argument, "no grading stored at " + point_str(x));
    return it->second;
  }

  // The cube whose vertices are s - 1 + eps.
  CubeLabeling cube_at(const LatticePoint& s) const {
    CubeLabeling c(l_);
    for (const auto& [v, j] : c.edges()) {
      LatticePoint x = s;
      for (int k = 0; k < l_; ++k) x[k] += (v >> k & 1) ? 0 : -2;
      c.set(v, j, label_from(x, j));
    }
    return c;
  }

  // All labels of edges starting in the box, in box order.
  std::vector<std::tuple<LatticePoint, int, int>> all_labels() const {
    std::vector<std::tuple<LatticePoint, int, int>> out;
    box_.for_each([&](const LatticePoint& x) {
      for (int j = 0; j < l_; ++j) {
        LatticePoint s = x;
        s[j] += 2;
        out.emplace_back(s, j, label_from(x, j));
      }
    });
    std::reverse(out.begin(), out.end());
    return out;
  }

  friend TGraph build_tgraph_fixed(const LinkProfile& prof, const TGraphOptions& opt,
                                   const std::optional<LatticeBox>& cover);

 private:
  bool stable(const LatticePoint& x) const {
    for (int i = 0; i < l_; ++i)
      if (x[i] >= m_[i]) return true;
    return false;
  }

  int knot_label(int s2) const {
    Integer a = fam_.empty_set().tail().coeff(s2);
    return a == 0 ? 0 : 1;
  }

  int knot_grading(int x2) const {
    // g(x) = -2 * #{labelled edges above x}
    int g = 0;
    for (int s = x2 + 2; s <= m_[0]; s += 2) g -= 2 * knot_label(s);
    return g;
  }

  // Labels forced in the stable region: 0 across s_j >= m_j, sublink data inside s_i >= m_i.
  int rule_label(const LatticePoint& x, int j) const {
    std::optional<int> v;
    auto agree = [&](int w, const std::string& why) {
      if (v && *v != w)
        throw error(errc::not_lspace_link, "stable-region labels disagree at " + point_str(x) + " direction " +
                                               std::to_string(j + 1) + " (" + why + ")");
      v = w;
    };
    if (x[j] >= m_[j]) agree(0, "past m(L)");
    for (int i = 0; i < l_; ++i) {
      if (i == j || x[i] < m_[i]) continue;
      LatticePoint r;
      for (int k = 0; k < l_; ++k)
        if (k != i) r.push_back(x[k] - static_cast<int>(prof_.lk(k, i)));
      agree(sub_[i]->label_from(r, j < i ? j : j - 1), "sublink without component " + std::to_string(i + 1));
    }
    if (!v) throw error(errc::invalid_argument, "no rule applies at " + point_str(x));
    return *v;
  }

  std::size_t index(const LatticePoint& x) const {
    std::size_t idx = 0;
    for (int i = 0; i < l_; ++i) idx = idx * static_cast<std::size_t>((box_.hi[i] - box_.lo[i]) / 2 + 1) +
                                       static_cast<std::size_t>((x[i] - box_.lo[i]) / 2);
    return idx;
  }

  int l_ = 1;
  LinkProfile prof_;
  NormalizedFamily fam_;
  LatticePoint m_;
  LatticeBox box_;
  std::vector<std::int8_t> labels_;
  std::map<LatticePoint, int> g_;
  std::vector<std::shared_ptr<const TGraph>> sub_;
};

namespace detail {

inline LatticeBox natural_box(const NormalizedFamily& fam, const LinkProfile& prof, const LatticePoint& m, int margin) {
  LatticeBox box = newton_box(fam, prof);
  for (int i = 0; i < prof.l(); ++i) {
    box.lo[i] -= 2 * margin;
    box.hi[i] = std::max(box.hi[i], m[i]) + 2 * margin;
  }
  return box;
}

inline void check_knot(const NormalizedFamily& fam) {
  const TailPoly& t = fam.empty_set().tail();
  if (t.limit() != 1 && t.limit() != 0)
    throw error(errc::not_lspace_link, "series coefficients of P^K do not stabilize at 0 or 1");
  for (const auto& [e, c] : t.numerator().terms()) {
    Integer a = t.coeff(e[0]);
    if (a != 0 && a != 1)
      throw error(errc::not_lspace_link, "coefficient " + a.str() + " of P^K at " + point_str(e.doubled()));
  }
}

}  // namespace detail

// Builds T(L) for a profile whose signs are all fixed. `cover` widens the box
// so that a parent link can query this graph.
inline TGraph build_tgraph_fixed(const LinkProfile& prof, const TGraphOptions& opt,
                                 const std::optional<LatticeBox>& cover = std::nullopt) {
  if (prof.l() > 3) throw error(errc::unsupported_components, "HFL^- is only computed for up to three components");
  if (!prof.automatic_signs().empty()) throw error(errc::invalid_argument, "resolve automatic signs first");
  if (opt.margin < 2) throw error(errc::invalid_argument, "box margin must be at least 2");
  TGraph t;
  t.l_ = prof.l();
  t.prof_ = prof;
  t.fam_ = normalized_family(prof);
  t.m_ = m_of(prof);
  t.box_ = detail::natural_box(t.fam_, prof, t.m_, opt.margin);
  if (cover)
    for (int i = 0; i < t.l_; ++i) {
      t.box_.lo[i] = std::min(t.box_.lo[i], cover->lo[i]);
      t.box_.hi[i] = std::max(t.box_.hi[i], cover->hi[i]);
    }
  const int l = t.l_;
  if (l == 1) {
    detail::check_knot(t.fam_);
    return t;
  }

  // sublink graphs, boxes widened to the projection of this box
  t.sub_.resize(l);
  for (int i = 0; i < l; ++i) {
    LatticeBox proj;
    for (int k = 0; k < l; ++k) {
      if (k == i) continue;
      proj.lo.push_back(t.box_.lo[k] - static_cast<int>(prof.lk(k, i)));
      proj.hi.push_back(t.box_.hi[k] + 2 - static_cast<int>(prof.lk(k, i)));
    }
    TGraphOptions sub_opt = opt;
    sub_opt.sweep.clear();
    t.sub_[i] = std::make_shared<const TGraph>(
        build_tgraph_fixed(prof.subprofile(prof.full() & ~(1u << i)), sub_opt, proj));
  }

  t.labels_.assign(t.box_.count() * l, -1);
  std::vector<int> nesting = opt.sweep;
  if (nesting.empty())
    for (int i = 0; i < l; ++i) nesting.push_back(i);

  // Cube origins in an order where everything above a point comes first.
  t.box_.for_each_descending(
      [&](const LatticePoint& x) {
        LatticePoint s = x;
        for (int& c : s) c += 2;
        const Integer a = p_empty_coeff(t.fam_, s);
        CubeLabeling cube(l);
        for (const auto& [v, j] : cube.edges()) {
          if (v == 0) {
            if (t.stable(x)) cube.set(0, j, t.rule_label(x, j));
            continue;
          }
          LatticePoint y = x;
          for (int k = 0; k < l; ++k) y[k] += (v >> k & 1) ? 2 : 0;
          cube.set(v, j, t.label_from(y, j));
        }
        Completion options;
        try {
          options = complete_subgraph(cube);
        } catch (const error& e) {
          if (e.code() != errc::no_valid_extension) throw;
          throw error(errc::not_lspace_link, "no consistent labeling of the cube at " + point_str(s));
        }
        std::vector<CubeLabeling> keep;
        for (const auto& c : options.options)
          if (Integer(euler_char(c)) == a) keep.push_back(c);
        if (keep.empty())
          throw error(errc::not_lspace_link, "no cube at " + point_str(s) + " has Euler characteristic " + a.str());
        if (keep.size() > 1) throw error(errc::invalid_labeling, "Euler characteristic fails to pick a cube");
        for (int j = 0; j < l; ++j) t.labels_[t.index(x) * l + j] = static_cast<std::int8_t>(keep[0].get(0, j));
      },
      nesting);

  // Gradings on the box and one step past its top, g = 0 at and above m(L).
  LatticeBox ext = t.box_;
  for (int& h : ext.hi) h += 2;
  ext.for_each([&](const LatticePoint& x) {
    std::optional<int> g;
    bool above = true;
    for (int i = 0; i < l; ++i)
      if (x[i] < t.m_[i]) above = false;
    if (above) g = 0;
    for (int k = 0; k < l; ++k) {
      if (x[k] + 2 > ext.hi[k]) continue;
      LatticePoint y = x;
      y[k] += 2;
      int cand = t.g_.at(y) - 2 * t.label_from(x, k);
      if (g && *g != cand) throw error(errc::invalid_labeling, "grading is path dependent at " + point_str(x));
      g = cand;
    }
    if (!g) throw error(errc::invalid_argument, "grading has no anchor at " + point_str(x));
    t.g_[x] = *g;
  });
  return t;
}

using HFLTable = std::map<LatticePoint, GradedVS>;

struct FloerResult {
  TGraph graph;
  HFLTable hfl;
  LatticeBox table_box;  // s with cube vertices in the graph's range
  LinkProfile resolved;  // the profile with the signs that were used
  int successful_sign_choices = 1;
};

inline LatticeBox hfl_box(const TGraph& t) {
  LatticeBox b = t.box();
  for (int& x : b.lo) x += 2;
  for (int& x : b.hi) x += 2;
  return b;
}

inline HFLTable hfl_minus(const TGraph& t) {
  HFLTable out;
  hfl_box(t).for_each([&](const LatticePoint& s) {
    LatticePoint origin = s;
    for (int& c : origin) c -= 2;
    out[s] = corner_homology(t.cube_at(s), t.grading(origin));
  });
  return out;
}

// Euler series of the table minus P^L_empty on the table's box; empty when they agree.
inline std::vector<LatticePoint> euler_mismatches(const TGraph& t, const HFLTable& table) {
  std::vector<LatticePoint> bad;
  for (const auto& [s, h] : table)
    if (Integer(h.euler()) != p_empty_coeff(t.family(), s)) bad.push_back(s);
  // nothing of P^L_empty may lie outside the table
  const FamilyEntry& e = t.family().empty_set();
  if (!e.is_tail())
    for (const auto& [x, c] : e.finite().terms())
      if (!table.count(x.doubled())) bad.push_back(x.doubled());
  return bad;
}

// Runs the construction for every assignment of the automatic signs.
inline FloerResult compute_floer(const LinkProfile& prof, const TGraphOptions& opt = {}) {
  if (prof.l() > 3) throw error(errc::unsupported_components, "HFL^- is only computed for up to three components");
  std::vector<FloerResult> ok;
  std::string first_reason;
  for (const LinkProfile& p : prof.sign_resolutions()) {
    try {
      TGraph t = build_tgraph_fixed(p, opt);
      HFLTable h = hfl_minus(t);
      ok.push_back(FloerResult{std::move(t), std::move(h), LatticeBox{}, p, 1});
      ok.back().table_box = hfl_box(ok.back().graph);
    } catch (const error& e) {
      if (e.code() != errc::not_lspace_link) throw;
      if (first_reason.empty()) first_reason = e.what();
    }
  }
  if (ok.empty()) {
    std::string r = first_reason;
    const std::string prefix = std::string(errc_name(errc::not_lspace_link)) + ": ";
    if (r.rfind(prefix, 0) == 0) r.erase(0, prefix.size());
    throw error(errc::not_lspace_link, r);
  }
  for (const auto& r : ok)
    if (r.hfl != ok.front().hfl)
      throw error(errc::ambiguous_sign, "sign choices " + ok.front().resolved.sign_summary() + " and " +
                                            r.resolved.sign_summary() + " give different HFL^-");
  ok.front().successful_sign_choices = static_cast<int>(ok.size());
  return std::move(ok.front());
}

inline TGraph build_tgraph(const LinkProfile& prof, const TGraphOptions& opt = {}) {
  return compute_floer(prof, opt).graph;
}

// HFL-hat(s) from HFL^-(s) when HFL^-(s + eps) vanishes for every eps != 0.
inline GradedVS hfl_hat(const FloerResult& r, const LatticePoint& s) {
  auto it = r.hfl.find(s);
  if (it == r.hfl.end()) throw error(errc::hypothesis_not_met, "s=" + point_str(s) + " is outside the table");
  const int l = static_cast<int>(s.size());
  for (int eps = 1; eps < (1 << l); ++eps) {
    LatticePoint t = s;
    for (int k = 0; k < l; ++k) t[k] += (eps >> k & 1) ? 2 : 0;
    auto jt = r.hfl.find(t);
    // past the top of the table every group vanishes
    if (jt == r.hfl.end()) continue;
    if (!jt->second.is_zero())
      throw error(errc::hypothesis_not_met, "HFL^- at " + point_str(t) + " is " + jt->second.str());
  }
  return it->second;
}

struct CrossMismatch {
  LatticePoint s;
  GradedVS computed;
  int predicted_grading = 0;
  long predicted_dim = 0;
  std::string str() const {
    std::ostringstream os;
    os << "s=" << point_str(s) << ": computed " << computed.str() << ", predicted ";
    if (predicted_dim == 0) os << "0";
    else os << "F(" << predicted_grading << ")" << (predicted_dim > 1 ? "^" + std::to_string(predicted_dim) : "");
    return os.str();
  }
};

struct CrossReport {
  int checked = 0;
  std::vector<CrossMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// For alternating two-component links HFL-hat(s) is F^{|a_s|} in grading
// s1 + s2 + (sigma - 1)/2, a_s the coefficient of (1 - 1/u1)(1 - 1/u2) P^L_empty.
inline CrossReport alternating_cross_check(const FloerResult& r, int sigma) {
  if (r.graph.l() != 2) throw error(errc::invalid_argument, "the alternating cross-check needs l = 2");
  if ((sigma - 1) % 2 != 0) throw error(errc::invalid_argument, "signature of a two-component link must be odd");
  const MultiLaurent& P = r.graph.family().empty_set().finite();
  const MultiLaurent one = MultiLaurent::constant(2, 1);
  const MultiLaurent hat_series = (one - MultiLaurent::monomial(ExponentVec{-2, 0})) *
                                  (one - MultiLaurent::monomial(ExponentVec{0, -2})) * P;
  CrossReport rep;
  for (const auto& [s, h] : r.hfl) {
    GradedVS got;
    try {
      got = hfl_hat(r, s);
    } catch (const error& e) {
      if (e.code() == errc::hypothesis_not_met) continue;
      throw;
    }
    ++rep.checked;
    Integer a = P.is_zero() ? Integer(0) : hat_series.coeff(ExponentVec::from_doubled(s));
    long dim = abs(a).convert_to<long>();
    int grading = (s[0] + s[1]) / 2 + (sigma - 1) / 2;
    bool good = dim == 0 ? got.is_zero() : (got.dims().size() == 1 && got.dim(grading) == dim);
    if (!good) rep.mismatches.push_back({s, got, grading, dim});
  }
  return rep;
}

// ---- JSON ------------------------------------------------------------------

inline nlohmann::json tgraph_json(const FloerResult& r) {
  const TGraph& t = r.graph;
  nlohmann::json labels = nlohmann::json::array(), g = nlohmann::json::array();
  for (const auto& [s, j, lab] : t.all_labels()) labels.push_back({{"s2", s}, {"dir", j + 1}, {"l", lab}});
  LatticeBox ext = t.box();
  for (int& h : ext.hi) h += 2;
  std::vector<nlohmann::json> gs;
  ext.for_each([&](const LatticePoint& x) { gs.push_back({{"s2", x}, {"g", t.grading(x)}}); });
  for (auto it = gs.rbegin(); it != gs.rend(); ++it) g.push_back(*it);
  // Below the box every label repeats the one on the box's lower face.
  nlohmann::json meta = {{"m2", t.m()},
                         {"signs", r.resolved.sign_summary()},
                         {"sign_choices_succeeding", r.successful_sign_choices},
                         {"stabilized_below_box", true}};
  return {{"box", t.box().to_json()}, {"labels", labels}, {"g", g}, {"meta", meta}};
}

inline nlohmann::json hfl_json(const FloerResult& r) {
  nlohmann::json j = tgraph_json(r);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [s, h] : r.hfl) rows.push_back({{"s2", s}, {"groups", h.to_json()}});
  j["hfl"] = rows;
  j["table_box"] = r.table_box.to_json();
  return j;
}

}  // namespace lfk
