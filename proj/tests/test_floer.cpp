#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lfk/bridge.hpp"
#include "lfk/floer.hpp"

using namespace lfk;

namespace {

GradedVS single(int grading, int dim = 1) {
  GradedVS g;
  g.add(grading, dim);
  return g;
}

LinkProfile sample(const std::string& name) { return load_profile(std::string(LFK_SAMPLES_DIR) + "/" + name); }

LinkProfile knot_profile(std::initializer_list<std::pair<int, long>> terms) {
  MultiLaurent d(1);
  for (auto [e, c] : terms) d.add_term(ExponentVec{2 * e}, c);
  LinkProfile p(1, {{0}});
  p.set_delta(1, d);
  return p;
}

std::vector<TwoBridge> class_reps(long max_alpha) {
  std::vector<TwoBridge> out;
  for (long a = 2; a <= max_alpha; a += 2)
    for (long b = 1; b < 2 * a; b += 2) {
      if (std::gcd(a, b) != 1) continue;
      TwoBridge L = TwoBridge::make(a, b);
      bool first = true;
      for (long c = 1; c < b && first; c += 2)
        if (std::gcd(a, c) == 1 && equivalent(L, TwoBridge::make(a, c), true)) first = false;
      if (first) out.push_back(L);
    }
  return out;
}

// 2-bridge profiles for which the construction goes through, alpha <= 30.
std::vector<FloerResult> good_two_bridge(long max_alpha) {
  std::vector<FloerResult> out;
  for (const TwoBridge& L : class_reps(max_alpha)) {
    try {
      out.push_back(compute_floer(profile_from_two_bridge(L)));
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::not_lspace_link) << L.str() << ": " << e.what();
    }
  }
  return out;
}

// g(x + e_k) - g(x) = 2 label(x, k) on every edge of the extended box.
void expect_grading_consistent(const TGraph& t) {
  LatticeBox ext = t.box();
  for (int& h : ext.hi) h += 2;
  ext.for_each([&](const LatticePoint& x) {
    for (int k = 0; k < t.l(); ++k) {
      LatticePoint y = x;
      y[k] += 2;
      if (y[k] > ext.hi[k]) continue;
      EXPECT_EQ(t.grading(y) - t.grading(x), 2 * t.label_from(x, k)) << point_str(x) << " dir " << k + 1;
    }
  });
}

}  // namespace

TEST(Floer, UnknotTable) {
  FloerResult r = compute_floer(unknot_profile());
  EXPECT_EQ(r.graph.m(), (LatticePoint{0}));
  for (const auto& [s, h] : r.hfl) {
    if (s[0] <= 0) {
      EXPECT_EQ(h, single(s[0])) << point_str(s);  // F in grading 2s
    } else {
      EXPECT_TRUE(h.is_zero()) << point_str(s);
    }
    EXPECT_EQ(r.graph.label(s, 0), s[0] <= 0 ? 1 : 0);
  }
  EXPECT_EQ(hfl_hat(r, {0}), single(0));
  try {
    hfl_hat(r, {-2});
    FAIL() << "expected HypothesisNotMet";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::hypothesis_not_met);
  }
}

TEST(Floer, TrefoilKnotFloerHomology) {
  // F(0) at s = 1, nothing at s = 0, a tower from F(-2) at s = -1
  FloerResult r = compute_floer(knot_profile({{1, 1}, {0, -1}, {-1, 1}}));
  EXPECT_EQ(r.hfl.at({2}), single(0));
  EXPECT_TRUE(r.hfl.at({0}).is_zero());
  EXPECT_EQ(r.hfl.at({-2}), single(-2));
  EXPECT_EQ(r.hfl.at({-4}), single(-4));
  EXPECT_TRUE(r.hfl.at({4}).is_zero());
  // figure eight is not an L-space knot
  EXPECT_THROW(compute_floer(knot_profile({{1, -1}, {0, 3}, {-1, -1}})), error);
}

TEST(Floer, TwentyMinusThree) {
  const TwoBridge L = TwoBridge::make(20, -3);
  FloerResult r = compute_floer(profile_from_two_bridge(L));
  EXPECT_EQ(r.graph.m(), (LatticePoint{4, 4}));
  EXPECT_EQ(r.successful_sign_choices, 1);
  EXPECT_EQ(r.resolved.sign(3), SignFlag::minus);
  EXPECT_TRUE(euler_mismatches(r.graph, r.hfl).empty());
  // direction-1 edges leaving s_1 >= 2 carry 0
  r.graph.box().for_each([&](const LatticePoint& x) {
    if (x[0] >= 4) {
      EXPECT_EQ(r.graph.label_from(x, 0), 0) << point_str(x);
    }
  });
  EXPECT_NO_THROW(hfl_hat(r, {4, 4}));
  EXPECT_EQ(hfl_hat(r, {4, 4}), r.hfl.at({4, 4}));
  CrossReport cross = alternating_cross_check(r, signature(L));
  EXPECT_TRUE(cross.ok()) << (cross.ok() ? "" : cross.mismatches.front().str());
  EXPECT_GT(cross.checked, 0);
  expect_grading_consistent(r.graph);
}

TEST(Floer, TwistedFamilyFailsGradingCheck) {
  // b(2w, 1) with w = 3: the corner group sits in grading 1, the alternating formula wants 2w - 1
  const TwoBridge L = TwoBridge::make(6, 1);
  FloerResult r = compute_floer(profile_from_two_bridge(L));
  EXPECT_EQ(r.graph.m(), (LatticePoint{3, 3}));
  CrossReport cross = alternating_cross_check(r, signature(L));
  ASSERT_FALSE(cross.ok());
  bool corner = false;
  for (const auto& m : cross.mismatches)
    if (m.s == LatticePoint{3, 3}) {
      corner = true;
      EXPECT_EQ(m.computed, single(1));
      EXPECT_EQ(m.predicted_grading, 5);
    }
  EXPECT_TRUE(corner);
}

TEST(Floer, RejectsCoefficientTwo) {
  try {
    compute_floer(profile_from_two_bridge(TwoBridge::make(12, 5)));
    FAIL() << "expected NotLSpaceLink";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_lspace_link);
  }
}

TEST(Floer, UnlinkHasZeroEuler) {
  FloerResult r = compute_floer(sample("unlink2.json"));
  for (const auto& [s, h] : r.hfl) EXPECT_EQ(h.euler(), 0) << point_str(s);
  GradedVS top = single(0);
  top.add(-1, 1);
  EXPECT_EQ(r.hfl.at({0, 0}), top);
}

TEST(Floer, EulerIdentityAndCubesOnTwoBridge) {
  auto results = good_two_bridge(30);
  EXPECT_GT(results.size(), 30u);
  for (const auto& r : results) {
    EXPECT_TRUE(euler_mismatches(r.graph, r.hfl).empty()) << r.resolved.sign_summary();
    for (const auto& [s, h] : r.hfl) EXPECT_EQ(Integer(euler_char(r.graph.cube_at(s))), p_empty_coeff(r.graph.family(), s));
    expect_grading_consistent(r.graph);
  }
}

TEST(Floer, ComponentSwapSymmetry) {
  for (const auto& r : good_two_bridge(30))
    for (const auto& [s, h] : r.hfl) {
      auto it = r.hfl.find({s[1], s[0]});
      if (it == r.hfl.end()) continue;
      EXPECT_EQ(h, it->second) << point_str(s);
    }
}

TEST(Floer, SweepOrderDeterminism) {
  std::vector<LinkProfile> profiles;
  for (const auto& r : good_two_bridge(24)) profiles.push_back(r.resolved);
  for (const char* name : {"t33.json", "unlink3.json", "hopf_unknot.json"})
    for (const auto& p : sample(name).sign_resolutions()) profiles.push_back(p);
  for (const auto& p : profiles) {
    std::vector<int> order(p.l());
    std::iota(order.begin(), order.end(), 0);
    std::optional<HFLTable> first;
    std::string first_labels;
    do {
      TGraphOptions o;
      o.sweep = order;
      TGraph t;
      try {
        t = build_tgraph_fixed(p, o);
      } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_lspace_link);
        continue;
      }
      HFLTable h = hfl_minus(t);
      std::string labels;
      for (const auto& [s, j, l] : t.all_labels()) labels += std::to_string(l);
      if (!first) {
        first = h;
        first_labels = labels;
      } else {
        EXPECT_EQ(h, *first);
        EXPECT_EQ(labels, first_labels);
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(Floer, MarginStability) {
  for (const char* name : {"b20m3.json", "t33.json", "hopf_unknot.json"}) {
    LinkProfile p = sample(name);
    TGraphOptions wide;
    wide.margin = 4;
    FloerResult a = compute_floer(p), b = compute_floer(p, wide);
    for (const auto& [s, h] : a.hfl) EXPECT_EQ(h, b.hfl.at(s)) << name << " " << point_str(s);
    a.graph.box().for_each([&](const LatticePoint& x) {
      for (int j = 0; j < p.l(); ++j) EXPECT_EQ(a.graph.label_from(x, j), b.graph.label_from(x, j));
    });
    // below the box every direction repeats the lower face
    LatticeBox box = b.graph.box();
    box.for_each([&](const LatticePoint& x) {
      for (int k = 0; k < p.l(); ++k) {
        if (x[k] != box.lo[k]) continue;
        LatticePoint y = x;
        y[k] += 2;
        for (int j = 0; j < p.l(); ++j)
          if (j != k) {
            EXPECT_EQ(b.graph.label_from(x, j), b.graph.label_from(y, j)) << name << point_str(x);
          }
      }
    });
  }
}

TEST(Floer, ThreeComponentSamples) {
  FloerResult t33 = compute_floer(sample("t33.json"));
  EXPECT_EQ(t33.graph.m(), (LatticePoint{2, 2, 2}));
  EXPECT_TRUE(euler_mismatches(t33.graph, t33.hfl).empty());
  EXPECT_EQ(t33.hfl.at({2, 2, 2}), single(0));
  // symmetric under permuting the three components
  for (const auto& [s, h] : t33.hfl) {
    std::vector<int> perm = {0, 1, 2};
    do {
      LatticePoint q = {s[perm[0]], s[perm[1]], s[perm[2]]};
      auto it = t33.hfl.find(q);
      if (it != t33.hfl.end()) {
        EXPECT_EQ(it->second, h);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  expect_grading_consistent(t33.graph);
  for (const char* name : {"unlink3.json", "hopf_unknot.json"}) {
    FloerResult r = compute_floer(sample(name));
    EXPECT_TRUE(euler_mismatches(r.graph, r.hfl).empty()) << name;
    expect_grading_consistent(r.graph);
  }
}

TEST(Floer, JsonShape) {
  FloerResult r = compute_floer(sample("b20m3.json"));
  nlohmann::json j = hfl_json(r);
  ASSERT_TRUE(j.contains("box"));
  ASSERT_TRUE(j.contains("labels"));
  ASSERT_TRUE(j.contains("g"));
  ASSERT_TRUE(j.contains("hfl"));
  const auto& lab = j.at("labels").at(0);
  EXPECT_EQ(lab.at("s2").size(), 2u);
  EXPECT_TRUE(lab.at("l") == 0 || lab.at("l") == 1);
  EXPECT_TRUE(lab.at("dir") == 1 || lab.at("dir") == 2);
  for (const auto& row : j.at("hfl"))
    for (const auto& g : row.at("groups")) EXPECT_GT(g.at("dim").get<int>(), 0);
  EXPECT_EQ(j.at("meta").at("stabilized_below_box"), true);
}

TEST(Floer, ErrorsOnMisuse) {
  LinkProfile autos = profile_from_two_bridge(TwoBridge::make(20, -3));
  EXPECT_THROW(build_tgraph_fixed(autos, {}), error);
  TGraphOptions narrow;
  narrow.margin = 1;
  EXPECT_THROW(compute_floer(unknot_profile(), narrow), error);
  FloerResult r = compute_floer(unknot_profile());
  EXPECT_THROW(alternating_cross_check(r, 1), error);
}
