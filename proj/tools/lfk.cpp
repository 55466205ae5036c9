// lfk: command-line front end for the link Floer library.
//
// Exit status: 0 computed, 1 usage error, 2 mathematical rejection. Rejections
// print {"error": name, "reason": text} on stdout.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfk/lfk.hpp"

namespace {

using nlohmann::json;

int usage_codes(lfk::errc c) {
  switch (c) {
    case lfk::errc::invalid_argument:
    case lfk::errc::invalid_expansion:
    case lfk::errc::invalid_link:
    case lfk::errc::zero_denominator:
    case lfk::errc::parse_error:
      return 1;
    default:
      return 2;
  }
}

int reject(const std::string& name, const std::string& reason) {
  std::cout << json{{"error", name}, {"reason", reason}}.dump() << "\n";
  return 2;
}

std::string strip_name(const lfk::error& e) {
  std::string what = e.what();
  const std::string prefix = std::string(lfk::errc_name(e.code())) + ": ";
  if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
  return what;
}

// Usage errors raised while reading a flag's value name that flag.
template <class F>
auto for_flag(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const lfk::error& e) {
    if (usage_codes(e.code()) != 1) throw;
    throw lfk::error(e.code(), flag + ": " + strip_name(e));
  }
}

int margin_from_env() {
  const char* v = std::getenv("LFK_MARGIN");
  if (!v || !*v) return lfk::kDefaultMargin;
  long m = for_flag("LFK_MARGIN", [&] { return lfk::detail::parse_long(v); });
  if (m < 2) throw lfk::error(lfk::errc::invalid_argument, "LFK_MARGIN must be an integer >= 2");
  return static_cast<int>(m);
}

struct LinkInput {
  std::vector<long> ab;
  std::string exp;
  std::string profile;

  void add(CLI::App* cmd, bool with_profile) {
    auto* ab_opt = cmd->add_option("--ab", ab, "2-bridge link b(A,B)")->expected(2);
    auto* exp_opt = cmd->add_option("--exp", exp, "even expansion p1,q1,...,pn");
    ab_opt->excludes(exp_opt);
    if (with_profile) {
      auto* prof_opt = cmd->add_option("--profile", profile, "LinkProfile JSON file")->check(CLI::ExistingFile);
      prof_opt->excludes(ab_opt)->excludes(exp_opt);
    }
  }

  std::optional<lfk::EvenExpansion> expansion() const {
    if (!ab.empty()) return for_flag("--ab", [&] { return lfk::even_expansion(lfk::TwoBridge::make(ab[0], ab[1])); });
    if (!exp.empty()) return for_flag("--exp", [&] { return lfk::parse_expansion(exp); });
    return std::nullopt;
  }

  lfk::LinkProfile load() const {
    if (!profile.empty()) return for_flag("--profile", [&] { return lfk::load_profile(profile); });
    auto e = expansion();
    if (!e) throw lfk::error(lfk::errc::invalid_argument, "one of --ab, --exp or --profile is required");
    return lfk::profile_from_expansion(*e);
  }
};

int cmd_alex(const LinkInput& in) {
  auto e = in.expansion();
  if (!e) throw lfk::error(lfk::errc::invalid_argument, "one of --ab or --exp is required");
  lfk::TwoBridge L = lfk::fraction_of(*e);
  // the global sign is the one the two-component corollary accepts, if unique
  lfk::CorollaryReport cor = lfk::cor_alex2_check(lfk::profile_from_expansion(*e, lfk::SignFlag::plus));
  const int sign = cor.passing_signs.size() == 1 ? cor.passing_signs.front() : 1;
  lfk::LinkProfile prof = lfk::profile_from_expansion(*e, sign < 0 ? lfk::SignFlag::minus : lfk::SignFlag::plus);
  lfk::NormalizedFamily fam = lfk::normalized_family(prof);
  const lfk::MultiLaurent delta = prof.delta(prof.full());
  json out = lfk::to_json(L);
  out["lk"] = lfk::linking_number(*e);
  out["sign"] = sign;
  out["delta"] = lfk::to_json(delta);
  out["delta_str"] = delta.str();
  out["P_empty"] = lfk::to_json(fam.empty_set().finite());
  out["P_empty_str"] = fam.empty_set().finite().str();
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_check(const LinkInput& in, int margin) {
  const lfk::LinkProfile prof = in.load();
  json tried = json::array();
  std::string first_reason;
  for (const lfk::LinkProfile& p : prof.sign_resolutions()) {
    lfk::TheoremReport thm = lfk::theorem_alex_check(p, margin);
    json row = {{"signs", p.sign_summary()}, {"theorem", thm.ok() ? "pass" : "fail"}};
    std::string reason = thm.ok() ? "" : thm.first_failure();
    bool ok = thm.ok();
    if (p.l() == 2) {
      lfk::CorollaryReport cor = lfk::cor_alex2_check(p);
      row["corollary"] = cor.ok ? "pass" : "fail";
      if (!cor.ok) reason = cor.reason;
      ok = ok && cor.ok;
    }
    if (!reason.empty()) row["reason"] = reason;
    tried.push_back(row);
    if (ok) {
      std::cout << json{{"ok", true}, {"signs", p.sign_summary()}, {"tried", tried}}.dump(2) << "\n";
      return 0;
    }
    if (first_reason.empty()) first_reason = reason;
  }
  std::cout << json{{"ok", false}, {"error", "CheckViolation"}, {"reason", first_reason}, {"tried", tried}}.dump(2)
            << "\n";
  return 2;
}

int cmd_floer(const LinkInput& in, int margin, bool with_hfl) {
  lfk::TGraphOptions opt;
  opt.margin = margin;
  lfk::FloerResult r = lfk::compute_floer(in.load(), opt);
  std::cout << (with_hfl ? lfk::hfl_json(r) : lfk::tgraph_json(r)).dump() << "\n";
  return 0;
}

int cmd_cube(int n, const std::string& labels, const std::vector<std::string>& edges, int origin, bool oracle) {
  lfk::CubeLabeling c(n);
  if (labels == "all0" || labels == "all1") {
    c = lfk::CubeLabeling::constant(n, labels == "all1" ? 1 : 0);
  } else if (!labels.empty()) {
    throw lfk::error(lfk::errc::invalid_argument, "--labels must be all0 or all1");
  }
  for (const auto& e : edges) for_flag("--edge", [&] { lfk::parse_edge(c, e); });
  lfk::GradedVS h = oracle ? lfk::oracle_corner_homology(c, origin) : lfk::corner_homology(c, origin);
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& g : h.to_json()) groups.push_back({{"grading", g.at("grading")}, {"dim", g.at("dim")}});
  nlohmann::ordered_json out;
  out["homology"] = groups;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_classify(long max_alpha, const std::string& out_path, const std::string& json_path, int margin) {
  lfk::TGraphOptions opt;
  opt.margin = margin;
  auto recs = lfk::classify(max_alpha, opt);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw lfk::error(lfk::errc::invalid_argument, "cannot write " + out_path);
    lfk::write_csv(out, recs);
  }
  if (!json_path.empty()) {
    json arr = json::array();
    for (const auto& r : recs) arr.push_back(lfk::to_json(r));
    std::ofstream out(json_path);
    if (!out) throw lfk::error(lfk::errc::invalid_argument, "cannot write " + json_path);
    out << arr.dump(2) << "\n";
  }
  int survivors = 0, family = 0, mismatched = 0;
  for (const auto& r : recs) {
    survivors += r.survivor();
    family += r.family_member;
    mismatched += r.survivor() != r.family_member;
  }
  std::cout << json{{"records", recs.size()}, {"survivors", survivors}, {"family", family}, {"mismatched", mismatched}}
                   .dump()
            << "\n";
  if (out_path.empty() && json_path.empty()) lfk::write_csv(std::cout, recs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link Floer homology of L-space links from Alexander polynomials"};
  app.require_subcommand(1);

  LinkInput alex_in, check_in, tgraph_in, hfl_in;
  auto* alex = app.add_subcommand("alex", "Alexander polynomial and P of a 2-bridge link");
  alex_in.add(alex, false);
  auto* check = app.add_subcommand("check", "Alexander polynomial conditions for L-space links");
  check_in.add(check, true);
  auto* tgraph = app.add_subcommand("tgraph", "edge labels and gradings as JSON");
  tgraph_in.add(tgraph, true);
  auto* hfl = app.add_subcommand("hfl", "HFL^- table as JSON");
  hfl_in.add(hfl, true);

  int cube_n = 0, cube_origin = 0;
  std::string cube_labels;
  std::vector<std::string> cube_edges;
  bool cube_oracle = false;
  auto* cube = app.add_subcommand("cube", "corner homology of a labelled cube");
  cube->add_option("--n", cube_n, "dimension")->required()->check(CLI::Range(1, 4));
  cube->add_option("--labels", cube_labels, "all0 or all1");
  cube->add_option("--edge", cube_edges, "edge label such as 00->10:1");
  cube->add_option("--origin", cube_origin, "grading at the origin")->required();
  cube->add_flag("--oracle", cube_oracle, "use the free-realization oracle");

  long max_alpha = 0;
  std::string out_path, json_path;
  auto* cls = app.add_subcommand("classify", "sweep 2-bridge links");
  cls->add_option("--max-alpha", max_alpha, "largest alpha")->required();
  cls->add_option("--out", out_path, "CSV output");
  cls->add_option("--json", json_path, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const int margin = margin_from_env();
    if (*alex) return cmd_alex(alex_in);
    if (*check) return cmd_check(check_in, margin);
    if (*tgraph) return cmd_floer(tgraph_in, margin, false);
    if (*hfl) return cmd_floer(hfl_in, margin, true);
    if (*cube) return cmd_cube(cube_n, cube_labels, cube_edges, cube_origin, cube_oracle);
    if (*cls) return cmd_classify(max_alpha, out_path, json_path, margin);
  } catch (const lfk::error& e) {
    if (usage_codes(e.code()) == 1) {
      std::cerr << "lfk: " << e.what() << "\n";
      return 1;
    }
    return reject(std::string(lfk::errc_name(e.code())), strip_name(e));
  }
  return 1;
}
