#pragma once

// Sweep over 2-bridge links b(alpha, beta) running the necessary conditions for
// being an L-space link, one representative per equivalence class.

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfk/bridge.hpp"
#include "lfk/error.hpp"
#include "lfk/floer.hpp"
#include "lfk/lspace.hpp"

namespace lfk {

struct Verdict {
  std::string status;  // pass / fail / skipped, or ok / an error name for tgraph
  std::string reason;

  bool passed() const { return status == "pass" || status == "ok"; }

  std::string str() const { return reason.empty() ? status : status + ": " + reason; }

  static Verdict parse(const std::string& cell) {
    auto pos = cell.find(": ");
    if (pos == std::string::npos) return {cell, ""};
    return {cell.substr(0, pos), cell.substr(pos + 2)};
  }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct SweepRecord {
  long alpha = 0;
  long beta = 0;
  EvenExpansion expansion;
  Verdict cor_alex2;
  Verdict tgraph;
  Verdict sigma_cross;
  bool family_member = false;
  std::string class_id;

  bool survivor() const { return cor_alex2.passed() && tgraph.passed() && sigma_cross.passed(); }

  friend bool operator==(const SweepRecord& a, const SweepRecord& b) {
    return a.alpha == b.alpha && a.beta == b.beta && a.expansion.p == b.expansion.p &&
           a.expansion.q == b.expansion.q && a.cor_alex2 == b.cor_alex2 && a.tgraph == b.tgraph &&
           a.sigma_cross == b.sigma_cross && a.family_member == b.family_member && a.class_id == b.class_id;
  }
};

// Smallest beta in [0, 2 alpha) equivalent to L when one component may be reversed.
inline long class_representative_beta(const TwoBridge& L) {
  const long m = 2 * L.alpha;
  for (long b = 1; b < m; b += 2) {
    if (std::gcd(b, L.alpha) != 1) continue;
    if (equivalent(L, TwoBridge::make(L.alpha, b), true)) return b;
  }
  throw error(errc::invalid_link, "no representative for " + L.str());
}

inline std::string class_id(const TwoBridge& L) {
  return std::to_string(L.alpha) + ":" + std::to_string(class_representative_beta(L));
}

// One link per class, alpha ascending, then by representative beta.
inline std::vector<TwoBridge> class_representatives(long max_alpha) {
  std::vector<TwoBridge> out;
  for (long a = 2; a <= max_alpha; a += 2)
    for (long b = 1; b < 2 * a; b += 2) {
      if (std::gcd(a, b) != 1) continue;
      TwoBridge L = TwoBridge::make(a, b);
      if (class_representative_beta(L) == b) out.push_back(L);
    }
  return out;
}

// Equivalent, with orientation reversal, to b(qk - 1, -k) for odd positive q, k.
inline bool family_member(const TwoBridge& L) {
  for (long k = 1; k <= L.alpha + 1; k += 2) {
    if ((L.alpha + 1) % k != 0) continue;
    if (((L.alpha + 1) / k) % 2 == 0) continue;
    if (equivalent(L, TwoBridge::make(L.alpha, -k), true)) return true;
  }
  return false;
}

inline SweepRecord sweep_one(const TwoBridge& L, const TGraphOptions& opt = {}) {
  SweepRecord r;
  r.alpha = L.alpha;
  r.beta = L.beta;
  r.expansion = even_expansion(L);
  r.family_member = family_member(L);
  r.class_id = class_id(L);
  const LinkProfile prof = profile_from_two_bridge(L);

  CorollaryReport cor = cor_alex2_check_any_sign(prof);
  if (!cor.ok) {
    r.cor_alex2 = {"fail", cor.reason};
    r.tgraph = {"skipped", ""};
    r.sigma_cross = {"skipped", ""};
    return r;
  }
  r.cor_alex2 = {"pass", ""};

  std::optional<FloerResult> floer;
  try {
    floer = compute_floer(prof, opt);
    r.tgraph = {"ok", ""};
  } catch (const error& e) {
    std::string what = e.what();
    const std::string prefix = std::string(errc_name(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
    r.tgraph = {std::string(errc_name(e.code())), what};
    r.sigma_cross = {"skipped", ""};
    return r;
  }

  int sigma = 0;
  try {
    sigma = signature(L);
  } catch (const error& e) {
    r.sigma_cross = {"skipped", "no signature formula for " + L.str()};
    return r;
  }
  CrossReport cross = alternating_cross_check(*floer, sigma);
  if (cross.ok())
    r.sigma_cross = {"pass", ""};
  else
    r.sigma_cross = {"fail", cross.mismatches.front().str()};
  return r;
}

inline std::vector<SweepRecord> classify(long max_alpha, const TGraphOptions& opt = {}) {
  if (max_alpha < 2) throw error(errc::invalid_argument, "max_alpha must be at least 2");
  std::vector<SweepRecord> out;
  for (const TwoBridge& L : class_representatives(max_alpha)) out.push_back(sweep_one(L, opt));
  return out;
}

// ---- CSV and JSON ----------------------------------------------------------

inline const char* kSweepHeader = "alpha,beta,p,q,cor_alex2,tgraph,sigma_cross,family,class_id";

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  if (quoted) throw error(errc::parse_error, "unterminated quote in CSV line");
  return cells;
}

inline std::string join_longs(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

inline std::vector<long> split_longs(const std::string& s) {
  std::vector<long> out;
  if (s.empty()) return out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ';')) out.push_back(parse_long(item));
  return out;
}

}  // namespace detail

inline void write_csv(std::ostream& out, const std::vector<SweepRecord>& recs) {
  out << kSweepHeader << "\n";
  for (const auto& r : recs) {
    out << r.alpha << "," << r.beta << "," << detail::join_longs(r.expansion.p) << ","
        << detail::join_longs(r.expansion.q) << "," << detail::csv_cell(r.cor_alex2.str()) << ","
        << detail::csv_cell(r.tgraph.str()) << "," << detail::csv_cell(r.sigma_cross.str()) << ","
        << (r.family_member ? "true" : "false") << "," << detail::csv_cell(r.class_id) << "\n";
  }
}

inline std::vector<SweepRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) throw error(errc::parse_error, "unexpected CSV header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = detail::csv_split(line);
    if (c.size() != 9) throw error(errc::parse_error, "expected 9 CSV fields, got " + std::to_string(c.size()));
    SweepRecord r;
    r.alpha = detail::parse_long(c[0]);
    r.beta = detail::parse_long(c[1]);
    r.expansion.p = detail::split_longs(c[2]);
    r.expansion.q = detail::split_longs(c[3]);
    r.cor_alex2 = Verdict::parse(c[4]);
    r.tgraph = Verdict::parse(c[5]);
    r.sigma_cross = Verdict::parse(c[6]);
    if (c[7] != "true" && c[7] != "false") throw error(errc::parse_error, "family must be true or false");
    r.family_member = c[7] == "true";
    r.class_id = c[8];
    out.push_back(r);
  }
  return out;
}

inline nlohmann::json to_json(const Verdict& v) { return {{"status", v.status}, {"reason", v.reason}}; }

inline nlohmann::json to_json(const SweepRecord& r) {
  return {{"alpha", r.alpha},
          {"beta", r.beta},
          {"expansion", {{"p", r.expansion.p}, {"q", r.expansion.q}}},
          {"verdicts",
           {{"cor_alex2", to_json(r.cor_alex2)}, {"tgraph", to_json(r.tgraph)}, {"sigma_cross", to_json(r.sigma_cross)}}},
          {"family_member", r.family_member},
          {"class_id", r.class_id}};
}

inline SweepRecord sweep_record_from_json(const nlohmann::json& j) {
  try {
    SweepRecord r;
    r.alpha = j.at("alpha").get<long>();
    r.beta = j.at("beta").get<long>();
    r.expansion.p = j.at("expansion").at("p").get<std::vector<long>>();
    r.expansion.q = j.at("expansion").at("q").get<std::vector<long>>();
    auto verdict = [&](const char* key) {
      const auto& v = j.at("verdicts").at(key);
      return Verdict{v.at("status").get<std::string>(), v.at("reason").get<std::string>()};
    };
    r.cor_alex2 = verdict("cor_alex2");
    r.tgraph = verdict("tgraph");
    r.sigma_cross = verdict("sigma_cross");
    r.family_member = j.at("family_member").get<bool>();
    r.class_id = j.at("class_id").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::parse_error, e.what());
  }
}

}  // namespace lfk
