#pragma once

// Machine-readable analysis reports ("schema": "trapgraph/1") and JSON views
// of DP tables and oracle records.

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trapgraph/decomp.hpp"
#include "trapgraph/dp.hpp"
#include "trapgraph/oracle.hpp"
#include "trapgraph/tanner.hpp"
#include "trapgraph/witness.hpp"

namespace trapgraph {

inline constexpr const char* kReportSchema = "trapgraph/1";

struct OracleCheck {
  std::optional<std::size_t> a_min;
  std::optional<Count> count;
  bool agrees = false;
};

struct BResult {
  unsigned b = 0;
  std::optional<std::uint32_t> a_min;
  std::optional<Count> count;
  std::optional<std::vector<VarId>> witness;
  std::optional<double> wall_ms;
  std::optional<OracleCheck> oracle;
};

struct AnalysisReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::string source;
  std::optional<ScLdpcParams> params;
  std::string decomposition_source;
  long width = -1;
  std::map<NiceKind, std::size_t> node_kinds;
  std::vector<BResult> results;

  bool oracle_mismatch() const {
    for (const auto& r : results)
      if (r.oracle && !r.oracle->agrees) return true;
    return false;
  }
};

struct AnalyzeOptions {
  std::vector<unsigned> bs{0};
  bool witness = false;
  bool timing = true;
  /// Cross-check against exhaustive search when n_var <= this bound.
  std::optional<std::size_t> oracle_max_vars;
  OracleOptions oracle;
};

inline AnalysisReport analyze(const TannerGraph& g, const NiceTreeDecomposition& ntd, const AnalyzeOptions& opt) {
  AnalysisReport rep;
  rep.n = g.n_var();
  rep.m = g.n_chk();
  rep.width = ntd.width();
  rep.node_kinds = ntd.kind_counts();
  for (unsigned b : opt.bs) {
    BResult r;
    r.b = b;
    const auto start = std::chrono::steady_clock::now();
    auto dp = run_dp(g, ntd, b, opt.witness);
    if (dp.spectrum) {
      r.a_min = dp.spectrum->a_min;
      r.count = dp.spectrum->count;
      if (opt.witness) r.witness = extract_witness(g, ntd, b, *dp.tables).members;
    }
    const auto stop = std::chrono::steady_clock::now();
    if (opt.timing) r.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (opt.oracle_max_vars && g.n_var() <= *opt.oracle_max_vars) {
      OracleCheck check;
      if (auto s = brute_force_spectrum(g, b, g.n_var(), opt.oracle)) {
        check.a_min = s->a_min;
        check.count = s->count;
      }
      check.agrees = check.a_min == (r.a_min ? std::optional<std::size_t>(*r.a_min) : std::nullopt) &&
                     check.count == r.count;
      r.oracle = std::move(check);
    }
    rep.results.push_back(std::move(r));
  }
  return rep;
}

// --- JSON ---------------------------------------------------------------------------

inline nlohmann::json params_json(const ScLdpcParams& p) {
  return {{"base_rows", p.base_rows},       {"base_cols", p.base_cols}, {"coupling_len", p.coupling_len},
          {"coupling_width", p.coupling_width}, {"var_degree", p.var_degree}, {"seed", p.seed}};
}

inline nlohmann::json to_json(const AnalysisReport& rep) {
  using nlohmann::json;
  json kinds = json::object();
  for (const auto& [k, n] : rep.node_kinds) kinds[to_string(k)] = n;
  json results = json::array();
  for (const auto& r : rep.results) {
    json jr = {{"b", r.b},
               {"a_min", r.a_min ? json(*r.a_min) : json(nullptr)},
               {"count", r.count ? json(r.count->str()) : json(nullptr)}};
    if (r.witness) jr["witness"] = *r.witness;
    if (r.wall_ms) jr["wall_ms"] = *r.wall_ms;
    if (r.oracle)
      jr["oracle"] = {{"a_min", r.oracle->a_min ? json(*r.oracle->a_min) : json(nullptr)},
                      {"count", r.oracle->count ? json(r.oracle->count->str()) : json(nullptr)},
                      {"agrees", r.oracle->agrees}};
    results.push_back(std::move(jr));
  }
  return {{"schema", kReportSchema},
          {"code", {{"n", rep.n}, {"m", rep.m}, {"source", rep.source},
                    {"params", rep.params ? params_json(*rep.params) : json(nullptr)}}},
          {"decomposition", {{"source", rep.decomposition_source}, {"width", rep.width}, {"nodes", kinds}}},
          {"results", results}};
}

/// Inverse of to_json for the fields that carry results.
inline AnalysisReport report_from_json(const nlohmann::json& j) {
  if (j.at("schema") != kReportSchema) throw std::invalid_argument("unsupported report schema");
  AnalysisReport rep;
  const auto& code = j.at("code");
  rep.n = code.at("n");
  rep.m = code.at("m");
  rep.source = code.at("source");
  if (!code.at("params").is_null()) {
    const auto& p = code["params"];
    rep.params = ScLdpcParams{p.at("base_rows"), p.at("base_cols"), p.at("coupling_len"),
                              p.at("coupling_width"), p.at("var_degree"), p.at("seed")};
  }
  const auto& d = j.at("decomposition");
  rep.decomposition_source = d.at("source");
  rep.width = d.at("width");
  for (auto k : {NiceKind::Leaf, NiceKind::IntroduceVar, NiceKind::ForgetVar, NiceKind::IntroduceChk,
                 NiceKind::ForgetChk, NiceKind::Join})
    if (d.at("nodes").contains(to_string(k))) rep.node_kinds[k] = d["nodes"][to_string(k)];
  for (const auto& jr : j.at("results")) {
    BResult r;
    r.b = jr.at("b");
    if (!jr.at("a_min").is_null()) r.a_min = jr["a_min"].get<std::uint32_t>();
    if (!jr.at("count").is_null()) r.count = Count(jr["count"].get<std::string>());
    if (jr.contains("witness")) r.witness = jr["witness"].get<std::vector<VarId>>();
    if (jr.contains("wall_ms")) r.wall_ms = jr["wall_ms"].get<double>();
    if (jr.contains("oracle")) {
      const auto& o = jr["oracle"];
      OracleCheck c;
      if (!o.at("a_min").is_null()) c.a_min = o["a_min"].get<std::size_t>();
      if (!o.at("count").is_null()) c.count = Count(o["count"].get<std::string>());
      c.agrees = o.at("agrees");
      r.oracle = std::move(c);
    }
    rep.results.push_back(std::move(r));
  }
  return rep;
}

inline std::string to_text(const AnalysisReport& rep) {
  std::ostringstream out;
  out << "code: n=" << rep.n << " m=" << rep.m;
  if (!rep.source.empty()) out << " (" << rep.source << ")";
  out << "\ndecomposition: " << rep.decomposition_source << ", width " << rep.width << "\n";
  for (const auto& r : rep.results) {
    out << "b=" << r.b << ": ";
    if (r.a_min)
      out << "a_min=" << *r.a_min << " count=" << r.count->str();
    else
      out << "no trapping set";
    if (r.witness) {
      out << " witness={";
      for (std::size_t i = 0; i < r.witness->size(); ++i) out << (i ? "," : "") << (*r.witness)[i];
      out << "}";
    }
    if (r.wall_ms) out << " (" << *r.wall_ms << " ms)";
    if (r.oracle) {
      out << " oracle: ";
      if (r.oracle->a_min)
        out << "a_min=" << *r.oracle->a_min << " count=" << r.oracle->count->str();
      else
        out << "none";
      out << (r.oracle->agrees ? " [agrees]" : " [MISMATCH]");
    }
    out << "\n";
  }
  return out.str();
}

/// Debug dump with entries ordered by their global-id key lists.
inline nlohmann::json to_json(const DPTable& t) {
  using nlohmann::json;
  std::vector<json> entries;
  for (const auto& [k, e] : t.entries)
    entries.push_back({{"I", odd_checks(t, k)},
                       {"Q", member_vars(t, k)},
                       {"d", k.forgotten},
                       {"f", e.size},
                       {"g", e.count.str()}});
  std::sort(entries.begin(), entries.end(), [](const json& a, const json& b) {
    return std::tie(a["I"], a["Q"], a["d"]) < std::tie(b["I"], b["Q"], b["d"]);
  });
  return {{"bag_v", t.bag_v}, {"bag_c", t.bag_c}, {"entries", entries}};
}

inline nlohmann::json to_json(const std::vector<TrappingSetRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) out.push_back({{"a", r.a}, {"b", r.b}, {"members", r.members}});
  return out;
}

}  // namespace trapgraph
