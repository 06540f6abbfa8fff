// trapgraph: smallest (a,b)-trapping sets of LDPC codes via tree
// decompositions.
//
//   trapgraph analyze  --alist H.alist [--td T.td | --sc-params r,c,L,w | --heuristic] --b 0,1 [--witness]
//   trapgraph generate --sc r,c,L,w --deg D --seed S --out H.alist [--emit-td T.td]
//   trapgraph brute    --alist H.alist --a-max A --b B [--limit W]
//   trapgraph decomp   validate|nice|heuristic --alist H.alist [--td T.td] [--out F]
//
// Exit codes: 0 success, 1 input or usage error, 2 validation or oracle
// mismatch, 3 work limit exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trapgraph/trapgraph.hpp"

namespace {

using namespace trapgraph;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitWorkLimit = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

TannerGraph load_alist(const std::string& path) {
  try {
    return parse_alist(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

TreeDecomposition load_td(const std::string& path) {
  try {
    return parse_td(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

ScLdpcParams parse_sc(const std::vector<std::size_t>& v) {
  if (v.size() != 4) throw std::runtime_error("expected r,c,L,w");
  ScLdpcParams p;
  p.base_rows = v[0];
  p.base_cols = v[1];
  p.coupling_len = v[2];
  p.coupling_width = v[3];
  return p;
}

unsigned threads_from_env() {
  const char* s = std::getenv("TRAPGRAPH_THREADS");
  if (!s || !*s) return 1;
  try {
    return static_cast<unsigned>(std::stoul(s));
  } catch (const std::exception&) {
    throw std::runtime_error("TRAPGRAPH_THREADS must be a non-negative integer");
  }
}

struct AnalyzeArgs {
  std::string alist, td, out;
  std::vector<std::size_t> sc;
  bool heuristic = false;
  std::vector<unsigned> bs{0};
  bool witness = false;
  bool text = false;
  bool no_timing = false;
  std::optional<std::size_t> oracle_max;
  std::uint64_t oracle_limit = OracleOptions{}.work_limit;
};

int run_analyze(const AnalyzeArgs& a) {
  auto g = load_alist(a.alist);
  TreeDecomposition td;
  AnalysisReport meta;
  std::optional<ScLdpcParams> params;
  if (!a.td.empty()) {
    td = load_td(a.td);
    meta.decomposition_source = "td:" + a.td;
  } else if (!a.sc.empty()) {
    params = parse_sc(a.sc);
    params->var_degree = 0;
    td = sc_path_decomposition(g, *params);
    meta.decomposition_source = "sc-path";
  } else {
    td = heuristic_decomposition(g);
    meta.decomposition_source = "heuristic";
  }
  if (auto rep = validate(g, td); !rep.valid()) {
    for (const auto& v : rep.violations) std::cerr << "invalid decomposition: " << v.message << "\n";
    return kExitInput;
  }
  auto ntd = make_nice(g, td);

  AnalyzeOptions opt;
  opt.bs = a.bs;
  opt.witness = a.witness;
  opt.timing = !a.no_timing;
  opt.oracle_max_vars = a.oracle_max;
  opt.oracle.work_limit = a.oracle_limit;
  opt.oracle.threads = threads_from_env();
  auto rep = analyze(g, ntd, opt);
  rep.source = a.alist;
  rep.params = params;
  rep.decomposition_source = meta.decomposition_source;

  write_output(a.out, a.text ? to_text(rep) : to_json(rep).dump(2) + "\n");
  if (rep.oracle_mismatch()) {
    for (const auto& r : rep.results)
      if (r.oracle && !r.oracle->agrees)
        std::cerr << "oracle mismatch at b=" << r.b << ": dp "
                  << (r.a_min ? std::to_string(*r.a_min) + "/" + r.count->str() : std::string("none")) << ", oracle "
                  << (r.oracle->a_min ? std::to_string(*r.oracle->a_min) + "/" + r.oracle->count->str()
                                      : std::string("none"))
                  << "\n";
    return kExitMismatch;
  }
  return kExitOk;
}

struct GenerateArgs {
  std::vector<std::size_t> sc;
  std::size_t deg = 3;
  std::uint64_t seed = 0;
  std::string out, emit_td;
};

int run_generate(const GenerateArgs& a) {
  auto p = parse_sc(a.sc);
  p.var_degree = a.deg;
  p.seed = a.seed;
  if (p.coupling_width > p.coupling_len)
    std::cerr << "warning: coupling width " << p.coupling_width << " exceeds coupling length " << p.coupling_len
              << "\n";
  auto g = generate_sc_ldpc(p);
  write_output(a.out, serialize_alist(g));
  if (!a.emit_td.empty()) {
    auto td = sc_path_decomposition(g, p);
    write_output(a.emit_td, serialize_td(td));
    std::cerr << "path decomposition: " << td.bags.size() << " bags, width " << width(td) << "\n";
  }
  return kExitOk;
}

struct BruteArgs {
  std::string alist, out;
  std::size_t a_max = 0;
  std::size_t b = 0;
  std::uint64_t limit = OracleOptions{}.work_limit;
};

int run_brute(const BruteArgs& a) {
  auto g = load_alist(a.alist);
  OracleOptions opt;
  opt.work_limit = a.limit;
  opt.threads = threads_from_env();
  auto records = brute_force_enumerate(g, a.a_max, a.b, opt);
  write_output(a.out, to_json(records).dump() + "\n");
  return kExitOk;
}

struct DecompArgs {
  std::string action, alist, td, out;
};

int run_decomp(const DecompArgs& a) {
  auto g = load_alist(a.alist);
  if (a.action == "heuristic") {
    auto td = heuristic_decomposition(g);
    write_output(a.out, serialize_td(td));
    std::cerr << "width " << width(td) << "\n";
    return kExitOk;
  }
  if (a.td.empty()) throw std::runtime_error("--td is required for '" + a.action + "'");
  auto td = load_td(a.td);
  auto rep = validate(g, td);
  if (a.action == "validate") {
    std::ostringstream out;
    if (rep.valid()) {
      out << "valid, width " << width(td) << "\n";
    } else {
      for (const auto& v : rep.violations) out << to_string(v.kind) << ": " << v.message << "\n";
    }
    write_output(a.out, out.str());
    return rep.valid() ? kExitOk : kExitMismatch;
  }
  if (!rep.valid()) {
    for (const auto& v : rep.violations) std::cerr << to_string(v.kind) << ": " << v.message << "\n";
    return kExitInput;
  }
  auto ntd = make_nice(g, td);
  write_output(a.out, serialize_td(to_tree_decomposition(g, ntd)));
  std::cerr << "nice decomposition: " << ntd.nodes.size() << " nodes, width " << ntd.width() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smallest (a,b)-trapping sets of LDPC codes via tree decompositions"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "size and number of the smallest trapping sets");
  analyze_cmd->add_option("--alist", an.alist, "parity-check matrix in alist format")->required();
  auto* td_opt = analyze_cmd->add_option("--td", an.td, "tree decomposition in PACE .td format");
  auto* sc_opt = analyze_cmd->add_option("--sc-params", an.sc, "use the sliding-window path decomposition r,c,L,w")
                     ->delimiter(',')
                     ->expected(4);
  auto* heur_opt = analyze_cmd->add_flag("--heuristic", an.heuristic, "min-fill decomposition (default)");
  td_opt->excludes(sc_opt)->excludes(heur_opt);
  sc_opt->excludes(heur_opt);
  analyze_cmd->add_option("--b", an.bs, "comma-separated list of b values")->delimiter(',');
  analyze_cmd->add_flag("--witness", an.witness, "include one smallest trapping set per b");
  auto* json_flag = analyze_cmd->add_flag("--json", "JSON report (default)");
  auto* text_flag = analyze_cmd->add_flag("--text", an.text, "plain-text report");
  json_flag->excludes(text_flag);
  analyze_cmd->add_flag("--no-timing", an.no_timing, "omit wall times so reports are reproducible byte for byte");
  analyze_cmd->add_option("--validate-oracle", an.oracle_max, "cross-check with exhaustive search when n <= N");
  analyze_cmd->add_option("--oracle-limit", an.oracle_limit, "work limit for the exhaustive search");
  analyze_cmd->add_option("--out", an.out, "output file (default stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "random spatially coupled LDPC code");
  gen_cmd->add_option("--sc", gen.sc, "r,c,L,w")->delimiter(',')->expected(4)->required();
  gen_cmd->add_option("--deg", gen.deg, "variable degree");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out, "alist output file")->required();
  gen_cmd->add_option("--emit-td", gen.emit_td, "also write the path decomposition");

  BruteArgs br;
  auto* brute_cmd = app.add_subcommand("brute", "exhaustive trapping-set enumeration");
  brute_cmd->add_option("--alist", br.alist)->required();
  brute_cmd->add_option("--a-max", br.a_max)->required();
  brute_cmd->add_option("--b", br.b)->required();
  brute_cmd->add_option("--limit", br.limit, "maximum number of subsets evaluated");
  brute_cmd->add_option("--out", br.out);

  DecompArgs dc;
  auto* decomp_cmd = app.add_subcommand("decomp", "tree-decomposition utilities");
  decomp_cmd->add_option("action", dc.action, "validate | nice | heuristic")
      ->required()
      ->check(CLI::IsMember({"validate", "nice", "heuristic"}));
  decomp_cmd->add_option("--alist", dc.alist)->required();
  decomp_cmd->add_option("--td", dc.td);
  decomp_cmd->add_option("--out", dc.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*analyze_cmd) return run_analyze(an);
    if (*gen_cmd) return run_generate(gen);
    if (*brute_cmd) return run_brute(br);
    if (*decomp_cmd) return run_decomp(dc);
  } catch (const WorkLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitWorkLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
