#pragma once

// Tanner graph of a binary LDPC code: variable nodes and check nodes in
// separate dense id spaces, alist I/O, odd-neighbourhood computation and a
// spatially coupled code generator.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace trapgraph {

using VarId = std::uint32_t;
using CheckId = std::uint32_t;

/// Dense bitset over variable ids (or check ids); the bitset size is the id
/// space size.
using VarSet = boost::dynamic_bitset<>;
using CheckSet = boost::dynamic_bitset<>;

/// Error raised by the text readers. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TannerGraph {
 public:
  TannerGraph() = default;

  /// Builds the graph from per-check neighbour lists. Lists are sorted here;
  /// duplicates and out-of-range variables are rejected.
  TannerGraph(std::size_t n_var, std::vector<std::vector<VarId>> check_adj)
      : n_var_(n_var), check_adj_(std::move(check_adj)), var_adj_(n_var) {
    for (CheckId c = 0; c < check_adj_.size(); ++c) {
      auto& row = check_adj_[c];
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end())
        throw std::invalid_argument("parallel edge at check " + std::to_string(c));
      for (VarId v : row) {
        if (v >= n_var_)
          throw std::out_of_range("variable id " + std::to_string(v) + " out of range");
        var_adj_[v].push_back(c);
      }
    }
  }

  static TannerGraph from_edges(std::size_t n_var, std::size_t n_chk,
                                std::span<const std::pair<VarId, CheckId>> edges) {
    std::vector<std::vector<VarId>> rows(n_chk);
    for (auto [v, c] : edges) {
      if (c >= n_chk) throw std::out_of_range("check id " + std::to_string(c) + " out of range");
      rows[c].push_back(v);
    }
    return TannerGraph(n_var, std::move(rows));
  }

  /// Dense 0/1 matrix, rows are checks.
  static TannerGraph from_dense(const std::vector<std::vector<int>>& h) {
    std::size_t n = h.empty() ? 0 : h.front().size();
    std::vector<std::vector<VarId>> rows(h.size());
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (h[c].size() != n) throw std::invalid_argument("ragged parity-check matrix");
      for (std::size_t v = 0; v < n; ++v)
        if (h[c][v] != 0) rows[c].push_back(static_cast<VarId>(v));
    }
    return TannerGraph(n, std::move(rows));
  }

  std::size_t n_var() const noexcept { return n_var_; }
  std::size_t n_chk() const noexcept { return check_adj_.size(); }
  std::size_t num_nodes() const noexcept { return n_var() + n_chk(); }

  std::span<const VarId> check_neighbors(CheckId c) const { return check_adj_.at(c); }
  std::span<const CheckId> var_neighbors(VarId v) const { return var_adj_.at(v); }

  std::size_t num_edges() const noexcept {
    std::size_t e = 0;
    for (const auto& row : check_adj_) e += row.size();
    return e;
  }

  bool adjacent(VarId v, CheckId c) const {
    const auto& row = check_adj_.at(c);
    return std::binary_search(row.begin(), row.end(), v);
  }

  VarSet empty_var_set() const { return VarSet(n_var_); }
  CheckSet empty_check_set() const { return CheckSet(n_chk()); }

  friend bool operator==(const TannerGraph& a, const TannerGraph& b) {
    return a.n_var_ == b.n_var_ && a.check_adj_ == b.check_adj_;
  }

 private:
  std::size_t n_var_ = 0;
  std::vector<std::vector<VarId>> check_adj_;
  std::vector<std::vector<CheckId>> var_adj_;
};

/// Checks with an odd number of neighbours in `s`.
inline CheckSet gamma_odd(const TannerGraph& g, const VarSet& s) {
  if (s.size() != g.n_var()) throw std::out_of_range("variable set size does not match graph");
  CheckSet odd(g.n_chk());
  for (auto v = s.find_first(); v != VarSet::npos; v = s.find_next(v))
    for (CheckId c : g.var_neighbors(static_cast<VarId>(v))) odd.flip(c);
  return odd;
}

/// gamma_odd intersected with `restrict_to`.
inline CheckSet gamma_odd(const TannerGraph& g, const VarSet& s, const CheckSet& restrict_to) {
  if (restrict_to.size() != g.n_chk())
    throw std::out_of_range("check set size does not match graph");
  return gamma_odd(g, s) & restrict_to;
}

struct EdgeParity {
  std::size_t count = 0;
  bool odd = false;
};

/// Number of edges between check `c` and the variables in `q`.
inline EdgeParity edge_count_parity(const TannerGraph& g, CheckId c, const VarSet& q) {
  if (c >= g.n_chk()) throw std::out_of_range("check id " + std::to_string(c) + " out of range");
  if (q.size() != g.n_var()) throw std::out_of_range("variable set size does not match graph");
  EdgeParity p;
  for (VarId v : g.check_neighbors(c)) p.count += q.test(v) ? 1 : 0;
  p.odd = (p.count % 2) == 1;
  return p;
}

// --- alist ----------------------------------------------------------------

namespace detail {

inline std::vector<long long> read_ints(const std::string& line, std::size_t lineno) {
  std::istringstream in(line);
  std::vector<long long> out;
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    long long x = 0;
    try {
      x = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected integer, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(lineno, "expected integer, got '" + tok + "'");
    out.push_back(x);
  }
  return out;
}

}  // namespace detail

/// Reads the MacKay alist format. Zero padding in the neighbour lists is
/// accepted and dropped.
inline TannerGraph parse_alist(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }

  std::size_t next = 0;
  auto take = [&](const char* what) -> std::pair<std::size_t, std::vector<long long>> {
    if (next >= lines.size()) throw ParseError(next + 1, std::string("unexpected end of input, expected ") + what);
    std::size_t lineno = next + 1;
    return {lineno, detail::read_ints(lines[next++], lineno)};
  };

  auto [l1, dims] = take("'n m' header");
  if (dims.size() != 2 || dims[0] < 0 || dims[1] < 0) throw ParseError(l1, "malformed header, expected 'n m'");
  const auto n = static_cast<std::size_t>(dims[0]);
  const auto m = static_cast<std::size_t>(dims[1]);

  auto [l2, maxes] = take("max degree line");
  if (maxes.size() != 2 || maxes[0] < 0 || maxes[1] < 0)
    throw ParseError(l2, "malformed header, expected 'max_col_degree max_row_degree'");

  auto read_degrees = [&](std::size_t count, long long max_deg, const char* what) {
    auto [ln, degs] = take(what);
    if (degs.size() != count)
      throw ParseError(ln, std::string("degree mismatch: expected ") + std::to_string(count) + " " + what);
    long long actual_max = 0;
    for (long long d : degs) {
      if (d < 0) throw ParseError(ln, "negative degree");
      actual_max = std::max(actual_max, d);
    }
    if (actual_max != max_deg)
      throw ParseError(ln, "degree mismatch: declared maximum " + std::to_string(max_deg) +
                               " but largest degree is " + std::to_string(actual_max));
    return degs;
  };
  auto col_deg = read_degrees(n, maxes[0], "column degrees");
  auto row_deg = read_degrees(m, maxes[1], "row degrees");

  auto read_lists = [&](std::size_t count, const std::vector<long long>& degs, std::size_t limit,
                        const char* what) {
    std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> lists;
    for (std::size_t i = 0; i < count; ++i) {
      auto [ln, ids] = take(what);
      std::vector<std::uint32_t> list;
      for (long long id : ids) {
        if (id == 0) continue;
        if (id < 0 || static_cast<std::size_t>(id) > limit)
          throw ParseError(ln, "index out of range: " + std::to_string(id));
        list.push_back(static_cast<std::uint32_t>(id - 1));
      }
      if (static_cast<long long>(list.size()) != degs[i])
        throw ParseError(ln, "degree mismatch: declared " + std::to_string(degs[i]) + ", listed " +
                                 std::to_string(list.size()));
      std::sort(list.begin(), list.end());
      if (std::adjacent_find(list.begin(), list.end()) != list.end())
        throw ParseError(ln, "duplicate index");
      lists.emplace_back(ln, std::move(list));
    }
    return lists;
  };
  auto cols = read_lists(n, col_deg, m, "column list");
  auto rows = read_lists(m, row_deg, n, "row list");
  for (; next < lines.size(); ++next)
    if (lines[next].find_first_not_of(" \t") != std::string::npos)
      throw ParseError(next + 1, "trailing content after row lists");

  std::vector<std::vector<VarId>> from_cols(m);
  for (std::size_t v = 0; v < n; ++v)
    for (auto c : cols[v].second) from_cols[c].push_back(static_cast<VarId>(v));
  for (std::size_t c = 0; c < m; ++c)
    if (from_cols[c] != rows[c].second)
      throw ParseError(rows[c].first, "row list of check " + std::to_string(c + 1) +
                                          " is inconsistent with the column lists");

  std::vector<std::vector<VarId>> adj(m);
  for (std::size_t c = 0; c < m; ++c) adj[c] = std::move(rows[c].second);
  return TannerGraph(n, std::move(adj));
}

inline TannerGraph parse_alist(const std::string& text) {
  std::istringstream in(text);
  return parse_alist(in);
}

/// Canonical alist: sorted neighbour lists, no zero padding.
inline std::string serialize_alist(const TannerGraph& g) {
  std::ostringstream out;
  std::size_t max_col = 0, max_row = 0;
  for (VarId v = 0; v < g.n_var(); ++v) max_col = std::max(max_col, g.var_neighbors(v).size());
  for (CheckId c = 0; c < g.n_chk(); ++c) max_row = std::max(max_row, g.check_neighbors(c).size());

  auto write_list = [&out](auto&& range, std::size_t offset) {
    bool first = true;
    for (auto x : range) {
      if (!first) out << ' ';
      out << (static_cast<std::size_t>(x) + offset);
      first = false;
    }
    out << '\n';
  };
  out << g.n_var() << ' ' << g.n_chk() << '\n' << max_col << ' ' << max_row << '\n';
  std::vector<std::size_t> col_deg, row_deg;
  for (VarId v = 0; v < g.n_var(); ++v) col_deg.push_back(g.var_neighbors(v).size());
  for (CheckId c = 0; c < g.n_chk(); ++c) row_deg.push_back(g.check_neighbors(c).size());
  write_list(col_deg, 0);
  write_list(row_deg, 0);
  for (VarId v = 0; v < g.n_var(); ++v) write_list(g.var_neighbors(v), 1);
  for (CheckId c = 0; c < g.n_chk(); ++c) write_list(g.check_neighbors(c), 1);
  return out.str();
}

// --- spatially coupled codes ------------------------------------------------

struct ScLdpcParams {
  std::size_t base_rows = 3;
  std::size_t base_cols = 4;
  std::size_t coupling_len = 10;
  std::size_t coupling_width = 2;
  std::size_t var_degree = 3;
  std::uint64_t seed = 0;

  std::size_t n_var() const { return base_cols * coupling_len; }
  std::size_t n_chk() const { return base_rows * (coupling_len + coupling_width - 1); }
  std::size_t check_blocks() const { return coupling_len + coupling_width - 1; }

  /// Throws std::invalid_argument when the parameters are unusable.
  void check() const {
    if (base_rows < 1 || base_cols < 1 || coupling_len < 1 || coupling_width < 1)
      throw std::invalid_argument("base dimensions, coupling length and width must be >= 1");
    if (var_degree > base_rows * coupling_width)
      throw std::invalid_argument("variable degree " + std::to_string(var_degree) +
                                  " exceeds the " + std::to_string(base_rows * coupling_width) +
                                  " checks available to each variable");
  }
};

namespace detail {

// Unbiased draw in [0, bound) from the raw engine output, so the generated
// code does not depend on the standard library's distribution implementation.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace detail

/// Variable j of block t connects to `var_degree` distinct checks drawn
/// uniformly from check blocks t..t+w-1.
inline TannerGraph generate_sc_ldpc(const ScLdpcParams& p) {
  p.check();
  std::mt19937_64 rng(p.seed);
  const std::size_t window = p.base_rows * p.coupling_width;
  std::vector<std::vector<VarId>> rows(p.n_chk());
  std::vector<std::size_t> slots(window);
  for (std::size_t block = 0; block < p.coupling_len; ++block) {
    for (std::size_t j = 0; j < p.base_cols; ++j) {
      const auto v = static_cast<VarId>(block * p.base_cols + j);
      for (std::size_t i = 0; i < window; ++i) slots[i] = i;
      // partial Fisher-Yates
      for (std::size_t i = 0; i < p.var_degree; ++i) {
        auto k = i + detail::bounded_draw(rng, window - i);
        std::swap(slots[i], slots[k]);
        rows[block * p.base_rows + slots[i]].push_back(v);
      }
    }
  }
  return TannerGraph(p.n_var(), std::move(rows));
}

}  // namespace trapgraph
