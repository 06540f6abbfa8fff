#pragma once

// Test-only helpers: random instances, independent reference computations
// and structural checkers. Nothing here calls into the DP engine.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trapgraph/decomp.hpp"
#include "trapgraph/tanner.hpp"

namespace trapgraph::testing {

using BigCount = boost::multiprecision::cpp_int;

inline TannerGraph hamming74() {
  return TannerGraph::from_dense({{1, 0, 0, 1, 1, 0, 1}, {0, 1, 0, 1, 0, 1, 1}, {0, 0, 1, 0, 1, 1, 1}});
}

inline TannerGraph repetition2() { return TannerGraph::from_dense({{1, 1}}); }

/// Bipartite 6-cycle v0-c0-v1-c1-v2-c2-v0 (treewidth 2).
inline TannerGraph six_cycle() { return TannerGraph::from_dense({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}); }

/// Width-2 path decomposition of six_cycle(); combined ids: v0..v2 = 0..2, c0..c2 = 3..5.
inline TreeDecomposition six_cycle_width2() {
  TreeDecomposition td;
  td.num_graph_nodes = 6;
  td.bags = {{0, 1, 3}, {0, 1, 4}, {0, 2, 4}, {0, 2, 5}};
  td.edges = {{0, 1}, {1, 2}, {2, 3}};
  return td;
}

/// Width-3 decomposition of six_cycle().
inline TreeDecomposition six_cycle_width3() {
  TreeDecomposition td;
  td.num_graph_nodes = 6;
  td.bags = {{0, 1, 3, 4}, {0, 2, 4, 5}};
  td.edges = {{0, 1}};
  return td;
}

/// Random Tanner graph with 1..max_var variables and 0..max_chk checks;
/// each edge present independently with a random density.
inline TannerGraph random_graph(std::mt19937_64& rng, std::size_t max_var, std::size_t max_chk) {
  std::uniform_int_distribution<std::size_t> nv(1, max_var), nc(0, max_chk);
  std::uniform_real_distribution<double> dens(0.1, 0.7), u(0.0, 1.0);
  const std::size_t n = nv(rng), m = nc(rng);
  const double p = dens(rng);
  std::vector<std::vector<VarId>> rows(m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t v = 0; v < n; ++v)
      if (u(rng) < p) rows[c].push_back(static_cast<VarId>(v));
  return TannerGraph(n, std::move(rows));
}

inline VarSet random_var_set(std::mt19937_64& rng, std::size_t n) {
  VarSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1U) s.set(i);
  return s;
}

/// Pads a decomposition with redundant bags: random subsets of a bag hung
/// off it as leaves, or copies of a bag spliced into one of its edges.
inline TreeDecomposition perturb(TreeDecomposition td, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> extra(0, 4);
  for (int i = extra(rng); i > 0; --i) {
    const std::size_t t = rng() % td.bags.size();
    const std::size_t added = td.bags.size();
    auto edge = std::find_if(td.edges.begin(), td.edges.end(), [&](auto e) { return e.first == t || e.second == t; });
    if (edge != td.edges.end() && (rng() & 1U)) {
      const auto other = edge->first == t ? edge->second : edge->first;
      td.bags.push_back(td.bags[t]);
      *edge = {t, added};
      td.edges.emplace_back(added, other);
    } else {
      auto sub = td.bags[t];
      std::erase_if(sub, [&](NodeId) { return (rng() % 3) == 0; });
      td.bags.push_back(std::move(sub));
      td.edges.emplace_back(t, added);
    }
  }
  return td;
}

/// A random valid decomposition: random elimination orders (optionally
/// padded), the min-fill heuristic, or a single bag of everything. The root
/// is randomised.
inline TreeDecomposition random_decomposition(const TannerGraph& g, std::mt19937_64& rng) {
  TreeDecomposition td;
  const int kind = static_cast<int>(rng() % 10);
  if (kind == 0) {
    td.num_graph_nodes = g.num_nodes();
    td.bags.emplace_back(g.num_nodes());
    std::iota(td.bags[0].begin(), td.bags[0].end(), NodeId{0});
  } else if (kind == 1) {
    td = heuristic_decomposition(g);
  } else {
    std::vector<NodeId> order(g.num_nodes());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    td = elimination_decomposition(g, order);
    if (kind >= 7) td = perturb(std::move(td), rng);
  }
  td.root = rng() % td.bags.size();
  return td;
}

// --- GF(2) null space -----------------------------------------------------------

/// All codewords of the code with parity-check matrix g (n_var <= 24),
/// as bitmasks, by enumerating combinations of a null-space basis.
inline std::vector<std::uint32_t> codewords(const TannerGraph& g) {
  const std::size_t n = g.n_var();
  std::vector<std::uint32_t> rows;
  for (CheckId c = 0; c < g.n_chk(); ++c) {
    std::uint32_t r = 0;
    for (VarId v : g.check_neighbors(c)) r |= 1U << v;
    rows.push_back(r);
  }
  // reduced row echelon form
  std::vector<int> pivot_of_col(n, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && !((rows[sel] >> col) & 1U)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && ((rows[r] >> col) & 1U)) rows[r] ^= rows[rank];
    pivot_of_col[col] = static_cast<int>(rank++);
  }
  std::vector<std::uint32_t> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    std::uint32_t x = 1U << free;
    for (std::size_t col = 0; col < n; ++col)
      if (pivot_of_col[col] >= 0 && ((rows[static_cast<std::size_t>(pivot_of_col[col])] >> free) & 1U)) x |= 1U << col;
    basis.push_back(x);
  }
  std::vector<std::uint32_t> words;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << basis.size()); ++m) {
    std::uint32_t w = 0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if ((m >> i) & 1U) w ^= basis[i];
    words.push_back(w);
  }
  return words;
}

/// (minimum weight, multiplicity) over nonzero codewords.
inline std::optional<std::pair<std::size_t, std::size_t>> null_space_min_weight(const TannerGraph& g) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (auto w : codewords(g)) {
    if (w == 0) continue;
    const auto wt = static_cast<std::size_t>(std::popcount(w));
    if (!best || wt < best->first)
      best = {wt, 1};
    else if (wt == best->first)
      ++best->second;
  }
  return best;
}

inline bool is_codeword(const TannerGraph& g, const std::vector<VarId>& support) {
  VarSet s(g.n_var());
  for (auto v : support) s.set(v);
  return gamma_odd(g, s).none();
}

/// Plain 2^n sweep (n_var <= 20): smallest a and count with exactly b odd checks.
inline std::optional<std::pair<std::size_t, std::size_t>> sweep_spectrum(const TannerGraph& g, std::size_t b) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::uint32_t m = 1; m < (1U << g.n_var()); ++m) {
    VarSet s(g.n_var());
    for (std::size_t v = 0; v < g.n_var(); ++v)
      if ((m >> v) & 1U) s.set(v);
    if (gamma_odd(g, s).count() != b) continue;
    const auto a = static_cast<std::size_t>(std::popcount(m));
    if (!best || a < best->first)
      best = {a, 1};
    else if (a == best->first)
      ++best->second;
  }
  return best;
}

// --- d-free reference DP for b = 0 ----------------------------------------------------

/// Minimum distance by a dynamic program keyed on (R, Q) with global-id
/// sets in ordered maps. It shares no code with the engine.
inline std::optional<std::pair<std::size_t, BigCount>> reference_min_distance(const TannerGraph& g,
                                                                              const NiceTreeDecomposition& ntd) {
  using Key = std::pair<std::set<CheckId>, std::set<VarId>>;
  struct Val {
    std::size_t f;
    BigCount g;
  };
  using Table = std::map<Key, Val>;
  auto put = [](Table& t, const Key& k, std::size_t f, const BigCount& c) {
    auto it = t.find(k);
    if (it == t.end())
      t.emplace(k, Val{f, c});
    else if (f < it->second.f)
      it->second = Val{f, c};
    else if (f == it->second.f)
      it->second.g += c;
  };
  std::vector<Table> tables(ntd.nodes.size());
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& n = ntd.nodes[t];
    Table out;
    switch (n.kind) {
      case NiceKind::Leaf: break;
      case NiceKind::IntroduceVar: {
        const VarId v = n.element;
        std::set<CheckId> rv;
        for (CheckId c : g.var_neighbors(v))
          if (std::binary_search(n.bag_c.begin(), n.bag_c.end(), c)) rv.insert(c);
        for (const auto& [k, val] : tables[n.children[0]]) {
          put(out, k, val.f, val.g);
          if (k.first.empty() && k.second.empty()) continue;
          std::set<CheckId> r;
          std::set_symmetric_difference(k.first.begin(), k.first.end(), rv.begin(), rv.end(), std::inserter(r, r.end()));
          auto q = k.second;
          q.insert(v);
          put(out, {r, q}, val.f + 1, val.g);
        }
        out.insert_or_assign(Key{rv, {v}}, Val{1, 1});
        break;
      }
      case NiceKind::ForgetVar:
        for (const auto& [k, val] : tables[n.children[0]]) {
          auto q = k.second;
          q.erase(n.element);
          put(out, {k.first, q}, val.f, val.g);
        }
        break;
      case NiceKind::IntroduceChk:
        for (const auto& [k, val] : tables[n.children[0]]) {
          std::size_t deg = 0;
          for (VarId v : k.second) deg += g.adjacent(v, n.element) ? 1 : 0;
          auto r = k.first;
          if (deg % 2) r.insert(n.element);
          put(out, {r, k.second}, val.f, val.g);
        }
        break;
      case NiceKind::ForgetChk:
        for (const auto& [k, val] : tables[n.children[0]])
          if (!k.first.count(n.element)) put(out, k, val.f, val.g);
        break;
      case NiceKind::Join: {
        const auto& a = tables[n.children[0]];
        const auto& b = tables[n.children[1]];
        for (const auto& [ka, va] : a)
          for (const auto& [kb, vb] : b) {
            if (ka.second != kb.second) continue;
            std::set<CheckId> r;
            std::set_symmetric_difference(ka.first.begin(), ka.first.end(), kb.first.begin(), kb.first.end(),
                                          std::inserter(r, r.end()));
            for (CheckId c : n.bag_c) {
              std::size_t deg = 0;
              for (VarId v : ka.second) deg += g.adjacent(v, c) ? 1 : 0;
              if (deg % 2) {
                if (r.count(c))
                  r.erase(c);
                else
                  r.insert(c);
              }
            }
            put(out, {r, ka.second}, va.f + vb.f - ka.second.size(), va.g * vb.g);
          }
        for (const auto* side : {&a, &b})
          for (const auto& [k, v] : *side)
            if (k.second.empty()) put(out, k, v.f, v.g);
        break;
      }
    }
    tables[t] = std::move(out);
  }
  const auto& root = tables.back();
  auto it = root.find(Key{});
  if (it == root.end()) return std::nullopt;
  return std::make_pair(it->second.f, it->second.g);
}

// --- structural checks ----------------------------------------------------------------

/// Violations of the join separation properties: the bag unions of the two
/// child subtrees intersect exactly in the join bag, and no graph edge runs
/// between their private parts.
inline std::vector<std::string> join_separation_violations(const TannerGraph& g, const NiceTreeDecomposition& ntd) {
  const std::size_t nn = g.num_nodes();
  std::vector<boost::dynamic_bitset<>> below(ntd.nodes.size(), boost::dynamic_bitset<>(nn));
  auto bag_of = [&](const NiceNode& n) {
    boost::dynamic_bitset<> s(nn);
    for (VarId v : n.bag_v) s.set(v);
    for (CheckId c : n.bag_c) s.set(g.n_var() + c);
    return s;
  };
  std::vector<std::string> out;
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& n = ntd.nodes[t];
    below[t] = bag_of(n);
    for (auto ch : n.children) below[t] |= below[ch];
    if (n.kind != NiceKind::Join) continue;
    const auto bag = bag_of(n);
    const auto& l = below[n.children[0]];
    const auto& r = below[n.children[1]];
    if ((l & r) != bag) out.push_back("join " + std::to_string(t) + ": subtree intersection differs from bag");
    const auto lp = l - bag, rp = r - bag;
    for (CheckId c = 0; c < g.n_chk(); ++c)
      for (VarId v : g.check_neighbors(c)) {
        const std::size_t cx = g.n_var() + c;
        if ((lp.test(v) && rp.test(cx)) || (rp.test(v) && lp.test(cx)))
          out.push_back("join " + std::to_string(t) + ": edge crosses between child subtrees");
      }
  }
  return out;
}

}  // namespace trapgraph::testing
