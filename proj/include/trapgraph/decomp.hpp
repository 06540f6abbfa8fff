#pragma once

// Tree decompositions of Tanner graphs: validation, PACE .td I/O, builders
// (elimination orderings, min-fill, the sliding window for spatially coupled
// codes) and conversion to rooted nice form.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trapgraph/tanner.hpp"

namespace trapgraph {

/// Node id in the combined namespace: variables 0..n_var-1, then checks.
using NodeId = std::uint32_t;

struct TreeDecomposition {
  std::size_t num_graph_nodes = 0;
  std::vector<std::vector<NodeId>> bags;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::optional<std::size_t> root;

  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

/// Largest bag size minus one; -1 when every bag is empty.
inline long width(const TreeDecomposition& td) {
  std::size_t m = 0;
  for (const auto& b : td.bags) m = std::max(m, b.size());
  return static_cast<long>(m) - 1;
}

/// Sorted bags, edges normalised to (low, high) and sorted.
inline TreeDecomposition canonical(TreeDecomposition td) {
  for (auto& b : td.bags) std::sort(b.begin(), b.end());
  for (auto& e : td.edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(td.edges.begin(), td.edges.end());
  return td;
}

namespace detail {

/// Empty string when `edges` forms a spanning tree over `n` vertices.
inline std::string tree_defect(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (n == 0) return "decomposition has no bags";
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) return "tree edge references a missing bag";
    auto ra = find(a), rb = find(b);
    if (ra == rb) return "tree edges contain a cycle (bags " + std::to_string(a + 1) + ", " + std::to_string(b + 1) + ")";
    parent[ra] = rb;
  }
  if (edges.size() != n - 1) return "tree edges do not connect all bags";
  return {};
}

inline std::vector<std::vector<std::size_t>> tree_adjacency(const TreeDecomposition& td) {
  std::vector<std::vector<std::size_t>> adj(td.bags.size());
  for (auto [a, b] : td.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

}  // namespace detail

// --- validation -------------------------------------------------------------

struct Violation {
  enum class Kind { NotATree, NodeOutOfRange, GraphSizeMismatch, UncoveredNode, UncoveredEdge, DisconnectedOccurrence };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

inline const char* to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::NotATree: return "not-a-tree";
    case Violation::Kind::NodeOutOfRange: return "node-out-of-range";
    case Violation::Kind::GraphSizeMismatch: return "graph-size-mismatch";
    case Violation::Kind::UncoveredNode: return "uncovered-node";
    case Violation::Kind::UncoveredEdge: return "uncovered-edge";
    case Violation::Kind::DisconnectedOccurrence: return "disconnected-occurrence";
  }
  return "unknown";
}

/// Human-readable name of a combined-namespace node, 0-indexed.
inline std::string node_name(const TannerGraph& g, NodeId x) {
  return x < g.n_var() ? "v" + std::to_string(x) : "c" + std::to_string(x - g.n_var());
}

/// Lists every violated tree-decomposition condition.
inline ValidationReport validate(const TannerGraph& g, const TreeDecomposition& td) {
  using K = Violation::Kind;
  ValidationReport rep;
  const std::size_t n_nodes = g.num_nodes();
  if (td.num_graph_nodes != n_nodes)
    rep.violations.push_back({K::GraphSizeMismatch, "decomposition is over " + std::to_string(td.num_graph_nodes) +
                                                        " nodes, graph has " + std::to_string(n_nodes)});
  if (auto d = detail::tree_defect(td.bags.size(), td.edges); !d.empty()) {
    rep.violations.push_back({K::NotATree, d});
    return rep;
  }

  std::vector<std::vector<std::size_t>> occurrences(n_nodes);
  for (std::size_t t = 0; t < td.bags.size(); ++t)
    for (NodeId x : td.bags[t]) {
      if (x >= n_nodes) {
        rep.violations.push_back({K::NodeOutOfRange, "bag " + std::to_string(t + 1) + " names node " + std::to_string(x + 1)});
        continue;
      }
      occurrences[x].push_back(t);
    }

  for (NodeId x = 0; x < n_nodes; ++x)
    if (occurrences[x].empty()) rep.violations.push_back({K::UncoveredNode, node_name(g, x) + " is in no bag"});

  std::vector<boost::dynamic_bitset<>> member(td.bags.size(), boost::dynamic_bitset<>(n_nodes));
  for (std::size_t t = 0; t < td.bags.size(); ++t)
    for (NodeId x : td.bags[t])
      if (x < n_nodes) member[t].set(x);

  for (CheckId c = 0; c < g.n_chk(); ++c) {
    const NodeId cx = static_cast<NodeId>(g.n_var() + c);
    for (VarId v : g.check_neighbors(c)) {
      bool covered = std::any_of(occurrences[cx].begin(), occurrences[cx].end(),
                                 [&](std::size_t t) { return member[t].test(v); });
      if (!covered)
        rep.violations.push_back({K::UncoveredEdge, "edge " + node_name(g, v) + "-" + node_name(g, cx) + " is in no bag"});
    }
  }

  // Occurrence sets are connected iff exactly one occurrence has its
  // parent (with respect to an arbitrary root) outside the set.
  auto adj = detail::tree_adjacency(td);
  std::vector<std::size_t> parent(td.bags.size(), SIZE_MAX);
  std::vector<std::size_t> stack{0};
  std::vector<char> seen(td.bags.size(), 0);
  seen[0] = 1;
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    for (auto u : adj[t])
      if (!seen[u]) {
        seen[u] = 1;
        parent[u] = t;
        stack.push_back(u);
      }
  }
  for (NodeId x = 0; x < n_nodes; ++x) {
    std::size_t tops = 0;
    for (auto t : occurrences[x])
      if (parent[t] == SIZE_MAX || !member[parent[t]].test(x)) ++tops;
    if (tops > 1)
      rep.violations.push_back({K::DisconnectedOccurrence, "bags containing " + node_name(g, x) + " are not connected"});
  }
  return rep;
}

// --- PACE .td format -----------------------------------------------------------

inline TreeDecomposition parse_td(std::istream& in) {
  TreeDecomposition td;
  bool have_header = false;
  std::size_t declared_max = 0;
  std::vector<char> bag_seen;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head == "c") continue;
    auto read_id = [&](const char* what) {
      std::string tok;
      if (!(ls >> tok)) throw ParseError(lineno, std::string("missing ") + what);
      std::size_t pos = 0;
      long long x = 0;
      try {
        x = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size() || x < 0) throw ParseError(lineno, "expected non-negative integer, got '" + tok + "'");
      return static_cast<std::size_t>(x);
    };
    if (head == "s") {
      std::string kind;
      if (have_header || !(ls >> kind) || kind != "td") throw ParseError(lineno, "malformed header, expected 's td ...'");
      std::size_t nb = read_id("bag count");
      declared_max = read_id("max bag size");
      td.num_graph_nodes = read_id("graph node count");
      td.bags.assign(nb, {});
      bag_seen.assign(nb, 0);
      have_header = true;
    } else if (!have_header) {
      throw ParseError(lineno, "malformed header: content before 's td' line");
    } else if (head == "b") {
      std::size_t id = read_id("bag id");
      if (id < 1 || id > td.bags.size()) throw ParseError(lineno, "bag id " + std::to_string(id) + " out of range");
      if (bag_seen[id - 1]) throw ParseError(lineno, "bag " + std::to_string(id) + " listed twice");
      bag_seen[id - 1] = 1;
      std::string tok;
      while (ls >> tok) {
        std::size_t pos = 0;
        long long x = 0;
        try {
          x = std::stoll(tok, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos != tok.size()) throw ParseError(lineno, "expected node id, got '" + tok + "'");
        if (x < 1 || static_cast<std::size_t>(x) > td.num_graph_nodes)
          throw ParseError(lineno, "node id " + tok + " out of range");
        td.bags[id - 1].push_back(static_cast<NodeId>(x - 1));
      }
    } else {
      std::istringstream es(line);
      std::size_t a = 0, b = 0;
      std::string extra;
      if (!(es >> a >> b) || (es >> extra)) throw ParseError(lineno, "expected tree edge '<bag> <bag>'");
      if (a < 1 || a > td.bags.size() || b < 1 || b > td.bags.size())
        throw ParseError(lineno, "tree edge names a bag id out of range");
      td.edges.emplace_back(a - 1, b - 1);
    }
  }
  if (!have_header) throw ParseError(lineno + 1, "malformed header: missing 's td' line");
  for (std::size_t i = 0; i < bag_seen.size(); ++i)
    if (!bag_seen[i]) throw ParseError(lineno, "bag " + std::to_string(i + 1) + " has no 'b' line");
  for (auto& b : td.bags) {
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end()) throw ParseError(lineno, "bag lists a node twice");
  }
  if (static_cast<long>(declared_max) - 1 != width(td))
    throw ParseError(1, "malformed header: declared max bag size " + std::to_string(declared_max) +
                            " does not match the bags");
  if (auto d = detail::tree_defect(td.bags.size(), td.edges); !d.empty()) throw ParseError(lineno, d);
  return td;
}

inline TreeDecomposition parse_td(const std::string& text) {
  std::istringstream in(text);
  return parse_td(in);
}

inline std::string serialize_td(const TreeDecomposition& raw) {
  const auto td = canonical(raw);
  std::ostringstream out;
  out << "s td " << td.bags.size() << ' ' << (width(td) + 1) << ' ' << td.num_graph_nodes << '\n';
  for (std::size_t t = 0; t < td.bags.size(); ++t) {
    out << "b " << (t + 1);
    for (NodeId x : td.bags[t]) out << ' ' << (x + 1);
    out << '\n';
  }
  for (auto [a, b] : td.edges) out << (a + 1) << ' ' << (b + 1) << '\n';
  return out.str();
}

// --- builders -------------------------------------------------------------------

namespace detail {

inline std::vector<std::set<NodeId>> combined_adjacency(const TannerGraph& g) {
  std::vector<std::set<NodeId>> adj(g.num_nodes());
  for (CheckId c = 0; c < g.n_chk(); ++c) {
    const auto cx = static_cast<NodeId>(g.n_var() + c);
    for (VarId v : g.check_neighbors(c)) {
      adj[v].insert(cx);
      adj[cx].insert(v);
    }
  }
  return adj;
}

/// Eliminates vertices in the order produced by `pick`, which receives the
/// current adjacency and the set of live vertices.
template <class Pick>
TreeDecomposition eliminate(const TannerGraph& g, Pick&& pick) {
  const std::size_t n = g.num_nodes();
  TreeDecomposition td;
  td.num_graph_nodes = n;
  if (n == 0) {
    td.bags.push_back({});
    return td;
  }
  auto adj = combined_adjacency(g);
  std::vector<std::size_t> position(n, SIZE_MAX);
  std::vector<std::vector<NodeId>> later(n);  // live neighbours at elimination time
  std::vector<NodeId> order;
  for (std::size_t step = 0; step < n; ++step) {
    NodeId v = pick(adj, position);
    position[v] = step;
    order.push_back(v);
    later[v].assign(adj[v].begin(), adj[v].end());
    for (NodeId a : adj[v]) {
      adj[a].erase(v);
      for (NodeId b : adj[v])
        if (a != b) adj[a].insert(b);
    }
    adj[v].clear();
  }
  td.bags.resize(n);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    NodeId v = order[i];
    auto& bag = td.bags[i];
    bag = later[v];
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    if (later[v].empty()) {
      roots.push_back(i);
      continue;
    }
    std::size_t parent = SIZE_MAX;
    for (NodeId u : later[v]) parent = std::min(parent, position[u]);
    td.edges.emplace_back(i, parent);
  }
  // one tree per connected component; chain the component roots together
  for (std::size_t i = 1; i < roots.size(); ++i) td.edges.emplace_back(roots[i - 1], roots[i]);
  td.root = roots.back();
  return td;
}

}  // namespace detail

/// Decomposition induced by eliminating the combined-namespace nodes in the
/// given order (a permutation of 0..num_nodes-1).
inline TreeDecomposition elimination_decomposition(const TannerGraph& g, const std::vector<NodeId>& order) {
  if (order.size() != g.num_nodes()) throw std::invalid_argument("elimination order is not a permutation");
  std::vector<char> used(order.size(), 0);
  for (NodeId x : order) {
    if (x >= order.size() || used[x]) throw std::invalid_argument("elimination order is not a permutation");
    used[x] = 1;
  }
  std::size_t step = 0;
  return detail::eliminate(g, [&](const auto&, const auto&) { return order[step++]; });
}

/// Greedy min-fill elimination; ties broken by degree, then by id.
inline TreeDecomposition heuristic_decomposition(const TannerGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> fill(n, 0);
  std::vector<char> dirty(n, 1);
  auto compute_fill = [](const std::vector<std::set<NodeId>>& adj, NodeId v) {
    std::size_t f = 0;
    for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
      for (auto b = std::next(a); b != adj[v].end(); ++b)
        if (!adj[*a].count(*b)) ++f;
    return f;
  };
  return detail::eliminate(g, [&](const std::vector<std::set<NodeId>>& adj, const std::vector<std::size_t>& position) {
    NodeId best = 0;
    bool found = false;
    for (NodeId v = 0; v < n; ++v) {
      if (position[v] != SIZE_MAX) continue;
      if (dirty[v]) {
        fill[v] = compute_fill(adj, v);
        dirty[v] = 0;
      }
      if (!found || fill[v] < fill[best] || (fill[v] == fill[best] && adj[v].size() < adj[best].size())) {
        best = v;
        found = true;
      }
    }
    // the eliminated vertex changes fill of everything within distance two
    for (NodeId a : adj[best]) {
      dirty[a] = 1;
      for (NodeId b : adj[a]) dirty[b] = 1;
    }
    return best;
  });
}

/// Path decomposition of a spatially coupled code: bag t holds check block t
/// and the variable blocks coupled to it.
inline TreeDecomposition sc_path_decomposition(const TannerGraph& g, const ScLdpcParams& p) {
  p.check();
  if (g.n_var() != p.n_var() || g.n_chk() != p.n_chk())
    throw std::invalid_argument("graph dimensions do not match the coupling parameters");
  const std::size_t L = p.coupling_len, w = p.coupling_width;
  for (CheckId c = 0; c < g.n_chk(); ++c) {
    const std::size_t t = c / p.base_rows;
    for (VarId v : g.check_neighbors(c)) {
      const std::size_t j = v / p.base_cols;
      if (j > t || t - j >= w)
        throw std::invalid_argument("check " + std::to_string(c) + " reaches variable " + std::to_string(v) +
                                    " outside its coupling window");
    }
  }
  TreeDecomposition td;
  td.num_graph_nodes = g.num_nodes();
  const std::size_t blocks = p.check_blocks();
  td.bags.resize(blocks);
  for (std::size_t t = 0; t < blocks; ++t) {
    auto& bag = td.bags[t];
    const std::size_t first = t + 1 >= w ? t + 1 - w : 0;
    const std::size_t last = std::min(t, L - 1);
    for (std::size_t j = first; j <= last; ++j)
      for (std::size_t i = 0; i < p.base_cols; ++i) bag.push_back(static_cast<NodeId>(j * p.base_cols + i));
    for (std::size_t i = 0; i < p.base_rows; ++i)
      bag.push_back(static_cast<NodeId>(g.n_var() + t * p.base_rows + i));
    if (t > 0) td.edges.emplace_back(t - 1, t);
  }
  td.root = 0;
  return td;
}

// --- nice form ----------------------------------------------------------------------

enum class NiceKind { Leaf, IntroduceVar, ForgetVar, IntroduceChk, ForgetChk, Join };

inline const char* to_string(NiceKind k) {
  switch (k) {
    case NiceKind::Leaf: return "leaf";
    case NiceKind::IntroduceVar: return "introduce_var";
    case NiceKind::ForgetVar: return "forget_var";
    case NiceKind::IntroduceChk: return "introduce_chk";
    case NiceKind::ForgetChk: return "forget_chk";
    case NiceKind::Join: return "join";
  }
  return "unknown";
}

struct NiceNode {
  NiceKind kind = NiceKind::Leaf;
  std::uint32_t element = 0;  // variable or check id for introduce/forget nodes
  std::vector<VarId> bag_v;   // sorted
  std::vector<CheckId> bag_c; // sorted
  std::vector<std::size_t> children;
};

/// Rooted nice decomposition stored in post-order: children precede parents
/// and the root is the last node.
struct NiceTreeDecomposition {
  std::vector<NiceNode> nodes;

  std::size_t root() const { return nodes.size() - 1; }

  long width() const {
    std::size_t m = 0;
    for (const auto& n : nodes) m = std::max(m, n.bag_v.size() + n.bag_c.size());
    return static_cast<long>(m) - 1;
  }

  std::map<NiceKind, std::size_t> kind_counts() const {
    std::map<NiceKind, std::size_t> counts;
    for (auto k : {NiceKind::Leaf, NiceKind::IntroduceVar, NiceKind::ForgetVar, NiceKind::IntroduceChk,
                   NiceKind::ForgetChk, NiceKind::Join})
      counts[k] = 0;
    for (const auto& n : nodes) ++counts[n.kind];
    return counts;
  }
};

namespace detail {

class NiceBuilder {
 public:
  NiceBuilder(const TannerGraph& g, const TreeDecomposition& td) : g_(g), td_(td), adj_(tree_adjacency(td)) {}

  NiceTreeDecomposition build(std::size_t root) {
    // iterative post-order over the source tree to avoid deep recursion
    const std::size_t nb = td_.bags.size();
    std::vector<std::size_t> parent(nb, SIZE_MAX), order;
    std::vector<char> seen(nb, 0);
    std::vector<std::size_t> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      auto t = stack.back();
      stack.pop_back();
      order.push_back(t);
      for (auto u : adj_[t])
        if (!seen[u]) {
          seen[u] = 1;
          parent[u] = t;
          stack.push_back(u);
        }
    }
    std::vector<std::size_t> top(nb, SIZE_MAX);  // nice node whose bag equals bag t
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto t = *it;
      std::vector<std::size_t> branches;
      for (auto u : adj_[t])
        if (u != parent[t]) branches.push_back(bridge(top[u], td_.bags[u], td_.bags[t]));
      if (branches.empty()) branches.push_back(bridge(add_leaf(), {}, td_.bags[t]));
      std::size_t acc = branches.front();
      for (std::size_t i = 1; i < branches.size(); ++i) acc = add_join(acc, branches[i]);
      top[t] = acc;
    }
    bridge(top[root], td_.bags[root], {});
    return std::move(out_);
  }

 private:
  bool is_var(NodeId x) const { return x < g_.n_var(); }

  std::size_t add_leaf() {
    out_.nodes.push_back(NiceNode{});
    return out_.nodes.size() - 1;
  }

  std::size_t add_join(std::size_t a, std::size_t b) {
    NiceNode n = out_.nodes[a];
    n.kind = NiceKind::Join;
    n.element = 0;
    n.children = {a, b};
    out_.nodes.push_back(std::move(n));
    return out_.nodes.size() - 1;
  }

  std::size_t add_step(std::size_t child, NodeId x, bool introduce) {
    NiceNode n = out_.nodes[child];
    n.children = {child};
    auto edit = [introduce](auto& bag, std::uint32_t id) {
      if (introduce)
        bag.insert(std::upper_bound(bag.begin(), bag.end(), id), id);
      else
        bag.erase(std::lower_bound(bag.begin(), bag.end(), id));
    };
    if (is_var(x)) {
      n.kind = introduce ? NiceKind::IntroduceVar : NiceKind::ForgetVar;
      n.element = x;
      edit(n.bag_v, x);
    } else {
      n.kind = introduce ? NiceKind::IntroduceChk : NiceKind::ForgetChk;
      n.element = static_cast<std::uint32_t>(x - g_.n_var());
      edit(n.bag_c, n.element);
    }
    out_.nodes.push_back(std::move(n));
    return out_.nodes.size() - 1;
  }

  // Forgets then introduces, each in ascending id order.
  std::size_t bridge(std::size_t node, const std::vector<NodeId>& from, const std::vector<NodeId>& to) {
    std::vector<NodeId> a = from, b = to, drop, add;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(drop));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(add));
    for (NodeId x : drop) node = add_step(node, x, false);
    for (NodeId x : add) node = add_step(node, x, true);
    return node;
  }

  const TannerGraph& g_;
  const TreeDecomposition& td_;
  std::vector<std::vector<std::size_t>> adj_;
  NiceTreeDecomposition out_;
};

}  // namespace detail

/// Chooses the root used by make_nice: the designated root if any, else the
/// lowest-index endpoint when the tree is a path, else bag 0.
inline std::size_t default_root(const TreeDecomposition& td) {
  if (td.root) return *td.root;
  std::vector<std::size_t> degree(td.bags.size(), 0);
  bool path = true;
  for (auto [a, b] : td.edges) {
    ++degree[a];
    ++degree[b];
  }
  for (auto d : degree) path = path && d <= 2;
  if (path)
    for (std::size_t t = 0; t < degree.size(); ++t)
      if (degree[t] <= 1) return t;
  return 0;
}

/// Converts a valid decomposition into rooted nice form of the same width.
inline NiceTreeDecomposition make_nice(const TannerGraph& g, const TreeDecomposition& td) {
  auto rep = validate(g, td);
  if (!rep.valid()) throw std::invalid_argument("invalid tree decomposition: " + rep.violations.front().message);
  const auto root = default_root(td);
  if (root >= td.bags.size()) throw std::invalid_argument("root bag out of range");
  return detail::NiceBuilder(g, td).build(root);
}

/// Nice decomposition viewed as an ordinary decomposition (one bag per node).
inline TreeDecomposition to_tree_decomposition(const TannerGraph& g, const NiceTreeDecomposition& ntd) {
  TreeDecomposition td;
  td.num_graph_nodes = g.num_nodes();
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& n = ntd.nodes[t];
    std::vector<NodeId> bag(n.bag_v.begin(), n.bag_v.end());
    for (CheckId c : n.bag_c) bag.push_back(static_cast<NodeId>(g.n_var() + c));
    td.bags.push_back(std::move(bag));
    for (auto ch : n.children) td.edges.emplace_back(ch, t);
  }
  td.root = ntd.nodes.empty() ? std::nullopt : std::optional<std::size_t>(ntd.root());
  return td;
}

/// Structural defects of a nice decomposition with respect to g: node kinds
/// and bag deltas, post-order, empty root and leaves, and the three
/// tree-decomposition conditions. Empty when sound.
inline std::vector<std::string> check_nice(const TannerGraph& g, const NiceTreeDecomposition& ntd) {
  std::vector<std::string> out;
  if (ntd.nodes.empty()) return {"no nodes"};
  auto fail = [&](std::size_t t, const std::string& msg) { out.push_back("node " + std::to_string(t) + ": " + msg); };
  std::vector<std::size_t> parent(ntd.nodes.size(), SIZE_MAX);
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& n = ntd.nodes[t];
    if (!std::is_sorted(n.bag_v.begin(), n.bag_v.end()) || !std::is_sorted(n.bag_c.begin(), n.bag_c.end()) ||
        std::adjacent_find(n.bag_v.begin(), n.bag_v.end()) != n.bag_v.end() ||
        std::adjacent_find(n.bag_c.begin(), n.bag_c.end()) != n.bag_c.end())
      fail(t, "bag not sorted and duplicate-free");
    for (VarId v : n.bag_v)
      if (v >= g.n_var()) fail(t, "variable out of range");
    for (CheckId c : n.bag_c)
      if (c >= g.n_chk()) fail(t, "check out of range");
    for (auto ch : n.children) {
      if (ch >= t) {
        fail(t, "child does not precede parent");
        continue;
      }
      if (parent[ch] != SIZE_MAX) fail(t, "node has two parents");
      parent[ch] = t;
    }
    const std::size_t expect_children = n.kind == NiceKind::Leaf ? 0 : n.kind == NiceKind::Join ? 2 : 1;
    if (n.children.size() != expect_children) {
      fail(t, std::string("wrong child count for ") + to_string(n.kind));
      continue;
    }
    auto plus = [](auto bag, std::uint32_t x) {
      bag.insert(std::upper_bound(bag.begin(), bag.end(), x), x);
      return bag;
    };
    switch (n.kind) {
      case NiceKind::Leaf:
        if (!n.bag_v.empty() || !n.bag_c.empty()) fail(t, "leaf bag not empty");
        break;
      case NiceKind::Join: {
        const auto& a = ntd.nodes[n.children[0]];
        const auto& b = ntd.nodes[n.children[1]];
        if (a.bag_v != n.bag_v || a.bag_c != n.bag_c || b.bag_v != n.bag_v || b.bag_c != n.bag_c)
          fail(t, "join children bags differ");
        break;
      }
      case NiceKind::IntroduceVar:
      case NiceKind::ForgetVar:
      case NiceKind::IntroduceChk:
      case NiceKind::ForgetChk: {
        const auto& ch = ntd.nodes[n.children[0]];
        const bool on_var = n.kind == NiceKind::IntroduceVar || n.kind == NiceKind::ForgetVar;
        const bool intro = n.kind == NiceKind::IntroduceVar || n.kind == NiceKind::IntroduceChk;
        const auto& small_v = intro ? ch.bag_v : n.bag_v;
        const auto& big_v = intro ? n.bag_v : ch.bag_v;
        const auto& small_c = intro ? ch.bag_c : n.bag_c;
        const auto& big_c = intro ? n.bag_c : ch.bag_c;
        bool ok = on_var ? (small_c == big_c && !std::binary_search(small_v.begin(), small_v.end(), n.element) &&
                            plus(small_v, n.element) == big_v)
                         : (small_v == big_v && !std::binary_search(small_c.begin(), small_c.end(), n.element) &&
                            plus(small_c, n.element) == big_c);
        if (!ok) fail(t, std::string("bag does not differ from child by exactly the ") + to_string(n.kind) + " element");
        break;
      }
    }
  }
  for (std::size_t t = 0; t + 1 < ntd.nodes.size(); ++t)
    if (parent[t] == SIZE_MAX) fail(t, "not reachable from the root");
  const auto& root = ntd.nodes.back();
  if (!root.bag_v.empty() || !root.bag_c.empty()) out.push_back("root bag not empty");

  // coverage and connectivity: every node occurs and has exactly one topmost occurrence
  std::vector<std::size_t> tops(g.num_nodes(), 0);
  std::vector<char> edge_seen(g.num_edges(), 0);
  std::vector<std::size_t> edge_base(g.n_chk() + 1, 0);
  for (CheckId c = 0; c < g.n_chk(); ++c) edge_base[c + 1] = edge_base[c] + g.check_neighbors(c).size();
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& n = ntd.nodes[t];
    const NiceNode* up = parent[t] == SIZE_MAX ? nullptr : &ntd.nodes[parent[t]];
    for (VarId v : n.bag_v)
      if (v < g.n_var() && (!up || !std::binary_search(up->bag_v.begin(), up->bag_v.end(), v))) ++tops[v];
    for (CheckId c : n.bag_c) {
      if (c >= g.n_chk()) continue;
      if (!up || !std::binary_search(up->bag_c.begin(), up->bag_c.end(), c)) ++tops[g.n_var() + c];
      auto nb = g.check_neighbors(c);
      for (std::size_t i = 0; i < nb.size(); ++i)
        if (std::binary_search(n.bag_v.begin(), n.bag_v.end(), nb[i])) edge_seen[edge_base[c] + i] = 1;
    }
  }
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    if (tops[x] == 0) out.push_back(node_name(g, x) + " is in no bag");
    if (tops[x] > 1) out.push_back("bags containing " + node_name(g, x) + " are not connected");
  }
  for (CheckId c = 0; c < g.n_chk(); ++c) {
    auto nb = g.check_neighbors(c);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (!edge_seen[edge_base[c] + i])
        out.push_back("edge " + node_name(g, nb[i]) + "-" + node_name(g, static_cast<NodeId>(g.n_var() + c)) +
                      " is in no bag");
  }
  return out;
}

}  // namespace trapgraph
