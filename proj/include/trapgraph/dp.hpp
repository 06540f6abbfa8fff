#pragma once

// Sparse dynamic program over a rooted nice tree decomposition that finds
// the minimum size and the exact number of (a,b)-trapping sets.
//
// A table at nice node t maps a key (I, Q, d) to (f, g):
//   Q  trapping-set members inside the bag,
//   I  odd-degree checks inside the bag,
//   d  odd-degree checks already forgotten below t,
//   f  minimum |S| over nonempty S in G_t with these parameters,
//   g  number of such S of size f.
// Absent keys stand for (f, g) = (+inf, 0). I and Q are bitmasks over the
// positions of the bag's sorted check and variable lists.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trapgraph/decomp.hpp"
#include "trapgraph/tanner.hpp"

namespace trapgraph {

using Count = boost::multiprecision::cpp_int;
using Mask = std::uint64_t;

/// Widest bag side (variables or checks) the key encoding supports.
inline constexpr std::size_t kMaxBagSide = 64;

struct DPKey {
  Mask odd = 0;        // I
  Mask members = 0;    // Q
  std::uint32_t forgotten = 0;  // d

  friend bool operator==(const DPKey&, const DPKey&) = default;
  friend auto operator<=>(const DPKey& a, const DPKey& b) {
    return std::tie(a.odd, a.members, a.forgotten) <=> std::tie(b.odd, b.members, b.forgotten);
  }
};

struct DPKeyHash {
  std::size_t operator()(const DPKey& k) const noexcept {
    std::uint64_t h = k.odd * 0x9e3779b97f4a7c15ULL;
    h ^= (k.members + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2));
    h ^= (k.forgotten + 0x85ebca6bULL + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

struct DPEntry {
  std::uint32_t size = 0;  // f
  Count count;             // g

  friend bool operator==(const DPEntry&, const DPEntry&) = default;
};

struct DPTable {
  std::vector<VarId> bag_v;
  std::vector<CheckId> bag_c;
  std::unordered_map<DPKey, DPEntry, DPKeyHash> entries;
  std::size_t node = 0;

  const DPEntry* find(const DPKey& k) const {
    auto it = entries.find(k);
    return it == entries.end() ? nullptr : &it->second;
  }

  /// Keys in ascending (I, Q, d) order.
  std::vector<DPKey> sorted_keys() const {
    std::vector<DPKey> keys;
    keys.reserve(entries.size());
    for (const auto& [k, e] : entries) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    return keys;
  }
};

/// Minimum size with the number of sets attaining it.
struct Spectrum {
  std::uint32_t a_min = 0;
  Count count;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

/// Strict minimum on size; counts add on ties.
inline void merge_entry(DPTable& t, const DPKey& k, std::uint32_t size, Count count) {
  auto [it, inserted] = t.entries.try_emplace(k, DPEntry{size, Count{}});
  auto& e = it->second;
  if (inserted) {
    e.count = std::move(count);
  } else if (size < e.size) {
    e.size = size;
    e.count = std::move(count);
  } else if (size == e.size) {
    e.count += count;
  }
}

namespace bits {

inline Mask low(std::size_t pos) { return pos >= 64 ? ~Mask{0} : (Mask{1} << pos) - 1; }

/// Opens a zero bit at `pos`, shifting higher bits up.
inline Mask insert_at(Mask m, std::size_t pos) {
  const Mask high = pos >= 64 ? 0 : m >> pos;
  return (m & low(pos)) | (pos + 1 >= 64 ? 0 : high << (pos + 1));
}

/// Removes bit `pos`, shifting higher bits down.
inline Mask erase_at(Mask m, std::size_t pos) {
  const Mask high = pos + 1 >= 64 ? 0 : m >> (pos + 1);
  return (m & low(pos)) | (high << pos);
}

inline bool test(Mask m, std::size_t pos) { return (m >> pos) & 1U; }

inline std::size_t count(Mask m) { return static_cast<std::size_t>(std::popcount(m)); }

}  // namespace bits

namespace detail {

template <class Id>
std::size_t position_of(const std::vector<Id>& bag, Id x) {
  auto it = std::lower_bound(bag.begin(), bag.end(), x);
  if (it == bag.end() || *it != x) throw std::invalid_argument("element not in bag");
  return static_cast<std::size_t>(it - bag.begin());
}

/// Bag-local check mask of the neighbours of variable v.
inline Mask check_mask_of(const TannerGraph& g, VarId v, const std::vector<CheckId>& bag_c) {
  Mask m = 0;
  for (CheckId c : g.var_neighbors(v)) {
    auto it = std::lower_bound(bag_c.begin(), bag_c.end(), c);
    if (it != bag_c.end() && *it == c) m |= Mask{1} << (it - bag_c.begin());
  }
  return m;
}

/// Bag-local variable mask of the neighbours of check c.
inline Mask var_mask_of(const TannerGraph& g, CheckId c, const std::vector<VarId>& bag_v) {
  Mask m = 0;
  for (VarId v : g.check_neighbors(c)) {
    auto it = std::lower_bound(bag_v.begin(), bag_v.end(), v);
    if (it != bag_v.end() && *it == v) m |= Mask{1} << (it - bag_v.begin());
  }
  return m;
}

inline void check_side(std::size_t n) {
  if (n > kMaxBagSide)
    throw std::length_error("bag holds " + std::to_string(n) + " variables or checks; at most " +
                            std::to_string(kMaxBagSide) + " supported");
}

template <class Id>
std::vector<Id> with(std::vector<Id> bag, Id x) {
  auto it = std::lower_bound(bag.begin(), bag.end(), x);
  if (it != bag.end() && *it == x) throw std::invalid_argument("bag mismatch: element already present");
  bag.insert(it, x);
  return bag;
}

template <class Id>
std::vector<Id> without(std::vector<Id> bag, Id x) {
  auto it = std::lower_bound(bag.begin(), bag.end(), x);
  if (it == bag.end() || *it != x) throw std::invalid_argument("bag mismatch: element absent");
  bag.erase(it);
  return bag;
}

}  // namespace detail

// --- node handlers ------------------------------------------------------------

inline DPTable leaf_table() { return DPTable{}; }

/// Each child state either excludes v (kept) or includes it (extended); {v}
/// alone is the base state (I_v, {v}, 0) with size 1. The fully forgotten
/// state (0, 0, 0) is not extended: {v} dominates it.
inline DPTable introduce_variable(DPTable child, VarId v, const TannerGraph& g) {
  DPTable out;
  out.bag_v = detail::with(std::move(child.bag_v), v);
  out.bag_c = std::move(child.bag_c);
  detail::check_side(out.bag_v.size());
  const std::size_t pos = detail::position_of(out.bag_v, v);
  const Mask vbit = Mask{1} << pos;
  const Mask odd_v = detail::check_mask_of(g, v, out.bag_c);
  out.entries.reserve(child.entries.size() * 2 + 1);
  for (auto& [k, e] : child.entries) {
    const Mask members = bits::insert_at(k.members, pos);
    if (!(k.odd == 0 && k.members == 0 && k.forgotten == 0))
      out.entries.emplace(DPKey{k.odd ^ odd_v, members | vbit, k.forgotten}, DPEntry{e.size + 1, e.count});
    out.entries.emplace(DPKey{k.odd, members, k.forgotten}, std::move(e));
  }
  out.entries.insert_or_assign(DPKey{odd_v, vbit, 0}, DPEntry{1, Count{1}});
  return out;
}

inline DPTable forget_variable(DPTable child, VarId v) {
  DPTable out;
  const std::size_t pos = detail::position_of(child.bag_v, v);
  out.bag_v = detail::without(std::move(child.bag_v), v);
  out.bag_c = std::move(child.bag_c);
  out.entries.reserve(child.entries.size());
  for (auto& [k, e] : child.entries)
    merge_entry(out, DPKey{k.odd, bits::erase_at(k.members, pos), k.forgotten}, e.size, std::move(e.count));
  return out;
}

inline DPTable introduce_check(DPTable child, CheckId c, const TannerGraph& g) {
  DPTable out;
  out.bag_c = detail::with(std::move(child.bag_c), c);
  out.bag_v = std::move(child.bag_v);
  detail::check_side(out.bag_c.size());
  const std::size_t pos = detail::position_of(out.bag_c, c);
  const Mask nbrs = detail::var_mask_of(g, c, out.bag_v);
  out.entries.reserve(child.entries.size());
  for (auto& [k, e] : child.entries) {
    const Mask parity = bits::count(k.members & nbrs) & 1U;
    out.entries.emplace(DPKey{bits::insert_at(k.odd, pos) | (parity << pos), k.members, k.forgotten}, std::move(e));
  }
  return out;
}

/// An odd check leaving the bag is counted in d; states exceeding b drop.
inline DPTable forget_check(DPTable child, CheckId c, unsigned b) {
  DPTable out;
  const std::size_t pos = detail::position_of(child.bag_c, c);
  out.bag_c = detail::without(std::move(child.bag_c), c);
  out.bag_v = std::move(child.bag_v);
  out.entries.reserve(child.entries.size());
  for (auto& [k, e] : child.entries) {
    const std::uint32_t d = k.forgotten + (bits::test(k.odd, pos) ? 1U : 0U);
    if (d > b) continue;
    merge_entry(out, DPKey{bits::erase_at(k.odd, pos), k.members, d}, e.size, std::move(e.count));
  }
  return out;
}

/// Parity contribution of the shared variables Q to the bag checks, as a
/// bag-local check mask.
inline Mask shared_odd_checks(Mask members, std::span<const Mask> var_check_masks) {
  Mask odd = 0;
  for (Mask q = members; q != 0; q &= q - 1) odd ^= var_check_masks[static_cast<std::size_t>(std::countr_zero(q))];
  return odd;
}

inline DPTable join(DPTable left, DPTable right, const TannerGraph& g, unsigned b) {
  if (left.bag_v != right.bag_v || left.bag_c != right.bag_c)
    throw std::invalid_argument("bag mismatch between join children");
  DPTable out;
  out.bag_v = std::move(left.bag_v);
  out.bag_c = std::move(left.bag_c);
  std::vector<Mask> var_checks(out.bag_v.size());
  for (std::size_t i = 0; i < out.bag_v.size(); ++i) var_checks[i] = detail::check_mask_of(g, out.bag_v[i], out.bag_c);

  std::unordered_map<Mask, std::vector<const std::pair<const DPKey, DPEntry>*>> right_by_q;
  for (const auto& kv : right.entries) right_by_q[kv.first.members].push_back(&kv);

  for (const auto& [lk, le] : left.entries) {
    auto it = right_by_q.find(lk.members);
    if (it == right_by_q.end()) continue;
    const Mask shared = shared_odd_checks(lk.members, var_checks);
    const auto overlap = static_cast<std::uint32_t>(bits::count(lk.members));
    for (const auto* rkv : it->second) {
      const auto& [rk, re] = *rkv;
      const std::uint32_t d = lk.forgotten + rk.forgotten;
      if (d > b) continue;
      merge_entry(out, DPKey{lk.odd ^ rk.odd ^ shared, lk.members, d}, le.size + re.size - overlap,
                  le.count * re.count);
    }
  }
  for (auto* side : {&left, &right})
    for (auto& [k, e] : side->entries)
      if (k.members == 0) merge_entry(out, k, e.size, e.count);
  return out;
}

// --- driver ---------------------------------------------------------------------

struct DPStats {
  std::size_t max_table_size = 0;
  std::size_t total_entries = 0;
};

struct DPResult {
  std::optional<Spectrum> spectrum;
  /// Per nice node, when tables were retained.
  std::optional<std::vector<DPTable>> tables;
  DPStats stats;
};

/// Runs the handlers in post-order and reads key (0, 0, b) at the root.
/// Child tables are released as soon as their parent is built unless
/// `retain_tables` is set.
inline DPResult run_dp(const TannerGraph& g, const NiceTreeDecomposition& ntd, unsigned b, bool retain_tables = false) {
  if (auto defects = check_nice(g, ntd); !defects.empty())
    throw std::invalid_argument("inconsistent decomposition: " + defects.front());
  for (const auto& node : ntd.nodes) {
    detail::check_side(node.bag_v.size());
    detail::check_side(node.bag_c.size());
  }

  std::vector<std::optional<DPTable>> tables(ntd.nodes.size());
  DPResult result;
  auto take = [&](std::size_t child) -> DPTable {
    if (retain_tables) return *tables[child];
    DPTable t = std::move(*tables[child]);
    tables[child].reset();
    return t;
  };
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& node = ntd.nodes[t];
    DPTable table;
    switch (node.kind) {
      case NiceKind::Leaf: table = leaf_table(); break;
      case NiceKind::IntroduceVar: table = introduce_variable(take(node.children[0]), node.element, g); break;
      case NiceKind::ForgetVar: table = forget_variable(take(node.children[0]), node.element); break;
      case NiceKind::IntroduceChk: table = introduce_check(take(node.children[0]), node.element, g); break;
      case NiceKind::ForgetChk: table = forget_check(take(node.children[0]), node.element, b); break;
      case NiceKind::Join: table = join(take(node.children[0]), take(node.children[1]), g, b); break;
    }
    if (table.bag_v != node.bag_v || table.bag_c != node.bag_c)
      throw std::invalid_argument("inconsistent decomposition: bag mismatch at node " + std::to_string(t));
    table.node = t;
    result.stats.max_table_size = std::max(result.stats.max_table_size, table.entries.size());
    result.stats.total_entries += table.entries.size();
    tables[t] = std::move(table);
  }

  const auto& root = *tables[ntd.root()];
  if (const auto* e = root.find(DPKey{0, 0, b})) result.spectrum = Spectrum{e->size, e->count};
  if (retain_tables) {
    std::vector<DPTable> kept;
    kept.reserve(tables.size());
    for (auto& t : tables) kept.push_back(std::move(*t));
    result.tables = std::move(kept);
  }
  return result;
}

/// Minimum distance and number of minimum-weight codewords; empty for the
/// zero code.
inline std::optional<Spectrum> min_distance(const TannerGraph& g, const NiceTreeDecomposition& ntd) {
  return run_dp(g, ntd, 0).spectrum;
}

// --- key helpers ------------------------------------------------------------------

/// Global ids of the checks in I.
inline std::vector<CheckId> odd_checks(const DPTable& t, const DPKey& k) {
  std::vector<CheckId> out;
  for (std::size_t i = 0; i < t.bag_c.size(); ++i)
    if (bits::test(k.odd, i)) out.push_back(t.bag_c[i]);
  return out;
}

/// Global ids of the variables in Q.
inline std::vector<VarId> member_vars(const DPTable& t, const DPKey& k) {
  std::vector<VarId> out;
  for (std::size_t i = 0; i < t.bag_v.size(); ++i)
    if (bits::test(k.members, i)) out.push_back(t.bag_v[i]);
  return out;
}

/// Key of a table from global ids; throws if an id is outside the bag.
inline DPKey make_key(const DPTable& t, std::span<const CheckId> odd, std::span<const VarId> members,
                      std::uint32_t forgotten) {
  DPKey k;
  k.forgotten = forgotten;
  for (CheckId c : odd) k.odd |= Mask{1} << detail::position_of(t.bag_c, c);
  for (VarId v : members) k.members |= Mask{1} << detail::position_of(t.bag_v, v);
  return k;
}

}  // namespace trapgraph
