#pragma once

// Recovers one smallest trapping set by walking retained DP tables from the
// root key back to the introduce-variable nodes that created its members.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trapgraph/decomp.hpp"
#include "trapgraph/dp.hpp"

namespace trapgraph {

enum class WitnessRule {
  Base,        // introduce-variable: the singleton {v}
  Kept,        // introduce-variable: v not in the set
  Extended,    // introduce-variable: v added to a child state
  Mapped,      // introduce-check: key remapped one to one
  Merged,      // forget node: one of the merged predecessors
  JoinPair,    // join: both children contribute
  JoinLeft,    // join: only the left child contributes (Q empty)
  JoinRight,   // join: only the right child contributes (Q empty)
};

struct WitnessStep {
  std::size_t node = 0;
  DPKey key;
  std::uint32_t size = 0;
  WitnessRule rule = WitnessRule::Base;
  std::optional<DPKey> left;   // followed child key (the only child for non-join nodes)
  std::optional<DPKey> right;  // right child key at join nodes
};

struct Witness {
  std::vector<VarId> members;  // sorted
  std::vector<WitnessStep> trace;
};

class NoTrappingSet : public std::runtime_error {
 public:
  NoTrappingSet() : std::runtime_error("no trapping set with the requested number of odd checks") {}
};

/// Ties go to the smallest predecessor key; at join nodes a single-sided
/// predecessor (left, then right) is preferred over a pair.
inline Witness extract_witness(const TannerGraph& g, const NiceTreeDecomposition& ntd, unsigned b,
                               const std::vector<DPTable>& tables) {
  if (tables.size() != ntd.nodes.size()) throw std::invalid_argument("DP tables were not retained for every node");
  const DPKey root_key{0, 0, b};
  const DPEntry* root_entry = tables[ntd.root()].find(root_key);
  if (!root_entry) throw NoTrappingSet();

  Witness w;
  VarSet members(g.n_var());
  std::vector<std::pair<std::size_t, DPKey>> stack{{ntd.root(), root_key}};

  auto size_at = [&](std::size_t node, const DPKey& k) -> std::optional<std::uint32_t> {
    if (const auto* e = tables[node].find(k)) return e->size;
    return std::nullopt;
  };
  auto broken = [](std::size_t node) {
    return std::logic_error("DP tables inconsistent at node " + std::to_string(node));
  };

  while (!stack.empty()) {
    auto [t, key] = stack.back();
    stack.pop_back();
    const auto& node = ntd.nodes[t];
    const auto& table = tables[t];
    const auto size = size_at(t, key);
    if (!size) throw broken(t);
    WitnessStep step{t, key, *size, WitnessRule::Base, std::nullopt, std::nullopt};

    switch (node.kind) {
      case NiceKind::Leaf:
        throw broken(t);
      case NiceKind::IntroduceVar: {
        const auto child = node.children[0];
        const std::size_t pos = detail::position_of(table.bag_v, node.element);
        const Mask vbit = Mask{1} << pos;
        const Mask odd_v = detail::check_mask_of(g, node.element, table.bag_c);
        if (!(key.members & vbit)) {
          step.rule = WitnessRule::Kept;
          step.left = DPKey{key.odd, bits::erase_at(key.members, pos), key.forgotten};
        } else if (key == DPKey{odd_v, vbit, 0}) {
          step.rule = WitnessRule::Base;
          members.set(node.element);
        } else {
          step.rule = WitnessRule::Extended;
          step.left = DPKey{key.odd ^ odd_v, bits::erase_at(key.members, pos), key.forgotten};
          members.set(node.element);
        }
        if (step.left) {
          const std::uint32_t want = *size - (step.rule == WitnessRule::Extended ? 1 : 0);
          if (size_at(child, *step.left) != want) throw broken(t);
          stack.emplace_back(child, *step.left);
        }
        break;
      }
      case NiceKind::IntroduceChk: {
        const std::size_t pos = detail::position_of(table.bag_c, node.element);
        step.rule = WitnessRule::Mapped;
        step.left = DPKey{bits::erase_at(key.odd, pos), key.members, key.forgotten};
        if (size_at(node.children[0], *step.left) != *size) throw broken(t);
        stack.emplace_back(node.children[0], *step.left);
        break;
      }
      case NiceKind::ForgetVar:
      case NiceKind::ForgetChk: {
        const auto child = node.children[0];
        const auto& ct = tables[child];
        std::vector<DPKey> candidates;
        if (node.kind == NiceKind::ForgetVar) {
          const std::size_t pos = detail::position_of(ct.bag_v, node.element);
          const Mask m = bits::insert_at(key.members, pos);
          candidates = {DPKey{key.odd, m, key.forgotten}, DPKey{key.odd, m | (Mask{1} << pos), key.forgotten}};
        } else {
          const std::size_t pos = detail::position_of(ct.bag_c, node.element);
          const Mask o = bits::insert_at(key.odd, pos);
          candidates = {DPKey{o, key.members, key.forgotten}};
          if (key.forgotten > 0) candidates.push_back(DPKey{o | (Mask{1} << pos), key.members, key.forgotten - 1});
        }
        std::sort(candidates.begin(), candidates.end());
        for (const auto& c : candidates)
          if (size_at(child, c) == *size) {
            step.left = c;
            break;
          }
        if (!step.left) throw broken(t);
        step.rule = WitnessRule::Merged;
        stack.emplace_back(child, *step.left);
        break;
      }
      case NiceKind::Join: {
        const auto lc = node.children[0], rc = node.children[1];
        if (key.members == 0 && size_at(lc, key) == *size) {
          step.rule = WitnessRule::JoinLeft;
          step.left = key;
        } else if (key.members == 0 && size_at(rc, key) == *size) {
          step.rule = WitnessRule::JoinRight;
          step.right = key;
        } else {
          std::vector<Mask> var_checks(table.bag_v.size());
          for (std::size_t i = 0; i < table.bag_v.size(); ++i)
            var_checks[i] = detail::check_mask_of(g, table.bag_v[i], table.bag_c);
          const Mask shared = shared_odd_checks(key.members, var_checks);
          const auto overlap = static_cast<std::uint32_t>(bits::count(key.members));
          std::optional<std::pair<DPKey, DPKey>> best;
          for (const auto& [lk, le] : tables[lc].entries) {
            if (lk.members != key.members || lk.forgotten > key.forgotten) continue;
            const DPKey rk{key.odd ^ lk.odd ^ shared, key.members, key.forgotten - lk.forgotten};
            const auto rs = size_at(rc, rk);
            if (!rs || le.size + *rs - overlap != *size) continue;
            if (!best || std::pair(lk, rk) < *best) best = std::pair(lk, rk);
          }
          if (!best) throw broken(t);
          step.rule = WitnessRule::JoinPair;
          step.left = best->first;
          step.right = best->second;
        }
        if (step.right) stack.emplace_back(rc, *step.right);
        if (step.left) stack.emplace_back(lc, *step.left);
        break;
      }
    }
    w.trace.push_back(step);
  }

  for (auto v = members.find_first(); v != VarSet::npos; v = members.find_next(v))
    w.members.push_back(static_cast<VarId>(v));
  if (w.members.size() != root_entry->size) throw std::logic_error("witness size differs from the DP minimum");
  return w;
}

/// Runs the DP with retained tables and extracts a witness; empty when no
/// trapping set exists.
inline std::optional<Witness> find_witness(const TannerGraph& g, const NiceTreeDecomposition& ntd, unsigned b) {
  auto r = run_dp(g, ntd, b, true);
  if (!r.spectrum) return std::nullopt;
  return extract_witness(g, ntd, b, *r.tables);
}

}  // namespace trapgraph
