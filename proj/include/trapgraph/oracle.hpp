#pragma once

// Exhaustive trapping-set search. Deliberately naive: every subset of the
// requested sizes is visited, so it is only usable on small codes, where it
// serves as ground truth for the dynamic program.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trapgraph/tanner.hpp"

namespace trapgraph {

struct TrappingSetRecord {
  std::vector<VarId> members;  // sorted
  std::size_t a = 0;
  std::size_t b = 0;

  friend bool operator==(const TrappingSetRecord&, const TrappingSetRecord&) = default;
};

class WorkLimitExceeded : public std::runtime_error {
 public:
  explicit WorkLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct OracleOptions {
  /// Maximum number of subsets evaluated.
  std::uint64_t work_limit = 100'000'000;
  /// 0 means one thread per hardware thread.
  unsigned threads = 1;
};

struct OracleSpectrum {
  std::size_t a_min = 0;
  boost::multiprecision::cpp_int count;
};

namespace detail {

inline std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  boost::multiprecision::cpp_int r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Visits every size-a subset and counts (optionally collects) those with
/// exactly b_target odd checks. Threads split the work by smallest member;
/// hits are bucketed by that member so output order is independent of the
/// thread count.
class SubsetScanner {
 public:
  explicit SubsetScanner(const TannerGraph& g) : g_(g), words_((g.n_chk() + 63) / 64), columns_(g.n_var() * words_, 0) {
    for (VarId v = 0; v < g.n_var(); ++v)
      for (CheckId c : g.var_neighbors(v)) columns_[v * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
  }

  /// Returns the matching subsets of size a, sorted lexicographically.
  /// When `collect` is false only the count is produced.
  std::pair<std::uint64_t, std::vector<std::vector<VarId>>> scan(std::size_t a, std::size_t b_target, bool collect,
                                                                 unsigned threads) const {
    const std::size_t n = g_.n_var();
    if (a == 0 || a > n) return {0, {}};
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n - a + 1));
    threads = std::max(threads, 1U);
    std::vector<std::uint64_t> counts(threads, 0);
    std::vector<std::vector<std::vector<VarId>>> found(n - a + 1);
    auto worker = [&](unsigned id) {
      std::vector<VarId> stack(a);
      std::vector<std::uint64_t> acc((a + 1) * words_, 0);
      for (std::size_t first = id; first + a <= n; first += threads) {
        stack[0] = static_cast<VarId>(first);
        counts[id] += descend(1, a, b_target, stack, acc, collect ? &found[first] : nullptr);
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    std::vector<std::vector<VarId>> all;
    for (auto& f : found)
      for (auto& s : f) all.push_back(std::move(s));
    return {total, std::move(all)};
  }

 private:
  std::uint64_t descend(std::size_t depth, std::size_t a, std::size_t b_target, std::vector<VarId>& stack,
                        std::vector<std::uint64_t>& acc, std::vector<std::vector<VarId>>* out) const {
    // acc row `depth` holds the XOR of the first `depth` columns
    const VarId last = stack[depth - 1];
    const std::uint64_t* col = &columns_[last * words_];
    const std::uint64_t* prev = &acc[(depth - 1) * words_];
    std::uint64_t* cur = &acc[depth * words_];
    for (std::size_t w = 0; w < words_; ++w) cur[w] = prev[w] ^ col[w];
    if (depth == a) {
      std::size_t odd = 0;
      for (std::size_t w = 0; w < words_; ++w) odd += static_cast<std::size_t>(std::popcount(cur[w]));
      if (odd != b_target) return 0;
      if (out) out->push_back(stack);
      return 1;
    }
    std::uint64_t hits = 0;
    const std::size_t n = g_.n_var();
    for (std::size_t v = last + 1; v + (a - depth) <= n; ++v) {
      stack[depth] = static_cast<VarId>(v);
      hits += descend(depth + 1, a, b_target, stack, acc, out);
    }
    return hits;
  }

  const TannerGraph& g_;
  std::size_t words_;
  std::vector<std::uint64_t> columns_;
};

}  // namespace detail

/// Every nonempty S with |S| <= a_max and exactly b_target odd checks, in
/// lexicographic order of the sorted member lists.
inline std::vector<TrappingSetRecord> brute_force_enumerate(const TannerGraph& g, std::size_t a_max,
                                                            std::size_t b_target, const OracleOptions& opt = {}) {
  a_max = std::min(a_max, g.n_var());
  std::uint64_t work = 0;
  for (std::size_t a = 1; a <= a_max; ++a) {
    work += detail::binomial_capped(g.n_var(), a, opt.work_limit);
    if (work > opt.work_limit)
      throw WorkLimitExceeded("enumerating sets up to size " + std::to_string(a_max) + " exceeds the work limit of " +
                              std::to_string(opt.work_limit) + " subsets");
  }
  detail::SubsetScanner scanner(g);
  std::vector<TrappingSetRecord> out;
  for (std::size_t a = 1; a <= a_max; ++a) {
    auto [count, sets] = scanner.scan(a, b_target, true, detail::resolve_threads(opt.threads));
    for (auto& s : sets) out.push_back(TrappingSetRecord{std::move(s), a, b_target});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.members < y.members; });
  return out;
}

/// Smallest a <= a_cap with at least one (a, b_target)-trapping set, and
/// how many there are.
inline std::optional<OracleSpectrum> brute_force_spectrum(const TannerGraph& g, std::size_t b_target, std::size_t a_cap,
                                                          const OracleOptions& opt = {}) {
  a_cap = std::min(a_cap, g.n_var());
  if (b_target > g.n_chk()) return std::nullopt;
  detail::SubsetScanner scanner(g);
  std::uint64_t work = 0;
  for (std::size_t a = 1; a <= a_cap; ++a) {
    work += detail::binomial_capped(g.n_var(), a, opt.work_limit);
    if (work > opt.work_limit)
      throw WorkLimitExceeded("searching sets of size " + std::to_string(a) + " exceeds the work limit of " +
                              std::to_string(opt.work_limit) + " subsets");
    auto [count, sets] = scanner.scan(a, b_target, false, detail::resolve_threads(opt.threads));
    if (count > 0) return OracleSpectrum{a, count};
  }
  return std::nullopt;
}

}  // namespace trapgraph
