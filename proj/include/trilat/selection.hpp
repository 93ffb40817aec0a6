#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "trilat/basis.hpp"

namespace trilat {

/// Rank statistic: the value of the rank-th largest element and its position
/// in the input vector.
template <typename Scalar>
struct OrderStat {
  Scalar value = Scalar(0);
  Index arg = -1;
};

namespace detail {

/// Strict total order used everywhere ties can occur: a ranks before b iff
/// its value is larger, or the values are equal and a has the smaller index.
/// Makes every selection, sort and threshold comparison deterministic even
/// with duplicated values.
template <typename Container>
struct RankBefore {
  const Container& r;
  bool operator()(Index a, Index b) const {
    const auto ra = r[a];
    const auto rb = r[b];
    return ra > rb || (ra == rb && a < b);
  }
};

template <typename Less>
void insertion_sort(Index* first, Index* last, Less less) {
  for (Index* it = first + 1; it < last; ++it) {
    const Index v = *it;
    Index* hole = it;
    while (hole > first && less(v, *(hole - 1))) {
      *hole = *(hole - 1);
      --hole;
    }
    *hole = v;
  }
}

/// Lomuto partition around *pivot; returns the pivot's final position.
/// Elements left of it compare less (rank before), elements right do not.
template <typename Less>
Index* partition_around(Index* first, Index* last, Index* pivot, Less less) {
  std::iter_swap(first, pivot);
  Index* store = first + 1;
  for (Index* it = first + 1; it < last; ++it) {
    if (less(*it, *first)) {
      std::iter_swap(it, store);
      ++store;
    }
  }
  std::iter_swap(first, store - 1);
  return store - 1;
}

/// Deterministic worst-case-linear select (median of medians, groups of 5).
/// Places the k-th element (0-based under `less`) at first+k with the
/// partition property and returns that pointer.
template <typename Less>
Index* mom_select(Index* first, Index* last, std::ptrdiff_t k, Less less) {
  while (true) {
    const std::ptrdiff_t n = last - first;
    if (n <= 5) {
      insertion_sort(first, last, less);
      return first + k;
    }
    // Move each group's median to the front, then pick the median of medians.
    Index* dst = first;
    for (Index* g = first; g < last; g += 5) {
      Index* ge = g + 5 < last ? g + 5 : last;
      insertion_sort(g, ge, less);
      std::iter_swap(dst, g + (ge - g) / 2);
      ++dst;
    }
    Index* pivot = mom_select(first, dst, (dst - first) / 2, less);
    Index* p = partition_around(first, last, pivot, less);
    const std::ptrdiff_t d = p - first;
    if (k == d) {
      return p;
    }
    if (k < d) {
      last = p;
    } else {
      k -= d + 1;
      first = p + 1;
    }
  }
}

template <typename Less>
Index* median_of_three(Index* a, Index* b, Index* c, Less less) {
  if (less(*b, *a)) std::swap(a, b);
  if (less(*c, *b)) {
    std::swap(b, c);
    if (less(*b, *a)) std::swap(a, b);
  }
  return b;
}

/// Introselect: quickselect with median-of-3 pivots, falling back to
/// median-of-medians once the depth budget is exhausted. Expected O(n),
/// worst case O(n). Same placement contract as mom_select.
template <typename Less>
Index* intro_select(Index* first, Index* last, std::ptrdiff_t k, Less less) {
  int budget =
      2 * std::bit_width(static_cast<std::size_t>(last - first)) + 1;
  while (true) {
    const std::ptrdiff_t n = last - first;
    if (n <= 24) {
      insertion_sort(first, last, less);
      return first + k;
    }
    if (--budget < 0) {
      return mom_select(first, last, k, less);
    }
    Index* pivot = median_of_three(first, first + n / 2, last - 1, less);
    Index* p = partition_around(first, last, pivot, less);
    const std::ptrdiff_t d = p - first;
    if (k == d) {
      return p;
    }
    if (k < d) {
      last = p;
    } else {
      k -= d + 1;
      first = p + 1;
    }
  }
}

}  // namespace detail

/// Selects the rank-th largest elements of r (1-based ranks, strict total
/// order above) for each requested rank. out[i] answers ranks[i]. The caller's
/// vector is left intact; only `scratch` (an index permutation) is reordered.
/// Expected O(n) total for a bounded number of ranks.
template <typename Derived, typename Scalar = typename Derived::Scalar>
void select_order_stats(const Eigen::MatrixBase<Derived>& r,
                        std::span<const Index> ranks,
                        std::span<OrderStat<Scalar>> out,
                        std::vector<Index>& scratch) {
  const Index n = r.size();
  if (out.size() < ranks.size()) {
    throw std::invalid_argument("select_order_stats: output span too small");
  }
  for (const Index rank : ranks) {
    if (rank < 1 || rank > n) {
      throw std::out_of_range("select_order_stats: rank " + std::to_string(rank) +
                              " out of range [1, " + std::to_string(n) + "]");
    }
  }
  scratch.resize(static_cast<std::size_t>(n));
  std::iota(scratch.begin(), scratch.end(), Index(0));

  // Process ranks in increasing order; each selection leaves the top of the
  // array partitioned, so later (larger) ranks search a shrinking suffix.
  std::array<std::size_t, 8> by_rank{};
  const std::size_t m = ranks.size();
  if (m > by_rank.size()) {
    throw std::invalid_argument("select_order_stats: too many ranks requested");
  }
  for (std::size_t i = 0; i < m; ++i) by_rank[i] = i;
  std::sort(by_rank.begin(), by_rank.begin() + m,
            [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });

  const detail::RankBefore<Derived> before{r.derived()};
  Index* base = scratch.data();
  Index lo = 0;
  Index prev_rank = 0;
  OrderStat<Scalar> prev_stat;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t slot = by_rank[i];
    const Index rank = ranks[slot];
    if (rank == prev_rank) {
      out[slot] = prev_stat;
      continue;
    }
    Index* p = detail::intro_select(base + lo, base + n, rank - 1 - lo, before);
    prev_stat = OrderStat<Scalar>{r.derived()[*p], *p};
    prev_rank = rank;
    out[slot] = prev_stat;
    lo = rank;  // ranks 1..rank are now settled in scratch[0..rank)
  }
}

/// Convenience form returning rank -> statistic.
template <typename Derived, typename Scalar = typename Derived::Scalar>
std::map<Index, OrderStat<Scalar>> select_order_stats(
    const Eigen::MatrixBase<Derived>& r, std::span<const Index> ranks) {
  std::vector<OrderStat<Scalar>> out(ranks.size());
  std::vector<Index> scratch;
  select_order_stats(r, ranks, std::span<OrderStat<Scalar>>(out), scratch);
  std::map<Index, OrderStat<Scalar>> result;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    result[ranks[i]] = out[i];
  }
  return result;
}

template <typename Derived, typename Scalar = typename Derived::Scalar>
std::map<Index, OrderStat<Scalar>> select_order_stats(
    const Eigen::MatrixBase<Derived>& r, std::initializer_list<Index> ranks) {
  return select_order_stats(r, std::span<const Index>(ranks.begin(), ranks.size()));
}

}  // namespace trilat
