#pragma once

// Exact counting of partitions into distinct parts, stratified by the
// difference between the number of parts in two residue classes.
//
// The counting table is a 0/1 knapsack over parts 1..n_max whose state is
// (sum, difference). Cells are fixed-width little-endian limb arrays sized
// from an a-priori bound on the largest count, so the inner loop is a
// straight carry-propagating add over contiguous memory. One table serves
// every weight up to n_max.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "parity_lab/big_count.hpp"

namespace parity_lab {

class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class limit_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultExactCeiling = 5000;

/// Largest weight the exact routines accept.
struct ExactBudget {
  int ceiling = kDefaultExactCeiling;

  void require(int n) const {
    if (n < 0) throw std::invalid_argument("weight must be non-negative");
    if (n > ceiling)
      throw budget_exceeded("n = " + std::to_string(n) + " exceeds the exact-compute ceiling " +
                            std::to_string(ceiling));
  }
};

/// Residue classes alpha, beta (mod N) being compared. Residues are indexed
/// 1..N, so alpha == N selects parts divisible by N.
class ParitySpec {
 public:
  ParitySpec(int modulus, int alpha, int beta) : modulus_(modulus), alpha_(alpha), beta_(beta) {
    if (modulus < 2) throw std::invalid_argument("modulus N must be at least 2");
    if (alpha < 1 || alpha > modulus || beta < 1 || beta > modulus)
      throw std::invalid_argument("alpha and beta must lie in [1, N]");
    if (alpha == beta) throw std::invalid_argument("alpha and beta must differ");
  }

  int modulus() const noexcept { return modulus_; }
  int alpha() const noexcept { return alpha_; }
  int beta() const noexcept { return beta_; }

  ParitySpec reflected() const { return {modulus_, beta_, alpha_}; }

  /// +1 if part is in class alpha, -1 if in class beta, 0 otherwise.
  int weight_of(long long part) const noexcept {
    const long long r = part % modulus_;
    if (r == alpha_ % modulus_) return 1;
    if (r == beta_ % modulus_) return -1;
    return 0;
  }

  friend bool operator==(const ParitySpec&, const ParitySpec&) = default;

 private:
  int modulus_;
  int alpha_;
  int beta_;
};

/// Partition into distinct parts, stored strictly decreasing.
struct Partition {
  std::vector<int> parts;
  int n = 0;

  bool valid() const {
    long long sum = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] < 1) return false;
      if (i > 0 && parts[i] >= parts[i - 1]) return false;
      sum += parts[i];
    }
    return sum == n;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Maximum number of parts of a distinct-part partition of n:
/// the largest m with m(m+1)/2 <= n.
inline int max_parts(long long n) noexcept {
  if (n <= 0) return 0;
  long long m = static_cast<long long>(std::sqrt(static_cast<double>(8 * n + 1)) - 1) / 2;
  while ((m + 1) * (m + 2) / 2 <= n) ++m;
  while (m > 0 && m * (m + 1) / 2 > n) --m;
  return static_cast<int>(m);
}

/// Every partition of n into distinct parts, largest first part first
/// (descending lexicographic order).
inline std::vector<Partition> enumerate_distinct(int n, std::optional<std::size_t> limit = {}) {
  if (n < 0) throw std::invalid_argument("weight must be non-negative");
  std::vector<Partition> out;
  std::vector<int> stack;

  auto emit = [&] {
    if (limit && out.size() >= *limit)
      throw limit_exceeded("more than " + std::to_string(*limit) + " partitions of " + std::to_string(n));
    out.push_back({stack, n});
  };

  // Remaining sum `rest`, parts strictly below `bound`.
  auto recurse = [&](auto&& self, int rest, int bound) -> void {
    if (rest == 0) {
      emit();
      return;
    }
    for (int p = std::min(rest, bound - 1); p >= 1; --p) {
      // Parts 1..p-1 sum to p(p-1)/2; prune when they cannot cover the rest.
      if (static_cast<long long>(p) * (p + 1) / 2 < rest) break;
      stack.push_back(p);
      self(self, rest - p, p);
      stack.pop_back();
    }
  };
  recurse(recurse, n, n + 1);
  return out;
}

/// Parts in class alpha minus parts in class beta.
inline int pd(const Partition& lambda, const ParitySpec& spec) {
  int diff = 0;
  for (int p : lambda.parts) diff += spec.weight_of(p);
  return diff;
}

/// Exact histogram k -> #{lambda in D(n) : pd(lambda) = k}.
class PdDistribution {
 public:
  PdDistribution(int n, ParitySpec spec, std::vector<BigCount> counts)
      : n_(n), spec_(spec), bound_(max_parts(n)), counts_(std::move(counts)) {
    if (counts_.size() != static_cast<std::size_t>(2 * bound_ + 1))
      throw std::invalid_argument("count vector does not match the difference bound");
  }

  int n() const noexcept { return n_; }
  const ParitySpec& spec() const noexcept { return spec_; }
  /// Differences are confined to [-bound(), bound()].
  int bound() const noexcept { return bound_; }

  const BigCount& at(int k) const {
    static const BigCount zero{0};
    if (k < -bound_ || k > bound_) return zero;
    return counts_[static_cast<std::size_t>(k + bound_)];
  }

  BigCount total() const {
    BigCount t = 0;
    for (const auto& c : counts_) t += c;
    return t;
  }

  /// Ascending list of k with nonzero count.
  std::vector<int> support() const {
    std::vector<int> ks;
    for (int k = -bound_; k <= bound_; ++k)
      if (at(k) != 0) ks.push_back(k);
    return ks;
  }

  /// Distribution for (N, beta, alpha): f'(k) = f(-k).
  PdDistribution reflected() const {
    return {n_, spec_.reflected(), std::vector<BigCount>(counts_.rbegin(), counts_.rend())};
  }

  /// #{pd >= c}; pd is integral so the threshold is ceil(c).
  BigCount count_at_least(double c) const {
    BigCount acc = 0;
    if (std::isnan(c)) throw std::invalid_argument("threshold is NaN");
    if (c > bound_) return acc;
    const int from = c < -bound_ ? -bound_ : static_cast<int>(std::ceil(c));
    for (int k = from; k <= bound_; ++k) acc += at(k);
    return acc;
  }

  /// f(c) - f(-c).
  BigSigned parity_bias(int c) const {
    if (c < 0) throw std::invalid_argument("bias level must be non-negative");
    return BigSigned(at(c)) - BigSigned(at(-c));
  }

 private:
  int n_;
  ParitySpec spec_;
  int bound_;
  std::vector<BigCount> counts_;
};

namespace detail {

/// Upper bound on the bits of d(m) for all m <= n, from p(n) < exp(pi*sqrt(2n/3)).
inline std::size_t limbs_for(int n) {
  const double bits = std::numbers::pi * std::sqrt(2.0 * n / 3.0) / std::numbers::ln2 + 2.0;
  return static_cast<std::size_t>(bits / 64.0) + 1;
}

template <std::size_t L>
inline bool add_cells_fixed(std::uint64_t* dst, const std::uint64_t* src, std::size_t cells) {
  std::uint64_t overflow = 0;
  for (std::size_t c = 0; c < cells; ++c, dst += L, src += L) {
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < L; ++i) {
      carry += static_cast<unsigned __int128>(dst[i]) + src[i];
      dst[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    overflow |= static_cast<std::uint64_t>(carry);
  }
  return overflow == 0;
}

inline bool add_cells_generic(std::uint64_t* dst, const std::uint64_t* src, std::size_t cells, std::size_t limbs) {
  std::uint64_t overflow = 0;
  for (std::size_t c = 0; c < cells; ++c, dst += limbs, src += limbs) {
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < limbs; ++i) {
      carry += static_cast<unsigned __int128>(dst[i]) + src[i];
      dst[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    overflow |= static_cast<std::uint64_t>(carry);
  }
  return overflow == 0;
}

/// dst[c] += src[c] for `cells` consecutive cells of `limbs` words each.
inline void add_cells(std::uint64_t* dst, const std::uint64_t* src, std::size_t cells, std::size_t limbs) {
  bool ok = false;
  switch (limbs) {
    case 1: ok = add_cells_fixed<1>(dst, src, cells); break;
    case 2: ok = add_cells_fixed<2>(dst, src, cells); break;
    case 3: ok = add_cells_fixed<3>(dst, src, cells); break;
    case 4: ok = add_cells_fixed<4>(dst, src, cells); break;
    case 5: ok = add_cells_fixed<5>(dst, src, cells); break;
    case 6: ok = add_cells_fixed<6>(dst, src, cells); break;
    case 8: ok = add_cells_fixed<8>(dst, src, cells); break;
    default: ok = add_cells_generic(dst, src, cells, limbs); break;
  }
  if (!ok) throw std::overflow_error("limb width too small for partition counts");
}

}  // namespace detail

/// Exact counts for every weight 0..n_max at once. Row m holds the
/// distribution of pd over D(m), for differences in [-max_parts(m), max_parts(m)].
class PdTable {
 public:
  PdTable(int n_max, const ParitySpec& spec, const ExactBudget& budget = {})
      : n_max_(n_max), spec_(spec), limbs_(detail::limbs_for(n_max)) {
    budget.require(n_max);
    offsets_.resize(static_cast<std::size_t>(n_max) + 2);
    std::size_t cells = 0;
    for (int s = 0; s <= n_max; ++s) {
      offsets_[static_cast<std::size_t>(s)] = cells;
      cells += static_cast<std::size_t>(2 * max_parts(s) + 1);
    }
    offsets_[static_cast<std::size_t>(n_max) + 1] = cells;
    words_.assign(cells * limbs_, 0);
    cell(0, 0)[0] = 1;
    fill();
  }

  int n_max() const noexcept { return n_max_; }
  const ParitySpec& spec() const noexcept { return spec_; }
  std::size_t limbs() const noexcept { return limbs_; }
  std::size_t memory_bytes() const noexcept { return words_.size() * sizeof(std::uint64_t); }

  /// Bytes a table for n_max would occupy.
  static std::size_t estimate_bytes(int n_max) {
    std::size_t cells = 0;
    for (int s = 0; s <= n_max; ++s) cells += static_cast<std::size_t>(2 * max_parts(s) + 1);
    return cells * detail::limbs_for(n_max) * sizeof(std::uint64_t);
  }

  PdDistribution distribution(int n) const {
    if (n < 0 || n > n_max_) throw std::out_of_range("weight outside the table");
    const int m = max_parts(n);
    std::vector<BigCount> counts;
    counts.reserve(static_cast<std::size_t>(2 * m + 1));
    for (int k = -m; k <= m; ++k)
      counts.push_back(from_limbs({cell(n, k), limbs_}));
    return {n, spec_, std::move(counts)};
  }

 private:
  std::uint64_t* cell(int s, int k) {
    const int m = max_parts(s);
    return words_.data() + (offsets_[static_cast<std::size_t>(s)] + static_cast<std::size_t>(k + m)) * limbs_;
  }
  const std::uint64_t* cell(int s, int k) const {
    const int m = max_parts(s);
    return words_.data() + (offsets_[static_cast<std::size_t>(s)] + static_cast<std::size_t>(k + m)) * limbs_;
  }

  void fill() {
    for (int p = 1; p <= n_max_; ++p) {
      const int shift = spec_.weight_of(p);
      // Descending sums so each part is used at most once.
      for (int s = n_max_; s >= p; --s) {
        const int src_m = max_parts(s - p);
        const int dst_m = max_parts(s);
        // Source differences k map to k + shift; entries that would leave the
        // destination range are zero (no partition has that many parts).
        int lo = -src_m, hi = src_m;
        if (lo + shift < -dst_m) lo = -dst_m - shift;
        if (hi + shift > dst_m) hi = dst_m - shift;
        if (lo > hi) continue;
        detail::add_cells(cell(s, lo + shift), cell(s - p, lo), static_cast<std::size_t>(hi - lo + 1), limbs_);
      }
    }
  }

  int n_max_;
  ParitySpec spec_;
  std::size_t limbs_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint64_t> words_;
};

inline PdDistribution pd_distribution(int n, const ParitySpec& spec, const ExactBudget& budget = {}) {
  budget.require(n);
  return PdTable(n, spec, budget).distribution(n);
}

/// d_{alpha,beta;N;c}(n): partitions with pd >= c.
inline BigCount count_at_least(int n, const ParitySpec& spec, double c, const ExactBudget& budget = {}) {
  return pd_distribution(n, spec, budget).count_at_least(c);
}

/// d(n) by the single-variable knapsack over parts 1..n.
inline BigCount count_distinct(int n, const ExactBudget& budget = {}) {
  budget.require(n);
  const std::size_t limbs = detail::limbs_for(n);
  std::vector<std::uint64_t> words(static_cast<std::size_t>(n + 1) * limbs, 0);
  words[0] = 1;
  for (int p = 1; p <= n; ++p)
    for (int s = n; s >= p; --s)
      detail::add_cells(words.data() + static_cast<std::size_t>(s) * limbs,
                        words.data() + static_cast<std::size_t>(s - p) * limbs, 1, limbs);
  return from_limbs({words.data() + static_cast<std::size_t>(n) * limbs, limbs});
}

/// pb(D(n), c) = f(c) - f(-c).
inline BigSigned parity_bias(int n, const ParitySpec& spec, int c, const ExactBudget& budget = {}) {
  return pd_distribution(n, spec, budget).parity_bias(c);
}

}  // namespace parity_lab
