#pragma once

// Limit-law comparisons for exact parity-difference distributions:
// n^{-1/4} pd is asymptotically normal with variance 2 sqrt3 / (pi N), and the
// normalised bias profile tends to the density (pi N / 2 sqrt3) x e^{-pi N x^2 / 4 sqrt3}.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "parity_lab/asymptotics.hpp"
#include "parity_lab/exact_counts.hpp"
#include "parity_lab/special_functions.hpp"

namespace parity_lab {

/// Variance of the limiting law of n^{-1/4} pd.
inline double limit_variance(int N) { return 2.0 * std::sqrt(3.0) / (std::numbers::pi * N); }

/// sqrt(N) / (2 3^{1/4}) e^{-pi N x^2 / (4 sqrt3)}
inline double gaussian_density(double x, int N) {
  return std::sqrt(static_cast<double>(N)) / (2.0 * quarter_power(3.0)) *
         std::exp(-std::numbers::pi * N * x * x / (4.0 * std::sqrt(3.0)));
}

inline double gaussian_cdf(double x, int N) {
  return 0.5 * special::erfc(-x / std::sqrt(2.0 * limit_variance(N)));
}

/// (pi N / (2 sqrt3)) x e^{-pi N x^2 / (4 sqrt3)}, x >= 0.
inline double bias_density(double x, int N) {
  const double k = std::numbers::pi * N / (4.0 * std::sqrt(3.0));
  return 2.0 * k * x * std::exp(-k * x * x);
}

/// Closed-form mass of the bias density on [a, b].
inline double bias_density_mass(double a, double b, int N) {
  const double k = std::numbers::pi * N / (4.0 * std::sqrt(3.0));
  return std::exp(-k * a * a) - std::exp(-k * b * b);
}

/// 12^{1/4} / sqrt(pi N): where the bias density peaks.
inline double bias_mode_prediction(int N) {
  if (N < 2) throw std::invalid_argument("N must be at least 2");
  return quarter_power(12.0) / std::sqrt(std::numbers::pi * N);
}

struct HistogramPoint {
  int k = 0;
  double x = 0.0;             // k n^{-1/4}
  double density = 0.0;       // f(k) n^{1/4} / d(n), unit area
  double density_peak = 0.0;  // f(k) / max f, unit height
  BigCount count;
};

struct NormalizedHistogram {
  int n = 0;
  ParitySpec spec{2, 1, 2};
  double bin_width = 0.0;
  BigCount total;
  std::vector<HistogramPoint> points;  // ascending k, nonzero counts only
  double mode = 0.0;
};

inline NormalizedHistogram build_histogram(const PdDistribution& dist) {
  if (dist.n() < 1) throw std::invalid_argument("histogram needs n >= 1");
  NormalizedHistogram h;
  h.n = dist.n();
  h.spec = dist.spec();
  h.bin_width = 1.0 / quarter_power(dist.n());
  h.total = dist.total();
  BigCount peak = 0;
  for (int k : dist.support())
    if (dist.at(k) > peak) peak = dist.at(k);
  bool mode_set = false;
  BigCount best = 0;
  for (int k : dist.support()) {
    HistogramPoint p;
    p.k = k;
    p.x = k * h.bin_width;
    p.count = dist.at(k);
    p.density = ratio_to_double(p.count, h.total) / h.bin_width;
    p.density_peak = p.count == peak ? 1.0 : ratio_to_double(p.count, peak);
    if (!mode_set || p.count > best) {
      best = p.count;
      h.mode = p.x;
      mode_set = true;
    }
    h.points.push_back(std::move(p));
  }
  return h;
}

inline NormalizedHistogram build_histogram(int n, const ParitySpec& spec, const ExactBudget& budget = {}) {
  return build_histogram(pd_distribution(n, spec, budget));
}

/// sup_k |F_n(x_k) - G(x_k)| over jump points x_k = k n^{-1/4}, with the
/// right-continuous empirical CDF F_n and the limiting normal CDF G.
inline double ks_distance(const PdDistribution& dist) {
  if (dist.n() < 1) throw std::invalid_argument("KS distance needs n >= 1");
  const BigCount total = dist.total();
  const double step = 1.0 / quarter_power(dist.n());
  const int N = dist.spec().modulus();
  BigCount cumulative = 0;
  double worst = 0.0;
  for (int k : dist.support()) {
    cumulative += dist.at(k);
    const double empirical = ratio_to_double(cumulative, total);
    worst = std::max(worst, std::abs(empirical - gaussian_cdf(k * step, N)));
  }
  return worst;
}

inline double ks_distance(int n, const ParitySpec& spec, const ExactBudget& budget = {}) {
  return ks_distance(pd_distribution(n, spec, budget));
}

struct BiasPoint {
  int c = 0;
  BigSigned pb;
};

struct BiasProfile {
  int n = 0;
  ParitySpec spec{2, 1, 2};
  std::vector<BiasPoint> points;  // c = 0 .. max_parts(n)
  BigSigned normalizer;           // d_{a,b;N;0} - d_{b,a;N;0}
};

inline BiasProfile build_bias_profile(const PdDistribution& dist) {
  BiasProfile p;
  p.n = dist.n();
  p.spec = dist.spec();
  const PdDistribution mirror = dist.reflected();
  p.normalizer = BigSigned(dist.count_at_least(0)) - BigSigned(mirror.count_at_least(0));
  for (int c = 0; c <= dist.bound(); ++c) p.points.push_back({c, dist.parity_bias(c)});
  return p;
}

inline BiasProfile build_bias_profile(int n, const ParitySpec& spec, const ExactBudget& budget = {}) {
  return build_bias_profile(pd_distribution(n, spec, budget));
}

/// Share of the total bias carried by levels c with a <= c n^{-1/4} <= b.
inline double bias_cumulative_ratio(const BiasProfile& profile, double a, double b) {
  if (!(a >= 0.0 && a <= b)) throw std::invalid_argument("need 0 <= a <= b");
  if (profile.normalizer == 0) throw std::domain_error("total bias is zero; n too small for the bias law");
  const double scale = 1.0 / quarter_power(profile.n);
  BigSigned acc = 0;
  for (const auto& pt : profile.points) {
    const double x = pt.c * scale;
    if (x >= a && x <= b) acc += pt.pb;
  }
  return ratio_to_double(acc, profile.normalizer);
}

inline double bias_cumulative_ratio(int n, const ParitySpec& spec, double a, double b, const ExactBudget& budget = {}) {
  return bias_cumulative_ratio(build_bias_profile(n, spec, budget), a, b);
}

/// Level c maximising pb(c); smallest such c on ties.
inline int bias_mode(const BiasProfile& profile) {
  int best_c = 0;
  BigSigned best = 0;
  bool first = true;
  for (const auto& pt : profile.points) {
    if (first || pt.pb > best) {
      best = pt.pb;
      best_c = pt.c;
      first = false;
    }
  }
  return best_c;
}

}  // namespace parity_lab
