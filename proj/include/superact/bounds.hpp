// Analytic finite-blocklength rate bounds for the flagged dephase-and-shift
// channel, and the crossing blocklengths where the achievable lower bounds
// overtake the converse upper bounds.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "superact/effective_channel.hpp"

namespace superact {

inline double log2_safe(double x) { return x > 0 ? std::log2(x) : 0.0; }

// Binary entropy in bits, with 0 log 0 = 0.
inline double binary_entropy(double p) {
  return -p * log2_safe(p) - (1 - p) * log2_safe(1 - p);
}

inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0;
  for (double x : p) h -= x * log2_safe(x);
  return h;
}

// ---- moments of the information-density distribution -----------------------
// For the flagged channel with erasure probability q, shift weights w and
// key dimension K, the relevant classical distribution takes the value
// log2 K with probability 1-q and log2(w_l) with probability q w_l.

struct EntropyStats {
  double iota = 0;   // first moment (asymptotic rate)
  double nu = 0;     // variance
  double tau = 0;    // third absolute central moment
};

inline EntropyStats entropy_stats(const EffectiveChannelSpec& spec) {
  const double q = spec.q;
  const double logK = std::log2(static_cast<double>(spec.K));
  std::vector<double> vals, probs;
  vals.push_back(logK);
  probs.push_back(1 - q);
  for (double w : spec.weights) {
    vals.push_back(log2_safe(w));
    probs.push_back(q * w);
  }
  EntropyStats s;
  for (size_t i = 0; i < vals.size(); ++i) s.iota += probs[i] * vals[i];
  for (size_t i = 0; i < vals.size(); ++i) {
    const double d = vals[i] - s.iota;
    s.nu += probs[i] * d * d;
    s.tau += probs[i] * std::abs(d) * d * d;
  }
  return s;
}

// ---- inverse standard normal CDF -------------------------------------------
// Acklam's rational approximation followed by one Halley refinement step,
// accurate to ~1e-15 on (0, 1).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse_normal_cdf: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double x;
  if (p < plow) {
    const double u = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1);
  } else if (p > phigh) {
    const double u = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1);
  } else {
    const double u = p - 0.5, t = u * u;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) *
        u /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1);
  }
  // Halley refinement against the complementary error function.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  x = x - u / (1 + x * u / 2);
  return x;
}

// ---- rate bounds at blocklength n ------------------------------------------

// Gaussian (second-order) approximation to the achievable rate.
inline double lower_bound_normal(int n, double eps,
                                 const EntropyStats& s) {
  return s.iota + std::sqrt(s.nu / n) * inverse_normal_cdf(eps);
}

// Achievable rate with a Berry-Esseen finite-n correction; returns NaN if the
// corrected error budget is non-positive (no guarantee at this blocklength).
inline double lower_bound_berry_esseen(int n, double eps,
                                       const EntropyStats& s,
                                       double C = 0.4748) {
  const double arg = eps - C * s.tau / (std::pow(s.nu, 1.5) * std::sqrt(n));
  if (arg <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return s.iota + std::sqrt(s.nu / n) * inverse_normal_cdf(arg);
}

// Converse for the 50% erasure member of the pair used alone.
inline double upper_bound_erasure(int n, double eps) {
  if (eps >= 0.5) return std::numeric_limits<double>::infinity();
  return -std::log2(1 - 2 * eps) / n;
}

// Converse for the bound-entangled member used alone.
inline double upper_bound_ppt(int n, double eps) {
  return -std::log2(1 - eps) / n;
}

// Fidelity thresholds: sending one qubit through either channel alone cannot
// exceed (d+1)/(2d) entanglement fidelity; random guessing achieves 1/d.
inline std::pair<double, double> fidelity_thresholds(int d) {
  return {1.0 / d, (d + 1.0) / (2.0 * d)};
}

// ---- Renyi rates and the error-exponent converse ----------------------------

// Order-alpha rate of the flagged channel.
inline double petz_iota(double alpha, const EffectiveChannelSpec& spec) {
  const double q = spec.q, K = spec.K;
  double s = 0;
  for (double w : spec.weights) s += std::pow(w, alpha);
  const double inner =
      q * std::pow(s, 1.0 / alpha) + (1 - q) * std::pow(K, (alpha - 1) / alpha);
  return alpha / (alpha - 1) * std::log2(inner);
}

namespace detail {
// Golden-section maximization on [lo, hi] to absolute tolerance tol.
inline double golden_max(const std::function<double(double)>& f, double lo,
                         double hi, double tol) {
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return (a + b) / 2;
}
}  // namespace detail

// Root of iota_alpha on (0, 1): largest order at which the Renyi rate is
// still zero.  Found by a sign-change bisection.
inline double renyi_rate_root(const EffectiveChannelSpec& spec) {
  auto f = [&](double a) { return petz_iota(a, spec); };
  double lo = 0.5, hi = 1 - 1e-9;
  if (f(lo) >= 0 || f(hi) <= 0)
    throw std::runtime_error("renyi_rate_root: no sign change on bracket");
  while (hi - lo > 1e-12) {
    const double mid = (lo + hi) / 2;
    (f(mid) <= 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

// Maximizer of (1-alpha)/alpha * iota_alpha over alpha in (root, 1).
inline double renyi_exponent_argmax(const EffectiveChannelSpec& spec) {
  auto f = [&](double a) { return (1 - a) / a * petz_iota(a, spec); };
  return detail::golden_max(f, renyi_rate_root(spec), 1 - 1e-9, 1e-10);
}

// Converse on the error probability of any rate-(log2 d)/n code: the bound
// decays exponentially in n once the rate exceeds every Renyi rate.
inline double error_exponent_upper(int n, int d,
                                   const EffectiveChannelSpec& spec) {
  auto bound_at = [&](double s) {
    const double alpha = 1.0 / (1.0 + s);
    const double expo =
        0.5 * s * (n * petz_iota(alpha, spec) - std::log2(double(d)));
    const double pref =
        2 * std::sqrt(std::pow(s, s) * std::pow(1 - s, 1 - s) / s);
    return pref * std::exp2(-expo);
  };
  // Minimize over s in (0,1): maximize the negative, with a dense fallback
  // scan to avoid local-optimum traps near the edges.
  double best = 1.0;
  for (int i = 1; i < 10000; ++i) {
    const double s = i / 10000.0;
    best = std::min(best, bound_at(s));
  }
  const double s_opt = detail::golden_max(
      [&](double s) { return -bound_at(s); }, 1e-10, 1 - 1e-10, 1e-10);
  best = std::min(best, bound_at(s_opt));
  return std::min(best, 1.0);
}

// ---- crossing blocklengths ---------------------------------------------------

// Smallest n at which pred(n) holds, assuming monotone onset; exponential
// bracketing followed by binary refinement.  Returns cap+1 if never reached.
inline long crossing_point(const std::function<bool(long)>& pred,
                           long cap = 100000000L) {
  if (pred(1)) return 1;
  long lo = 1, hi = 2;
  while (hi <= cap && !pred(hi)) {
    lo = hi;
    hi *= 2;
  }
  if (hi > cap) {
    if (!pred(cap)) return cap + 1;
    hi = cap;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

// Blocklength where the achievable rate of the pair first exceeds the
// converses of both channels used alone (i.e. the larger of the two).
inline long crossing_normal(double eps, const EffectiveChannelSpec& spec) {
  const EntropyStats s = entropy_stats(spec);
  return crossing_point([&](long n) {
    const double ub = std::max(upper_bound_erasure(static_cast<int>(n), eps),
                               upper_bound_ppt(static_cast<int>(n), eps));
    return lower_bound_normal(static_cast<int>(n), eps, s) > ub;
  });
}

inline long crossing_berry_esseen(double eps,
                                  const EffectiveChannelSpec& spec,
                                  double C = 0.4748) {
  const EntropyStats s = entropy_stats(spec);
  return crossing_point([&](long n) {
    const double lb = lower_bound_berry_esseen(static_cast<int>(n), eps, s, C);
    if (std::isnan(lb)) return false;
    const double ub = std::max(upper_bound_erasure(static_cast<int>(n), eps),
                               upper_bound_ppt(static_cast<int>(n), eps));
    return lb > ub;
  });
}

// Blocklength where the error-exponent converse for a single qubit drops
// below the given error threshold.
inline long crossing_exponent(double threshold,
                              const EffectiveChannelSpec& spec) {
  return crossing_point([&](long n) {
    return error_exponent_upper(static_cast<int>(n), 2, spec) < threshold;
  });
}

}  // namespace superact
