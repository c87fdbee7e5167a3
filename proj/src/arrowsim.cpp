#include "tunnelkit/arrowsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tunnelkit/errors.hpp"

namespace tunnelkit {
namespace {

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

// Kullback-Leibler divergence between Bernoulli(a) and Bernoulli(q).
double bernoulli_kl(double a, double q) {
  return xlogy(a, a / q) + xlogy(1.0 - a, (1.0 - a) / (1.0 - q));
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void validate(const EnsembleConfig& c) {
  if (c.n_walkers < 1) throw DomainError("n_walkers must be positive");
  if (!(c.D >= 0.0 && c.D <= 1.0)) throw DomainError("D must lie in [0, 1]");
  if (!(c.attempt_rate > 0.0 && c.attempt_rate <= 1.0)) throw DomainError("attempt_rate must lie in (0, 1]");
  if (c.n_steps < 1) throw DomainError("n_steps must be positive");
  if (!(c.initial_left_fraction >= 0.0 && c.initial_left_fraction <= 1.0))
    throw DomainError("initial_left_fraction must lie in [0, 1]");
}

double crossing_probability(const EnsembleConfig& c) { return c.attempt_rate * c.D; }

double two_box_entropy(double f) { return -xlogy(f, f) - xlogy(1.0 - f, 1.0 - f); }

std::vector<TrajectoryRecord> run_ensemble(const EnsembleConfig& config) {
  validate(config);
  const int n = config.n_walkers;
  const double p = crossing_probability(config);
  Rng rng(config.seed);

  std::vector<std::uint8_t> left(static_cast<std::size_t>(n), 0);
  if (config.placement == InitialPlacement::Exact) {
    const auto n_left = static_cast<std::size_t>(std::llround(config.initial_left_fraction * n));
    std::fill_n(left.begin(), n_left, std::uint8_t{1});
  } else {
    for (auto& w : left) w = rng.uniform() < config.initial_left_fraction ? 1 : 0;
  }

  int n_left = static_cast<int>(std::count(left.begin(), left.end(), std::uint8_t{1}));
  auto record = [&](int step) {
    const double f = static_cast<double>(n_left) / n;
    return TrajectoryRecord{step, n_left, n - n_left, f, two_box_entropy(f)};
  };

  std::vector<TrajectoryRecord> out;
  out.reserve(static_cast<std::size_t>(config.n_steps) + 1);
  out.push_back(record(0));
  for (int step = 1; step <= config.n_steps; ++step) {
    // One draw per walker per step, whatever its side: the same p applies
    // to L->R and R->L.
    for (auto& w : left) {
      if (rng.uniform() < p) {
        n_left += w ? -1 : 1;
        w ^= 1;
      }
    }
    out.push_back(record(step));
  }
  return out;
}

double stationary_entropy_sd(int n_walkers) {
  if (n_walkers < 1) throw DomainError("n_walkers must be positive");
  const int n = n_walkers;
  const double log_norm = std::lgamma(n + 1.0) - n * std::log(2.0);
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  double mean = 0.0;
  for (int k = 0; k <= n; ++k) {
    pmf[static_cast<std::size_t>(k)] = std::exp(log_norm - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
    mean += pmf[static_cast<std::size_t>(k)] * two_box_entropy(static_cast<double>(k) / n);
  }
  double var = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double d = two_box_entropy(static_cast<double>(k) / n) - mean;
    var += pmf[static_cast<std::size_t>(k)] * d * d;
  }
  return std::sqrt(var);
}

std::string_view to_string(TrendVerdict v) {
  return v == TrendVerdict::NonDecreasing ? "non_decreasing" : "other";
}

EntropyTrend entropy_trend(const std::vector<TrajectoryRecord>& trajectory, int window) {
  if (window < 1) throw DomainError("window must be >= 1");
  if (static_cast<int>(trajectory.size()) < window) throw DomainError("trajectory shorter than window");

  EntropyTrend out;
  const int n_walkers = trajectory.front().n_left + trajectory.front().n_right;
  out.tolerance = 3.0 * stationary_entropy_sd(n_walkers);
  const std::size_t w = static_cast<std::size_t>(window);
  for (std::size_t start = 0; start + w <= trajectory.size(); start += w) {
    double sum = 0.0;
    for (std::size_t i = start; i < start + w; ++i) sum += trajectory[i].entropy;
    out.window_means.push_back(sum / window);
  }
  for (std::size_t i = 1; i < out.window_means.size(); ++i)
    out.max_decrease = std::max(out.max_decrease, out.window_means[i - 1] - out.window_means[i]);
  out.verdict = out.max_decrease <= out.tolerance ? TrendVerdict::NonDecreasing : TrendVerdict::Other;
  return out;
}

ReversalReport reversal_test(const EnsembleConfig& config, int trials, double epsilon) {
  validate(config);
  if (trials < 1) throw DomainError("trials must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");

  const int n = config.n_walkers;
  const int T = config.n_steps;
  const double p = crossing_probability(config);
  const double ordered = 1.0 - epsilon;

  ReversalReport rep;
  rep.trials = trials;
  rep.horizon = T;
  rep.epsilon = epsilon;
  rep.seed = config.seed;
  rep.degenerate = p == 0.0 || p == 1.0;

  int relaxed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(trial)));
    int n_left = n;
    auto step = [&] {
      std::binomial_distribution<int> from_left(n_left, p);
      std::binomial_distribution<int> from_right(n - n_left, p);
      const int to_right = from_left(rng.engine());
      const int to_left = from_right(rng.engine());
      n_left += to_left - to_right;
    };
    for (int t = 0; t < T; ++t) step();
    if (static_cast<double>(n_left) / n < ordered) ++relaxed;
    bool returned = false;
    for (int t = 0; t < T; ++t) {
      step();
      if (static_cast<double>(n_left) / n >= ordered) returned = true;
    }
    if (returned) ++rep.returns_observed;
  }
  rep.forward_relaxation_probability = static_cast<double>(relaxed) / trials;
  rep.return_probability = static_cast<double>(rep.returns_observed) / trials;
  rep.return_upper_bound_mc = rep.returns_observed == 0 ? std::min(1.0, 3.0 / trials) : 1.0;
  if (rep.returns_observed > 0) {
    // Normal-approximation 95% upper limit.
    const double ph = rep.return_probability;
    rep.return_upper_bound_mc = std::min(1.0, ph + 1.96 * std::sqrt(ph * (1.0 - ph) / trials) + 1.0 / trials);
  }

  // Independent walkers started on the left are each on the left at step t
  // with probability q_t = 1/2 + (1 - 2p)^t / 2, so n_left ~ Binomial(n, q_t).
  const double a = std::ceil(ordered * n) / n;
  double log_sum = -std::numeric_limits<double>::infinity();
  for (int t = T + 1; t <= 2 * T; ++t) {
    const double q = 0.5 + 0.5 * std::pow(1.0 - 2.0 * p, t);
    const double log_term = (a <= q || q <= 0.0) ? (a <= q ? 0.0 : -std::numeric_limits<double>::infinity())
                                                 : -n * bernoulli_kl(a, q);
    const double hi = std::max(log_sum, log_term);
    if (std::isfinite(hi))
      log_sum = hi + std::log(std::exp(log_sum - hi) + std::exp(log_term - hi));
  }
  rep.log10_return_bound_analytic = std::min(0.0, log_sum / std::log(10.0));
  return rep;
}

}  // namespace tunnelkit
