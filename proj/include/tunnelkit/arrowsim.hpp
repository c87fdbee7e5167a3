#pragma once

// Two-region ensemble of walkers that cross a barrier with the same
// probability in either direction. Each crossing is individually reciprocal;
// the coarse-grained occupancy still relaxes one way, and its two-box
// Shannon entropy rises towards ln 2.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tunnelkit {

/// Seedable 64-bit generator with a fixed, documented algorithm so runs are
/// bit-reproducible. Uniform doubles use the top 53 bits of each draw.
class Rng {
public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives independent per-trial seeds from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

enum class InitialPlacement {
  Exact,     // the first round(f * n) walkers start on the left
  Binomial,  // each walker starts on the left with probability f
};

struct EnsembleConfig {
  int n_walkers = 10000;
  /// Crossing probability per attempt. There is deliberately one value for
  /// both directions.
  double D = 0.1;
  double attempt_rate = 1.0;
  int n_steps = 500;
  std::uint64_t seed = 42;
  double initial_left_fraction = 1.0;
  InitialPlacement placement = InitialPlacement::Exact;
};

/// Throws DomainError on out-of-range fields.
void validate(const EnsembleConfig& config);

/// Per-attempt switching probability a * D, shared by both directions.
double crossing_probability(const EnsembleConfig& config);

struct TrajectoryRecord {
  int step = 0;
  int n_left = 0;
  int n_right = 0;
  double f_left = 0.0;
  double entropy = 0.0;  // nats
};

/// -f ln f - (1 - f) ln(1 - f), zero at f = 0 and f = 1.
double two_box_entropy(double f_left);

/// Records for steps 0 (initial state) through n_steps.
std::vector<TrajectoryRecord> run_ensemble(const EnsembleConfig& config);

/// Standard deviation of the two-box entropy when n walkers are independently
/// and evenly split, computed exactly from the Binomial(n, 1/2) distribution.
double stationary_entropy_sd(int n_walkers);

enum class TrendVerdict { NonDecreasing, Other };

std::string_view to_string(TrendVerdict v);

struct EntropyTrend {
  TrendVerdict verdict = TrendVerdict::NonDecreasing;
  std::vector<double> window_means;
  double max_decrease = 0.0;  // largest drop between consecutive window means
  double tolerance = 0.0;     // 3 x stationary_entropy_sd
};

/// Means over consecutive non-overlapping windows of `window` records (a
/// trailing partial window is dropped); non-decreasing when no drop exceeds
/// the tolerance. Throws DomainError for window < 1 or a short trajectory.
EntropyTrend entropy_trend(const std::vector<TrajectoryRecord>& trajectory, int window);

struct ReversalReport {
  int trials = 0;
  int horizon = 0;        // T: steps forward, then T more
  double epsilon = 0.0;   // ordered region is f_left >= 1 - epsilon
  /// Fraction of trials that left the ordered region by step T.
  double forward_relaxation_probability = 0.0;
  /// Fraction of trials that re-entered it at some step in (T, 2T].
  double return_probability = 0.0;
  int returns_observed = 0;
  /// 95% upper bound on the return probability from the trial count alone
  /// (3 / trials when nothing was observed).
  double return_upper_bound_mc = 0.0;
  /// log10 of a union/Chernoff bound on the return probability built from
  /// the exact Binomial(n, q_t) occupancy law of independent walkers.
  double log10_return_bound_analytic = 0.0;
  bool degenerate = false;  // a * D is 0 or 1: the chain does not mix
  std::uint64_t seed = 0;
};

/// Runs `trials` independent ensembles from the all-left state for T =
/// config.n_steps steps and then T more, and compares the chance of leaving
/// the ordered macrostate with the chance of coming back to it. Walker counts
/// evolve through binomial draws, which has the same law as per-walker
/// updates and keeps large trial counts cheap.
ReversalReport reversal_test(const EnsembleConfig& config, int trials = 1000, double epsilon = 0.01);

}  // namespace tunnelkit
