#pragma once

// Time averages over windows and random-time sampling of trajectories.
//
// Averages that are integrals of piecewise-constant functions are computed
// exactly from interval arithmetic. Sampling is used only where the
// construction calls for measurement at random times; every sampler draws
// from one Rng stream seeded by the caller.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ergodic/hilbert.hpp"
#include "ergodic/microstate.hpp"
#include "ergodic/partition.hpp"

namespace ergodic {

struct EmpiricalDistribution {
  std::vector<std::uint64_t> counts;  // indexed by label
  std::uint64_t total = 0;
  std::vector<double> estimates;
  std::vector<double> standard_errors;  // binomial, from the estimate
};

EmpiricalDistribution make_distribution(std::vector<std::uint64_t> counts);

/// <S_k>_tau: the integral of the step function over the window divided by
/// the window length.
double window_average_step(const WindowPartition& partition, std::size_t label);

/// <O>_tau = sum_k measure_k a_k / span.
double window_average_value(const WindowPartition& partition, const Csco& csco, std::size_t member);

/// Active labels at n uniform times in window `window` of the trajectory.
EmpiricalDistribution sample_born(const JumpTrajectory& trajectory, std::uint64_t n_samples, std::uint64_t seed,
                                  long window = 0);

/// Exact integral of the value function over (alpha, alpha + 1].
double offset_window_average(const JumpTrajectory& trajectory, double alpha, const Csco& csco, std::size_t member);

struct FractionEstimate {
  double fraction = 0.0;
  double standard_error = 0.0;
  std::uint64_t pairs = 0;
};

/// Fraction of random base times u whose active label equals the one at
/// u + delta. Pure trajectory reading, no collapse. Base times are uniform
/// over the whole windows (0, W - ceil(delta)], so a trajectory of stationary
/// windows gives the same answer as an infinitely long one.
FractionEstimate sub_tau_correlation(const JumpTrajectory& trajectory, double delta, std::uint64_t n_pairs,
                                     std::uint64_t seed);

/// Exact value that sub_tau_correlation estimates: the measure of
/// {u in (0, W - ceil(delta)] : label(u) = label(u + delta)}, normalized.
double same_outcome_fraction(const JumpTrajectory& trajectory, double delta);

}  // namespace ergodic
