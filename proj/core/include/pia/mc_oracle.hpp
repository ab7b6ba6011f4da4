// Independent Monte Carlo estimator of the discounted payoff under a frozen
// Markov policy, used to cross-validate the finite-difference solution.
//
// Paths use Euler-Maruyama steps with independent Gaussian drivers per
// coordinate. Random numbers are counter-based and keyed by (seed, path
// index, step), so estimates are bit-identical regardless of how paths are
// distributed across workers.
#pragma once

#include <cstdint>
#include <iosfwd>

#include "pia/grid.hpp"
#include "pia/problem.hpp"

namespace pia {

struct McConfig {
    std::int64_t n_paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    double max_time = 500.0;  // horizon cap; discounted tail beyond it is dropped
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double exit_fraction = 0.0;  // fraction of paths that left the domain before max_time
};

// Frozen constant action. When per_path_csv is given, rows
// `path,exit_time,payoff` are dumped in path order after the run (capped
// paths report max_time as their exit time).
McEstimate estimate_value(const ControlProblem& problem, const Action& action, Vec2 start,
                          const McConfig& config, int workers = 0,
                          std::ostream* per_path_csv = nullptr);

// Policy field, bilinearly interpolated between interior nodes (clamped at
// the interior hull).
McEstimate estimate_value(const ControlProblem& problem, const PolicyField& policy, Vec2 start,
                          const McConfig& config, int workers = 0,
                          std::ostream* per_path_csv = nullptr);

}  // namespace pia
