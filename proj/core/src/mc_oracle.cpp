#include "pia/mc_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pia {

namespace {

// splitmix64 finalizer; full-period 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based stream: one pair of standard normals per (seed, path, step).
struct NormalPair {
    double z0, z1;
};

inline NormalPair normals_at(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const std::uint64_t key = mix64(seed ^ mix64(path + 1));
    const std::uint64_t a = mix64(key ^ mix64(step + 1));
    const std::uint64_t b = mix64(a);
    const double u1 = 1.0 - static_cast<double>(a >> 11) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;        // [0, 1)
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

struct Rectangle {
    double x_min, x_max, y_min, y_max;
    bool strictly_inside(Vec2 p) const {
        return p.x > x_min && p.x < x_max && p.y > y_min && p.y < y_max;
    }
    bool outside_closed(Vec2 p) const {
        return p.x < x_min || p.x > x_max || p.y < y_min || p.y > y_max;
    }
};

// Simulates one path; returns the discounted payoff. Left-endpoint quadrature
// for the running reward; exit detected at step granularity with the exit
// payoff charged at the first grid time outside the open domain.
template <class PolicyFn>
double simulate_path(const ControlProblem& problem, const PolicyFn& policy_at,
                     const Rectangle& domain, Vec2 start, const McConfig& cfg,
                     std::uint64_t path, bool& exited, double& tau) {
    const double alpha = problem.discount;
    Vec2 z = start;
    if (!domain.strictly_inside(z)) {  // tau = 0: immediate boundary payoff
        exited = true;
        tau = 0.0;
        return problem.boundary_payoff(z);
    }
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double decay = std::exp(-alpha * cfg.dt);  // per-step discount factor
    const std::int64_t max_steps = static_cast<std::int64_t>(cfg.max_time / cfg.dt);
    double payoff = 0.0;
    double disc = 1.0;  // e^{-alpha * t} at the left endpoint
    for (std::int64_t step = 0; step < max_steps; ++step) {
        const Action pi = policy_at(z);
        payoff += disc * problem.reward.value(z, pi) * cfg.dt;
        const Vec2 mu = problem.drift(z, pi);
        const auto sig = problem.diffusion(z);
        const NormalPair xi = normals_at(cfg.seed, path, static_cast<std::uint64_t>(step));
        z.x += mu.x * cfg.dt + sig[0] * sqrt_dt * xi.z0;
        z.y += mu.y * cfg.dt + sig[1] * sqrt_dt * xi.z1;
        disc *= decay;
        if (!domain.strictly_inside(z)) {
            exited = true;
            tau = (step + 1) * cfg.dt;
            payoff += disc * problem.boundary_payoff(z);
            return payoff;
        }
    }
    exited = false;  // capped at max_time; discounted tail ignored
    tau = cfg.max_time;
    return payoff;
}

template <class PolicyFn>
McEstimate estimate_impl(const ControlProblem& problem, const PolicyFn& policy_at, Vec2 start,
                         const McConfig& cfg, int workers, std::ostream* per_path_csv) {
    if (cfg.n_paths < 1) throw std::invalid_argument("McConfig: n_paths must be >= 1");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("nonpositive-dt: dt must be positive");
    if (!(cfg.max_time > 0.0)) throw std::invalid_argument("McConfig: max_time must be positive");

    const Rectangle domain{problem.x_min, problem.x_max, problem.y_min, problem.y_max};
    if (domain.outside_closed(start))
        throw std::invalid_argument("start-outside-domain: start point must lie in the closed domain");

    // Per-path payoffs land in a fixed slot, then a sequential reduction in
    // path order makes the estimate independent of the worker layout.
    std::vector<double> payoffs(static_cast<std::size_t>(cfg.n_paths));
    std::vector<double> taus(static_cast<std::size_t>(cfg.n_paths));
    std::vector<std::uint8_t> exits(static_cast<std::size_t>(cfg.n_paths));

    int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    n_workers = static_cast<int>(std::min<std::int64_t>(n_workers, cfg.n_paths));

    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            bool exited = false;
            double tau = 0.0;
            payoffs[static_cast<std::size_t>(p)] = simulate_path(
                problem, policy_at, domain, start, cfg, static_cast<std::uint64_t>(p), exited, tau);
            exits[static_cast<std::size_t>(p)] = exited ? 1 : 0;
            taus[static_cast<std::size_t>(p)] = tau;
        }
    };

    if (n_workers == 1) {
        run_range(0, cfg.n_paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        const std::int64_t chunk = (cfg.n_paths + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi = std::min<std::int64_t>(lo + chunk, cfg.n_paths);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    McEstimate est;
    double sum = 0.0;
    std::int64_t n_exits = 0;
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        sum += payoffs[static_cast<std::size_t>(p)];
        n_exits += exits[static_cast<std::size_t>(p)];
    }
    est.mean = sum / static_cast<double>(cfg.n_paths);
    double ss = 0.0;
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        const double d = payoffs[static_cast<std::size_t>(p)] - est.mean;
        ss += d * d;
    }
    if (cfg.n_paths > 1)
        est.std_error = std::sqrt(ss / static_cast<double>(cfg.n_paths - 1)) /
                        std::sqrt(static_cast<double>(cfg.n_paths));
    est.exit_fraction = static_cast<double>(n_exits) / static_cast<double>(cfg.n_paths);

    if (per_path_csv) {
        *per_path_csv << "path,exit_time,payoff\n";
        char buf[96];
        for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
            std::snprintf(buf, sizeof buf, "%lld,%.12g,%.12g\n", static_cast<long long>(p),
                          taus[static_cast<std::size_t>(p)], payoffs[static_cast<std::size_t>(p)]);
            *per_path_csv << buf;
        }
    }
    return est;
}

}  // namespace

McEstimate estimate_value(const ControlProblem& problem, const Action& action, Vec2 start,
                          const McConfig& config, int workers, std::ostream* per_path_csv) {
    return estimate_impl(problem, [&action](Vec2) { return action; }, start, config, workers,
                         per_path_csv);
}

McEstimate estimate_value(const ControlProblem& problem, const PolicyField& policy, Vec2 start,
                          const McConfig& config, int workers, std::ostream* per_path_csv) {
    return estimate_impl(problem, [&policy](Vec2 z) { return policy.interpolate(z); }, start,
                         config, workers, per_path_csv);
}

}  // namespace pia
