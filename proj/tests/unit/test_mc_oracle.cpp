#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pia/mc_oracle.hpp"

using namespace pia;

namespace {

ControlProblem reference_problem() { return make_example_problem(2.0, 0.2, 0.03, 0.5, 2.0, 0.5, 2.0); }

McConfig quick_config() {
    McConfig cfg;
    cfg.n_paths = 2000;
    cfg.dt = 1e-3;
    cfg.seed = 1234;
    cfg.max_time = 200.0;
    return cfg;
}

}  // namespace

TEST_CASE("zero reward and zero exit payoff give an exactly zero estimate") {
    ControlProblem p = reference_problem();
    p.reward.c = [](Vec2) { return 0.0; };
    McConfig cfg = quick_config();
    cfg.n_paths = 500;
    const McEstimate est = estimate_value(p, Action{0.0}, {1.0, 1.0}, cfg);
    CHECK(est.mean == 0.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("starting on the boundary pays g immediately with zero error") {
    ControlProblem p = reference_problem();
    p.boundary_payoff = [](Vec2 z) { return z.x + z.y; };
    const McEstimate est = estimate_value(p, Action{0.0}, {0.5, 1.25}, quick_config());
    CHECK(est.mean == doctest::Approx(1.75));
    CHECK(est.std_error == 0.0);
    CHECK(est.exit_fraction == 1.0);
}

TEST_CASE("input validation") {
    const ControlProblem p = reference_problem();
    McConfig cfg = quick_config();
    CHECK_THROWS_WITH_AS(estimate_value(p, Action{0.0}, {0.4, 1.0}, cfg),
                         doctest::Contains("start-outside-domain"), std::invalid_argument);
    cfg.dt = 0.0;
    CHECK_THROWS_WITH_AS(estimate_value(p, Action{0.0}, {1.0, 1.0}, cfg),
                         doctest::Contains("nonpositive-dt"), std::invalid_argument);
    cfg = quick_config();
    cfg.n_paths = 0;
    CHECK_THROWS_AS(estimate_value(p, Action{0.0}, {1.0, 1.0}, cfg), std::invalid_argument);
}

TEST_CASE("deterministic under identical seeds, sensitive to seed changes") {
    const ControlProblem p = reference_problem();
    const McConfig cfg = quick_config();
    const McEstimate a = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg);
    const McEstimate b = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.exit_fraction == b.exit_fraction);

    McConfig other = cfg;
    other.seed = cfg.seed + 1;
    const McEstimate c = estimate_value(p, Action{0.0}, {1.25, 1.25}, other);
    CHECK(c.mean != a.mean);
}

TEST_CASE("estimates are independent of the worker layout") {
    const ControlProblem p = reference_problem();
    const McConfig cfg = quick_config();
    const McEstimate serial = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg, 1);
    const McEstimate par2 = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg, 2);
    const McEstimate par7 = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg, 7);
    CHECK(serial.mean == par2.mean);
    CHECK(serial.mean == par7.mean);
    CHECK(serial.std_error == par7.std_error);
}

TEST_CASE("discount sanity: unit reward is bounded by 1/alpha") {
    const ControlProblem p = reference_problem();
    McConfig cfg = quick_config();
    cfg.n_paths = 4000;
    const McEstimate est = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg);
    CHECK(est.mean > 0.0);
    // left-endpoint quadrature can overshoot the exact integral by ~alpha*dt/2
    CHECK(est.mean <= (1.0 / p.discount) * (1.0 + p.discount * cfg.dt));
}

TEST_CASE("constant-zero policy field reproduces the constant-action estimate") {
    const ControlProblem p = reference_problem();
    const Grid2D g = build_grid(0.5, 2.0, 0.5, 2.0, 21);
    const PolicyField zero_field(g, 1);
    McConfig cfg = quick_config();
    cfg.n_paths = 500;
    const McEstimate via_field = estimate_value(p, zero_field, {1.25, 1.25}, cfg);
    const McEstimate via_const = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg);
    CHECK(via_field.mean == via_const.mean);
}

TEST_CASE("per-path dump lists every path deterministically") {
    const ControlProblem p = reference_problem();
    McConfig cfg = quick_config();
    cfg.n_paths = 50;
    std::ostringstream a, b;
    const McEstimate ea = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg, 1, &a);
    const McEstimate eb = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg, 3, &b);
    CHECK(ea.mean == eb.mean);
    CHECK(a.str() == b.str());  // layout-independent dump

    std::istringstream is(a.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "path,exit_time,payoff");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 50);
}

TEST_CASE("dt refinement is consistent with a vanishing step bias") {
    const ControlProblem p = reference_problem();
    McConfig cfg = quick_config();
    cfg.n_paths = 20000;
    const Vec2 z{1.25, 1.25};

    cfg.dt = 4e-3;
    const McEstimate m0 = estimate_value(p, Action{0.0}, z, cfg);
    cfg.dt = 2e-3;
    const McEstimate m1 = estimate_value(p, Action{0.0}, z, cfg);
    cfg.dt = 1e-3;
    const McEstimate m2 = estimate_value(p, Action{0.0}, z, cfg);

    const double d1 = std::abs(m0.mean - m1.mean);
    const double d2 = std::abs(m1.mean - m2.mean);
    // refinement differences shrink along the cascade, modulo sampling noise
    const double noise = 3.0 * (m1.std_error + m2.std_error);
    CHECK(d2 <= d1 + noise);
}
