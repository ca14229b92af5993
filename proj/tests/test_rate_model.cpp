#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rsnn/errors.hpp"
#include "rsnn/rate_model.hpp"
#include "rsnn/rng.hpp"

#include <cmath>
#include <vector>

using namespace rsnn;

namespace {

SignVector random_sign_vector(int n, Rng& rng) {
    SignVector v;
    v.entries.assign(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n / 2; ++i) {
        for (;;) {
            const int k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
            if (v.entries[static_cast<std::size_t>(k)] == 1) {
                v.entries[static_cast<std::size_t>(k)] = -1;
                break;
            }
        }
    }
    return v;
}

RateModel mixed_feedback_model(const SignVector& v, double alpha, double gain,
                               double bias) {
    RateModel m;
    m.adjacency = build_mixed_feedback_adjacency(v);
    m.alpha = alpha;
    m.gain = gain;
    m.bias.assign(static_cast<std::size_t>(m.adjacency.n), bias);
    m.input.assign(static_cast<std::size_t>(m.adjacency.n), 0.0);
    return m;
}

std::vector<std::vector<double>> standard_ics(const SignVector& v, double level,
                                              double eps) {
    const std::size_t n = v.entries.size();
    std::vector<double> sym(n, level);
    std::vector<double> up(n), down(n);
    for (std::size_t i = 0; i < n; ++i) {
        up[i] = level + eps * v.entries[i];
        down[i] = level - eps * v.entries[i];
    }
    return {sym, up, down};
}

// smallest grid alpha at which macroscopically distinct branches appear
double first_splitting_alpha(const SignVector& v, double gain, double bias,
                             double alpha_lo, double alpha_hi, double step) {
    const double floor = 0.01 * gain * bias;
    for (double alpha = alpha_lo; alpha <= alpha_hi + 1e-12; alpha += step) {
        RateModel m = mixed_feedback_model(v, alpha, gain, bias);
        const auto ics = standard_ics(v, gain * bias, 1.0);
        const FixedPointResult r = find_fixed_points(m, {ics[1], ics[2]});
        if (r.fixed_points.size() < 2) continue;
        double hi = -1e300;
        double lo = 1e300;
        for (const auto& fp : r.fixed_points) {
            const double p = centered_projection(fp, v.entries);
            hi = std::max(hi, p);
            lo = std::min(lo, p);
        }
        if (hi > floor && lo < -floor) return alpha;
    }
    return -1.0;
}

} // namespace

TEST_CASE("alpha = 0 decouples: unique fixed point gain*bias from any IC") {
    const SignVector v{{1, 1, -1, -1}};
    RateModel m = mixed_feedback_model(v, 0.0, 2.0, 10.0);
    const auto ics = standard_ics(v, 5.0, 3.0);
    const FixedPointResult r = find_fixed_points(m, ics);
    REQUIRE(r.fixed_points.size() == 1);
    for (double x : r.fixed_points.front())
        CHECK(x == doctest::Approx(20.0).epsilon(1e-7));
    CHECK(r.unconverged.empty());
}

TEST_CASE("a fixed point does not move under the step map") {
    const SignVector v{{1, 1, -1, -1}};
    RateModel m = mixed_feedback_model(v, 0.0, 2.0, 10.0);
    const std::vector<double> fp(4, 20.0);
    const auto next = rate_dynamics_step(fp, m, 1.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(next[i] == fp[i]);
}

TEST_CASE("trajectories from nonnegative states stay nonnegative") {
    Rng rng = make_rng(808, Stream::generic);
    for (int trial = 0; trial < 50; ++trial) {
        const SignVector v = random_sign_vector(8, rng);
        RateModel m = mixed_feedback_model(v, 0.3 * rng.uniform01(), 1.0 + rng.uniform01(),
                                           10.0 * rng.uniform01());
        std::vector<double> state(8);
        for (double& x : state) x = 40.0 * rng.uniform01();
        for (int step = 0; step < 200; ++step) {
            state = rate_dynamics_step(state, m, 2.0);
            for (double x : state) CHECK(x >= 0.0);
        }
    }
}

TEST_CASE("above critical gain: two branch fixed points with opposite projections") {
    const SignVector v{{1, 1, 1, 1, -1, -1, -1, -1}};
    const double gain = 1.0;
    const double alpha = 0.25; // critical is 1/7
    RateModel m = mixed_feedback_model(v, alpha, gain, 20.0);
    const auto ics = standard_ics(v, 20.0, 2.0);
    const FixedPointResult r = find_fixed_points(m, {ics[1], ics[2]});
    REQUIRE(r.fixed_points.size() == 2);
    const double p0 = centered_projection(r.fixed_points[0], v.entries);
    const double p1 = centered_projection(r.fixed_points[1], v.entries);
    CHECK(p0 * p1 < 0.0);
    CHECK(std::abs(p0 + p1) < 1e-6 * std::max(std::abs(p0), std::abs(p1)));
}

TEST_CASE("exact symmetric point survives iteration even above critical") {
    // all quantities chosen exactly representable: phi(0.5*(-16)+24) = 16
    const SignVector v{{1, 1, 1, 1, -1, -1, -1, -1}};
    RateModel m = mixed_feedback_model(v, 0.5, 1.0, 24.0);
    const std::vector<double> sym(8, 16.0);
    const FixedPointResult r = find_fixed_points(m, {sym});
    REQUIRE(r.fixed_points.size() == 1);
    for (double x : r.fixed_points.front()) CHECK(x == 16.0);
}

TEST_CASE("below critical gain all ICs agree; above, projections grow with alpha") {
    const SignVector v{{1, 1, 1, 1, -1, -1, -1, -1}};
    const double gain = 1.0;
    const double astar = 1.0 / 7.0;

    for (double alpha : {0.25 * astar, 0.6 * astar, 0.9 * astar}) {
        RateModel m = mixed_feedback_model(v, alpha, gain, 20.0);
        const FixedPointResult r = find_fixed_points(m, standard_ics(v, 20.0, 2.0));
        CHECK(r.fixed_points.size() == 1);
    }

    double prev = 0.0;
    for (double alpha : {1.1 * astar, 1.3 * astar, 1.6 * astar, 2.0 * astar}) {
        RateModel m = mixed_feedback_model(v, alpha, gain, 20.0);
        const FixedPointResult r = find_fixed_points(m, standard_ics(v, 20.0, 2.0));
        double largest = 0.0;
        for (const auto& fp : r.fixed_points)
            largest = std::max(largest, std::abs(centered_projection(fp, v.entries)));
        CHECK(largest > prev);
        prev = largest;
    }
}

TEST_CASE("predict_critical_alpha closed form") {
    const SignVector v{{1, 1, 1, 1, -1, -1, -1, -1}};
    RateModel m = mixed_feedback_model(v, 0.05, 1.0, 20.0);
    const auto a1 = predict_critical_alpha(m);
    REQUIRE(a1.has_value());
    CHECK(*a1 == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

    m.gain = 2.0;
    const auto a2 = predict_critical_alpha(m);
    REQUIRE(a2.has_value());
    CHECK(*a2 == doctest::Approx(1.0 / 14.0).epsilon(1e-12));

    // inactive units at the fixed point: no closed form
    RateModel boundary = mixed_feedback_model(v, 0.05, 1.0, 0.0);
    CHECK_FALSE(predict_critical_alpha(boundary).has_value());
}

TEST_CASE("branch splitting matches the closed form within one grid step") {
    Rng rng = make_rng(66, Stream::generic);
    for (int n : {4, 8}) {
        for (int trial = 0; trial < 3; ++trial) {
            const SignVector v = random_sign_vector(n, rng);
            const double gain = 1.0;
            const double astar = 1.0 / (gain * static_cast<double>(n - 1));
            const double step = 0.005;
            const double found = first_splitting_alpha(v, gain, 20.0,
                                                       astar - 10 * step,
                                                       astar + 10 * step, step);
            REQUIRE(found > 0.0);
            CHECK(std::abs(found - astar) <= step + 1e-12);
        }
    }
}

TEST_CASE("parameter validation") {
    const SignVector v{{1, -1}};
    RateModel m = mixed_feedback_model(v, 0.1, 1.0, 5.0);
    CHECK_THROWS_AS(rate_dynamics_step({1.0, 2.0}, m, 100.0), ParameterError);
    CHECK_THROWS_AS(rate_dynamics_step({1.0}, m, 1.0), ParameterError);
    m.gain = -1.0;
    CHECK_THROWS_AS(m.validate(), ParameterError);
    CHECK_THROWS_AS(find_fixed_points(mixed_feedback_model(v, 0.1, 1.0, 5.0), {}),
                    ParameterError);
}
