// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "chain_escape/energy.hpp"
#include "chain_escape/integrator.hpp"
#include "chain_escape/spectral.hpp"
#include "oracles.hpp"

using namespace chain_escape;
namespace oracle = chain_escape::testing;

namespace {

const LatticeParams kUnit{1.0, 1.0, 1.0, 1.0};
const LatticeParams kFree{1.0, 1.0, 1.0, 0.0};

double max_gap(const LatticeState& a, const LatticeState& b, long half)
{
    double g = 0;
    for (long k = -half; k <= half; ++k) g = std::max(g, std::abs(a.q_at(k) - b.q_at(k)));
    return g;
}

TEST(VerletStep, FixedPoints)
{
    const auto prof = xi_profile(kUnit, -30, 30);
    const auto init = equilibrium_state(prof);
    const auto b = make_boundary(BoundaryKind::clamp_to_equilibrium, kUnit, init.lo, init.hi);
    const auto next = verlet_step(kUnit, init, default_dt(kUnit), b);
    for (std::size_t i = 0; i < init.size(); ++i) {
        EXPECT_NEAR(next.q[i], init.q[i], 1e-15);
        EXPECT_NEAR(next.v[i], 0.0, 1e-15);
    }
    EXPECT_DOUBLE_EQ(next.t, default_dt(kUnit));

    const auto zero = verlet_step(kFree, LatticeState::zeros(5), 0.1, BoundaryPolicy::zero());
    for (std::size_t i = 0; i < zero.size(); ++i) EXPECT_EQ(zero.q[i], 0.0);
}

TEST(VerletStep, StabilityBound)
{
    const double bound = verlet_stability_bound(kUnit);
    EXPECT_NEAR(bound, 2.0 / std::sqrt(5.0), 1e-15);
    for (double dt : {0.0, -0.1, bound, bound * 1.01}) {
        try {
            (void)verlet_step(kUnit, LatticeState::zeros(3), dt, BoundaryPolicy::zero());
            FAIL() << dt;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::configuration);
        }
    }
    EXPECT_NO_THROW((void)verlet_step(kUnit, LatticeState::zeros(3), bound * 0.99, BoundaryPolicy::zero()));
    EXPECT_NEAR(default_dt(LatticeParams{1, 2, 1, 1}), 0.0242535625036332987, 1e-16);
}

TEST(VerletStep, LocalErrorIsThirdOrder)
{
    // nonzero velocity, otherwise the dt^3 term cancels
    auto init = LatticeState::zeros(32);
    init.q_at(0) = 1.0;
    init.v_at(1) = 0.5;
    double prev = 0;
    for (double dt : {0.08, 0.04, 0.02}) {
        const auto exact = solve(kFree, init, dt, 256);
        const auto step = verlet_step(kFree, init, dt, BoundaryPolicy::zero());
        const double gap = max_gap(exact, step, 32);
        if (prev > 0) {
            EXPECT_GT(prev / gap, 7.0);
            EXPECT_LT(prev / gap, 9.0);
        }
        prev = gap;
    }
}

TEST(EvolveVerlet, TrivialRuns)
{
    const auto b = BoundaryPolicy::zero();
    const auto only = evolve_verlet(kUnit, LatticeState::zeros(10), 0.0, 0.1, 1, b);
    EXPECT_EQ(only.samples.size(), 1u);

    const auto zero = evolve_verlet(kFree, LatticeState::zeros(10), 5.0, 0.1, 10, b);
    for (const auto& s : zero.samples)
        for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.q[i], 0.0);
}

TEST(EvolveVerlet, SamplingAndShortFinalStep)
{
    const auto traj = evolve_verlet(kFree, LatticeState::zeros(10), 1.05, 0.1, 4, BoundaryPolicy::zero());
    ASSERT_EQ(traj.samples.size(), 4u);  // t = 0, 0.4, 0.8, 1.05
    EXPECT_EQ(traj.samples[0].t, 0.0);
    EXPECT_NEAR(traj.samples[1].t, 0.4, 1e-15);
    EXPECT_NEAR(traj.samples[2].t, 0.8, 1e-15);
    EXPECT_EQ(traj.samples[3].t, 1.05);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) EXPECT_GT(traj.samples[i].t, traj.samples[i - 1].t);
}

TEST(EvolveVerlet, PaddingWarning)
{
    const auto b = BoundaryPolicy::zero();
    const auto narrow = evolve_verlet(kFree, LatticeState::zeros(20), 50.0, 0.1, 100, b, 5);
    EXPECT_FALSE(narrow.warnings.empty());
    const auto wide = evolve_verlet(kFree, LatticeState::zeros(70), 50.0, 0.1, 100, b, 5);
    EXPECT_TRUE(wide.warnings.empty());
    EXPECT_EQ(required_half_width(kUnit, 10, 200.0), 218);
}

TEST(EvolveVerlet, AgreesWithSpectralSolve)
{
    const auto init = LatticeState::zeros(512);
    const auto b = make_boundary(BoundaryKind::clamp_to_equilibrium, kUnit, init.lo, init.hi);
    const auto traj = evolve_verlet(kUnit, init, 200.0, 0.02, 1000, b, 64);
    EXPECT_TRUE(traj.warnings.empty());
    const auto exact = solve(kUnit, init, 200.0, 4096);
    EXPECT_LT(std::abs(traj.samples.back().q_at(0) - exact.q_at(0)), 2e-3);
}

TEST(EvolveVerlet, BoundedEnergyErrorWithoutSecularGrowth)
{
    // per mode |H - H(0)| <= (Omega dt)^2 / 4 * E_mode, so the total error is
    // bounded by (Omega_max dt)^2 / 4 * H(0); the window keeps the wave off the edges
    const double dt = default_dt(kUnit);
    auto init = LatticeState::zeros(700);
    init.q_at(0) = 1.0;
    const auto b = BoundaryPolicy::zero();
    const auto traj = evolve_verlet(kFree, init, 1000.0, dt, 20, b);
    const double h0 = total_energy(kFree, init, b);
    const double bound = 0.25 * std::pow(kUnit.max_frequency() * dt, 2) * h0;
    double early = 0, late = 0;
    std::size_t n_early = 0, n_late = 0;
    for (const auto& s : traj.samples) {
        const double drift = total_energy(kFree, s, b) - h0;
        EXPECT_LE(std::abs(drift), bound);
        if (s.t > 100 && s.t < 200) early += drift, ++n_early;
        if (s.t > 900) late += drift, ++n_late;
    }
    EXPECT_NEAR(late / n_late, early / n_early, 0.1 * bound);
}

TEST(EvolveVerlet, Reversible)
{
    std::mt19937_64 rng(8);
    auto init = equilibrium_state(xi_profile(kUnit, -60, 60));
    for (long k = -5; k <= 5; ++k) init.q_at(k) += 0.3 * oracle::random_vector(rng, 1)[0];
    const auto b = make_boundary(BoundaryKind::clamp_to_equilibrium, kUnit, init.lo, init.hi);
    const double dt = 0.05;
    const auto fwd = evolve_verlet(kUnit, init, 30.0, dt, 1000000, b);
    auto turned = fwd.samples.back();
    for (auto& v : turned.v) v = -v;
    const auto back = evolve_verlet(kUnit, turned, 60.0, dt, 1000000, b);
    const auto& end = back.samples.back();
    for (std::size_t i = 0; i < init.size(); ++i) {
        EXPECT_NEAR(end.q[i], init.q[i], 1e-9);
        EXPECT_NEAR(end.v[i], -init.v[i], 1e-9);
    }
}

TEST(EvolveVerlet, SecondOrderAgainstSpectral)
{
    auto init = LatticeState::zeros(96);
    init.q_at(1) = 0.5;
    const LatticeParams p{1, 1.2, 0.9, 1.0};
    const auto b = make_boundary(BoundaryKind::clamp_to_equilibrium, p, init.lo, init.hi);
    const auto exact = solve(p, init, 40.0, 1024);
    double prev = 0;
    for (double dt : {0.04, 0.02, 0.01}) {
        const auto traj = evolve_verlet(p, init, 40.0, dt, 1000000, b, 32);
        const double gap = max_gap(traj.samples.back(), exact, 32);
        if (prev > 0) {
            EXPECT_GT(prev / gap, 3.5);
            EXPECT_LT(prev / gap, 4.5);
        }
        prev = gap;
    }
}

TEST(EvolveVerlet, BoundaryPolicyIrrelevantWithPadding)
{
    for (double f : {0.0, 1.0}) {
        const LatticeParams p{1, 1, 1, f};
        auto init = LatticeState::zeros(120);
        init.q_at(0) = 1.0;
        const auto zero = evolve_verlet(p, init, 80.0, 0.05, 100000, BoundaryPolicy::zero(), 10);
        const auto eq = evolve_verlet(p, init, 80.0, 0.05, 100000,
                                      make_boundary(BoundaryKind::clamp_to_equilibrium, p, init.lo, init.hi), 10);
        EXPECT_LT(max_gap(zero.samples.back(), eq.samples.back(), 10), 1e-8);
    }
}

}  // namespace
