// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "chain_escape/energy.hpp"
#include "chain_escape/spectral.hpp"
#include "oracles.hpp"

using namespace chain_escape;
namespace oracle = chain_escape::testing;

namespace {

const LatticeParams kUnit{1.0, 1.0, 1.0, 1.0};
const LatticeParams kFree{1.0, 1.0, 1.0, 0.0};

LatticeState single_site(long half_width, long site = 0, double height = 1.0)
{
    auto s = LatticeState::zeros(half_width);
    s.q_at(site) = height;
    return s;
}

TEST(Forward, Examples)
{
    const auto zero = forward_transform(LatticeState::zeros(4), 32);
    for (std::size_t j = 0; j < 32; ++j) {
        EXPECT_EQ(zero.Q[j], Complex(0, 0));
        EXPECT_EQ(zero.Qdot[j], Complex(0, 0));
    }
    // both the direct-sum path (small window) and the FFT path (wide window)
    for (long hw : {1L, 40L}) {
        const auto one = forward_transform(single_site(hw), 256);
        for (std::size_t j = 0; j < one.M; ++j) EXPECT_NEAR(std::abs(one.Q[j] - Complex(1, 0)), 0.0, 1e-14);
        auto pair = LatticeState::zeros(hw);
        pair.q_at(-1) = pair.q_at(1) = 1.0;
        const auto two = forward_transform(pair, 256);
        for (std::size_t j = 0; j < two.M; ++j) {
            EXPECT_NEAR(two.Q[j].real(), 2.0 * std::cos(two.phi[j]), 1e-13);
            EXPECT_NEAR(two.Q[j].imag(), 0.0, 1e-13);
        }
    }
}

TEST(Forward, MatchesDirectSummation)
{
    std::mt19937_64 rng(17);
    LatticeState s(-30, 45);
    s.q = oracle::random_vector(rng, s.size());
    s.v = oracle::random_vector(rng, s.size());
    const auto spec = forward_transform(s, 512);
    double scale = 0;
    for (double x : s.q) scale += std::abs(x);
    for (std::size_t j = 0; j < spec.M; j += 7) {
        EXPECT_LE(std::abs(spec.Q[j] - oracle::direct_fourier(s.q, s.lo, spec.phi[j])), 1e-12 * scale);
        EXPECT_LE(std::abs(spec.Qdot[j] - oracle::direct_fourier(s.v, s.lo, spec.phi[j])), 1e-12 * scale);
    }
}

TEST(Forward, ConjugateSymmetry)
{
    std::mt19937_64 rng(2);
    LatticeState s(-20, 20);
    s.q = oracle::random_vector(rng, s.size());
    const auto spec = forward_transform(s, 128);
    for (std::size_t j = 1; j < spec.M; ++j) EXPECT_NEAR(std::abs(spec.Q[spec.M - j] - std::conj(spec.Q[j])), 0, 1e-12);
}

TEST(Forward, RefusesAliasing)
{
    try {
        (void)forward_transform(LatticeState::zeros(10), 41);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::aliasing);
    }
    EXPECT_NO_THROW((void)forward_transform(LatticeState::zeros(10), 42));
}

TEST(Evolve, IdentityAndFirstColumn)
{
    std::mt19937_64 rng(4);
    LatticeState s(-8, 8);
    s.q = oracle::random_vector(rng, s.size());
    s.v = oracle::random_vector(rng, s.size());
    const auto s0 = forward_transform(s, 64);
    const auto same = evolve(s0, kUnit, 0.0);
    for (std::size_t j = 0; j < 64; ++j) {
        EXPECT_EQ(same.Q[j], s0.Q[j]);
        EXPECT_EQ(same.Qdot[j], s0.Qdot[j]);
    }

    const auto unit = forward_transform(single_site(3), 64);
    const auto later = evolve(unit, kUnit, 13.7);
    EXPECT_EQ(later.t, 13.7);
    for (std::size_t j = 0; j < 64; ++j)
        EXPECT_NEAR(later.Q[j].real(), std::cos(dispersion(kUnit, later.phi[j]) * 13.7), 1e-12);
}

TEST(Evolve, SemigroupAndEnergyDensity)
{
    std::mt19937_64 rng(9);
    LatticeState s(-16, 16);
    s.q = oracle::random_vector(rng, s.size());
    s.v = oracle::random_vector(rng, s.size());
    const LatticeParams p{1, 1.4, 0.6, 0};
    const auto s0 = forward_transform(s, 128);
    const auto direct = evolve(s0, p, 7.5);
    const auto chained = evolve(evolve(s0, p, 3.25), p, 7.5);
    for (std::size_t j = 0; j < 128; ++j) {
        EXPECT_NEAR(std::abs(direct.Q[j] - chained.Q[j]), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(direct.Qdot[j] - chained.Qdot[j]), 0.0, 1e-12);
        const double om = dispersion(p, s0.phi[j]);
        const double e0 = std::norm(s0.Qdot[j]) + om * om * std::norm(s0.Q[j]);
        const double e1 = std::norm(direct.Qdot[j]) + om * om * std::norm(direct.Q[j]);
        EXPECT_NEAR(e1, e0, 1e-12 * std::max(1.0, e0));
    }
}

TEST(Inverse, Examples)
{
    SpectralState zero;
    zero.M = 64;
    zero.phi = spectral_grid(64);
    zero.Q.assign(64, Complex(0, 0));
    zero.Qdot.assign(64, Complex(0, 0));
    for (double x : inverse_transform(zero, -10, 10).q) EXPECT_EQ(x, 0.0);

    SpectralState delta = zero;
    delta.Q.assign(64, Complex(1, 0));
    for (long lo : {-2L, -20L}) {
        const auto z = inverse_transform(delta, lo, -lo);
        for (long k = lo; k <= -lo; ++k) EXPECT_NEAR(z.q_at(k), k == 0 ? 1.0 : 0.0, 1e-14);
    }
}

TEST(Inverse, RoundTripBothPaths)
{
    std::mt19937_64 rng(21);
    for (long hw : {2L, 3L, 60L}) {
        LatticeState s(-hw, hw + 1, 0.0);
        s.q = oracle::random_vector(rng, s.size());
        s.v = oracle::random_vector(rng, s.size());
        const auto back = inverse_transform(forward_transform(s, 4 * s.size()), s.lo, s.hi);
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_NEAR(back.q[i], s.q[i], 1e-12);
            EXPECT_NEAR(back.v[i], s.v[i], 1e-12);
        }
    }
}

TEST(Inverse, FlagsBrokenSymmetry)
{
    auto spec = forward_transform(single_site(4), 64);
    for (auto& q : spec.Q) q += Complex(0, 1e-3);
    try {
        (void)inverse_transform(spec, -4, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::symmetry_violation);
    }
}

TEST(Solve, EquilibriumIsStationary)
{
    const auto prof = xi_profile(kUnit, -64, 64);
    const auto init = equilibrium_state(prof);
    for (double t : {0.0, 5.0, 123.4}) {
        const auto s = solve(kUnit, init, t, 512);
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_NEAR(s.q[i], prof.xi[i], 1e-14);
            EXPECT_NEAR(s.v[i], 0.0, 1e-14);
        }
    }
}

TEST(Solve, ZeroStaysZeroWithoutForce)
{
    const auto s = solve(kFree, LatticeState::zeros(20), 50.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(s.q[i], 0.0);
        EXPECT_EQ(s.v[i], 0.0);
    }
}

TEST(Solve, SatisfiesNewtonEquations)
{
    // second time derivative by central differences equals the acceleration
    const LatticeParams p{1, 1.3, 0.8, 0.7};
    auto init = LatticeState::zeros(128);
    init.v_at(2) = 0.5;
    SpectralPropagator prop(p, init, 1024);
    const double t = 11.0, h = 1e-3;
    const auto s = prop.at(t), sp = prop.at(t + h), sm = prop.at(t - h);
    const auto b = make_boundary(BoundaryKind::clamp_to_equilibrium, p, s.lo, s.hi);
    const auto acc = acceleration(p, s, b);
    for (long k = -20; k <= 20; ++k) {
        const double fd = (sp.q_at(k) - 2 * s.q_at(k) + sm.q_at(k)) / (h * h);
        EXPECT_NEAR(fd, acc[s.offset(k)], 1e-5);
        EXPECT_NEAR((sp.q_at(k) - sm.q_at(k)) / (2 * h), s.v_at(k), 1e-6);
    }
}

TEST(Solve, TimeReversal)
{
    const LatticeParams p{1, 1, 1, 1};
    auto init = xi_profile(p, -256, 256);
    auto start = equilibrium_state(init);
    start.q_at(3) += 1.0;
    start.v_at(-5) = 0.4;
    const double t = 60.0;
    auto mid = solve(p, start, t, 2048);
    for (auto& v : mid.v) v = -v;
    const auto back = solve(p, mid, 2 * t, 2048);
    for (std::size_t i = 0; i < start.size(); ++i) {
        EXPECT_NEAR(back.q[i], start.q[i], 1e-9);
        EXPECT_NEAR(back.v[i], -start.v[i], 1e-9);
    }
}

TEST(Solve, HomogeneousEnergyConserved)
{
    const auto init = single_site(512);
    SpectralPropagator prop(kFree, init, 4096);
    const auto b = BoundaryPolicy::zero();
    const double h0 = total_energy(kFree, init, b);
    for (double t : {10.0, 100.0, 400.0}) EXPECT_NEAR(total_energy(kFree, prop.at(t), b), h0, 1e-9 * h0);
}

TEST(Solve, ConvergesToEquilibrium)
{
    // running envelope of |q_k - xi_k| and |v_k| over [T, 2T] shrinks as T doubles
    SpectralPropagator prop(kUnit, LatticeState::zeros(512), 4096);
    for (long k : {0L, 3L}) {
        double prev_q = INFINITY, prev_v = INFINITY;
        for (double T : {25.0, 50.0, 100.0, 200.0}) {
            double mq = 0, mv = 0;
            for (double t = T; t <= 2 * T; t += 0.1) {
                const auto s = prop.homogeneous_at(t, k, k);
                mq = std::max(mq, std::abs(s.q.front()));
                mv = std::max(mv, std::abs(s.v.front()));
            }
            EXPECT_LT(mq, prev_q);
            EXPECT_LT(mv, prev_v);
            prev_q = mq;
            prev_v = mv;
        }
    }
}

TEST(Trajectory, SamplesIncludeEndpoints)
{
    const auto traj = spectral_trajectory(kUnit, LatticeState::zeros(64), 10.0, 3.0, BoundaryPolicy::zero(), 512);
    ASSERT_EQ(traj.samples.size(), 5u);
    EXPECT_EQ(traj.samples.front().t, 0.0);
    EXPECT_EQ(traj.samples[3].t, 9.0);
    EXPECT_EQ(traj.samples.back().t, 10.0);
}

}  // namespace
