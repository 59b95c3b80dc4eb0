// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "chain_escape/detail/fft.hpp"
#include "chain_escape/detail/parallel.hpp"
#include "chain_escape/equilibrium.hpp"
#include "chain_escape/model.hpp"
#include "chain_escape/trajectory.hpp"

namespace chain_escape {

using Complex = std::complex<double>;

/// Fourier amplitudes Q(t, phi_j) = sum_k q_k e^{i k phi_j} and the matching
/// velocity amplitudes on the grid phi_j = -pi + 2 pi j / M.
struct SpectralState {
    double t = 0.0;
    std::size_t M = 0;
    std::vector<double> phi;
    std::vector<Complex> Q;
    std::vector<Complex> Qdot;
};

[[nodiscard]] inline std::vector<double> spectral_grid(std::size_t M)
{
    std::vector<double> phi(M);
    for (std::size_t j = 0; j < M; ++j)
        phi[j] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M);
    return phi;
}

/// Smallest power of two >= 4 * width.
[[nodiscard]] inline std::size_t default_spectral_nodes(std::size_t width)
{
    std::size_t m = 16;
    while (m < 4 * width) m *= 2;
    return m;
}

namespace detail {

// Below this width the transforms are summed directly.
inline constexpr std::size_t kDirectSumWidth = 8;

inline std::size_t wrap_index(long k, std::size_t M)
{
    const long m = static_cast<long>(M);
    return static_cast<std::size_t>(((k % m) + m) % m);
}

inline double parity(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// sum_k x_k e^{i k phi_j} for the window starting at lo.
inline std::vector<Complex> to_spectrum(std::span<const double> x, long lo, std::size_t M,
                                        const std::vector<double>& phi)
{
    std::vector<Complex> out(M);
    if (x.size() <= kDirectSumWidth) {
        for (std::size_t j = 0; j < M; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double arg = static_cast<double>(lo + static_cast<long>(i)) * phi[j];
                acc += x[i] * Complex{std::cos(arg), std::sin(arg)};
            }
            out[j] = acc;
        }
        return out;
    }
    // e^{i k phi_j} = (-1)^k e^{2 pi i j k / M}
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long k = lo + static_cast<long>(i);
        out[wrap_index(k, M)] += parity(k) * x[i];
    }
    dft_in_place(out, +1);
    return out;
}

// (1/M) sum_j A_j e^{-i k phi_j} for k in [lo, hi].
inline std::vector<Complex> from_spectrum(const std::vector<Complex>& amp, long lo, long hi,
                                          const std::vector<double>& phi)
{
    const std::size_t M = amp.size();
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    std::vector<Complex> out(width);
    const double inv_m = 1.0 / static_cast<double>(M);
    if (width <= kDirectSumWidth) {
        for (std::size_t i = 0; i < width; ++i) {
            const double k = static_cast<double>(lo + static_cast<long>(i));
            Complex acc{0.0, 0.0};
            for (std::size_t j = 0; j < M; ++j) {
                const double arg = -k * phi[j];
                acc += amp[j] * Complex{std::cos(arg), std::sin(arg)};
            }
            out[i] = acc * inv_m;
        }
        return out;
    }
    std::vector<Complex> buf = amp;
    dft_in_place(buf, -1);
    for (std::size_t i = 0; i < width; ++i) {
        const long k = lo + static_cast<long>(i);
        out[i] = parity(k) * buf[wrap_index(k, M)] * inv_m;
    }
    return out;
}

}  // namespace detail

/// Transforms homogeneous data zeta(0) (displacements q, velocities v) onto an
/// M-node grid. Requires M >= 2 * window width.
[[nodiscard]] inline SpectralState forward_transform(const LatticeState& zeta0, std::size_t M)
{
    zeta0.validate();
    if (M < 2 * zeta0.size())
        throw Error(ErrorKind::aliasing, "spectral grid of " + std::to_string(M) + " nodes is too small for a " +
                                             std::to_string(zeta0.size()) + "-site window (need M >= 2 * width)");
    SpectralState s;
    s.t = zeta0.t;
    s.M = M;
    s.phi = spectral_grid(M);
    s.Q = detail::to_spectrum(zeta0.q, zeta0.lo, M, s.phi);
    s.Qdot = detail::to_spectrum(zeta0.v, zeta0.lo, M, s.phi);
    return s;
}

/// Applies the exact propagator
///   Q(t)    =  Q(t0) cos(Omega tau) + Qdot(t0) sin(Omega tau) / Omega
///   Qdot(t) = -Q(t0) Omega sin(Omega tau) + Qdot(t0) cos(Omega tau)
/// node by node, tau = t - s.t. Omega >= omega0 > 0 so the quotient is safe.
[[nodiscard]] inline SpectralState evolve(const SpectralState& s, const LatticeParams& p, double t)
{
    if (!std::isfinite(t)) throw Error(ErrorKind::domain, "evolve target time must be finite");
    SpectralState out;
    out.t = t;
    out.M = s.M;
    out.phi = s.phi;
    out.Q.resize(s.M);
    out.Qdot.resize(s.M);
    const double tau = t - s.t;
    for (std::size_t j = 0; j < s.M; ++j) {
        const double om = dispersion(p, s.phi[j]);
        const double c = std::cos(om * tau);
        const double sn = std::sin(om * tau);
        out.Q[j] = s.Q[j] * c + s.Qdot[j] * (sn / om);
        out.Qdot[j] = -s.Q[j] * (om * sn) + s.Qdot[j] * c;
    }
    return out;
}

inline constexpr double kImaginaryTolerance = 1e-10;

/// Trapezoidal inversion zeta_k = (1/2pi) \int Q e^{-i k phi} dphi on the grid.
/// Imaginary residue up to 1e-10 (relative to max(1, max|zeta|)) is dropped;
/// anything larger means the amplitudes lost conjugate symmetry.
[[nodiscard]] inline LatticeState inverse_transform(const SpectralState& s, long lo, long hi)
{
    if (hi < lo) throw Error(ErrorKind::invalid_window, "inverse_transform window has hi < lo");
    if (static_cast<std::size_t>(hi - lo + 1) > s.M)
        throw Error(ErrorKind::aliasing, "inversion window wider than the spectral grid");
    const auto zq = detail::from_spectrum(s.Q, lo, hi, s.phi);
    const auto zv = detail::from_spectrum(s.Qdot, lo, hi, s.phi);

    double scale = 1.0;
    for (std::size_t i = 0; i < zq.size(); ++i) scale = std::max({scale, std::abs(zq[i].real()), std::abs(zv[i].real())});
    const double tol = kImaginaryTolerance * scale;

    LatticeState out(lo, hi, s.t);
    for (std::size_t i = 0; i < zq.size(); ++i) {
        if (std::abs(zq[i].imag()) > tol || std::abs(zv[i].imag()) > tol)
            throw Error(ErrorKind::symmetry_violation,
                        "inverse transform has imaginary part " +
                            std::to_string(std::max(std::abs(zq[i].imag()), std::abs(zv[i].imag()))) + " at k = " +
                            std::to_string(lo + static_cast<long>(i)));
        out.q[i] = zq[i].real();
        out.v[i] = zv[i].real();
    }
    return out;
}

/// Exact-in-time evolution of q = xi + zeta: the equilibrium profile is computed
/// once and zeta(0) = q(0) - xi (velocities unchanged) is transformed once, so
/// repeated calls to at() only propagate and invert.
class SpectralPropagator {
public:
    SpectralPropagator(const LatticeParams& p, const LatticeState& initial, std::size_t M = 0)
        : params_(p), lo_(initial.lo), hi_(initial.hi)
    {
        p.validate();
        initial.validate();
        if (!initial.contains(0)) throw Error(ErrorKind::invalid_window, "initial window must contain k = 0");
        if (M == 0) M = default_spectral_nodes(initial.size());
        profile_ = xi_profile(p, lo_, hi_);
        LatticeState zeta0 = initial;
        for (std::size_t i = 0; i < zeta0.size(); ++i) zeta0.q[i] -= profile_.xi[i];
        spectrum0_ = forward_transform(zeta0, M);
    }

    /// Full state q = xi + zeta(t), v = zetadot(t) on the initial window.
    [[nodiscard]] LatticeState at(double t) const
    {
        LatticeState s = homogeneous_at(t, lo_, hi_);
        for (std::size_t i = 0; i < s.size(); ++i) s.q[i] += profile_.xi[i];
        return s;
    }

    /// Homogeneous part zeta(t) on any window no wider than the grid.
    [[nodiscard]] LatticeState homogeneous_at(double t, long lo, long hi) const
    {
        return inverse_transform(evolve(spectrum0_, params_, t), lo, hi);
    }

    [[nodiscard]] const EquilibriumProfile& profile() const noexcept { return profile_; }
    [[nodiscard]] const SpectralState& initial_spectrum() const noexcept { return spectrum0_; }
    [[nodiscard]] const LatticeParams& params() const noexcept { return params_; }

private:
    LatticeParams params_;
    long lo_;
    long hi_;
    EquilibriumProfile profile_;
    SpectralState spectrum0_;
};

/// State at time t (t measured on the same clock as initial.t). For f = 0 this
/// is the plain homogeneous propagator.
[[nodiscard]] inline LatticeState solve(const LatticeParams& p, const LatticeState& initial, double t,
                                        std::size_t M = 0)
{
    return SpectralPropagator(p, initial, M).at(t);
}

/// Samples the exact solution at initial.t + i * sample_dt up to t_end
/// (the final time is always included).
[[nodiscard]] inline Trajectory spectral_trajectory(const LatticeParams& p, const LatticeState& initial,
                                                    double t_end, double sample_dt, const BoundaryPolicy& boundary,
                                                    std::size_t M = 0)
{
    if (!(sample_dt > 0.0)) throw Error(ErrorKind::configuration, "sample spacing must be > 0");
    if (t_end < initial.t) throw Error(ErrorKind::configuration, "t_end precedes the initial time");
    SpectralPropagator prop(p, initial, M);
    std::vector<double> times;
    const double span = t_end - initial.t;
    const auto n = static_cast<long>(std::floor(span / sample_dt + 1e-9));
    for (long i = 0; i <= n; ++i) times.push_back(initial.t + static_cast<double>(i) * sample_dt);
    if (times.back() < t_end - 1e-9 * std::max(1.0, t_end)) times.push_back(t_end);

    Trajectory traj;
    traj.params = p;
    traj.boundary = boundary;
    traj.samples.resize(times.size());
    detail::parallel_for(times.size(), [&](std::size_t i) { traj.samples[i] = prop.at(times[i]); }, 1);
    traj.samples.front() = initial;
    return traj;
}

}  // namespace chain_escape
