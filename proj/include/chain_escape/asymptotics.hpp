// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "chain_escape/detail/fft.hpp"
#include "chain_escape/detail/parallel.hpp"
#include "chain_escape/spectral.hpp"

namespace chain_escape {

/// Amplitudes of the two band-edge tones of the long-time response,
///   zeta_k(t) ~ t^{-1/2} [C1 cos(omega_lo t + pi/4) + (-1)^k C2 cos(omega_hi t - pi/4)
///                        + S1 sin(omega_lo t + pi/4) + (-1)^k S2 sin(omega_hi t - pi/4)].
struct AsymptoticCoefficients {
    double C1 = 0.0;
    double C2 = 0.0;
    double S1 = 0.0;
    double S2 = 0.0;
    double omega_lo = 0.0;
    double omega_hi = 0.0;
};

/// Q(0,0), Q(0,pi), Qdot(0,0), Qdot(0,pi) of homogeneous data; real because
/// the data are real.
struct BandEdgeAmplitudes {
    double Q00 = 0.0;
    double Q0pi = 0.0;
    double Qd00 = 0.0;
    double Qd0pi = 0.0;
};

/// Direct sums over the finite support: sum_k zeta_k and sum_k (-1)^k zeta_k.
[[nodiscard]] inline BandEdgeAmplitudes band_edge_amplitudes(const LatticeState& zeta0)
{
    BandEdgeAmplitudes a;
    for (std::size_t i = 0; i < zeta0.size(); ++i) {
        const double sign = detail::parity(zeta0.lo + static_cast<long>(i));
        a.Q00 += zeta0.q[i];
        a.Q0pi += sign * zeta0.q[i];
        a.Qd00 += zeta0.v[i];
        a.Qd0pi += sign * zeta0.v[i];
    }
    return a;
}

/// Stationary-phase amplitudes. Near phi = 0 the phase is
/// omega0 + omega^2 phi^2 / (2 omega0); near phi = pi it is
/// omega_hi - omega^2 (phi - pi)^2 / (2 omega_hi). The velocity terms carry an
/// extra 1/Omega at the stationary point, hence 1/(2 pi omega^2 Omega).
[[nodiscard]] inline AsymptoticCoefficients coefficients(const LatticeParams& p, double Q00, double Q0pi,
                                                         double Qd00, double Qd0pi)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double w2 = p.omega * p.omega;
    AsymptoticCoefficients c;
    c.omega_lo = p.omega0;
    c.omega_hi = p.max_frequency();
    c.C1 = std::sqrt(c.omega_lo / (two_pi * w2)) * Q00;
    c.C2 = std::sqrt(c.omega_hi / (two_pi * w2)) * Q0pi;
    c.S1 = std::sqrt(1.0 / (two_pi * w2 * c.omega_lo)) * Qd00;
    c.S2 = std::sqrt(1.0 / (two_pi * w2 * c.omega_hi)) * Qd0pi;
    return c;
}

[[nodiscard]] inline AsymptoticCoefficients coefficients(const LatticeParams& p, const BandEdgeAmplitudes& a)
{
    return coefficients(p, a.Q00, a.Q0pi, a.Qd00, a.Qd0pi);
}

/// Leading-order prediction of zeta_k(t); only the omega_hi tone carries (-1)^k.
[[nodiscard]] inline double predict(const AsymptoticCoefficients& c, long k, double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorKind::domain, "asymptotic prediction needs t > 0");
    constexpr double quarter = 0.25 * std::numbers::pi;
    const double slow = c.omega_lo * t + quarter;
    const double fast = c.omega_hi * t - quarter;
    const double sign = detail::parity(k);
    return (c.C1 * std::cos(slow) + sign * c.C2 * std::cos(fast) + c.S1 * std::sin(slow) +
            sign * c.S2 * std::sin(fast)) /
           std::sqrt(t);
}

struct ResidualRow {
    double t = 0.0;
    double exact = 0.0;
    double predicted = 0.0;
    double scaled_residual = 0.0;  ///< t^{3/2} |exact - predicted|
};

/// Homogeneous data zeta(0) = q(0) - xi for a full initial state.
[[nodiscard]] inline LatticeState homogeneous_part(const LatticeParams& p, const LatticeState& initial)
{
    const auto prof = xi_profile(p, initial.lo, initial.hi);
    LatticeState zeta = initial;
    for (std::size_t i = 0; i < zeta.size(); ++i) zeta.q[i] -= prof.xi[i];
    return zeta;
}

/// Compares the exact zeta_k(t) from the spectral propagator with predict().
/// Every t must be >= 10 / omega0.
[[nodiscard]] inline std::vector<ResidualRow> residual_scan(const LatticeParams& p, const LatticeState& initial, long k,
                                                            std::span<const double> times, std::size_t M = 0)
{
    for (double t : times)
        if (!(t >= 10.0 / p.omega0))
            throw Error(ErrorKind::domain, "residual scan times must be >= 10 / omega0 (asymptotic regime)");
    const SpectralPropagator prop(p, initial, M);
    const LatticeState zeta0 = homogeneous_part(p, initial);
    const auto c = coefficients(p, band_edge_amplitudes(zeta0));

    std::vector<ResidualRow> rows(times.size());
    detail::parallel_for(times.size(), [&](std::size_t i) {
        const double t = times[i] + initial.t;
        ResidualRow r;
        r.t = times[i];
        r.exact = prop.homogeneous_at(t, k, k).q.front();
        r.predicted = predict(c, k, times[i]);
        r.scaled_residual = std::pow(times[i], 1.5) * std::abs(r.exact - r.predicted);
        rows[i] = r;
    }, 1);
    return rows;
}

/// Peak |value| in consecutive windows of the given width, as (t_at_peak, peak).
[[nodiscard]] inline std::vector<std::pair<double, double>> envelope(std::span<const double> times,
                                                                     std::span<const double> values, double width)
{
    std::vector<std::pair<double, double>> out;
    if (times.empty()) return out;
    std::size_t i = 0;
    double start = times.front();
    while (i < times.size()) {
        const double stop = start + width;
        if (times.back() < stop) break;  // drop the incomplete last window
        std::pair<double, double> best{times[i], -1.0};
        for (; i < times.size() && times[i] < stop; ++i)
            if (std::abs(values[i]) > best.second) best = {times[i], std::abs(values[i])};
        if (best.second >= 0.0) out.push_back(best);
        start = stop;
    }
    return out;
}

/// Least-squares slope of log(y) against log(x).
[[nodiscard]] inline double log_log_slope(std::span<const std::pair<double, double>> points)
{
    const auto n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct SpectrumBin {
    double frequency = 0.0;  ///< angular frequency
    double magnitude = 0.0;
};

/// Hann-windowed amplitude spectrum of uniformly sampled data, non-negative
/// angular frequencies only. Bin spacing is 2 pi / (n dt).
[[nodiscard]] inline std::vector<SpectrumBin> amplitude_spectrum(std::span<const double> samples, double dt)
{
    const std::size_t n = samples.size();
    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        buf[i] = samples[i] * hann;
    }
    detail::dft_in_place(buf, -1);
    std::vector<SpectrumBin> out(n / 2 + 1);
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = {2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * dt), std::abs(buf[m])};
    return out;
}

/// Indices of local maxima, largest first.
[[nodiscard]] inline std::vector<std::size_t> spectrum_peaks(const std::vector<SpectrumBin>& spec)
{
    std::vector<std::size_t> peaks;
    for (std::size_t m = 1; m + 1 < spec.size(); ++m)
        if (spec[m].magnitude > spec[m - 1].magnitude && spec[m].magnitude >= spec[m + 1].magnitude) peaks.push_back(m);
    std::sort(peaks.begin(), peaks.end(),
              [&](std::size_t a, std::size_t b) { return spec[a].magnitude > spec[b].magnitude; });
    return peaks;
}

}  // namespace chain_escape
