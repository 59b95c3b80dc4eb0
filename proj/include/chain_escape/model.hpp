// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chain_escape/error.hpp"

namespace chain_escape {

/// Physical constants of the pinned chain (unit masses).
struct LatticeParams {
    double a = 1.0;       ///< lattice spacing
    double omega = 1.0;   ///< nearest-neighbour coupling frequency
    double omega0 = 1.0;  ///< on-site pinning frequency
    double f = 1.0;       ///< constant force on particle 0

    /// Throws ErrorKind::configuration unless a, omega, omega0 are finite and
    /// strictly positive and f is finite.
    void validate() const
    {
        auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
        if (!positive(a)) throw Error(ErrorKind::configuration, "lattice spacing a must be > 0");
        if (!positive(omega)) throw Error(ErrorKind::configuration, "omega must be > 0");
        if (!positive(omega0)) throw Error(ErrorKind::configuration, "omega0 must be > 0");
        if (!std::isfinite(f)) throw Error(ErrorKind::configuration, "force f must be finite");
    }

    /// Diagonal of the stiffness operator, 2 omega^2 + omega0^2.
    [[nodiscard]] double diagonal() const noexcept { return 2.0 * omega * omega + omega0 * omega0; }
    /// Top of the phonon band, sqrt(4 omega^2 + omega0^2).
    [[nodiscard]] double max_frequency() const noexcept { return std::sqrt(4.0 * omega * omega + omega0 * omega0); }
};

/// A finite window [lo, hi] of displacements q_k = x_k - k a and velocities.
struct LatticeState {
    long lo = 0;
    long hi = 0;
    std::vector<double> q;
    std::vector<double> v;
    double t = 0.0;

    LatticeState() : q(1, 0.0), v(1, 0.0) {}

    LatticeState(long lo_, long hi_, double t_ = 0.0)
        : lo(lo_), hi(hi_), t(t_)
    {
        if (hi_ < lo_) throw Error(ErrorKind::invalid_window, "window has hi < lo");
        q.assign(static_cast<std::size_t>(hi_ - lo_ + 1), 0.0);
        v.assign(q.size(), 0.0);
    }

    static LatticeState zeros(long half_width, double t = 0.0) { return {-half_width, half_width, t}; }

    [[nodiscard]] std::size_t size() const noexcept { return q.size(); }
    [[nodiscard]] bool contains(long k) const noexcept { return k >= lo && k <= hi; }
    [[nodiscard]] std::size_t offset(long k) const noexcept { return static_cast<std::size_t>(k - lo); }

    double& q_at(long k) { return q[checked(k)]; }
    double& v_at(long k) { return v[checked(k)]; }
    [[nodiscard]] double q_at(long k) const { return q[checked(k)]; }
    [[nodiscard]] double v_at(long k) const { return v[checked(k)]; }

    /// Checks the shape and finiteness invariants.
    void validate() const
    {
        if (hi < lo) throw Error(ErrorKind::invalid_window, "window has hi < lo");
        const auto n = static_cast<std::size_t>(hi - lo + 1);
        if (q.size() != n || v.size() != n)
            throw Error(ErrorKind::invalid_window, "q and v must both have hi - lo + 1 entries");
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(q[i]) || !std::isfinite(v[i]))
                throw Error(ErrorKind::domain, "state contains a non-finite entry at k = " +
                                                   std::to_string(lo + static_cast<long>(i)));
        }
        if (!std::isfinite(t)) throw Error(ErrorKind::domain, "state time is not finite");
    }

private:
    [[nodiscard]] std::size_t checked(long k) const
    {
        if (!contains(k))
            throw Error(ErrorKind::index, "site " + std::to_string(k) + " outside window [" + std::to_string(lo) +
                                              ", " + std::to_string(hi) + "]");
        return offset(k);
    }
};

enum class BoundaryKind { clamp_to_equilibrium, clamp_to_zero };

/// Supplies q_{lo-1} and q_{hi+1}. The ghost values are resolved once per
/// window (see make_boundary in equilibrium.hpp for the equilibrium clamp).
struct BoundaryPolicy {
    BoundaryKind kind = BoundaryKind::clamp_to_zero;
    double below = 0.0;  ///< value substituted for q_{lo-1}
    double above = 0.0;  ///< value substituted for q_{hi+1}

    static BoundaryPolicy zero() { return {}; }
};

/// Omega(phi) = sqrt(4 omega^2 sin^2(phi/2) + omega0^2).
[[nodiscard]] inline double dispersion(const LatticeParams& p, double phi) noexcept
{
    const double s = std::sin(0.5 * phi);
    return std::sqrt(4.0 * p.omega * p.omega * s * s + p.omega0 * p.omega0);
}

/// Group speed dOmega/dphi in sites per unit time; |.| <= omega.
[[nodiscard]] inline double group_speed(const LatticeParams& p, double phi) noexcept
{
    return p.omega * p.omega * std::sin(phi) / dispersion(p, phi);
}

namespace detail {

inline double neighbour(std::span<const double> q, std::ptrdiff_t i, const BoundaryPolicy& b) noexcept
{
    if (i < 0) return b.below;
    if (i >= static_cast<std::ptrdiff_t>(q.size())) return b.above;
    return q[static_cast<std::size_t>(i)];
}

}  // namespace detail

/// (Vq)_k = (2 omega^2 + omega0^2) q_k - omega^2 (q_{k+1} + q_{k-1}), with the
/// out-of-window neighbours taken from the boundary policy.
inline void apply_V(const LatticeParams& p, std::span<const double> q, const BoundaryPolicy& b,
                    std::span<double> out)
{
    const std::size_t n = q.size();
    if (out.size() != n) throw Error(ErrorKind::invalid_window, "apply_V output size mismatch");
    if (n == 0) return;
    const double d = p.diagonal();
    const double w2 = p.omega * p.omega;
    if (n == 1) {
        out[0] = d * q[0] - w2 * (b.below + b.above);
        return;
    }
    out[0] = d * q[0] - w2 * (b.below + q[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = d * q[i] - w2 * (q[i - 1] + q[i + 1]);
    out[n - 1] = d * q[n - 1] - w2 * (q[n - 2] + b.above);
}

[[nodiscard]] inline std::vector<double> apply_V(const LatticeParams& p, std::span<const double> q,
                                                 const BoundaryPolicy& b)
{
    std::vector<double> out(q.size());
    apply_V(p, q, b, out);
    return out;
}

/// Newton right-hand side: omega^2 (q_{k+1} - 2 q_k + q_{k-1}) - omega0^2 q_k + f [k = 0].
inline void acceleration(const LatticeParams& p, const LatticeState& s, const BoundaryPolicy& b,
                         std::span<double> out)
{
    if (p.f != 0.0 && !s.contains(0))
        throw Error(ErrorKind::invalid_window, "window must contain the forced site k = 0 when f != 0");
    if (out.size() != s.size()) throw Error(ErrorKind::invalid_window, "acceleration output size mismatch");
    const std::size_t n = s.size();
    const double w2 = p.omega * p.omega;
    const double w02 = p.omega0 * p.omega0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const double left = detail::neighbour(s.q, ii - 1, b);
        const double right = detail::neighbour(s.q, ii + 1, b);
        out[i] = w2 * (right - 2.0 * s.q[i] + left) - w02 * s.q[i];
    }
    if (s.contains(0)) out[s.offset(0)] += p.f;
}

[[nodiscard]] inline std::vector<double> acceleration(const LatticeParams& p, const LatticeState& s,
                                                      const BoundaryPolicy& b)
{
    std::vector<double> out(s.size());
    acceleration(p, s, b, out);
    return out;
}

/// x_k -> q_k = x_k - k a over [lo, lo + x.size() - 1].
[[nodiscard]] inline std::vector<double> to_displacements(const LatticeParams& p, long lo,
                                                          std::span<const double> x)
{
    std::vector<double> q(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) q[i] = x[i] - static_cast<double>(lo + static_cast<long>(i)) * p.a;
    return q;
}

/// q_k -> x_k = q_k + k a.
[[nodiscard]] inline std::vector<double> to_positions(const LatticeParams& p, long lo, std::span<const double> q)
{
    std::vector<double> x(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) x[i] = q[i] + static_cast<double>(lo + static_cast<long>(i)) * p.a;
    return x;
}

}  // namespace chain_escape
