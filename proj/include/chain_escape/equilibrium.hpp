// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "chain_escape/detail/parallel.hpp"
#include "chain_escape/model.hpp"

namespace chain_escape {

/// Static displacement field solving V xi = f e_0 on a window, together with
/// the escape constant C and the equilibrium potential energy U_xi = -C f^2.
struct EquilibriumProfile {
    LatticeParams params;
    long lo = 0;
    long hi = 0;
    std::vector<double> xi;
    double C = 0.0;
    double U_xi = 0.0;

    [[nodiscard]] double at(long k) const
    {
        if (k < lo || k > hi) throw Error(ErrorKind::index, "site " + std::to_string(k) + " outside profile window");
        return xi[static_cast<std::size_t>(k - lo)];
    }
};

/// C = 1 / (2 omega0 sqrt(4 omega^2 + omega0^2)).
[[nodiscard]] inline double escape_constant(const LatticeParams& p) noexcept
{
    return 1.0 / (2.0 * p.omega0 * p.max_frequency());
}

inline constexpr int kMinQuadratureNodes = 16;

/// max(512, 64 |k|): cos(2 k phi) needs node density proportional to k.
[[nodiscard]] inline int default_xi_nodes(long k) noexcept
{
    return static_cast<int>(std::max<long>(512, 64 * std::labs(k)));
}

/// Trapezoidal evaluation of
///   xi_k = (1/pi) \int_{-pi/2}^{pi/2} f cos(2 k phi) / (4 omega^2 sin^2 phi + omega0^2) dphi
/// on `nodes` uniform points of the periodic interval. The integrand is analytic
/// and pi-periodic, so the error decays geometrically in the node count.
/// nodes = 0 selects default_xi_nodes(k).
[[nodiscard]] inline double xi_coefficient(const LatticeParams& p, long k, int nodes = 0)
{
    if (nodes == 0) nodes = default_xi_nodes(k);
    if (nodes < kMinQuadratureNodes || nodes % 2 != 0)
        throw Error(ErrorKind::configuration,
                    "quadrature needs an even node count >= 16, got " + std::to_string(nodes));
    if (p.f == 0.0) return 0.0;
    const double w2x4 = 4.0 * p.omega * p.omega;
    const double w02 = p.omega0 * p.omega0;
    const double h = std::numbers::pi / nodes;
    const double two_k = 2.0 * static_cast<double>(k);
    double sum = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double phi = -0.5 * std::numbers::pi + j * h;
        const double s = std::sin(phi);
        sum += std::cos(two_k * phi) / (w2x4 * s * s + w02);
    }
    return p.f * sum / nodes;
}

/// Quadrature profile over [lo, hi]; each |k| is evaluated once and mirrored.
[[nodiscard]] inline EquilibriumProfile xi_profile(const LatticeParams& p, long lo, long hi, int nodes = 0)
{
    p.validate();
    if (lo > 0 || hi < 0 || hi < lo)
        throw Error(ErrorKind::invalid_window, "equilibrium window must satisfy lo <= 0 <= hi");
    if (nodes != 0 && (nodes < kMinQuadratureNodes || nodes % 2 != 0))
        throw Error(ErrorKind::configuration,
                    "quadrature needs an even node count >= 16, got " + std::to_string(nodes));

    EquilibriumProfile out;
    out.params = p;
    out.lo = lo;
    out.hi = hi;
    out.C = escape_constant(p);
    out.U_xi = -out.C * p.f * p.f;

    const long reach = std::max(-lo, hi);
    std::vector<double> half(static_cast<std::size_t>(reach + 1));
    detail::parallel_for(half.size(), [&](std::size_t k) { half[k] = xi_coefficient(p, static_cast<long>(k), nodes); }, 8);

    out.xi.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long k = lo; k <= hi; ++k) out.xi[static_cast<std::size_t>(k - lo)] = half[static_cast<std::size_t>(std::labs(k))];
    return out;
}

/// V xi - f e_0 on interior rows lo+1 .. hi-1 (boundary rows reported as 0).
[[nodiscard]] inline std::vector<double> xi_residual(const EquilibriumProfile& prof)
{
    const auto& p = prof.params;
    const std::size_t n = prof.xi.size();
    std::vector<double> r(n, 0.0);
    const double d = p.diagonal();
    const double w2 = p.omega * p.omega;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const long k = prof.lo + static_cast<long>(i);
        r[i] = d * prof.xi[i] - w2 * (prof.xi[i - 1] + prof.xi[i + 1]) - (k == 0 ? p.f : 0.0);
    }
    return r;
}

namespace detail {

/// Thomas algorithm for a constant-coefficient tridiagonal system.
inline std::vector<double> solve_toeplitz_tridiagonal(double diag, double off, std::span<const double> rhs)
{
    const std::size_t n = rhs.size();
    std::vector<double> c_prime(n), x(n);
    if (n == 0) return x;
    c_prime[0] = off / diag;
    x[0] = rhs[0] / diag;
    for (std::size_t i = 1; i < n; ++i) {
        const double factor = 1.0 / (diag - off * c_prime[i - 1]);
        c_prime[i] = off * factor;
        x[i] = (rhs[i] - off * x[i - 1]) * factor;
    }
    for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= c_prime[i - 1] * x[i];
    return x;
}

}  // namespace detail

/// Brute-force oracle: solves the (2N+1) x (2N+1) truncated system V xi = f e_0
/// with zero closure beyond +-N. Truncation error near the edges is geometric in
/// the distance to the boundary.
[[nodiscard]] inline std::vector<double> xi_oracle_tridiagonal(const LatticeParams& p, long half_width)
{
    p.validate();
    if (half_width < 8) throw Error(ErrorKind::configuration, "tridiagonal oracle needs N >= 8");
    std::vector<double> rhs(static_cast<std::size_t>(2 * half_width + 1), 0.0);
    rhs[static_cast<std::size_t>(half_width)] = p.f;
    return detail::solve_toeplitz_tridiagonal(p.diagonal(), -p.omega * p.omega, rhs);
}

/// Resolves the ghost values for a window. clamp_to_equilibrium uses xi_{lo-1}
/// and xi_{hi+1}; clamp_to_zero uses 0.
[[nodiscard]] inline BoundaryPolicy make_boundary(BoundaryKind kind, const LatticeParams& p, long lo, long hi)
{
    BoundaryPolicy b;
    b.kind = kind;
    if (kind == BoundaryKind::clamp_to_equilibrium) {
        b.below = xi_coefficient(p, lo - 1);
        b.above = xi_coefficient(p, hi + 1);
    }
    return b;
}

/// clamp_to_equilibrium when f != 0, clamp_to_zero otherwise.
[[nodiscard]] inline BoundaryKind default_boundary_kind(const LatticeParams& p) noexcept
{
    return p.f != 0.0 ? BoundaryKind::clamp_to_equilibrium : BoundaryKind::clamp_to_zero;
}

[[nodiscard]] inline BoundaryPolicy default_boundary(const LatticeParams& p, long lo, long hi)
{
    return make_boundary(default_boundary_kind(p), p, lo, hi);
}

/// State at rest on the equilibrium profile.
[[nodiscard]] inline LatticeState equilibrium_state(const EquilibriumProfile& prof, double t = 0.0)
{
    LatticeState s(prof.lo, prof.hi, t);
    s.q = prof.xi;
    return s;
}

}  // namespace chain_escape
