// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chain_escape/detail/parallel.hpp"
#include "chain_escape/equilibrium.hpp"
#include "chain_escape/model.hpp"
#include "chain_escape/trajectory.hpp"

namespace chain_escape {

struct ParticleEnergy {
    long k = 0;
    double T = 0.0;
    double U = 0.0;
    double H = 0.0;
};

/// T_k = v_k^2 / 2,
/// U_k = (omega^2/4)[(q_{k+1} - q_k)^2 + (q_k - q_{k-1})^2] + (omega0^2/2) q_k^2 - f q_0 [k = 0].
/// Each bond is split evenly between its two ends; at the window edges the
/// outer neighbour comes from the boundary policy.
[[nodiscard]] inline ParticleEnergy particle_energy(const LatticeParams& p, const LatticeState& s, long k,
                                                    const BoundaryPolicy& b)
{
    if (!s.contains(k))
        throw Error(ErrorKind::index, "site " + std::to_string(k) + " outside window [" + std::to_string(s.lo) + ", " +
                                          std::to_string(s.hi) + "]");
    const auto i = static_cast<std::ptrdiff_t>(s.offset(k));
    const double qk = s.q[static_cast<std::size_t>(i)];
    const double right = detail::neighbour(s.q, i + 1, b) - qk;
    const double left = qk - detail::neighbour(s.q, i - 1, b);
    ParticleEnergy e;
    e.k = k;
    e.T = 0.5 * s.v[static_cast<std::size_t>(i)] * s.v[static_cast<std::size_t>(i)];
    e.U = 0.25 * p.omega * p.omega * (right * right + left * left) + 0.5 * p.omega0 * p.omega0 * qk * qk;
    if (k == 0) e.U -= p.f * qk;
    e.H = e.T + e.U;
    return e;
}

[[nodiscard]] inline std::vector<ParticleEnergy> particle_energies(const LatticeParams& p, const LatticeState& s,
                                                                   long m, long n, const BoundaryPolicy& b)
{
    if (n < m || !s.contains(m) || !s.contains(n))
        throw Error(ErrorKind::index, "interval [" + std::to_string(m) + ", " + std::to_string(n) +
                                          "] is not inside the window");
    std::vector<ParticleEnergy> out;
    out.reserve(static_cast<std::size_t>(n - m + 1));
    for (long k = m; k <= n; ++k) out.push_back(particle_energy(p, s, k, b));
    return out;
}

/// H_A for A = [m, n].
[[nodiscard]] inline double window_energy(const LatticeParams& p, const LatticeState& s, long m, long n,
                                          const BoundaryPolicy& b)
{
    double sum = 0.0;
    for (const auto& e : particle_energies(p, s, m, n, b)) sum += e.H;
    return sum;
}

/// H = sum of H_k over the whole window.
[[nodiscard]] inline double total_energy(const LatticeParams& p, const LatticeState& s, const BoundaryPolicy& b)
{
    return window_energy(p, s, s.lo, s.hi, b);
}

/// Second route to H: T + (Vq, q)/2 - f q_0, plus the edge correction
/// (omega^2/4)(g^2 - q_edge^2) per edge that converts the full ghost bond of the
/// quadratic form into the half-bond convention of the per-particle split.
[[nodiscard]] inline double total_energy_quadratic(const LatticeParams& p, const LatticeState& s,
                                                   const BoundaryPolicy& b)
{
    const auto vq = apply_V(p, s.q, b);
    double kinetic = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        kinetic += 0.5 * s.v[i] * s.v[i];
        quad += 0.5 * vq[i] * s.q[i];
    }
    const double w2 = p.omega * p.omega;
    const double q_lo = s.q.front(), q_hi = s.q.back();
    const double edges = 0.25 * w2 * ((b.below * b.below - q_lo * q_lo) + (b.above * b.above - q_hi * q_hi));
    const double external = s.contains(0) ? -p.f * s.q_at(0) : 0.0;
    return kinetic + quad + external + edges;
}

/// H^hom = H + C f^2.
[[nodiscard]] inline double homogeneous_energy(const LatticeParams& p, const LatticeState& s, const BoundaryPolicy& b)
{
    return total_energy(p, s, b) + escape_constant(p) * p.f * p.f;
}

/// Second route to H^hom: the force-free energy of zeta = q - xi, with ghost
/// neighbours shifted by the equilibrium values just outside the window.
[[nodiscard]] inline double homogeneous_energy_direct(const LatticeParams& p, const LatticeState& s,
                                                      const EquilibriumProfile& prof, const BoundaryPolicy& b)
{
    if (prof.lo != s.lo || prof.hi != s.hi) throw Error(ErrorKind::invalid_window, "profile window mismatch");
    LatticeState zeta = s;
    for (std::size_t i = 0; i < zeta.size(); ++i) zeta.q[i] -= prof.xi[i];
    BoundaryPolicy zb = b;
    zb.below -= xi_coefficient(p, s.lo - 1);
    zb.above -= xi_coefficient(p, s.hi + 1);
    LatticeParams free = p;
    free.f = 0.0;
    return total_energy(free, zeta, zb);
}

/// Snapshot of the energy bookkeeping at one time.
struct EnergyReport {
    double t = 0.0;
    std::vector<ParticleEnergy> per_particle;  ///< over the whole window
    long window_lo = 0;
    long window_hi = 0;
    double window = 0.0;       ///< H_A, A = [window_lo, window_hi]
    double total = 0.0;        ///< H
    double homogeneous = 0.0;  ///< H + C f^2
    double tail = 0.0;         ///< H - H_{[-N, N]}
};

[[nodiscard]] inline EnergyReport energy_report(const LatticeParams& p, const LatticeState& s, long N,
                                                const BoundaryPolicy& b)
{
    EnergyReport r;
    r.t = s.t;
    r.per_particle = particle_energies(p, s, s.lo, s.hi, b);
    if (!s.contains(-N) || !s.contains(N)) throw Error(ErrorKind::index, "escape window exceeds the state window");
    r.window_lo = -N;
    r.window_hi = N;
    for (const auto& e : r.per_particle) {
        r.total += e.H;
        if (e.k >= -N && e.k <= N) r.window += e.H;
    }
    r.homogeneous = r.total + escape_constant(p) * p.f * p.f;
    r.tail = r.total - r.window;
    return r;
}

struct EscapeRow {
    double t = 0.0;
    double window = 0.0;  ///< H_{[-N, N]}(t)
    double tail = 0.0;    ///< H(0) - H_{[-N, N]}(t)
    double total = 0.0;   ///< H(t) summed over the window
    double homogeneous = 0.0;
};

struct EscapeSeries {
    long N = 0;
    double initial_energy = 0.0;
    std::vector<EscapeRow> rows;
    std::vector<std::string> warnings;
};

/// Energy left in [-N, N] and the escaped remainder H(0) - H_{[-N, N]}(t).
/// H(0) is taken from the trajectory's first sample, relying on conservation
/// rather than on summing the (unreachable) far tails.
[[nodiscard]] inline EscapeSeries escape_series(const Trajectory& traj, long N)
{
    if (traj.samples.empty()) throw Error(ErrorKind::configuration, "empty trajectory");
    if (N < 0 || -N < traj.lo() || N > traj.hi())
        throw Error(ErrorKind::index, "escape window [-N, N] with N = " + std::to_string(N) + " exceeds the trajectory window");
    const auto& p = traj.params;
    EscapeSeries out;
    out.N = N;
    Trajectory probe;
    probe.params = p;
    probe.samples = {traj.samples.front()};
    check_padding(probe, N, traj.samples.back().t - traj.samples.front().t);
    out.warnings = traj.warnings;
    out.warnings.insert(out.warnings.end(), probe.warnings.begin(), probe.warnings.end());

    const double cf2 = escape_constant(p) * p.f * p.f;
    out.initial_energy = total_energy(p, traj.samples.front(), traj.boundary);
    out.rows.resize(traj.samples.size());
    detail::parallel_for(traj.samples.size(), [&](std::size_t i) {
        const auto& s = traj.samples[i];
        EscapeRow r;
        r.t = s.t;
        r.window = window_energy(p, s, -N, N, traj.boundary);
        r.total = total_energy(p, s, traj.boundary);
        r.tail = out.initial_energy - r.window;
        r.homogeneous = r.total + cf2;
        out.rows[i] = r;
    }, 16);
    return out;
}

}  // namespace chain_escape
