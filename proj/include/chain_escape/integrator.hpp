// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chain_escape/model.hpp"
#include "chain_escape/trajectory.hpp"

namespace chain_escape {

/// Linear stability limit of velocity Verlet, 2 / Omega_max.
[[nodiscard]] inline double verlet_stability_bound(const LatticeParams& p) noexcept { return 2.0 / p.max_frequency(); }

/// 0.1 / Omega_max.
[[nodiscard]] inline double default_dt(const LatticeParams& p) noexcept { return 0.1 / p.max_frequency(); }

inline void check_verlet_dt(const LatticeParams& p, double dt)
{
    if (!(dt > 0.0) || !(dt < verlet_stability_bound(p)))
        throw Error(ErrorKind::configuration, "time step " + std::to_string(dt) + " outside the stability range (0, " +
                                                  std::to_string(verlet_stability_bound(p)) + ")");
}

namespace detail {

// Kick-drift-kick on `s`; `acc` holds a(q) on entry and a(q') on exit.
inline void verlet_advance(const LatticeParams& p, LatticeState& s, double dt, const BoundaryPolicy& b,
                           std::vector<double>& acc)
{
    const double half = 0.5 * dt;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        s.v[i] += half * acc[i];
        s.q[i] += dt * s.v[i];
    }
    acceleration(p, s, b, acc);
    for (std::size_t i = 0; i < n; ++i) s.v[i] += half * acc[i];
    s.t += dt;
}

}  // namespace detail

/// One velocity-Verlet step:
///   v' = v + dt/2 a(q),  q' = q + dt v',  v'' = v' + dt/2 a(q').
[[nodiscard]] inline LatticeState verlet_step(const LatticeParams& p, const LatticeState& s, double dt,
                                              const BoundaryPolicy& b)
{
    check_verlet_dt(p, dt);
    s.validate();
    LatticeState out = s;
    auto acc = acceleration(p, out, b);
    detail::verlet_advance(p, out, dt, b, acc);
    return out;
}

/// Integrates from initial.t to t_end, sampling every `stride` steps plus the
/// final state. If t_end - initial.t is not a multiple of dt the last step is
/// shortened so the final sample lands exactly on t_end. A window narrower than
/// the group-speed horizon for `observe` is recorded in traj.warnings.
[[nodiscard]] inline Trajectory evolve_verlet(const LatticeParams& p, const LatticeState& initial, double t_end,
                                              double dt, long stride, const BoundaryPolicy& b, long observe = 0)
{
    p.validate();
    initial.validate();
    check_verlet_dt(p, dt);
    if (stride < 1) throw Error(ErrorKind::configuration, "sample stride must be >= 1");
    if (!std::isfinite(t_end) || t_end < initial.t)
        throw Error(ErrorKind::configuration, "t_end must be finite and not before the initial time");

    Trajectory traj;
    traj.params = p;
    traj.dt = dt;
    traj.boundary = b;
    traj.samples.push_back(initial);
    const double span = t_end - initial.t;
    check_padding(traj, observe, span);
    if (span == 0.0) return traj;

    const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
    LatticeState s = initial;
    auto acc = acceleration(p, s, b);
    for (long i = 1; i <= steps; ++i) {
        const bool last = (i == steps);
        const double h = last ? t_end - (initial.t + static_cast<double>(i - 1) * dt) : dt;
        detail::verlet_advance(p, s, h, b, acc);
        s.t = last ? t_end : initial.t + static_cast<double>(i) * dt;
        if (last || i % stride == 0) traj.samples.push_back(s);
    }
    return traj;
}

}  // namespace chain_escape
