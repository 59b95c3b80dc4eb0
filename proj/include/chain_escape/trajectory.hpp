// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chain_escape/model.hpp"

namespace chain_escape {

/// Time-ordered samples of one run. All samples share the window.
struct Trajectory {
    LatticeParams params;
    std::vector<LatticeState> samples;
    double dt = 0.0;  ///< integrator step (0 for the exact spectral route)
    BoundaryPolicy boundary;
    /// Padding violations and similar; sites they name are not trustworthy.
    std::vector<std::string> warnings;

    [[nodiscard]] long lo() const { return samples.empty() ? 0 : samples.front().lo; }
    [[nodiscard]] long hi() const { return samples.empty() ? 0 : samples.front().hi; }
};

/// Sites per unit time that a disturbance can travel; |dOmega/dphi| <= omega.
[[nodiscard]] inline double group_speed_bound(const LatticeParams& p) noexcept { return p.omega; }

/// Smallest half-width keeping boundary reflections out of [-observe, observe]
/// until t_end.
[[nodiscard]] inline long required_half_width(const LatticeParams& p, long observe, double t_end, long margin = 8)
{
    return observe + static_cast<long>(std::ceil(group_speed_bound(p) * t_end)) + margin;
}

/// Appends a warning when the window is too narrow for the requested horizon.
inline void check_padding(Trajectory& traj, long observe, double t_span, long margin = 8)
{
    const long have = std::min(-traj.lo(), traj.hi());
    const long need = required_half_width(traj.params, observe, t_span, margin);
    if (have < need) {
        traj.warnings.push_back("padding: half-width " + std::to_string(have) + " < " + std::to_string(need) +
                                " needed to observe |k| <= " + std::to_string(observe) + " until t = " +
                                std::to_string(t_span) + "; boundary reflections may reach the observed sites");
    }
}

}  // namespace chain_escape
