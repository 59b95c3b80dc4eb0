// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <mutex>
#include <span>

#include <fftw3.h>

#include "chain_escape/error.hpp"

namespace chain_escape::detail {

inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

/// In-place unnormalised DFT, X_j = sum_m x_m exp(sign * 2 pi i j m / n),
/// sign = +1 or -1. Only plan creation and destruction are serialised.
inline void dft_in_place(std::span<std::complex<double>> data, int sign)
{
    if (data.empty()) return;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error(ErrorKind::configuration, "FFTW could not create a plan");
    fftw_execute(plan);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace chain_escape::detail
