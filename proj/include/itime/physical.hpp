#pragma once

#include "itime/series.hpp"

#include <cstddef>
#include <vector>

namespace itime {

/// Simple returns over consecutive non-overlapping windows of length dt.
struct ReturnSample
{
    double dt = 0.0;
    std::vector<double> returns;
    std::size_t n_windows = 0;
};

/// Samples prices at t0 + k*dt (k = 0..floor(T/dt)) with previous-tick
/// interpolation and returns r_k = (P[k+1] - P[k]) / P[k]. The trailing
/// partial window is dropped.
[[nodiscard]] ReturnSample sample_returns(const PriceSeries& series, double dt);

/// <r>_2 = (1/n) sum r_k^2.
[[nodiscard]] double squared_return_mean(const ReturnSample& sample);

} // namespace itime
