#pragma once

#include "itime/series.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace itime {

/// k geometrically spaced points from lo to hi inclusive.
struct LogGrid
{
    double lo = 0.0;
    double hi = 0.0;
    std::size_t k = 21;

    [[nodiscard]] std::vector<double> points() const;
};

[[nodiscard]] std::vector<double> log_grid(double lo, double hi, std::size_t k);

// Reference protocol: 21 thresholds over 60 s .. 65'798 s and 0.035% .. 0.5%,
// measured on a 15'631'200-point one-second series.
inline constexpr double kReferenceDtLo = 60.0;
inline constexpr double kReferenceDtHi = 65798.0;
inline constexpr double kReferenceDeltaLo = 0.00035;
inline constexpr double kReferenceDeltaHi = 0.005;
inline constexpr std::size_t kReferenceGridSize = 21;
inline constexpr double kReferenceSpan = 15'631'199.0;

[[nodiscard]] LogGrid default_dt_grid();
[[nodiscard]] LogGrid default_delta_grid();

/// Reference dt grid with the upper end shrunk so that span/dt_hi matches the
/// reference run. Used for series much shorter than the reference one.
[[nodiscard]] LogGrid scaled_dt_grid(double span, std::size_t k = kReferenceGridSize);

struct Point
{
    double x;
    double y;
};

/// f(x) = alpha * x^exponent, fitted by least squares on (ln x, ln y).
struct PowerLawFit
{
    double alpha = 0.0;
    double exponent = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;

    [[nodiscard]] double operator()(double x) const;
};

[[nodiscard]] PowerLawFit fit_power_law(std::span<const Point> points);

struct ScalingLaw
{
    std::string name;
    std::string x_unit;
    std::string y_unit;
    std::vector<Point> points;
    PowerLawFit fit;
};

struct ScalingReport
{
    double span = 0.0;
    std::size_t n_ticks = 0;
    ScalingLaw squared_returns;     // <r(dt)>_2 vs dt
    ScalingLaw os_variability;      // <omega - delta>_2 vs delta
    ScalingLaw normalized_dc_count; // N(delta, T) / T vs delta, events per second
    ScalingLaw mean_overshoot;      // <omega> vs delta
};

/// Per-grid-point measurements that feed a ScalingReport, kept separate so
/// that several paths can be averaged before fitting.
struct ScalingMeasurements
{
    std::vector<double> dt_grid;
    std::vector<double> delta_grid;
    std::vector<double> squared_returns;
    std::vector<double> os_variability;
    std::vector<double> normalized_dc_count;
    std::vector<double> mean_overshoot;
    double span = 0.0;
    std::size_t n_ticks = 0;
};

/// Throws naming the first grid point that has no observations.
[[nodiscard]] ScalingMeasurements measure_scaling(const PriceSeries& series, std::span<const double> dt_grid,
                                                  std::span<const double> delta_grid);

/// Pointwise mean over paths measured on the same grids. span and n_ticks are
/// averaged too.
[[nodiscard]] ScalingMeasurements average_measurements(std::span<const ScalingMeasurements> runs);

[[nodiscard]] ScalingReport fit_scaling(const ScalingMeasurements& m);

[[nodiscard]] ScalingReport scaling_suite(const PriceSeries& series, const LogGrid& dt_grid,
                                          const LogGrid& delta_grid);

} // namespace itime
