#include "itime/scaling.hpp"

#include "itime/intrinsic.hpp"
#include "itime/physical.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>

namespace itime {

std::vector<double> log_grid(double lo, double hi, std::size_t k)
{
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
        throw Error("log grid needs 0 < lo < hi, got lo=" + detail::format_double(lo) +
                    " hi=" + detail::format_double(hi));
    }
    if (k < 2) throw Error("log grid needs at least 2 points");
    std::vector<double> x(k);
    const double ratio = hi / lo;
    for (std::size_t i = 0; i < k; ++i) {
        x[i] = lo * std::pow(ratio, static_cast<double>(i) / static_cast<double>(k - 1));
    }
    x.front() = lo;
    x.back() = hi;
    return x;
}

std::vector<double> LogGrid::points() const
{
    return log_grid(lo, hi, k);
}

LogGrid default_dt_grid()
{
    return {kReferenceDtLo, kReferenceDtHi, kReferenceGridSize};
}

LogGrid default_delta_grid()
{
    return {kReferenceDeltaLo, kReferenceDeltaHi, kReferenceGridSize};
}

LogGrid scaled_dt_grid(double span, std::size_t k)
{
    const double hi = kReferenceDtHi * span / kReferenceSpan;
    if (!(hi > kReferenceDtLo)) {
        throw Error("series span " + detail::format_double(span) + " s is too short for a scaled dt grid");
    }
    return {kReferenceDtLo, hi, k};
}

double PowerLawFit::operator()(double x) const
{
    return alpha * std::pow(x, exponent);
}

PowerLawFit fit_power_law(std::span<const Point> points)
{
    if (points.size() < 2) throw Error("power-law fit needs at least 2 points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (const Point& p : points) {
        if (!(p.x > 0.0) || !(p.y > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw Error("power-law fit needs positive finite points, got (" + detail::format_double(p.x) + ", " +
                        detail::format_double(p.y) + ")");
        }
        lx.push_back(std::log(p.x));
        ly.push_back(std::log(p.y));
    }
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw Error("power-law fit needs at least two distinct x values");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.alpha = std::exp(intercept);
    fit.n_points = points.size();

    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + fit.exponent * lx[i]);
        ss_res += r * r;
    }
    // syy == 0 means every y is equal; a flat line then fits exactly.
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

ScalingMeasurements measure_scaling(const PriceSeries& series, std::span<const double> dt_grid,
                                    std::span<const double> delta_grid)
{
    ScalingMeasurements m;
    m.span = series.span();
    m.n_ticks = series.size();
    m.dt_grid.assign(dt_grid.begin(), dt_grid.end());
    m.delta_grid.assign(delta_grid.begin(), delta_grid.end());

    for (double delta : delta_grid) {
        const auto d = dissect(series, delta);
        const auto stats = overshoot_stats(d);
        if (!stats.mean_os) {
            throw Error("delta=" + detail::format_double(delta) + ": no completed overshoot segments (" +
                        std::to_string(d.n_dc) + " directional changes)");
        }
        m.os_variability.push_back(*stats.var_os);
        m.mean_overshoot.push_back(*stats.mean_os);
        m.normalized_dc_count.push_back(static_cast<double>(d.n_dc) / m.span);
    }
    for (double dt : dt_grid) {
        ReturnSample sample;
        try {
            sample = sample_returns(series, dt);
        } catch (const Error& e) {
            throw Error("dt=" + detail::format_double(dt) + ": " + e.what());
        }
        m.squared_returns.push_back(squared_return_mean(sample));
    }
    return m;
}

ScalingMeasurements average_measurements(std::span<const ScalingMeasurements> runs)
{
    if (runs.empty()) throw Error("average_measurements: no runs");
    ScalingMeasurements m = runs.front();
    for (const auto& r : runs.subspan(1)) {
        if (r.dt_grid != m.dt_grid || r.delta_grid != m.delta_grid) {
            throw Error("average_measurements: runs use different grids");
        }
    }
    const auto n = static_cast<double>(runs.size());
    auto mean_of = [&](std::vector<double> ScalingMeasurements::*field) {
        std::vector<double> acc((runs.front().*field).size(), 0.0);
        for (const auto& r : runs) {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += (r.*field)[i];
        }
        for (double& v : acc) v /= n;
        return acc;
    };
    m.squared_returns = mean_of(&ScalingMeasurements::squared_returns);
    m.os_variability = mean_of(&ScalingMeasurements::os_variability);
    m.normalized_dc_count = mean_of(&ScalingMeasurements::normalized_dc_count);
    m.mean_overshoot = mean_of(&ScalingMeasurements::mean_overshoot);
    double span = 0.0, ticks = 0.0;
    for (const auto& r : runs) {
        span += r.span;
        ticks += static_cast<double>(r.n_ticks);
    }
    m.span = span / n;
    m.n_ticks = static_cast<std::size_t>(std::llround(ticks / n));
    return m;
}

namespace {

ScalingLaw make_law(std::string name, std::string x_unit, std::string y_unit, const std::vector<double>& x,
                    const std::vector<double>& y)
{
    ScalingLaw law{std::move(name), std::move(x_unit), std::move(y_unit), {}, {}};
    for (std::size_t i = 0; i < x.size(); ++i) law.points.push_back({x[i], y[i]});
    try {
        law.fit = fit_power_law(law.points);
    } catch (const Error& e) {
        throw Error(law.name + ": " + e.what());
    }
    return law;
}

} // namespace

ScalingReport fit_scaling(const ScalingMeasurements& m)
{
    ScalingReport r;
    r.span = m.span;
    r.n_ticks = m.n_ticks;
    r.squared_returns = make_law("squared_returns", "seconds", "fraction^2", m.dt_grid, m.squared_returns);
    r.os_variability = make_law("os_variability", "fraction", "fraction^2", m.delta_grid, m.os_variability);
    r.normalized_dc_count =
        make_law("normalized_dc_count", "fraction", "events/second", m.delta_grid, m.normalized_dc_count);
    r.mean_overshoot = make_law("mean_overshoot", "fraction", "fraction", m.delta_grid, m.mean_overshoot);
    return r;
}

ScalingReport scaling_suite(const PriceSeries& series, const LogGrid& dt_grid, const LogGrid& delta_grid)
{
    const auto dts = dt_grid.points();
    const auto deltas = delta_grid.points();
    return fit_scaling(measure_scaling(series, dts, deltas));
}

} // namespace itime
