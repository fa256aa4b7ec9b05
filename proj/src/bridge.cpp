#include "itime/bridge.hpp"

#include "itime/physical.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace itime {

double c_physical(const PriceSeries& series, double dt)
{
    return squared_return_mean(sample_returns(series, dt)) / dt;
}

double c_intrinsic(const Dissection& d, double span)
{
    if (d.n_dc < 2) {
        throw Error("delta=" + detail::format_double(d.delta) + ": need at least 2 directional changes, got " +
                    std::to_string(d.n_dc));
    }
    if (!(span > 0.0)) throw Error("span must be positive");
    const auto stats = overshoot_stats(d);
    return *stats.var_os * static_cast<double>(d.n_dc) / span;
}

double c_intrinsic(const PriceSeries& series, double delta)
{
    return c_intrinsic(dissect(series, delta), series.span());
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

InvariantProfile make_profile(std::vector<double> dt_grid, std::vector<double> delta_grid,
                              std::vector<double> c_phys, std::vector<double> c_intr)
{
    if (dt_grid.size() != delta_grid.size()) {
        throw Error("dt and delta grids must have the same length (" + std::to_string(dt_grid.size()) + " vs " +
                    std::to_string(delta_grid.size()) + ")");
    }
    if (c_phys.size() != dt_grid.size() || c_intr.size() != delta_grid.size()) {
        throw Error("invariant values must match their grids in length");
    }
    InvariantProfile p;
    p.dt_grid = std::move(dt_grid);
    p.delta_grid = std::move(delta_grid);
    p.c_physical = std::move(c_phys);
    p.c_intrinsic = std::move(c_intr);
    p.physical = summarize(p.c_physical);
    p.intrinsic = summarize(p.c_intrinsic);
    std::vector<double> pooled = p.c_physical;
    pooled.insert(pooled.end(), p.c_intrinsic.begin(), p.c_intrinsic.end());
    p.pooled = summarize(pooled);
    return p;
}

InvariantProfile invariant_profile(const PriceSeries& series, std::span<const double> dt_grid,
                                   std::span<const double> delta_grid)
{
    if (dt_grid.size() != delta_grid.size()) {
        throw Error("dt and delta grids must have the same length (" + std::to_string(dt_grid.size()) + " vs " +
                    std::to_string(delta_grid.size()) + ")");
    }
    if (dt_grid.empty()) throw Error("invariant profile needs at least one grid index");
    const double span = series.span();
    std::vector<double> cp, ci;
    for (std::size_t i = 0; i < dt_grid.size(); ++i) {
        try {
            cp.push_back(c_physical(series, dt_grid[i]));
            ci.push_back(c_intrinsic(dissect(series, delta_grid[i]), span));
        } catch (const Error& e) {
            throw Error("index " + std::to_string(i) + ": " + e.what());
        }
    }
    return make_profile({dt_grid.begin(), dt_grid.end()}, {delta_grid.begin(), delta_grid.end()}, std::move(cp),
                        std::move(ci));
}

BridgeCheck bridge_check(const PriceSeries& series, double dt, double delta)
{
    const double span = series.span();
    BridgeCheck c;
    c.dt = dt;
    c.delta = delta;
    c.lhs = span / dt * squared_return_mean(sample_returns(series, dt));
    const auto d = dissect(series, delta);
    if (d.n_dc < 2) {
        throw Error("delta=" + detail::format_double(delta) + ": need at least 2 directional changes, got " +
                    std::to_string(d.n_dc));
    }
    c.rhs = *overshoot_stats(d).var_os * static_cast<double>(d.n_dc);
    const double hi = std::max(c.lhs, c.rhs);
    c.rel_gap = hi > 0.0 ? std::abs(c.lhs - c.rhs) / hi : 0.0;
    return c;
}

LambdaEstimate estimate_lambda(const InvariantProfile& profile)
{
    if (profile.size() == 0) throw Error("lambda estimate needs a non-empty profile");
    std::vector<double> ratios;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!(profile.c_physical[i] > 0.0)) {
            throw Error("C^T is zero at index " + std::to_string(i) + "; lambda undefined");
        }
        ratios.push_back(profile.c_intrinsic[i] / profile.c_physical[i]);
    }
    const double mean_t = summarize(profile.c_physical).mean;
    const double mean_tau = summarize(profile.c_intrinsic).mean;
    if (!(mean_tau > 0.0)) throw Error("C^tau is zero across the profile; lambda undefined");

    LambdaEstimate est;
    est.lambda = mean_tau / mean_t;
    est.method = "ratio of pooled means: mean(C_tau) / mean(C_T)";
    est.dispersion = summarize(ratios).stddev;
    return est;
}

std::vector<ActivityWindow> decompose(const PriceSeries& series, double delta, double window)
{
    if (!(window > 0.0) || !std::isfinite(window)) {
        throw Error("window must be positive, got " + detail::format_double(window));
    }
    const double span = series.span();
    if (span < window) {
        throw Error("series span " + detail::format_double(span) + " s is shorter than one window");
    }
    const double t0 = series.ticks().front().time;
    auto count = static_cast<std::size_t>(std::ceil(span / window));
    while (static_cast<double>(count) * window < span) ++count;
    while (count > 1 && static_cast<double>(count - 1) * window >= span) --count;

    std::vector<ActivityWindow> windows(count);
    std::vector<double> os_sum(count, 0.0);
    std::vector<std::size_t> os_n(count, 0);
    for (std::size_t w = 0; w < count; ++w) {
        windows[w].window_start = t0 + static_cast<double>(w) * window;
        windows[w].window_end = std::min(t0 + static_cast<double>(w + 1) * window, t0 + span);
    }
    for (const DcEvent& e : dissect(series, delta).events) {
        auto w = static_cast<std::size_t>(std::floor((e.confirm_time - t0) / window));
        w = std::min(w, count - 1);
        ++windows[w].volatility_proxy;
        if (e.prev_overshoot) {
            os_sum[w] += *e.prev_overshoot;
            ++os_n[w];
        }
    }
    for (std::size_t w = 0; w < count; ++w) {
        if (os_n[w] > 0) windows[w].liquidity_proxy = os_sum[w] / static_cast<double>(os_n[w]);
    }
    return windows;
}

BrownianExpectation bm_theoretical(double delta, double sigma, double span)
{
    if (!(delta > 0.0) || !(sigma > 0.0) || !(span > 0.0)) {
        throw Error("bm_theoretical needs delta, sigma and T all positive");
    }
    BrownianExpectation e;
    e.expected_n = sigma * sigma * span / (delta * delta);
    e.expected_os = delta;
    e.var_os = delta * delta;
    e.rhs_product = e.var_os * e.expected_n;
    return e;
}

void write_profile_csv(std::ostream& out, const InvariantProfile& profile, std::span<const std::string> comments)
{
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "I,dt,C_T,delta,C_tau\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        out << i << ',' << detail::format_double(profile.dt_grid[i]) << ','
            << detail::format_double(profile.c_physical[i]) << ',' << detail::format_double(profile.delta_grid[i])
            << ',' << detail::format_double(profile.c_intrinsic[i]) << '\n';
    }
}

} // namespace itime
