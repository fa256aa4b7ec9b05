#pragma once

// Physical-time and intrinsic-time invariants and the identity linking them:
//
//     (T/dt) <r(dt)>_2  ~=  <omega(delta) - delta>_2 * N(delta, T)
//
// Dividing both sides by T gives C^T = <r(dt)>_2 / dt and
// C^tau = <omega - delta>_2 * N(delta, T) / T, both in 1/second and both
// equal to sigma^2 for arithmetic Brownian motion.

#include "itime/intrinsic.hpp"
#include "itime/series.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itime {

[[nodiscard]] double c_physical(const PriceSeries& series, double dt);

/// Needs at least two directional changes (one completed overshoot).
[[nodiscard]] double c_intrinsic(const PriceSeries& series, double delta);
[[nodiscard]] double c_intrinsic(const Dissection& d, double span);

struct Summary
{
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation, 0 for a single value
    std::size_t n = 0;

    [[nodiscard]] double cv() const { return mean != 0.0 ? stddev / mean : 0.0; }
};

[[nodiscard]] Summary summarize(std::span<const double> values);

struct InvariantProfile
{
    std::vector<double> dt_grid;
    std::vector<double> delta_grid;
    std::vector<double> c_physical;  // C^T per dt, 1/second
    std::vector<double> c_intrinsic; // C^tau per delta, 1/second
    Summary physical;
    Summary intrinsic;
    Summary pooled;

    [[nodiscard]] std::size_t size() const noexcept { return c_physical.size(); }
};

/// Builds a profile from already computed invariant values (grids and value
/// lists must share one length). Fills the summaries.
[[nodiscard]] InvariantProfile make_profile(std::vector<double> dt_grid, std::vector<double> delta_grid,
                                            std::vector<double> c_phys, std::vector<double> c_intr);

[[nodiscard]] InvariantProfile invariant_profile(const PriceSeries& series, std::span<const double> dt_grid,
                                                 std::span<const double> delta_grid);

struct BridgeCheck
{
    double dt = 0.0;
    double delta = 0.0;
    double lhs = 0.0;     // (T/dt) <r(dt)>_2
    double rhs = 0.0;     // <omega - delta>_2 N(delta, T)
    double rel_gap = 0.0; // |lhs - rhs| / max(lhs, rhs)
};

[[nodiscard]] BridgeCheck bridge_check(const PriceSeries& series, double dt, double delta);

struct LambdaEstimate
{
    double lambda = 0.0;
    std::string method;
    double dispersion = 0.0; // sample std of C^tau_I / C^T_I
};

/// lambda = mean(C^tau) / mean(C^T), so that lambda * C^T ~= C^tau.
[[nodiscard]] LambdaEstimate estimate_lambda(const InvariantProfile& profile);

struct ActivityWindow
{
    double window_start = 0.0;
    double window_end = 0.0;
    std::size_t volatility_proxy = 0;              // DC events confirmed in the window
    std::optional<double> liquidity_proxy;         // mean overshoot completed by those events
};

/// Splits [t0, t_end] into consecutive windows of `window` seconds (the last
/// one may be shorter and includes t_end) and attributes each event to the
/// window containing its confirmation time.
[[nodiscard]] std::vector<ActivityWindow> decompose(const PriceSeries& series, double delta, double window);

struct BrownianExpectation
{
    double expected_n = 0.0;  // sigma^2 T / delta^2
    double expected_os = 0.0; // delta
    double var_os = 0.0;      // delta^2
    double rhs_product = 0.0; // var_os * expected_n = sigma^2 T
};

[[nodiscard]] BrownianExpectation bm_theoretical(double delta, double sigma, double span);

/// Profile CSV: I,dt,C_T,delta,C_tau.
void write_profile_csv(std::ostream& out, const InvariantProfile& profile,
                       std::span<const std::string> comments = {});

} // namespace itime
