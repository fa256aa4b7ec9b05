#pragma once

#include "itime/series.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace itime::testing {

// Desk-scale Brownian fixture: sigma = 5e-5 per sqrt(second), 1 s ticks, 10^6 points.
inline constexpr double kSigma = 5e-5;
inline constexpr double kSigma2 = kSigma * kSigma;
inline constexpr std::size_t kFixtureN = 1'000'000;

inline PriceSeries brownian_fixture(std::uint64_t seed, std::size_t n = kFixtureN, double sigma = kSigma)
{
    return synth_brownian(SynthConfig{sigma, 1.0, n, 1.0, seed});
}

inline PriceSeries series_from_prices(const std::vector<double>& prices, double dt = 1.0)
{
    std::vector<Tick> ticks;
    for (std::size_t i = 0; i < prices.size(); ++i) ticks.push_back({static_cast<double>(i) * dt, prices[i]});
    return PriceSeries(std::move(ticks));
}

/// Random tick series mixing regimes: volatility switches, prices rounded to a
/// tick grid (ties), occasional jumps of several thresholds (gaps), flat
/// stretches and repeated timestamps.
inline std::vector<Tick> mixed_regime_ticks(std::mt19937_64& rng, std::size_t n, double delta)
{
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Tick> ticks;
    ticks.reserve(n);
    double price = 100.0;
    double time = 0.0;
    double vol = delta * (0.05 + 0.5 * u(rng));
    const bool rounded = u(rng) < 0.5;
    const double tick_size = 0.01 * (1 + static_cast<int>(u(rng) * 5));
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u(rng);
        if (r < 0.01) vol = delta * (0.02 + u(rng));           // regime switch
        double move = vol * z(rng);
        if (r > 0.995) move = (u(rng) < 0.5 ? -1 : 1) * delta * (1 + 4 * u(rng)); // gap
        if (r > 0.3 && r < 0.35) move = 0.0;                      // flat
        price *= 1.0 + move;
        price = std::max(price, 1.0);
        double p = price;
        if (rounded) p = std::max(tick_size, std::round(price / tick_size) * tick_size);
        if (u(rng) > 0.1) time += u(rng) < 0.5 ? 1.0 : u(rng) * 3.0; // else duplicate timestamp
        ticks.push_back({time, p});
    }
    return ticks;
}

} // namespace itime::testing
