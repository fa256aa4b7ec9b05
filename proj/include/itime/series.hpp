#pragma once

#include "itime/error.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace itime {

struct Tick
{
    double time;  // seconds since epoch
    double price; // > 0

    bool operator==(const Tick&) const = default;
};

/// Timestamped positive prices, immutable after construction.
///
/// Construction rejects non-finite times, non-positive prices and time
/// regressions. Equal timestamps are allowed and kept in input order.
class PriceSeries
{
public:
    PriceSeries() = default;
    explicit PriceSeries(std::vector<Tick> ticks, std::string label = {});

    [[nodiscard]] std::span<const Tick> ticks() const noexcept { return m_ticks; }
    [[nodiscard]] std::size_t size() const noexcept { return m_ticks.size(); }
    [[nodiscard]] bool empty() const noexcept { return m_ticks.empty(); }
    [[nodiscard]] const Tick& operator[](std::size_t i) const { return m_ticks[i]; }
    [[nodiscard]] const std::string& label() const noexcept { return m_label; }

    /// last.time - first.time; throws with fewer than two ticks.
    [[nodiscard]] double span() const;

    bool operator==(const PriceSeries&) const = default;

private:
    std::vector<Tick> m_ticks;
    std::string m_label;
};

[[nodiscard]] inline double span(const PriceSeries& series) { return series.span(); }

// ---------------------------------------------------------------------------
// Tick CSV ingestion

enum class PriceMode { trade, mid };
enum class TimeFormat { automatic, epoch_seconds, iso8601 };
enum class HeaderMode { automatic, present, absent };

/// Column selector: zero-based index or header name.
using ColumnRef = std::variant<std::size_t, std::string>;

struct TickCsvFormat
{
    HeaderMode header = HeaderMode::automatic;
    char delimiter = ',';
    TimeFormat time_format = TimeFormat::automatic;
    ColumnRef time_column = std::size_t{0};
    ColumnRef price_column = std::size_t{1};
    ColumnRef bid_column = std::size_t{1};
    ColumnRef ask_column = std::size_t{2};
};

/// Parse a column selector from text: all digits means an index, anything else a name.
[[nodiscard]] ColumnRef parse_column_ref(std::string_view text);

/// Reads tick rows. Blank lines and lines starting with '#' are skipped.
/// Throws ParseError naming the 1-based physical line of the offending row.
[[nodiscard]] PriceSeries ingest_ticks(std::istream& source,
                                       const TickCsvFormat& format = {},
                                       PriceMode mode = PriceMode::trade,
                                       std::string label = {});

[[nodiscard]] PriceSeries ingest_ticks_file(const std::string& path,
                                            const TickCsvFormat& format = {},
                                            PriceMode mode = PriceMode::trade);

/// Writes "time,price" rows at round-trip precision. Each comment line is
/// emitted first, prefixed with "# ".
void write_ticks(std::ostream& out, const PriceSeries& series,
                 std::span<const std::string> comments = {});

/// Seconds since the Unix epoch for an ISO-8601 timestamp such as
/// "2013-01-01T00:00:00.250Z" or "2021-03-01 00:00:00+00:00".
[[nodiscard]] double parse_iso8601(std::string_view text);

// ---------------------------------------------------------------------------
// Synthetic Brownian motion

/// Standard normal variates from mt19937_64 via the Marsaglia polar method.
/// Both stages are fully specified, so streams are identical across builds.
class NormalGenerator
{
public:
    static constexpr std::string_view algorithm = "mt19937_64/marsaglia-polar";

    explicit NormalGenerator(std::uint64_t seed) : m_engine{seed} {}

    double operator()();

private:
    double uniform_pm1(); // uniform on (-1, 1), 53-bit resolution

    std::mt19937_64 m_engine;
    double m_spare = 0.0;
    bool m_has_spare = false;
};

struct SynthConfig
{
    double sigma = 0.0;      // per sqrt(second)
    double dt = 1.0;         // seconds between ticks
    std::size_t n = 2;       // number of points
    double p0 = 1.0;
    std::uint64_t seed = 0;
};

void validate(const SynthConfig& config);

/// Arithmetic Brownian path P[k+1] = P[k] + sigma*sqrt(dt)*Z[k], ticks at k*dt.
/// Throws if the path reaches a non-positive price.
[[nodiscard]] PriceSeries synth_brownian(const SynthConfig& config);

} // namespace itime
