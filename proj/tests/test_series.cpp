#include "itime/series.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace itime;

namespace {

PriceSeries ingest_text(const std::string& text, const TickCsvFormat& fmt = {}, PriceMode mode = PriceMode::trade)
{
    std::istringstream in(text);
    return ingest_ticks(in, fmt, mode);
}

} // namespace

TEST(Ingest, ParsesThreeRowsWithHeader)
{
    const auto s = ingest_text("t,price\n0,100\n1,101\n2,100\n");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[1], (Tick{1.0, 101.0}));
    EXPECT_EQ(s.span(), 2.0);
}

TEST(Ingest, HeaderIsOptional)
{
    const auto s = ingest_text("0,100\n1,101\n2,100\n");
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0], (Tick{0.0, 100.0}));
}

TEST(Ingest, MidModeAveragesBidAndAsk)
{
    const auto s = ingest_text("0,99,101\n", {}, PriceMode::mid);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].price, 100.0);
}

TEST(Ingest, ColumnsByName)
{
    TickCsvFormat fmt;
    fmt.time_column = std::string("ts");
    fmt.bid_column = std::string("bid");
    fmt.ask_column = std::string("ask");
    const auto s = ingest_text("ask;sym;ts;bid\n101;X;5;99\n103;X;6;101\n", [&] {
        auto f = fmt;
        f.delimiter = ';';
        return f;
    }(), PriceMode::mid);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0], (Tick{5.0, 100.0}));
    EXPECT_EQ(s[1], (Tick{6.0, 102.0}));
}

TEST(Ingest, NamedColumnWithoutHeaderFails)
{
    TickCsvFormat fmt;
    fmt.header = HeaderMode::absent;
    fmt.price_column = std::string("price");
    EXPECT_THROW((void)ingest_text("0,1\n", fmt), ParseError);
}

TEST(Ingest, NegativePriceNamesLine)
{
    try {
        (void)ingest_text("0,-5\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
}

TEST(Ingest, MalformedRowNamesPhysicalLine)
{
    try {
        (void)ingest_text("time,price\n0,1.0\n# comment\n2,abc\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
    try {
        (void)ingest_text("0,1.0\n1\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Ingest, EmptyInputIsAnError)
{
    EXPECT_THROW((void)ingest_text(""), Error);
    EXPECT_THROW((void)ingest_text("# only a comment\n\n"), Error);
    EXPECT_THROW((void)ingest_text("time,price\n"), Error);
}

TEST(Ingest, RejectsOutOfOrderKeepsDuplicates)
{
    EXPECT_THROW((void)ingest_text("0,1\n2,1\n1,1\n"), ParseError);
    const auto s = ingest_text("0,1\n1,2\n1,3\n1,4\n");
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[1].price, 2.0);
    EXPECT_EQ(s[2].price, 3.0);
    EXPECT_EQ(s[3].price, 4.0);
}

TEST(Ingest, IsoTimestamps)
{
    const auto s = ingest_text("time,price\n2013-01-01T00:00:00Z,90.1\n2013-01-01T00:00:01.5Z,90.2\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].time, 1356998400.0);
    EXPECT_EQ(s.span(), 1.5);
}

TEST(Iso8601, KnownInstants)
{
    EXPECT_EQ(parse_iso8601("1970-01-01T00:00:00Z"), 0.0);
    EXPECT_EQ(parse_iso8601("2000-03-01 00:00:00"), 951868800.0);
    EXPECT_EQ(parse_iso8601("2021-03-01T01:00:00+01:00"), parse_iso8601("2021-03-01T00:00:00Z"));
    EXPECT_EQ(parse_iso8601("2021-03-01"), parse_iso8601("2021-03-01T00:00:00"));
    EXPECT_DOUBLE_EQ(parse_iso8601("1970-01-01T00:00:00.25Z"), 0.25);
    EXPECT_THROW((void)parse_iso8601("2021-13-01T00:00:00Z"), Error);
    EXPECT_THROW((void)parse_iso8601("yesterday"), Error);
}

TEST(Span, ReferenceDatasetSpans)
{
    // Observation windows of the two exchange-rate datasets.
    const auto usdjpy = ingest_text("2013-01-01 00:00:00,95\n2013-05-31 23:59:59,100\n");
    EXPECT_EQ(span(usdjpy), 13'046'399.0);
    const auto ethusdt = ingest_text("2021-03-01 00:00:00,1500\n2021-04-15 23:59:59,2400\n");
    EXPECT_EQ(span(ethusdt), 3'974'399.0);
}

TEST(Span, BasicAndSingleTick)
{
    EXPECT_EQ(span(PriceSeries({{0, 1}, {2, 1}})), 2.0);
    EXPECT_THROW((void)span(PriceSeries({{0, 1}})), Error);
}

TEST(PriceSeriesInvariants, ConstructorValidates)
{
    EXPECT_THROW(PriceSeries({{0, 0.0}}), Error);
    EXPECT_THROW(PriceSeries({{0, 1}, {-1, 1}}), Error);
    EXPECT_THROW(PriceSeries({{NAN, 1}}), Error);
}

TEST(Ingest, RoundTripReproducesSeries)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ticks = itime::testing::mixed_regime_ticks(rng, 500, 0.01);
        const PriceSeries original(ticks);
        std::stringstream buf;
        const std::vector<std::string> comments{"config: {\"trial\": " + std::to_string(trial) + "}"};
        write_ticks(buf, original, comments);
        const auto back = ingest_ticks(buf);
        ASSERT_EQ(back.size(), original.size());
        EXPECT_TRUE(std::equal(back.ticks().begin(), back.ticks().end(), original.ticks().begin()));
        EXPECT_EQ(span(back), span(original));
    }
}

TEST(Synth, ZeroVolatilityIsFlat)
{
    const auto s = synth_brownian({0.0, 1.0, 5, 1.0, 3});
    ASSERT_EQ(s.size(), 5u);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(s[i].price, 1.0);
        EXPECT_EQ(s[i].time, static_cast<double>(i));
    }
}

TEST(Synth, DeterministicForSeed)
{
    const SynthConfig cfg{1e-3, 0.5, 10'000, 2.0, 42};
    EXPECT_EQ(synth_brownian(cfg), synth_brownian(cfg));
    auto other = cfg;
    other.seed = 43;
    EXPECT_NE(synth_brownian(cfg).ticks().back().price, synth_brownian(other).ticks().back().price);
    EXPECT_EQ(synth_brownian(cfg)[0], (Tick{0.0, 2.0}));
    EXPECT_EQ(synth_brownian(cfg).span(), 9999 * 0.5);
}

TEST(Synth, IncrementMoments)
{
    const double sigma = 1e-4;
    const auto s = synth_brownian({sigma, 1.0, 1'000'001, 1.0, 5});
    double sum = 0.0, sum_sq = 0.0;
    const std::size_t n = s.size() - 1;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double d = s[i].price - s[i - 1].price;
        sum += d;
        sum_sq += d * d;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum_sq / static_cast<double>(n) - mean * mean;
    EXPECT_NEAR(var, sigma * sigma, 0.01 * sigma * sigma);
    EXPECT_LT(std::abs(mean), 3.0 * sigma / std::sqrt(static_cast<double>(n)));
}

TEST(Synth, RejectsInvalidConfig)
{
    EXPECT_THROW((void)synth_brownian({1e-4, 1.0, 1, 1.0, 0}), Error);
    EXPECT_THROW((void)synth_brownian({1e-4, 0.0, 10, 1.0, 0}), Error);
    EXPECT_THROW((void)synth_brownian({-1.0, 1.0, 10, 1.0, 0}), Error);
    EXPECT_THROW((void)synth_brownian({1e-4, 1.0, 10, 0.0, 0}), Error);
    EXPECT_THROW((void)synth_brownian({1e-4, 1e300, 100'000'000, 1.0, 0}), Error);
    EXPECT_THROW((void)synth_brownian({1e-4, 1e9, 100'000'000, 1.0, 0}), Error);
}

TEST(Synth, NonPositivePathIsAnError)
{
    EXPECT_THROW((void)synth_brownian({1.0, 1.0, 1000, 1.0, 0}), Error);
}

TEST(NormalGenerator, StandardMoments)
{
    NormalGenerator g(2024);
    double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
    const int n = 400'000;
    for (int i = 0; i < n; ++i) {
        const double z = g();
        sum += z;
        sum_sq += z * z;
        sum_4 += z * z * z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sum_sq / n, 1.0, 0.01);
    EXPECT_NEAR(sum_4 / n, 3.0, 0.06);
}
