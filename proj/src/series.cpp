#include "itime/series.hpp"

#include "text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace itime {

PriceSeries::PriceSeries(std::vector<Tick> ticks, std::string label)
    : m_ticks{std::move(ticks)}, m_label{std::move(label)}
{
    for (std::size_t i = 0; i < m_ticks.size(); ++i) {
        const Tick& t = m_ticks[i];
        if (!std::isfinite(t.time)) throw Error("tick " + std::to_string(i) + ": time is not finite");
        if (!(t.price > 0.0) || !std::isfinite(t.price)) {
            throw Error("tick " + std::to_string(i) + ": price must be a positive finite number");
        }
        if (i > 0 && t.time < m_ticks[i - 1].time) {
            throw Error("tick " + std::to_string(i) + ": time goes backwards");
        }
    }
}

double PriceSeries::span() const
{
    if (m_ticks.size() < 2) throw Error("series needs at least 2 ticks");
    return m_ticks.back().time - m_ticks.front().time;
}

// ---------------------------------------------------------------------------

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (H. Hinnant's algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d)
{
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out)
{
    if (pos + count > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        out = out * 10 + (s[i] - '0');
    }
    return true;
}

bool looks_like_iso(std::string_view s)
{
    return s.size() >= 10 && s[4] == '-' && s[7] == '-';
}

} // namespace

double parse_iso8601(std::string_view s)
{
    s = detail::trim(s);
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    const auto fail = [&]() -> double { throw Error("invalid ISO-8601 timestamp '" + std::string(s) + "'"); };

    if (!read_digits(s, 0, 4, year) || s.size() < 10 || s[4] != '-' || !read_digits(s, 5, 2, month) ||
        s[7] != '-' || !read_digits(s, 8, 2, day)) {
        return fail();
    }
    std::size_t pos = 10;
    double fraction = 0.0;
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        if (!read_digits(s, pos + 1, 2, hour) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
            !read_digits(s, pos + 4, 2, minute)) {
            return fail();
        }
        pos += 6;
        if (pos < s.size() && s[pos] == ':') {
            if (!read_digits(s, pos + 1, 2, second)) return fail();
            pos += 3;
            if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
                const std::size_t start = pos + 1;
                std::size_t end = start;
                while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
                if (end == start) return fail();
                std::string digits = "0." + std::string(s.substr(start, end - start));
                fraction = *detail::to_double(digits);
                pos = end;
            }
        }
    }
    int offset_seconds = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            pos += 1;
        } else if (s[pos] == '+' || s[pos] == '-') {
            int oh = 0, om = 0;
            const int sign = s[pos] == '+' ? 1 : -1;
            if (!read_digits(s, pos + 1, 2, oh)) return fail();
            std::size_t mpos = pos + 3;
            if (mpos < s.size() && s[mpos] == ':') ++mpos;
            if (mpos < s.size()) {
                if (!read_digits(s, mpos, 2, om) || mpos + 2 != s.size()) return fail();
            }
            offset_seconds = sign * (oh * 3600 + om * 60);
            pos = s.size();
        } else {
            return fail();
        }
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
        return fail();
    }
    const long long days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    const long long whole = days * 86400LL + hour * 3600LL + minute * 60LL + second - offset_seconds;
    return static_cast<double>(whole) + fraction;
}

ColumnRef parse_column_ref(std::string_view text)
{
    text = detail::trim(text);
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return static_cast<std::size_t>(std::stoull(std::string(text)));
    }
    return std::string(text);
}

namespace {

struct ResolvedColumns
{
    std::size_t time = 0;
    std::size_t price = 0;
    std::size_t bid = 0;
    std::size_t ask = 0;
};

std::size_t resolve(const ColumnRef& ref, const std::vector<std::string_view>* header, std::size_t line,
                    std::string_view role)
{
    if (const auto* index = std::get_if<std::size_t>(&ref)) return *index;
    const auto& name = std::get<std::string>(ref);
    if (header == nullptr) {
        throw ParseError(line, "column '" + name + "' selected by name but input has no header");
    }
    const auto it = std::find(header->begin(), header->end(), name);
    if (it == header->end()) {
        throw ParseError(line, std::string(role) + " column '" + name + "' not found in header");
    }
    return static_cast<std::size_t>(it - header->begin());
}

double parse_time(std::string_view field, TimeFormat format, std::size_t line)
{
    const bool iso = format == TimeFormat::iso8601 || (format == TimeFormat::automatic && looks_like_iso(field));
    if (iso) {
        try {
            return parse_iso8601(field);
        } catch (const Error& e) {
            throw ParseError(line, e.what());
        }
    }
    const auto value = detail::to_double(field);
    if (!value || !std::isfinite(*value)) {
        throw ParseError(line, "unparseable timestamp '" + std::string(field) + "'");
    }
    return *value;
}

double parse_price(std::string_view field, std::string_view role, std::size_t line)
{
    const auto value = detail::to_double(field);
    if (!value || !std::isfinite(*value)) {
        throw ParseError(line, "unparseable " + std::string(role) + " '" + std::string(field) + "'");
    }
    return *value;
}

// A first row is treated as a header when its time field is not a timestamp.
bool is_header_row(const std::vector<std::string_view>& fields, const TickCsvFormat& format)
{
    const auto* index = std::get_if<std::size_t>(&format.time_column);
    if (index == nullptr) return true;
    if (*index >= fields.size()) return true;
    const auto field = fields[*index];
    if (looks_like_iso(field)) return false;
    return !detail::to_double(field).has_value();
}

} // namespace

PriceSeries ingest_ticks(std::istream& source, const TickCsvFormat& format, PriceMode mode, std::string label)
{
    std::vector<Tick> ticks;
    std::string line;
    std::string header_line;
    std::vector<std::string_view> header_fields;
    bool have_header = false;
    bool first_row = true;
    ResolvedColumns cols;
    std::size_t line_no = 0;

    while (std::getline(source, line)) {
        ++line_no;
        const auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;

        auto fields = detail::split(line, format.delimiter);
        if (first_row) {
            first_row = false;
            const bool header = format.header == HeaderMode::present ||
                                (format.header == HeaderMode::automatic && is_header_row(fields, format));
            if (header) {
                header_line = line;
                header_fields = detail::split(header_line, format.delimiter);
                have_header = true;
            }
            const auto* hdr = have_header ? &header_fields : nullptr;
            cols.time = resolve(format.time_column, hdr, line_no, "time");
            if (mode == PriceMode::trade) {
                cols.price = resolve(format.price_column, hdr, line_no, "price");
            } else {
                cols.bid = resolve(format.bid_column, hdr, line_no, "bid");
                cols.ask = resolve(format.ask_column, hdr, line_no, "ask");
            }
            if (header) continue;
        }

        const auto need = [&](std::size_t index) {
            if (index >= fields.size()) {
                throw ParseError(line_no, "expected at least " + std::to_string(index + 1) + " columns, got " +
                                              std::to_string(fields.size()));
            }
            return fields[index];
        };

        const double time = parse_time(need(cols.time), format.time_format, line_no);
        double price = 0.0;
        if (mode == PriceMode::trade) {
            price = parse_price(need(cols.price), "price", line_no);
        } else {
            const double bid = parse_price(need(cols.bid), "bid", line_no);
            const double ask = parse_price(need(cols.ask), "ask", line_no);
            if (!(bid > 0.0) || !(ask > 0.0)) throw ParseError(line_no, "bid and ask must be positive");
            price = 0.5 * (bid + ask);
        }
        if (!(price > 0.0)) throw ParseError(line_no, "price must be positive, got " + detail::format_double(price));
        if (!ticks.empty() && time < ticks.back().time) {
            throw ParseError(line_no, "timestamp " + detail::format_double(time) + " earlier than previous " +
                                          detail::format_double(ticks.back().time));
        }
        ticks.push_back({time, price});
    }
    if (ticks.empty()) throw Error("no tick rows in input");
    return PriceSeries(std::move(ticks), std::move(label));
}

PriceSeries ingest_ticks_file(const std::string& path, const TickCsvFormat& format, PriceMode mode)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return ingest_ticks(in, format, mode, path);
}

void write_ticks(std::ostream& out, const PriceSeries& series, std::span<const std::string> comments)
{
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "time,price\n";
    for (const Tick& t : series.ticks()) {
        out << detail::format_double(t.time) << ',' << detail::format_double(t.price) << '\n';
    }
}

// ---------------------------------------------------------------------------

double NormalGenerator::uniform_pm1()
{
    // 53 random bits mapped to the open interval (-1, 1).
    const std::uint64_t bits = m_engine() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52 - 1.0;
}

double NormalGenerator::operator()()
{
    if (m_has_spare) {
        m_has_spare = false;
        return m_spare;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
        u = uniform_pm1();
        v = uniform_pm1();
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    m_spare = v * factor;
    m_has_spare = true;
    return u * factor;
}

void validate(const SynthConfig& config)
{
    if (!(config.sigma >= 0.0) || !std::isfinite(config.sigma)) throw Error("sigma must be a finite value >= 0");
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw Error("dt must be a finite value > 0");
    if (config.n < 2) throw Error("n must be at least 2 (a series needs two points)");
    if (!(config.p0 > 0.0) || !std::isfinite(config.p0)) throw Error("p0 must be a finite value > 0");

    // Times are k*dt in double precision; the last two must still be distinct.
    const double last = static_cast<double>(config.n - 1) * config.dt;
    const double before = static_cast<double>(config.n - 2) * config.dt;
    if (!std::isfinite(last) || !(last > before) || last > 0x1.0p53) {
        throw Error("n*dt overflows the time representation");
    }
}

PriceSeries synth_brownian(const SynthConfig& config)
{
    validate(config);
    NormalGenerator normal(config.seed);
    const double step = config.sigma * std::sqrt(config.dt);

    std::vector<Tick> ticks;
    ticks.reserve(config.n);
    double price = config.p0;
    ticks.push_back({0.0, price});
    for (std::size_t k = 1; k < config.n; ++k) {
        price += step * normal();
        if (!(price > 0.0)) {
            throw Error("Brownian path reached a non-positive price at step " + std::to_string(k) +
                        "; lower sigma or raise p0");
        }
        ticks.push_back({static_cast<double>(k) * config.dt, price});
    }
    return PriceSeries(std::move(ticks), "brownian(seed=" + std::to_string(config.seed) + ")");
}

} // namespace itime
