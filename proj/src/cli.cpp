#include "itime/cli.hpp"

#include "itime/bridge.hpp"
#include "itime/intrinsic.hpp"
#include "itime/report.hpp"
#include "itime/scaling.hpp"
#include "itime/series.hpp"

#include "text.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace itime::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct InputOptions
{
    std::string input;
    std::string price_mode = "trade";
    std::string time_col = "0";
    std::string price_col = "1";
    std::string bid_col = "1";
    std::string ask_col = "2";
    std::string header = "auto";
    std::string delimiter = ",";
    std::string time_format = "auto";

    std::optional<double> sigma;
    std::size_t n = 1'000'000;
    double dt = 1.0;
    double p0 = 1.0;
    std::uint64_t seed = 0;
};

struct GridOptions
{
    double dt_lo = kReferenceDtLo;
    double dt_hi = kReferenceDtHi;
    std::size_t dt_k = kReferenceGridSize;
    // Unset bounds keep the exact fractional constants; percent division would
    // not reproduce them bit for bit.
    std::optional<double> delta_lo_pct;
    std::optional<double> delta_hi_pct;
    std::size_t delta_k = kReferenceGridSize;
    bool fit_dt_to_span = false;
};

struct Context
{
    std::string command;
    std::string output_dir = ".";
    InputOptions in;
    GridOptions grid;
    std::optional<double> delta_pct;
    std::optional<double> check_dt;
    std::optional<double> window;
    std::string name = "series";
};

class UsageError : public Error
{
public:
    using Error::Error;
};

SynthConfig synth_config(const InputOptions& in)
{
    return SynthConfig{*in.sigma, in.dt, in.n, in.p0, in.seed};
}

json synth_json(const InputOptions& in)
{
    return {{"sigma", *in.sigma},
            {"sigma_unit", "1/sqrt(second)"},
            {"n", in.n},
            {"dt", in.dt},
            {"p0", in.p0},
            {"seed", in.seed},
            {"rng", std::string(NormalGenerator::algorithm)},
            {"increments", "arithmetic"}};
}

// Full resolved configuration, embedded in every output file.
json run_config(const Context& c, const std::optional<std::vector<double>>& dts = std::nullopt,
                const std::optional<std::vector<double>>& deltas = std::nullopt)
{
    json j = {{"command", c.command}, {"output_dir", c.output_dir}};
    if (c.in.sigma) {
        j["synth"] = synth_json(c.in);
        j["seed"] = c.in.seed;
    } else if (!c.in.input.empty()) {
        j["input"] = {{"path", c.in.input},      {"price_mode", c.in.price_mode}, {"time_col", c.in.time_col},
                      {"price_col", c.in.price_col}, {"bid_col", c.in.bid_col},   {"ask_col", c.in.ask_col},
                      {"header", c.in.header},   {"delimiter", c.in.delimiter},   {"time_format", c.in.time_format}};
    }
    if (dts) j["dt_grid"] = {{"unit", "seconds"}, {"points", *dts}};
    if (deltas) j["delta_grid"] = {{"unit", "fraction"}, {"points", *deltas}};
    if (c.delta_pct) j["delta"] = {{"value", *c.delta_pct / 100.0}, {"unit", "fraction"}};
    if (c.check_dt) j["dt"] = {{"value", *c.check_dt}, {"unit", "seconds"}};
    if (c.window) j["window"] = {{"value", *c.window}, {"unit", "seconds"}};
    return j;
}

std::vector<std::string> config_comment(const json& config)
{
    return {"config: " + config.dump()};
}

TickCsvFormat csv_format(const InputOptions& in)
{
    TickCsvFormat f;
    if (in.header == "yes") {
        f.header = HeaderMode::present;
    } else if (in.header == "no") {
        f.header = HeaderMode::absent;
    }
    if (in.time_format == "epoch") {
        f.time_format = TimeFormat::epoch_seconds;
    } else if (in.time_format == "iso8601") {
        f.time_format = TimeFormat::iso8601;
    }
    if (in.delimiter == "tab" || in.delimiter == "\\t") {
        f.delimiter = '\t';
    } else if (in.delimiter.size() == 1) {
        f.delimiter = in.delimiter[0];
    } else {
        throw UsageError("--delimiter must be a single character or 'tab'");
    }
    f.time_column = parse_column_ref(in.time_col);
    f.price_column = parse_column_ref(in.price_col);
    f.bid_column = parse_column_ref(in.bid_col);
    f.ask_column = parse_column_ref(in.ask_col);
    return f;
}

PriceSeries load_series(const InputOptions& in)
{
    if (in.sigma) return synth_brownian(synth_config(in));
    const PriceMode mode = in.price_mode == "mid" ? PriceMode::mid : PriceMode::trade;
    return ingest_ticks_file(in.input, csv_format(in), mode);
}

fs::path prepare_output_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory '" + dir + "'");
    return fs::path(dir);
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer)
{
    std::ofstream f(path);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    writer(f);
    f.close();
    if (!f) throw Error("failed writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j)
{
    write_file(path, [&](std::ostream& o) { o << std::setw(2) << j << '\n'; });
}

std::string fmt(double v)
{
    return detail::format_double(v);
}

// ---------------------------------------------------------------------------

void add_input_options(CLI::App& sub, InputOptions& in)
{
    auto* input = sub.add_option("--input", in.input, "Tick CSV file")->check(CLI::ExistingFile);
    auto* sigma = sub.add_option("--sigma", in.sigma, "Synthesise Brownian input: volatility per sqrt(second)");
    input->excludes(sigma);
    sub.add_option("--n", in.n, "Synthetic input: number of points")->capture_default_str();
    sub.add_option("--tick-dt", in.dt, "Synthetic input: tick spacing in seconds")->capture_default_str();
    sub.add_option("--p0", in.p0, "Synthetic input: initial price")->capture_default_str();
    sub.add_option("--seed", in.seed, "Synthetic input: RNG seed")->capture_default_str();
    sub.add_option("--price-mode", in.price_mode, "trade or mid (mean of bid and ask)")
        ->check(CLI::IsMember({"trade", "mid"}))
        ->capture_default_str();
    sub.add_option("--time-col", in.time_col, "Time column (index or header name)")->capture_default_str();
    sub.add_option("--price-col", in.price_col, "Price column for trade mode")->capture_default_str();
    sub.add_option("--bid-col", in.bid_col, "Bid column for mid mode")->capture_default_str();
    sub.add_option("--ask-col", in.ask_col, "Ask column for mid mode")->capture_default_str();
    sub.add_option("--header", in.header, "auto, yes or no")
        ->check(CLI::IsMember({"auto", "yes", "no"}))
        ->capture_default_str();
    sub.add_option("--delimiter", in.delimiter, "Field delimiter")->capture_default_str();
    sub.add_option("--time-format", in.time_format, "auto, epoch or iso8601")
        ->check(CLI::IsMember({"auto", "epoch", "iso8601"}))
        ->capture_default_str();
}

void add_grid_options(CLI::App& sub, GridOptions& g)
{
    sub.add_option("--dt-lo", g.dt_lo, "Smallest dt in seconds")->capture_default_str();
    sub.add_option("--dt-hi", g.dt_hi, "Largest dt in seconds")->capture_default_str();
    sub.add_option("--dt-k", g.dt_k, "Number of dt grid points")->capture_default_str();
    sub.add_option("--delta-lo", g.delta_lo_pct, "Smallest delta in percent")->default_str("0.035");
    sub.add_option("--delta-hi", g.delta_hi_pct, "Largest delta in percent")->default_str("0.5");
    sub.add_option("--delta-k", g.delta_k, "Number of delta grid points")->capture_default_str();
    sub.add_flag("--fit-dt-grid-to-span", g.fit_dt_to_span,
                 "Shrink the upper dt bound in proportion to the series span");
}

void require_input(const InputOptions& in)
{
    if (in.input.empty() && !in.sigma) throw UsageError("one of --input or --sigma is required");
}

std::pair<std::vector<double>, std::vector<double>> resolve_grids(const GridOptions& g, const PriceSeries& series)
{
    LogGrid dt{g.dt_lo, g.dt_hi, g.dt_k};
    if (g.fit_dt_to_span) dt = scaled_dt_grid(series.span(), g.dt_k);
    const LogGrid delta{g.delta_lo_pct ? *g.delta_lo_pct / 100.0 : kReferenceDeltaLo,
                        g.delta_hi_pct ? *g.delta_hi_pct / 100.0 : kReferenceDeltaHi, g.delta_k};
    return {dt.points(), delta.points()};
}

// ---------------------------------------------------------------------------

void cmd_synth(const Context& c, std::ostream& out)
{
    if (!c.in.sigma) throw UsageError("--sigma is required");
    if (c.in.n < 2) throw UsageError("--n must be at least 2 (a series needs two points)");
    const auto series = synth_brownian(synth_config(c.in));
    const auto dir = prepare_output_dir(c.output_dir);
    const json config = run_config(c);
    const auto csv_path = dir / (c.name + ".csv");
    write_file(csv_path, [&](std::ostream& o) { write_ticks(o, series, config_comment(config)); });
    json meta = synth_json(c.in);
    meta["span_seconds"] = series.span();
    meta["file"] = csv_path.filename().string();
    meta["config"] = config;
    write_json(dir / (c.name + ".meta.json"), meta);
    out << "wrote " << series.size() << " ticks to " << csv_path.string() << '\n';
}

void cmd_scaling(const Context& c, std::ostream& out)
{
    require_input(c.in);
    const auto series = load_series(c.in);
    const auto [dts, deltas] = resolve_grids(c.grid, series);
    const auto report = fit_scaling(measure_scaling(series, dts, deltas));
    const auto dir = prepare_output_dir(c.output_dir);
    const json config = run_config(c, dts, deltas);

    json j = to_json(report);
    j["config"] = config;
    write_json(dir / "scaling.json", j);
    for (const ScalingLaw* law :
         {&report.squared_returns, &report.os_variability, &report.normalized_dc_count, &report.mean_overshoot}) {
        write_file(dir / (law->name + ".csv"),
                   [&](std::ostream& o) { write_points_csv(o, *law, config_comment(config)); });
    }
    out << "law                   exponent        alpha           r_squared\n";
    for (const ScalingLaw* law :
         {&report.squared_returns, &report.os_variability, &report.normalized_dc_count, &report.mean_overshoot}) {
        out << std::left << std::setw(22) << law->name << std::setw(16) << fmt(law->fit.exponent) << std::setw(16)
            << fmt(law->fit.alpha) << fmt(law->fit.r_squared) << '\n';
    }
}

void cmd_invariants(const Context& c, std::ostream& out)
{
    require_input(c.in);
    const auto series = load_series(c.in);
    const auto [dts, deltas] = resolve_grids(c.grid, series);
    const auto profile = invariant_profile(series, dts, deltas);
    const auto lambda = estimate_lambda(profile);
    const auto dir = prepare_output_dir(c.output_dir);
    const json config = run_config(c, dts, deltas);

    write_file(dir / "profile.csv", [&](std::ostream& o) { write_profile_csv(o, profile, config_comment(config)); });
    json pj = to_json(profile);
    pj["config"] = config;
    write_json(dir / "profile.json", pj);
    json lj = to_json(lambda);
    lj["config"] = config;
    write_json(dir / "lambda.json", lj);

    std::ostringstream s;
    s << "config: " << config.dump() << '\n'
      << "C_T    mean " << fmt(profile.physical.mean) << " std " << fmt(profile.physical.stddev) << " 1/s\n"
      << "C_tau  mean " << fmt(profile.intrinsic.mean) << " std " << fmt(profile.intrinsic.stddev) << " 1/s\n"
      << "pooled mean " << fmt(profile.pooled.mean) << " std " << fmt(profile.pooled.stddev) << " cv "
      << fmt(profile.pooled.cv()) << '\n'
      << "lambda " << fmt(lambda.lambda) << " (dispersion " << fmt(lambda.dispersion) << ", " << lambda.method
      << ")\n";
    write_file(dir / "summary.txt", [&](std::ostream& o) { o << s.str(); });
    out << s.str();
}

void cmd_dissect(const Context& c, std::ostream& out)
{
    require_input(c.in);
    const double delta = *c.delta_pct / 100.0;
    const auto series = load_series(c.in);
    const auto d = dissect(series, delta);
    const auto stats = overshoot_stats(d);
    const auto dir = prepare_output_dir(c.output_dir);
    const json config = run_config(c);

    write_file(dir / "events.csv", [&](std::ostream& o) { write_event_log(o, d, config_comment(config)); });
    json j = to_json(stats, delta);
    j["span_seconds"] = series.span();
    j["c_intrinsic"] = d.n_dc >= 2 ? json(c_intrinsic(d, series.span())) : json(nullptr);
    j["ks_distance_exponential"] =
        d.overshoots.size() >= kMinOvershootsForExpCheck ? json(overshoot_exp_check(d).ks_distance) : json(nullptr);
    if (c.window) {
        json windows = json::array();
        for (const auto& w : decompose(series, delta, *c.window)) {
            windows.push_back({{"window_start", w.window_start},
                               {"window_end", w.window_end},
                               {"volatility_proxy", w.volatility_proxy},
                               {"liquidity_proxy", w.liquidity_proxy ? json(*w.liquidity_proxy) : json(nullptr)}});
        }
        j["decomposition"] = windows;
    }
    j["config"] = config;
    write_json(dir / "dissection.json", j);
    out << "delta " << fmt(delta) << ": " << d.n_dc << " directional changes, " << d.overshoots.size()
        << " overshoots";
    if (stats.mean_os) out << ", mean " << fmt(*stats.mean_os) << ", var " << fmt(*stats.var_os);
    out << '\n';
}

void cmd_check(const Context& c, std::ostream& out)
{
    require_input(c.in);
    const auto series = load_series(c.in);
    const auto check = bridge_check(series, *c.check_dt, *c.delta_pct / 100.0);
    const auto dir = prepare_output_dir(c.output_dir);
    json j = to_json(check);
    j["config"] = run_config(c);
    write_json(dir / "check.json", j);
    out << "lhs " << fmt(check.lhs) << "  rhs " << fmt(check.rhs) << "  rel_gap " << fmt(check.rel_gap) << '\n';
}

// Moves "--config FILE" out of the arguments and splices the file's settings
// in right after the subcommand, so later command-line flags take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        std::size_t erase = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            erase = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            erase = 1;
        } else {
            continue;
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + erase));
        auto extra = read_config_args(path);
        const std::size_t at = args.empty() ? 0 : 1;
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
        break;
    }
    return args;
}

} // namespace

std::vector<std::string> read_config_args(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::string> args;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = detail::trim(t.substr(0, eq));
        const auto value = detail::trim(t.substr(eq + 1));
        args.push_back("--" + std::string(key) + "=" + std::string(value));
    }
    return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    Context c;
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') c.output_dir = env;

    CLI::App app{"Directional-change dissection, scaling laws and physical/intrinsic time invariants", "itime"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output-dir", c.output_dir, "Output directory (default from $ITIME_OUTPUT_DIR or .)")
            ->capture_default_str();
        sub->add_option("--config", "Key = value settings file (flags override it)");
    };

    auto* synth = app.add_subcommand("synth", "Write a synthetic arithmetic Brownian tick series");
    synth->add_option("--sigma", c.in.sigma, "Volatility per sqrt(second)")->required();
    synth->add_option("--n", c.in.n, "Number of points")->capture_default_str();
    synth->add_option("--dt", c.in.dt, "Tick spacing in seconds")->capture_default_str();
    synth->add_option("--p0", c.in.p0, "Initial price")->capture_default_str();
    synth->add_option("--seed", c.in.seed, "RNG seed")->capture_default_str();
    synth->add_option("--name", c.name, "Output base name")->capture_default_str();
    add_common(synth);

    auto* scaling = app.add_subcommand("scaling", "Fit the four scaling laws over dt and delta grids");
    add_input_options(*scaling, c.in);
    add_grid_options(*scaling, c.grid);
    add_common(scaling);

    auto* invariants = app.add_subcommand("invariants", "Compute C^T, C^tau profiles and lambda");
    add_input_options(*invariants, c.in);
    add_grid_options(*invariants, c.grid);
    add_common(invariants);

    auto* dissect_cmd = app.add_subcommand("dissect", "Export the directional-change event log");
    add_input_options(*dissect_cmd, c.in);
    dissect_cmd->add_option("--delta", c.delta_pct, "Threshold in percent")->required();
    dissect_cmd->add_option("--window", c.window, "Also decompose activity per window of this many seconds");
    add_common(dissect_cmd);

    auto* check = app.add_subcommand("check", "Evaluate both sides of the bridge identity at one (dt, delta)");
    add_input_options(*check, c.in);
    check->add_option("--dt", c.check_dt, "Sampling interval in seconds")->required();
    check->add_option("--delta", c.delta_pct, "Threshold in percent")->required();
    add_common(check);

    try {
        auto args = expand_config(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (synth->parsed()) {
            c.command = "synth";
            cmd_synth(c, out);
        } else if (scaling->parsed()) {
            c.command = "scaling";
            cmd_scaling(c, out);
        } else if (invariants->parsed()) {
            c.command = "invariants";
            cmd_invariants(c, out);
        } else if (dissect_cmd->parsed()) {
            c.command = "dissect";
            cmd_dissect(c, out);
        } else if (check->parsed()) {
            c.command = "check";
            cmd_check(c, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace itime::cli
