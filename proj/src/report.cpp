#include "itime/report.hpp"

#include "text.hpp"

#include <ostream>

namespace itime {

using nlohmann::json;

json to_json(const PowerLawFit& fit)
{
    return {{"alpha", fit.alpha}, {"exponent", fit.exponent}, {"r_squared", fit.r_squared}, {"n_points", fit.n_points}};
}

json to_json(const ScalingLaw& law)
{
    json pts = json::array();
    for (const Point& p : law.points) pts.push_back({p.x, p.y});
    return {{"name", law.name},
            {"x_unit", law.x_unit},
            {"y_unit", law.y_unit},
            {"fit", to_json(law.fit)},
            {"points", pts}};
}

json to_json(const ScalingReport& r)
{
    return {{"span_seconds", r.span},
            {"n_ticks", r.n_ticks},
            {"fit_method", "ordinary least squares on (ln x, ln y), unweighted"},
            {"laws",
             {{"squared_returns", to_json(r.squared_returns)},
              {"os_variability", to_json(r.os_variability)},
              {"normalized_dc_count", to_json(r.normalized_dc_count)},
              {"mean_overshoot", to_json(r.mean_overshoot)}}}};
}

json to_json(const Summary& s)
{
    return {{"mean", s.mean}, {"stddev", s.stddev}, {"n", s.n}, {"cv", s.cv()}};
}

json to_json(const InvariantProfile& p)
{
    json rows = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        rows.push_back({{"I", i},
                        {"dt", p.dt_grid[i]},
                        {"C_T", p.c_physical[i]},
                        {"delta", p.delta_grid[i]},
                        {"C_tau", p.c_intrinsic[i]}});
    }
    return {{"unit", "1/second"},
            {"delta_unit", "fraction"},
            {"dt_unit", "seconds"},
            {"rows", rows},
            {"C_T", to_json(p.physical)},
            {"C_tau", to_json(p.intrinsic)},
            {"pooled", to_json(p.pooled)}};
}

json to_json(const LambdaEstimate& e)
{
    return {{"lambda", e.lambda}, {"method", e.method}, {"dispersion", e.dispersion}};
}

json to_json(const BridgeCheck& c)
{
    return {{"dt", c.dt},       {"delta", c.delta},     {"delta_unit", "fraction"},
            {"lhs", c.lhs},     {"rhs", c.rhs},         {"rel_gap", c.rel_gap},
            {"lhs_definition", "(T/dt) <r(dt)>_2"},     {"rhs_definition", "<omega-delta>_2 N(delta,T)"}};
}

json to_json(const OvershootStats& s, double delta)
{
    json j = {{"delta", delta}, {"delta_unit", "fraction"}, {"n_dc", s.n_dc}};
    j["mean_os"] = s.mean_os ? json(*s.mean_os) : json(nullptr);
    j["var_os"] = s.var_os ? json(*s.var_os) : json(nullptr);
    return j;
}

void write_points_csv(std::ostream& out, const ScalingLaw& law, std::span<const std::string> comments)
{
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# law=" << law.name << " x_unit=" << law.x_unit << " y_unit=" << law.y_unit << '\n';
    out << "x,y\n";
    for (const Point& p : law.points) out << detail::format_double(p.x) << ',' << detail::format_double(p.y) << '\n';
}

} // namespace itime
