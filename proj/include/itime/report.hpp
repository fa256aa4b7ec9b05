#pragma once

// JSON and CSV serialisation of analysis results.

#include "itime/bridge.hpp"
#include "itime/intrinsic.hpp"
#include "itime/scaling.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>

namespace itime {

[[nodiscard]] nlohmann::json to_json(const PowerLawFit& fit);
[[nodiscard]] nlohmann::json to_json(const ScalingLaw& law);
[[nodiscard]] nlohmann::json to_json(const ScalingReport& report);
[[nodiscard]] nlohmann::json to_json(const Summary& s);
[[nodiscard]] nlohmann::json to_json(const InvariantProfile& profile);
[[nodiscard]] nlohmann::json to_json(const LambdaEstimate& est);
[[nodiscard]] nlohmann::json to_json(const BridgeCheck& check);
[[nodiscard]] nlohmann::json to_json(const OvershootStats& stats, double delta);

/// Two-column "x,y" CSV for log-log plotting of one law.
void write_points_csv(std::ostream& out, const ScalingLaw& law, std::span<const std::string> comments = {});

} // namespace itime
