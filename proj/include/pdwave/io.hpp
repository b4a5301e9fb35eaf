#pragma once

#include <string>

#include <json.hpp>

#include "pdwave/analysis.hpp"
#include "pdwave/energy.hpp"
#include "pdwave/grid.hpp"
#include "pdwave/material.hpp"
#include "pdwave/solver.hpp"
#include "pdwave/timedomain.hpp"

// JSON and CSV conversion for the library types. Parsing is strict: unknown
// keys and wrong types raise ErrorCode::Config.
namespace pdwave::io {

using Json = nlohmann::json;

Json to_json(const Potential& p);
Potential potential_from_json(const Json& j);

/// Accepts {"coupling": "discrete", "bonds": [...]},
/// {"coupling": "continuous", "alpha", "beta", "potential", "xi_max", "xi_step"}
/// and the shorthand {"coupling": "silling", "horizon", "c2", "c3", "xi_step"}.
Coupling coupling_from_json(const Json& j);
/// Always emits the resolved discrete or continuous form.
Json to_json(const Coupling& c);

Grid grid_from_json(const Json& j);
Json to_json(const Grid& g);

/// The supplied profile is not part of the JSON form.
SolveOptions solve_options_from_json(const Json& j);
Json to_json(const SolveOptions& o);
SweepOptions sweep_options_from_json(const Json& j);

Json to_json(const Profile& w);
Profile profile_from_json(const Json& j);
/// Header "x,value", one node per row, %.17g.
std::string profile_csv(const Profile& w);

Json to_json(const ConeReport& r);
Json to_json(const EnergyReport& r);
Json to_json(const SuperquadraticReport& r);
Json to_json(const WaveSolution& s, bool with_history = false);
Json to_json(const SweepRow& r);
Json to_json(const ThresholdResult& r);
std::vector<SweepRow> sweep_rows_from_json(const Json& j);
ThresholdResult threshold_from_json(const Json& j);
Json to_json(const DispersionCurve& d);
Json to_json(const KdvCoefficients& k);
Json to_json(const KdvComparison& k);
Json to_json(const DecayFit& f);
Json to_json(const PropagationReport& r);

const char* to_string(InitialKind k);
const char* to_string(ConeSign s);
const char* to_string(Convolution c);

/// Formats a double as %.17g; non-finite values become "nan", "inf", "-inf".
std::string format_double(double v);
/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

}  // namespace pdwave::io
