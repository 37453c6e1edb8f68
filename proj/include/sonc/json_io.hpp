#pragma once

#include <json.hpp>

#include <iosfwd>
#include <vector>

#include "sonc/certificate.hpp"
#include "sonc/circuit.hpp"
#include "sonc/experiment.hpp"
#include "sonc/separation.hpp"

namespace sonc {

using json = nlohmann::json;

// Rationals serialize as decimal-free "p/q" strings throughout.

json circuit_to_json(const CircuitData& c);
CircuitData circuit_from_json(const json& j);

/// {"n":…, "target":"<poly text>", "parts":["<poly text>",…]}
json certificate_to_json(const SoncCertificate& cert);
SoncCertificate certificate_from_json(const json& j);

json verification_to_json(const VerificationReport& rep);

/// {"u":"p/q","d":…,"n":…,"K":[["lo","hi"],…],"witness":…,"witness_factor":…,
///  "L_of_witness":"p/q","lower_bound":"p/q","lower_bound_float":…}
json separation_to_json(const SeparationReport& rep);

json attack_to_json(const AttackResult& res);

/// Columns: iteration, grid_norm_float, four_point_gap_rational, margin_float.
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);

}  // namespace sonc
