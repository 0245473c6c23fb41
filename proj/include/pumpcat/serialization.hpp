// serialization.hpp: JSON forms of dyad states and detection trajectories.
//
// Complex numbers are written as [re, im]. Doubles use the shortest representation
// that parses back to the same value.

#pragma once

#include <vector>

#include <json.hpp>

#include "pumpcat/protocol.hpp"
#include "pumpcat/states.hpp"

namespace pumpcat {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

// {"frame": "rotating"|"lab", "time": t, "dyads": [{"ket": .., "bra": .., "coeff": ..}, ...]}
Json state_to_json(const DyadState& state);
DyadState state_from_json(const Json& j);

Json record_to_json(const DetectionRecord& record);

// Final states are written once in a separate table; each trajectory stores the index of
// its state there, or null when states were not kept.
Json trajectories_to_json(const std::vector<Trajectory>& trajectories);

} // namespace pumpcat
