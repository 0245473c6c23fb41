#include "pumpcat/serialization.hpp"

#include <map>

#include "pumpcat/error.hpp"

namespace pumpcat {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::InvalidArgument, "complex value must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json state_to_json(const DyadState& state) {
    Json dyads = Json::array();
    for (const auto& d : state.dyads) {
        dyads.push_back({{"ket", complex_to_json(d.ket)}, {"bra", complex_to_json(d.bra)},
                         {"coeff", complex_to_json(d.coeff)}});
    }
    return {{"frame", state.frame == Frame::Rotating ? "rotating" : "lab"}, {"time", state.time},
            {"dyads", std::move(dyads)}};
}

DyadState state_from_json(const Json& j) {
    try {
        DyadState s;
        const auto frame = j.at("frame").get<std::string>();
        if (frame == "rotating") {
            s.frame = Frame::Rotating;
        } else if (frame == "lab") {
            s.frame = Frame::Lab;
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown frame '" + frame + "'");
        }
        s.time = j.at("time").get<double>();
        for (const auto& d : j.at("dyads")) {
            s.dyads.push_back(
                {complex_from_json(d.at("ket")), complex_from_json(d.at("bra")), complex_from_json(d.at("coeff"))});
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed state: ") + e.what());
    }
}

Json record_to_json(const DetectionRecord& r) {
    return {{"atom", r.atom_index},
            {"outcome", std::string(1, to_char(r.outcome))},
            {"probability", r.probability},
            {"time", r.time},
            {"feedback", r.feedback_applied}};
}

Json trajectories_to_json(const std::vector<Trajectory>& trajectories) {
    std::map<const DyadState*, std::size_t> slot;
    Json states = Json::array();
    Json list = Json::array();
    for (const auto& t : trajectories) {
        Json records = Json::array();
        for (const auto& r : t.records) records.push_back(record_to_json(r));
        Json ref = nullptr;
        if (t.final_state) {
            auto [it, fresh] = slot.try_emplace(t.final_state.get(), states.size());
            if (fresh) states.push_back(state_to_json(*t.final_state));
            ref = it->second;
        }
        list.push_back({{"index", t.index}, {"seed", t.seed}, {"records", std::move(records)}, {"final_state", ref}});
    }
    return {{"final_states", std::move(states)}, {"trajectories", std::move(list)}};
}

} // namespace pumpcat
