#include "pumpcat/serialization.hpp"

#include "gtest/gtest.h"

#include "pumpcat/error.hpp"
#include "pumpcat/evolution.hpp"
#include "test_util.hpp"

using namespace pumpcat;
using pumpcat::testing::kRoot5;

TEST(serialization, state_round_trip_is_exact) {
    DyadState s = evolve_state(make_cat({1.0 / 3.0, 2.0 / 7.0}, CatParity::Odd), 0.123, CavityParams::resonant_pump(1.0, 0.7));
    const std::string text = state_to_json(s).dump();
    const DyadState back = state_from_json(Json::parse(text));
    ASSERT_EQ(back.size(), s.size());
    ASSERT_EQ(back.time, s.time);
    ASSERT_EQ(back.frame, Frame::Rotating);
    for (std::size_t k = 0; k < s.size(); ++k) {
        ASSERT_EQ(back.dyads[k].ket, s.dyads[k].ket);
        ASSERT_EQ(back.dyads[k].bra, s.dyads[k].bra);
        ASSERT_EQ(back.dyads[k].coeff, s.dyads[k].coeff);
    }
    ASSERT_EQ(state_to_json(back).dump(), text);
    ASSERT_EQ(state_from_json(state_to_json(to_lab(s, 1.0))).frame, Frame::Lab);
}

TEST(serialization, malformed_input) {
    ASSERT_THROW(complex_from_json(Json::parse("[1]")), Error);
    ASSERT_THROW(complex_from_json(Json::parse("[1, \"x\"]")), Error);
    ASSERT_THROW(state_from_json(Json::parse(R"({"frame": "rotating", "time": 0})")), Error);
    ASSERT_THROW(state_from_json(Json::parse(R"({"frame": "sideways", "time": 0, "dyads": []})")), Error);
}

TEST(serialization, trajectories_share_state_table) {
    ProtocolConfig cfg;
    cfg.alpha = kRoot5;
    cfg.params = CavityParams::resonant_pump(1.0, 1.0);
    cfg.n_atoms = 2;
    cfg.n_trajectories = 50;
    const auto runs = run_sequence(cfg);
    const Json j = trajectories_to_json(runs);
    ASSERT_EQ(j["trajectories"].size(), 50u);
    ASSERT_LE(j["final_states"].size(), 4u);
    const Json& first = j["trajectories"][0];
    ASSERT_EQ(first["index"], 0);
    ASSERT_EQ(first["records"].size(), 2u);
    ASSERT_EQ(first["records"][0]["atom"], 1);
    const std::string o = first["records"][0]["outcome"];
    ASSERT_TRUE(o == "g" || o == "e");
    const auto slot = first["final_state"].get<std::size_t>();
    const DyadState s = state_from_json(j["final_states"][slot]);
    ASSERT_NEAR(trace(s).real(), 1.0, 1e-12);

    cfg.keep_final_states = false;
    const Json bare = trajectories_to_json(run_sequence(cfg));
    ASSERT_TRUE(bare["final_states"].empty());
    ASSERT_TRUE(bare["trajectories"][0]["final_state"].is_null());
}
