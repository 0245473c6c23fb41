#include "pumpcat/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace pumpcat;
using namespace pumpcat::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pumpcat_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST(cli, defaults) {
    const RunConfig c = parse_config({"wigner"});
    ASSERT_EQ(c.command, Command::wigner);
    ASSERT_EQ(c.alpha_sq, 5.0);
    ASSERT_EQ(c.gamma, 1.0);
    ASSERT_EQ(c.omega0, 0.0);
    ASSERT_EQ(c.pump, Complex(1.0));
    ASSERT_FALSE(c.out);
    ASSERT_TRUE(c.params().resonant());
}

TEST(cli, flags) {
    const RunConfig c = parse_config({"wigner", "--alpha-sq", "3", "--pump", "0.5", "--pump-im", "-1", "--time", "1.0",
                                      "--grid=-4:4:-3:3:41x31", "--parity", "odd", "--out", "w.csv"});
    ASSERT_EQ(c.alpha_sq, 3.0);
    ASSERT_EQ(c.pump, Complex(0.5, -1.0));
    ASSERT_EQ(c.parity, CatParity::Odd);
    ASSERT_EQ(c.grid.n_re, 41u);
    ASSERT_EQ(c.grid.n_im, 31u);
    ASSERT_EQ(c.grid.im_min, -3.0);
    ASSERT_EQ(*c.out, "w.csv");

    const RunConfig lock = parse_config({"entropy", "--pump-lock"});
    ASSERT_NEAR(std::abs(lock.params().pump_amp - Complex(0.0, 0.5 * std::sqrt(5.0))), 0.0, 1e-15);
    const RunConfig lists = parse_config({"probs", "--pumps", "0,0.5,1,2", "--tmax", "20"});
    ASSERT_EQ(lists.pumps, (std::vector<double>{0.0, 0.5, 1.0, 2.0}));
}

TEST(cli, usage_errors) {
    ASSERT_EQ(invoke({"wigner", "--alpha-sq", "-1"}).code, kExitUsage);
    ASSERT_NE(invoke({"wigner", "--alpha-sq", "-1"}).err.find("alpha-sq"), std::string::npos);
    ASSERT_EQ(invoke({}).code, kExitUsage);
    ASSERT_EQ(invoke({"frobnicate"}).code, kExitUsage);
    ASSERT_EQ(invoke({"wigner", "--no-such-flag"}).code, kExitUsage);
    ASSERT_EQ(invoke({"wigner", "--pump-lock", "--pump", "2"}).code, kExitUsage);
    ASSERT_EQ(invoke({"wigner", "--grid=1:0:0:1:10x10"}).code, kExitUsage);
    ASSERT_EQ(invoke({"wigner", "--grid=0:1:0:1:10"}).code, kExitUsage);
    ASSERT_EQ(invoke({"wigner", "--gamma", "0"}).code, kExitUsage);
    ASSERT_EQ(invoke({"wigner", "--parity", "sideways"}).code, kExitUsage);
    ASSERT_EQ(invoke({"montecarlo", "--atoms", "0"}).code, kExitUsage);
    ASSERT_EQ(invoke({"entropy", "--samples", "1"}).code, kExitUsage);
    ASSERT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(cli, numeric_failure) {
    const Result r = invoke({"wigner", "--nbar", "0.5", "--grid=-1:1:-1:1:3x3"});
    ASSERT_EQ(r.code, kExitNumeric);
    ASSERT_NE(r.err.find("ThermalNotSupported"), std::string::npos);
}

TEST(cli, config_file) {
    const auto path = scratch("cfg.json");
    {
        std::ofstream f(path);
        f << R"({"alpha_sq": 2.0, "pump": 0.25, "seed": 17, "grid": "-2:2:-2:2:5x5"})";
    }
    const RunConfig c = parse_config({"wigner", "--config", path.string(), "--pump", "0.75"});
    ASSERT_EQ(c.alpha_sq, 2.0);
    ASSERT_EQ(c.pump, Complex(0.75));
    ASSERT_EQ(c.seed, 17u);
    ASSERT_EQ(c.grid.n_re, 5u);

    {
        std::ofstream f(path);
        f << R"({"alpha_sq": 2.0, "colour": "blue"})";
    }
    ASSERT_EQ(invoke({"wigner", "--config", path.string()}).code, kExitUsage);
    {
        std::ofstream f(path);
        f << R"({"alpha_sq": "two"})";
    }
    ASSERT_EQ(invoke({"wigner", "--config", path.string()}).code, kExitUsage);
    {
        std::ofstream f(path);
        f << "{not json";
    }
    ASSERT_EQ(invoke({"wigner", "--config", path.string()}).code, kExitUsage);
    ASSERT_EQ(invoke({"wigner", "--config", "/nonexistent/cfg.json"}).code, kExitUsage);

    // The resolved configuration in an output header loads back.
    const RunConfig base = parse_config({"entropy", "--alpha-sq", "3", "--tmax", "4", "--samples", "5"});
    {
        std::ofstream f(path);
        f << to_json(base).dump();
    }
    const RunConfig again = parse_config({"entropy", "--config", path.string()});
    ASSERT_EQ(to_json(again).dump(), to_json(base).dump());
    ASSERT_EQ(invoke({"wigner", "--config", path.string()}).code, kExitUsage);
}

TEST(cli, wigner_csv) {
    const Result r = invoke({"wigner", "--time", "1.0", "--grid=-6:6:-6:6:7x5"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u + 35u);
    ASSERT_EQ(ls[0].rfind("# pumpcat 0.1.0 {", 0), 0u);
    ASSERT_EQ(ls[1], "re_zeta,im_zeta,w");
    ASSERT_EQ(ls[2].rfind("-6,-6,", 0), 0u);
    ASSERT_EQ(ls[3].rfind("-4,-6,", 0), 0u);
    ASSERT_EQ(ls[9].rfind("-6,-3,", 0), 0u);
    // Header JSON is the resolved configuration.
    const Json header = Json::parse(ls[0].substr(std::string("# pumpcat 0.1.0 ").size()));
    ASSERT_EQ(header["command"], "wigner");
    ASSERT_EQ(header["grid"], "-6:6:-6:6:7x5");
}

TEST(cli, wigner_window_warning) {
    const Result r = invoke({"wigner", "--grid=-1:1:-1:1:5x5"});
    ASSERT_EQ(r.code, kExitOk);
    ASSERT_NE(r.err.find("warning"), std::string::npos);
}

TEST(cli, entropy_csv) {
    const Result r = invoke({"entropy", "--pump-lock", "--tmax", "10", "--samples", "11"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 13u);
    ASSERT_EQ(ls[1], "gamma_t,entropy");
    ASSERT_EQ(ls[2].rfind("0,", 0), 0u);
    ASSERT_LT(std::abs(std::stod(ls[2].substr(2))), 1e-15);
    double peak = 0.0;
    for (std::size_t k = 2; k < ls.size(); ++k) peak = std::max(peak, std::stod(ls[k].substr(ls[k].find(',') + 1)));
    ASSERT_GT(peak, 0.4);
    ASSERT_LT(std::stod(ls.back().substr(ls.back().find(',') + 1)), 1e-3);
}

TEST(cli, probs_files_per_pump) {
    const auto out = scratch("probs.csv");
    const Result r = invoke({"probs", "--pumps", "0.5,1", "--tmax", "20", "--samples", "21", "--out", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_EQ(suffixed_path(out.string(), 0.5), scratch("probs_F0.5.csv").string());
    const auto ls = lines(slurp(scratch("probs_F1.csv")));
    ASSERT_EQ(ls.size(), 23u);
    ASSERT_EQ(ls[1], "gamma_T,p_g_e,p_e_e");
    ASSERT_EQ(ls[2], "0,0,1");
    const std::string last = ls.back();
    const double pg = std::stod(last.substr(last.find(',') + 1));
    ASSERT_NEAR(pg, 0.5, 1e-3);
    ASSERT_TRUE(std::filesystem::exists(scratch("probs_F0.5.csv")));
    ASSERT_EQ(suffixed_path("dir.v2/out", 2.0), "dir.v2/out_F2");
}

TEST(cli, montecarlo_is_reproducible) {
    const auto a = scratch("mc_a.json");
    const auto b = scratch("mc_b.json");
    const std::vector<std::string> base{"montecarlo", "--atoms", "3", "--trajectories", "40", "--seed", "123", "--feedback"};
    auto with_out = [&](const std::filesystem::path& p) {
        auto v = base;
        v.push_back("--out");
        v.push_back(p.string());
        return v;
    };
    ASSERT_EQ(invoke(with_out(a)).code, kExitOk);
    ASSERT_EQ(invoke(with_out(b)).code, kExitOk);
    ASSERT_EQ(slurp(a), slurp(b));
    const Json j = Json::parse(slurp(a));
    ASSERT_EQ(j["version"], "0.1.0");
    ASSERT_EQ(j["trajectories"].size(), 40u);
    ASSERT_EQ(j["config"]["seed"], 123);
    ASSERT_FALSE(j["final_states"].empty());

    auto omit = with_out(a);
    omit.push_back("--omit-final-state");
    ASSERT_EQ(invoke(omit).code, kExitOk);
    ASSERT_TRUE(Json::parse(slurp(a))["final_states"].empty());
}

TEST(cli, evolve_json) {
    const Result r = invoke({"evolve", "--times", "0,0.5,2", "--pump", "0.3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    ASSERT_EQ(j["states"].size(), 3u);
    ASSERT_EQ(j["states"][1]["time"], 0.5);
    const DyadState s = state_from_json(j["states"][2]["state"]);
    ASSERT_NEAR(s.time, 2.0, 1e-15);
    ASSERT_NEAR(trace(s).real(), 1.0, 1e-12);
}
