#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "clbp/error.hpp"
#include "clbp/io.hpp"

using namespace clbp;
using nlohmann::json;

TEST_CASE("weight files") {
    std::istringstream in("# comment\n3\n\n1.5\n  2  \n");
    const auto ws = read_weights(in);
    CHECK(ws.size() == 3);
    CHECK(ws[0] == 1.5);

    std::istringstream bad("1\nabc\n");
    try {
        read_weights(bad);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Parse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream small("0.5\n");
    CHECK_THROWS_AS(read_weights(small), Error);
    CHECK_THROWS_AS(read_weight_file("/nonexistent/weights.txt"), Error);

    const auto pl = gen_power_law(50, 0.6, 1.3);
    std::stringstream round;
    write_weights(round, pl);
    const auto back = read_weights(round);
    for (std::size_t i = 0; i < pl.size(); ++i) CHECK(back[i] == pl[i]);
}

TEST_CASE("report JSON round-trips exactly") {
    const auto ws = gen_example_sequence(ExampleVariant::B, 1e6);
    const auto report = threshold_report(ws, 2);
    const json parsed = json::parse(to_json(report).dump());
    CHECK(parsed.at("psi").get<double>() == report.psi);
    CHECK(parsed.at("p_sparse").get<double>() == report.p_sparse);
    CHECK(parsed.at("p_dense").get<double>() == *report.p_dense);
    CHECK(parsed.at("a_c_scale").get<double>() == report.a_c_scale);
    CHECK(parsed.at("dense_exists").get<bool>());

    const auto uniform = to_json(threshold_report(gen_uniform(1000, 1.0), 2));
    CHECK(uniform.at("p_dense").is_null());
    CHECK(real_or_null(1.0 / 0.0).is_null());
}

TEST_CASE("sweep config JSON") {
    SweepConfig cfg;
    cfg.generator.model = GeneratorModel::ExampleA;
    cfg.generator.w_target = 1e6;
    cfg.multipliers = {0.1, 10};
    cfg.replicates = 7;
    cfg.base_seed = 123456789012345ULL;
    cfg.init_weight_cap = 40;
    const SweepConfig back = sweep_config_from_json(json::parse(to_json(cfg).dump()));
    CHECK(back.generator.model == GeneratorModel::ExampleA);
    CHECK(back.generator.w_target == 1e6);
    CHECK(back.multipliers == cfg.multipliers);
    CHECK(back.replicates == 7);
    CHECK(back.base_seed == cfg.base_seed);
    CHECK(back.init_weight_cap == cfg.init_weight_cap);
    CHECK_FALSE(back.init_weight_floor_all.has_value());

    CHECK_THROWS_AS(sweep_config_from_json(json{{"r", 2}}), Error);
    CHECK_THROWS_AS(generator_from_json(json{{"model", "nope"}}), Error);
}

TEST_CASE("sweep outputs") {
    SweepResult res;
    res.rows.push_back({10, 0.25, 1.0, 0, 2, 5, 0.5, 7.5, 3, true});
    res.cells.push_back({1.0, 0.25, 1, 0.5, 0.5, 0.5, 5, 1.0});
    std::ostringstream csv;
    write_sweep_csv(csv, res);
    CHECK(csv.str() ==
          "n,p0,multiplier,replicate,initial_size,final_size,final_fraction,infected_weight,rounds,outbreak\n"
          "10,0.25,1,0,2,5,0.5,7.5,3,1\n");
    std::ostringstream plot;
    write_plot_data(plot, res);
    CHECK(plot.str() == "# p0 outbreak_frequency\n0.25 1\n");
    const json summary = sweep_summary_json(res);
    CHECK(summary.at("cells").size() == 1);
    CHECK(summary.at("transition_estimate").is_null());
}

TEST_CASE("trace JSON is 1-indexed") {
    Trace t;
    t.rounds = {{1, 2.0, 2.0}, {0, 0.0, 2.0}};
    t.initial_set_size = 1;
    t.final_set = {4};
    t.infection_round = {0};
    const json j = to_json(t, true);
    CHECK(j.at("final_set") == json::array({5}));
    CHECK(j.at("final_weight").get<double>() == 2.0);
}
