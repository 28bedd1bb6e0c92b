#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "padam/config.hpp"
#include "padam/report.hpp"

using namespace padam;
using nlohmann::json;

namespace {

json minimal_config() {
    return json{
        {"schema_version", 1},
        {"problem",
         {{"name", "log_smooth"}, {"dim", 4}, {"sparsity", 0.5}, {"seed", 7}}},
        {"optimizer", "padam"},
        {"hyperparams", {{"beta1", 0.9}, {"beta2", 0.999}, {"p", 0.25}}},
        {"alpha_rule", {{"kind", "fixed"}, {"value", 0.05}}},
        {"T_grid", {50}},
        {"seeds", {1, 2, 3}},
    };
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    const RunConfig cfg = parse_config_text(minimal_config().dump());
    CHECK(cfg.spec.problem.name == "log_smooth");
    CHECK(cfg.spec.problem.dim == 4);
    CHECK(cfg.spec.optimizer == OptimizerKind::Padam);
    CHECK(cfg.spec.hp.eps_floor == 1e-12);
    CHECK(cfg.spec.q_grid == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.emit_report_json);
    CHECK(cfg.compare.p_arms == std::vector<double>{0.125, 0.25, 0.5});
    CHECK(cfg.verify.T == 200);
}

TEST_CASE("omitted seeds default to twenty") {
    json cfg_json = minimal_config();
    cfg_json.erase("seeds");
    const RunConfig cfg = parse_config_text(cfg_json.dump());
    REQUIRE(cfg.spec.seeds.size() == 20);
    CHECK(cfg.spec.seeds.front() == 1);
    CHECK(cfg.spec.seeds.back() == 20);
}

TEST_CASE("unknown keys are rejected by name") {
    json bad = minimal_config();
    bad["explosive"] = true;
    CHECK_THROWS_WITH_AS(parse_config_text(bad.dump()), doctest::Contains("explosive"),
                         ConfigError);
    json bad2 = minimal_config();
    bad2["problem"]["colour"] = "red";
    CHECK_THROWS_WITH_AS(parse_config_text(bad2.dump()),
                         doctest::Contains("problem.colour"), ConfigError);
    json bad3 = minimal_config();
    bad3["hyperparams"]["alpha"] = 0.1;  // alpha lives in alpha_rule
    CHECK_THROWS_WITH_AS(parse_config_text(bad3.dump()),
                         doctest::Contains("hyperparams.alpha"), ConfigError);
}

TEST_CASE("p outside [0, 1/2] is rejected citing the constraint") {
    json bad = minimal_config();
    bad["hyperparams"]["p"] = 0.7;
    CHECK_THROWS_WITH_AS(parse_config_text(bad.dump()), doctest::Contains("[0, 1/2]"),
                         ConfigError);
}

TEST_CASE("schema_version is checked") {
    json bad = minimal_config();
    bad["schema_version"] = 2;
    CHECK_THROWS_WITH_AS(parse_config_text(bad.dump()), doctest::Contains("schema_version"),
                         ConfigError);
    json missing = minimal_config();
    missing.erase("schema_version");
    CHECK_THROWS_AS(parse_config_text(missing.dump()), ConfigError);
}

TEST_CASE("structural validation errors name the key") {
    json bad = minimal_config();
    bad["seeds"] = {1, 2};
    CHECK_THROWS_WITH_AS(parse_config_text(bad.dump()), doctest::Contains("seeds"),
                         ConfigError);
    json bad2 = minimal_config();
    bad2["alpha_rule"]["kind"] = "geometric";
    CHECK_THROWS_WITH_AS(parse_config_text(bad2.dump()), doctest::Contains("alpha_rule.kind"),
                         ConfigError);
    json bad3 = minimal_config();
    bad3["problem"]["name"] = "rosenbrock";
    CHECK_THROWS_WITH_AS(parse_config_text(bad3.dump()), doctest::Contains("problem.name"),
                         ConfigError);
    json bad4 = minimal_config();
    bad4["optimizer"] = "adamw";
    CHECK_THROWS_WITH_AS(parse_config_text(bad4.dump()), doctest::Contains("optimizer"),
                         ConfigError);
}

TEST_CASE("problem-family keys are guarded") {
    json bad = minimal_config();
    bad["problem"]["noise"] = 0.2;  // log_smooth has no noise knob
    CHECK_THROWS_WITH_AS(parse_config_text(bad.dump()), doctest::Contains("problem.noise"),
                         ConfigError);
    json quad = minimal_config();
    quad["problem"] = {{"name", "noisy_quadratic_bounded"}, {"dim", 3}, {"seed", 2},
                       {"noise", 0.05}};
    const RunConfig cfg = parse_config_text(quad.dump());
    CHECK(cfg.spec.problem.noise == 0.05);
    CHECK(cfg.spec.problem.sparsity == 1.0);
}

TEST_CASE("beta2 must be strictly inside (0, 1) at the config level") {
    json bad = minimal_config();
    bad["hyperparams"]["beta2"] = 0.0;
    CHECK_THROWS_WITH_AS(parse_config_text(bad.dump()),
                         doctest::Contains("hyperparams.beta2"), ConfigError);
}

TEST_CASE("report.json round-trips every numeric field bit-exactly") {
    const RunConfig cfg = parse_config_text(minimal_config().dump());
    const AggregateResult agg = estimate_stationarity(cfg.spec);
    const json report = aggregate_to_json(cfg, agg);
    const std::string text = report.dump(2);
    const json parsed = json::parse(text);

    CHECK(parsed.at("gamma").get<double>() == agg.gamma);
    const auto& results = parsed.at("results");
    REQUIRE(results.size() == agg.per_T.size());
    for (std::size_t i = 0; i < agg.per_T.size(); ++i) {
        const TResult& r = agg.per_T[i];
        CHECK(results[i].at("mean_stationarity").get<double>() == r.mean_stationarity);
        CHECK(results[i].at("stderr").get<double>() == r.stderr_stationarity);
        CHECK(results[i].at("mean_sum_hist_norms").get<double>() == r.mean_sum_hist_norms);
        CHECK(results[i].at("vhat1_inv_p_l1_mean").get<double>() == r.vhat1_inv_p_l1_mean);
        const auto& per_seed = results[i].at("per_seed");
        REQUIRE(per_seed.size() == r.runs.size());
        for (std::size_t j = 0; j < r.runs.size(); ++j) {
            CHECK(per_seed[j].at("grad_norm_sq").get<double>() == r.runs[j].stationarity);
            CHECK(per_seed[j].at("sum_hist_norms").get<double>() == r.runs[j].sum_hist_norms);
        }
        for (std::size_t j = 0; j < r.theorem_rhs.size(); ++j)
            CHECK(results[i].at("theorem_rhs")[j].at("rhs").get<double>() ==
                  r.theorem_rhs[j].rhs_mean);
    }
    // serialize -> parse -> serialize is a fixed point
    CHECK(json::parse(text).dump(2) == text);
}

TEST_CASE("csv schemas are stable") {
    const RunConfig cfg = parse_config_text(minimal_config().dump());
    const AggregateResult agg = estimate_stationarity(cfg.spec);
    const std::string st = stationarity_csv(cfg, agg);
    CHECK(st.rfind("optimizer,p,d,T,seed,grad_norm_sq,sum_hist_norms,alpha\n", 0) == 0);
    // one row per (T, seed)
    const std::size_t rows = std::count(st.begin(), st.end(), '\n');
    CHECK(rows == 1 + cfg.spec.T_grid.size() * cfg.spec.seeds.size());

    const std::string rc = rate_csv(agg);
    CHECK(rc.rfind("T,mean,stderr,fitted_slope\n", 0) == 0);

    ComparisonReport cmp;
    cmp.T = 100;
    cmp.arms.push_back({"p=0.25", 0.25, 0.5, 1.0, 0.25, 0.5, 0.125});
    const std::string cc = compare_csv(cmp);
    CHECK(cc.rfind("arm,p,alpha,mean,stderr,sparsity_ratio,s_estimate\n", 0) == 0);
    CHECK(cc.find("p=0.25,0.25,0.5,1,0.25,0.5,0.125\n") != std::string::npos);
}
