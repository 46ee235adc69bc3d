// JSON config loading: defaults, file fixtures, derived noise power, and
// the strict unknown-key policy.

#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "starnoma/config.hpp"

using namespace starnoma;

namespace {

std::filesystem::path fixture_dir() {
    if (const char* dir = std::getenv("STARNOMA_CONFIG_DIR")) return dir;
    return "configs";
}

struct TempJson {
    std::filesystem::path path;
    explicit TempJson(const std::string& body) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("starnoma_cfg_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + ".json");
        std::ofstream out(path);
        out << body;
    }
    ~TempJson() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("default config is the reference scenario") {
    const SystemConfig cfg = default_config();
    CHECK(cfg.scenario_kind == ScenarioKind::STAR);
    CHECK(cfg.geometry.bs_position == Vec3{400.0, 0.0, 0.0});
    CHECK(cfg.geometry.ris_position == Vec3{0.0, 0.0, 30.0});
    CHECK(cfg.geometry.r1 == 100.0);
    CHECK(cfg.geometry.r2 == 200.0);
    CHECK(cfg.geometry.alpha == 2.6);
    CHECK(cfg.noma.a_near == 0.3);
    CHECK(cfg.noma.a_far == 0.7);
    CHECK(cfg.noma.gamma_th_sic == 1.0);
    CHECK(cfg.power.noise_dbm == -90.0);
    CHECK(cfg.fading.m == 2.0);
    CHECK(cfg.fading.omega == 1.0);
    CHECK(cfg.n_elements == 30);
    REQUIRE(cfg.gamma_override.has_value());
    CHECK(cfg.gamma_override->k == 3.0);
    CHECK(cfg.gamma_override->theta == 14.0);
}

TEST_CASE("empty path loads the defaults") {
    const SystemConfig cfg = load_config("");
    CHECK(cfg.n_elements == 30);
    CHECK(cfg.gamma_override.has_value());
}

TEST_CASE("bundled fixtures parse and carry their overrides") {
    const SystemConfig n50 = load_config((fixture_dir() / "star_n50.json").string());
    CHECK(n50.n_elements == 50);
    REQUIRE(n50.gamma_override.has_value());
    CHECK(n50.gamma_override->k == 5.0);
    CHECK(n50.gamma_override->theta == 23.4);

    const SystemConfig ris =
        load_config((fixture_dir() / "conventional_ris.json").string());
    CHECK(ris.scenario_kind == ScenarioKind::CONVENTIONAL_RIS);
    CHECK(ris.geometry.ris_position == Vec3{-200.0, 0.0, 50.0});
    CHECK(ris.noma.beta_rfl == 1.0);
    CHECK(ris.noma.beta_rfr == 0.0);
    CHECK_FALSE(ris.gamma_override.has_value());
}

TEST_CASE("partial configs override only what they name") {
    TempJson file(R"({"elements": {"n": 64}})");
    const SystemConfig cfg = load_config(file.path.string());
    CHECK(cfg.n_elements == 64);
    CHECK(cfg.geometry.r1 == 100.0);  // untouched default
    // defaults carry an override tuple fitted elsewhere; a config that sets
    // its own element count without restating the tuple must not inherit it
    CHECK_FALSE(cfg.gamma_override.has_value());
}

TEST_CASE("unknown keys are hard errors") {
    TempJson top(R"({"powre": {"pt_dbm": 10}})");
    CHECK_THROWS_WITH(load_config(top.path.string()),
                      Catch::Matchers::ContainsSubstring("unknown key 'powre'"));
    TempJson nested(R"({"power": {"pt_dbm": 10, "noise": -90}})");
    CHECK_THROWS_WITH(
        load_config(nested.path.string()),
        Catch::Matchers::ContainsSubstring("unknown key 'power.noise'"));
}

TEST_CASE("scenario kind parsing") {
    TempJson good(R"({"scenario_kind": "conventional_ris",
                      "noma": {"beta_rfl": 1.0, "beta_rfr": 0.0}})");
    CHECK(load_config(good.path.string()).scenario_kind ==
          ScenarioKind::CONVENTIONAL_RIS);
    TempJson bad(R"({"scenario_kind": "both"})");
    CHECK_THROWS_AS(load_config(bad.path.string()), ConfigError);
}

TEST_CASE("noise power can be given directly or derived") {
    TempJson derived(R"({"power": {"pt_dbm": 10,
                                   "bandwidth_hz": 1e7,
                                   "noise_figure_db": 10}})");
    CHECK(load_config(derived.path.string()).power.noise_dbm ==
          Catch::Approx(-90.0).margin(1e-12));
    TempJson both(R"({"power": {"noise_dbm": -90, "bandwidth_hz": 1e7}})");
    CHECK_THROWS_AS(load_config(both.path.string()), ConfigError);
    TempJson nf_only(R"({"power": {"noise_figure_db": 10}})");
    CHECK_THROWS_AS(load_config(nf_only.path.string()), ConfigError);
}

TEST_CASE("malformed values are rejected") {
    TempJson frac_n(R"({"elements": {"n": 12.5}})");
    CHECK_THROWS_AS(load_config(frac_n.path.string()), ConfigError);
    TempJson neg_n(R"({"elements": {"n": -3}})");
    CHECK_THROWS_AS(load_config(neg_n.path.string()), ConfigError);
    TempJson text_r1(R"({"geometry": {"r1": "wide"}})");
    CHECK_THROWS_AS(load_config(text_r1.path.string()), ConfigError);
    TempJson bad_vec(R"({"geometry": {"bs_position": [1, 2]}})");
    CHECK_THROWS_AS(load_config(bad_vec.path.string()), ConfigError);
    TempJson not_object(R"([1, 2, 3])");
    CHECK_THROWS_AS(load_config(not_object.path.string()), ConfigError);
    TempJson syntax(R"({"geometry": )");
    CHECK_THROWS_AS(load_config(syntax.path.string()), ConfigError);
    // validation runs on the merged result
    TempJson invalid(R"({"geometry": {"r2": 50}})");
    CHECK_THROWS_AS(load_config(invalid.path.string()), ConfigError);
}

TEST_CASE("missing file is a config error") {
    CHECK_THROWS_WITH(
        load_config("/nonexistent/starnoma.json"),
        Catch::Matchers::ContainsSubstring("not readable"));
}
