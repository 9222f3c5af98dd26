#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "egf/config.hpp"
#include "egf/errors.hpp"
#include "egf/scenarios.hpp"
#include "egf/solvers.hpp"

using namespace egf;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("key-value config parsing") {
    const auto cfg = parse_config_text("# a comment\n"
                                       "grid = 0,6.28,128\n"
                                       "t_end = 1.5   # trailing comment\n"
                                       "flow = ent:1\n"
                                       "\n"
                                       "orientation = -1\n");
    CHECK(config_string(cfg, "flow", "") == "ent:1");
    CHECK(config_double(cfg, "t_end", 0.0) == 1.5);
    CHECK(config_long(cfg, "orientation", 0) == -1);
    CHECK(config_double(cfg, "missing", 7.0) == 7.0);

    CHECK_THROWS_AS(parse_config_text("novalue\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config_text("= 3\n"), InvalidInput);
    CHECK_THROWS_AS(config_double(cfg, "flow", 0.0), InvalidInput);

    const auto g = parse_grid_spec("0,6.28,128");
    CHECK(g.x_min == 0.0);
    CHECK(g.x_max == doctest::Approx(6.28));
    CHECK(g.cells == 128);
    CHECK_THROWS_AS(parse_grid_spec("0,1"), InvalidInput);
    CHECK_THROWS_AS(parse_grid_spec("0,1,4"), InvalidInput);  // too few cells
    CHECK_THROWS_AS(parse_grid_spec("1,0,100"), InvalidInput);
}

TEST_CASE("profile specs") {
    const auto f = parse_profile("sin:amp=0.5,offset=2,freq=2");
    CHECK(f(0.0) == doctest::Approx(2.0));
    CHECK(f(0.25 * std::acos(-1.0)) == doctest::Approx(2.5));
    const auto lin = parse_profile("linear:slope=-1");
    CHECK(lin(0.3) == doctest::Approx(-0.3));
    const auto inv = parse_profile("inv:scale=-2");
    CHECK(inv(4.0) == doctest::Approx(-0.5));
    const auto c = parse_profile("const:value=3.5");
    CHECK(c(123.0) == 3.5);
    CHECK_THROWS_AS(parse_profile("nope"), InvalidInput);
    CHECK_THROWS_AS(parse_profile("sin:bogus=1"), InvalidInput);
}

TEST_CASE("flow specs") {
    CHECK(parse_flow("ricci", 2).name() == "ricci");
    CHECK(parse_flow("ent:1", 3).name() == "ent1");
    CHECK(parse_flow("power:1", 2).name() == "power1");
    const auto c = parse_flow("constant:0.25", 2);
    CHECK(c.f(0, {1.0, 1.0}, 0.0) == 0.25);
    const auto poly = parse_flow("psi-poly:1,0,2", 1); // 1 + 2 x^2
    CHECK(poly.f(0, {3.0}, 0.0) == doctest::Approx(19.0));
    const auto mono = parse_flow("monomial:coeff=2;alpha=1,1", 2);
    CHECK(mono.f(1, {3.0, 5.0}, 0.0) == doctest::Approx(30.0));
    CHECK_THROWS_AS(parse_flow("bogus", 2), InvalidInput);
    CHECK_THROWS_AS(parse_flow("ent:3", 3), InvalidInput);
    CHECK_THROWS_AS(parse_flow("psi:quartic", 1), InvalidInput);
}

TEST_CASE("scenario configuration guards") {
    ScenarioConfig cfg;
    cfg.name = "nope";
    CHECK_THROWS_AS(run_scenario(cfg), InvalidInput);

    cfg = ScenarioConfig{};
    cfg.cells = 8; // too few
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);

    cfg = ScenarioConfig{};
    cfg.scheme = "magic";
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);

    CHECK(scenario_names().size() == 9);
}

TEST_CASE("field CSV format") {
    TempDir tmp("egf_csv_test");
    const Grid g = Grid::over(0.0, 1.0, 16, Boundary::Extrapolate);
    FieldHistory h;
    h.times = {0.0, 0.5};
    h.fields = {ScalarField(g, [](double x) { return x; }),
                ScalarField(g, [](double x) { return 2.0 * x; })};
    const auto path = (tmp.path / "field.csv").string();
    write_field_csv(path, h);
    const std::string text = slurp(path);
    CHECK(text.substr(0, 10) == "x,t,value\n");
    CHECK(text.find("\r") == std::string::npos); // line-feed endings only
    std::size_t lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + 2 * 16);
    CHECK(text.find("0,0,0\n") != std::string::npos);
    CHECK(text.find("1,0.5,2\n") != std::string::npos);
}

TEST_CASE("report serialization") {
    RunReport r;
    r.scenario = "demo";
    r.classification = "strictly-hyperbolic";
    r.blowup_time = kInfiniteTime;
    r.achieved_t = 1.0;
    r.metrics["alpha"] = MetricResult{1e-9, 1e-6, true};
    r.files = {"a.csv"};
    const std::string j = r.to_json_string();
    CHECK(j.find("\"blowup_time\": \"inf\"") != std::string::npos);
    CHECK(j.find("\"scenario\": \"demo\"") != std::string::npos);
    CHECK(j.find("\"max_abs_err\"") != std::string::npos);
    CHECK(j.find("\"tolerance\"") != std::string::npos);
    CHECK(j.find("\"pass\"") != std::string::npos);
    CHECK(j.find("\"files\"") != std::string::npos);
    CHECK(r.all_pass());
    r.metrics["beta"] = MetricResult{2.0, 1.0, false};
    CHECK_FALSE(r.all_pass());
    r.blowup_time = 4.5;
    CHECK(r.to_json_string().find("\"blowup_time\": 4.5") != std::string::npos);
}

TEST_CASE("generic solve") {
    SUBCASE("scalar conservation run writes fields and reports") {
        TempDir tmp("egf_solve_test");
        ScenarioConfig cfg;
        cfg.x_min = 0.0;
        cfg.x_max = 6.283185307179586;
        cfg.cells = 256;
        cfg.t_end = 0.5;
        cfg.t_samples = 5;
        cfg.flow = "psi:lambda2";
        cfg.out_dir = tmp.path.string();
        ConfigMap extra{{"n", "1"}, {"lambda_init", "sin:amp=0.2,offset=1"}};
        const auto report = run_generic_solve(cfg, extra);
        CHECK(report.achieved_t == doctest::Approx(0.5));
        CHECK_FALSE(report.blowup_truncated);
        CHECK(report.classification == "strictly-hyperbolic");
        CHECK(std::filesystem::exists(tmp.path / "lambda.csv"));
        CHECK(std::filesystem::exists(tmp.path / "report.json"));
    }
    SUBCASE("fd run on a system") {
        ScenarioConfig cfg;
        cfg.x_min = 0.0;
        cfg.x_max = 6.283185307179586;
        cfg.cells = 200;
        cfg.t_end = 0.1;
        cfg.t_samples = 3;
        cfg.flow = "ricci";
        cfg.scheme = "fd";
        ConfigMap extra{{"n", "2"},
                        {"tau1_init", "sin:amp=0.1,offset=3"},
                        {"tau2_init", "sin:amp=0.1,offset=5"}};
        const auto report = run_generic_solve(cfg, extra);
        CHECK(report.achieved_t == doctest::Approx(0.1));
    }
    SUBCASE("characteristics scheme on a monomial flow") {
        ScenarioConfig cfg;
        cfg.x_min = 0.0;
        cfg.x_max = 6.283185307179586;
        cfg.cells = 400;
        cfg.t_end = 0.5;
        cfg.t_samples = 3;
        cfg.flow = "monomial:coeff=1;alpha=1,0";
        cfg.scheme = "characteristics";
        ConfigMap extra{{"n", "2"},
                        {"tau1_init", "sin:amp=0.1,offset=1"},
                        {"tau2_init", "sin:amp=0.1,offset=2"}};
        const auto report = run_generic_solve(cfg, extra);
        CHECK(report.achieved_t == doctest::Approx(0.5));
        CHECK(std::isfinite(report.blowup_time)); // compressive somewhere
    }
    SUBCASE("not-hyperbolic initial data is refused") {
        ScenarioConfig cfg;
        cfg.x_min = 0.0;
        cfg.x_max = 6.283185307179586;
        cfg.cells = 64;
        cfg.t_end = 0.1;
        cfg.flow = "ricci";
        ConfigMap extra{{"n", "2"},
                        {"tau1_init", "const:value=0"},
                        {"tau2_init", "const:value=2"}};
        CHECK_THROWS_AS(run_generic_solve(cfg, extra), NotHyperbolicError);
    }
    SUBCASE("missing pieces are invalid config") {
        ScenarioConfig cfg;
        CHECK_THROWS_AS(run_generic_solve(cfg, {}), InvalidInput);
        cfg.x_min = 0.0;
        cfg.x_max = 1.0;
        cfg.cells = 64;
        cfg.t_end = 0.1;
        cfg.flow = "psi:lambda";
        CHECK_THROWS_AS(run_generic_solve(cfg, {{"n", "1"}}), InvalidInput);
    }
}

TEST_CASE("classification maps") {
    SUBCASE("the minimal mean curvature stripe for n = 2") {
        // centers include tau_1 = 0, where the system degenerates
        const auto map = hyperbolicity_map("ricci", 2, -1.05, 1.05, 21, 1.0, 3.0, 5);
        std::size_t not_hyp = 0;
        for (std::size_t ai = 0; ai < 21; ++ai)
            for (std::size_t bi = 0; bi < 5; ++bi) {
                const auto kind = map.cells[ai * 5 + bi];
                if (map.a_axis[ai] == doctest::Approx(0.0).epsilon(1e-12)) {
                    CHECK(kind == Hyperbolicity::NotHyperbolic);
                    ++not_hyp;
                } else {
                    CHECK(kind == Hyperbolicity::Strictly);
                }
            }
        CHECK(not_hyp == 5);
    }
    SUBCASE("parallel sweep gives the same map") {
        const auto a = hyperbolicity_map("ricci", 3, -4.0, 4.0, 24, -1.5, 1.5, 24, false);
        const auto b = hyperbolicity_map("ricci", 3, -4.0, 4.0, 24, -1.5, 1.5, 24, true);
        CHECK(a.disagreements == 0);
        CHECK(b.disagreements == 0);
        REQUIRE(a.cells.size() == b.cells.size());
        for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i] == b.cells[i]);
    }
    SUBCASE("dimension guard") {
        CHECK_THROWS_AS(hyperbolicity_map("ricci", 4, 0, 1, 4, 0, 1, 4), InvalidInput);
    }
}

TEST_CASE("scenario runs are deterministic") {
    ScenarioConfig cfg;
    cfg.name = "umbilical_burgers";
    cfg.x_min = 0.0;
    cfg.x_max = 6.283185307179586;
    cfg.cells = 200;
    cfg.t_end = 1.0;
    cfg.t_samples = 21;
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    CHECK(a.to_json_string() == b.to_json_string());
    CHECK(a.achieved_t <= std::min(cfg.t_end, a.blowup_time));
}
