#include <doctest.h>

#include <clocale>

#include "cbs/config.hpp"
#include "cbs/io.hpp"

using namespace cbs;

TEST_CASE("config round trip") {
    RunConfig c;
    c.Jg = "3/2";
    c.mode = "full";
    c.Omega = 0.1 + 0.2;
    c.delta = -5.25;
    c.nu_min = -15.0;
    c.nu_max = 15.0;
    c.step = 0.01;
    c.sweep = "s";
    c.values = {"0.0001", "1", "162"};
    c.output = "out.csv";
    c.format = "json";
    c.threads = 4;
    c.rel_tol = 1e-7;
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(parse_config(serialize_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("config parsing") {
    const RunConfig c = parse_config("# comment\nJg = 1/2\nOmega=18 # trailing\n\nthreads = auto\n");
    CHECK(c.Jg == "1/2");
    CHECK(c.Omega == 18.0);
    CHECK(c.threads == 0);
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("Omega = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("Omega = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("step = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("nu_min = 3\nnu_max = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("Jg = 1/3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("Jg = 1/2\nmode = effective\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("format = xml\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("channel = hv\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("values = 1,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep = s\nvalues = 1,-2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("threads = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("Omega\n"), ConfigError);
}

TEST_CASE("auto mode and grid") {
    RunConfig c;
    CHECK(resolve_mode(c, HalfInt::integer(5)) == LevelMode::full);
    CHECK(resolve_mode(c, HalfInt::from_twice(11)) == LevelMode::effective);
    c.nu_min = -1.0;
    c.nu_max = 1.0;
    c.step = 0.5;
    const auto g = config_grid(c);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == 1.0);
}

TEST_CASE("output is locale independent") {
    const char* old = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = old ? old : "C";
    std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
    CHECK(format_fixed(1.5) == "1.50000000000e+00");
    CHECK(format_fixed(-0.0) == "0.00000000000e+00");
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_double("2.5") == 2.5);
    std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("csv and json records") {
    SpectrumRecord r;
    r.config.Jg = "1";
    r.mode = "full";
    r.s = 50.0;
    r.result.grid = {-1.0, 0.0, 1.0};
    r.result.ladder_in = {0.1, 0.2, 0.1};
    r.result.crossed_in = {0.05, 0.1, 0.05};
    r.result.alpha = 1.5;
    const std::string csv = spectrum_csv(r);
    CHECK(csv.find("nu,ladder_inelastic,crossed_inelastic\n") != std::string::npos);
    CHECK(csv.find("# alpha=1.50000000000e+00") != std::string::npos);
    CHECK(csv.find("# s=5.00000000000e+01") != std::string::npos);
    CHECK(csv.find("# version=") != std::string::npos);
    const std::string js = spectrum_json(r);
    CHECK(js.find("\"ladder_inelastic\"") != std::string::npos);
    CHECK(js.find("\"alpha\": 1.5") != std::string::npos);

    EnhancementRecord e;
    e.config.sweep = "s";
    e.rows = {{"1", 1.9, 0.1, 0.1, 0.2, 0.1}, {"1", 1.9, 0.1, 0.1, 0.2, 0.1}};
    const std::string ecsv = enhancement_csv(e);
    CHECK(ecsv.find("sweep_value,alpha,L_el,C_el,L_in,C_in\n") != std::string::npos);
    CHECK(ecsv.find("1,1.90000000000e+00") != ecsv.rfind("1,1.90000000000e+00"));
    CHECK_THROWS_AS(write_output("/nonexistent-dir/x.csv", "x"), ConfigError);
}
