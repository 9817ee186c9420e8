#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "cylarm/commands.hpp"
#include "support.hpp"

using namespace cylarm;

namespace {

std::filesystem::path write_config(const testing::TempDir& dir, const std::string& text) {
    const auto path = dir.path() / "config.json";
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes the trace, metrics and two figures") {
    testing::TempDir dir("sim");
    std::ostringstream out, err;
    const int code = cmd_simulate({"constant", "asmc-nn", std::nullopt, dir.path()}, out, err);
    INFO(err.str());
    REQUIRE(code == kExitOk);
    CHECK(std::filesystem::exists(dir.path() / "constant_asmc-nn.csv"));
    CHECK(std::filesystem::exists(dir.path() / "constant_asmc-nn_metrics.json"));
    CHECK(std::filesystem::exists(dir.path() / "constant_asmc-nn_response.svg"));
    CHECK(std::filesystem::exists(dir.path() / "constant_asmc-nn_error.svg"));
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
    CHECK(files == 4);
}

TEST_CASE("simulate twice gives identical bytes") {
    testing::TempDir a("det_a"), b("det_b");
    std::ostringstream out, err;
    REQUIRE(cmd_simulate({"disturbance", "smc", std::nullopt, a.path()}, out, err) == kExitOk);
    REQUIRE(cmd_simulate({"disturbance", "smc", std::nullopt, b.path()}, out, err) == kExitOk);
    for (const auto& e : std::filesystem::directory_iterator(a.path())) {
        CHECK(testing::slurp(e.path()) == testing::slurp(b.path() / e.path().filename()));
    }
}

TEST_CASE("exit codes") {
    testing::TempDir dir("codes");
    std::ostringstream out, err;
    CHECK(cmd_simulate({"square", "smc", std::nullopt, dir.path()}, out, err) == kExitConfig);
    CHECK(err.str().find("constant, uncertain, sinusoidal, disturbance") != std::string::npos);
    CHECK(cmd_simulate({"constant", "lqr", std::nullopt, dir.path()}, out, err) == kExitConfig);
    CHECK(cmd_compare({"sinusoidal", {"smc"}, std::nullopt, dir.path()}, out, err) == kExitConfig);
    CHECK(cmd_compare({"sinusoidal", {"smc", "smc"}, std::nullopt, dir.path()}, out, err) == kExitConfig);

    const auto bad = write_config(dir, R"({"gains": {"asmc-nn": {"epsilon": 0}}})");
    std::ostringstream verr;
    CHECK(cmd_verify(bad, out, verr) == kExitConfig);
    CHECK(verr.str().find("gains.asmc-nn.epsilon") != std::string::npos);

    const auto blocker = dir.path() / "file";
    std::ofstream(blocker) << "x";
    CHECK(cmd_simulate({"constant", "smc", std::nullopt, blocker / "sub"}, out, err) == kExitIo);

    const auto literal = write_config(dir, R"({"gains": {"asmc-nn": {"reaching_sign": -1}}})");
    std::ostringstream serr;
    CHECK(cmd_simulate({"constant", "asmc-nn", literal, dir.path() / "lit"}, out, serr) == kExitAborted);
    CHECK(serr.str().find("aborted") != std::string::npos);
}

TEST_CASE("verify") {
    std::ostringstream out, err;
    CHECK(cmd_verify(std::nullopt, out, err) == kExitOk);
    CHECK(out.str().find("FAIL") == std::string::npos);
    for (const char* name : {"dynamics_round_trip", "energy_conservation", "weight_freeze", "lyapunov_decrease",
                             "determinism"}) {
        CHECK(out.str().find(std::string("PASS ") + name) != std::string::npos);
    }

    testing::TempDir dir("verify");
    const auto literal = write_config(dir, R"({"gains": {"asmc-nn": {"reaching_sign": -1}}})");
    std::ostringstream lout;
    CHECK(cmd_verify(literal, lout, err) == kExitVerifyFailed);
    CHECK(lout.str().find("FAIL lyapunov_decrease") != std::string::npos);
    CHECK(lout.str().find("reaching_sign = -1") != std::string::npos);
}

TEST_CASE("compare") {
    testing::TempDir dir("cmp");
    std::ostringstream out, err;
    REQUIRE(cmd_compare({"sinusoidal", {"smc", "asmc-nn"}, std::nullopt, dir.path()}, out, err) == kExitOk);
    const std::string csv = testing::slurp(dir.path() / "sinusoidal_compare.csv");
    std::size_t rms_rows = 0;
    for (std::size_t p = csv.find(",rms_error,"); p != std::string::npos; p = csv.find(",rms_error,", p + 1)) {
        ++rms_rows;
    }
    CHECK(rms_rows == 6);
    CHECK(std::filesystem::exists(dir.path() / "sinusoidal_compare_response.svg"));
    CHECK(std::filesystem::exists(dir.path() / "sinusoidal_compare_error.svg"));
    CHECK(std::filesystem::exists(dir.path() / "sinusoidal_compare.txt"));
    CHECK(out.str().find("asmc-nn") != std::string::npos);

    std::ostringstream out3;
    REQUIRE(cmd_compare({"constant", {"pd", "smc", "asmc-nn"}, std::nullopt, dir.path()}, out3, err) == kExitOk);
    const std::string table = testing::slurp(dir.path() / "constant_compare.csv");
    for (const char* who : {"pd", "smc", "asmc-nn"}) {
        for (int j = 1; j <= 3; ++j) {
            CHECK(table.find(std::string(who) + "," + std::to_string(j) + ",settling_time,") != std::string::npos);
        }
    }
}

TEST_CASE("output directory precedence") {
    WorkbenchConfig cfg;
    cfg.output_dir = "from_config";
    ::unsetenv("WORKBENCH_OUT");
    CHECK(resolve_output_dir(std::nullopt, cfg) == "from_config");
    ::setenv("WORKBENCH_OUT", "from_env", 1);
    CHECK(resolve_output_dir(std::nullopt, cfg) == "from_env");
    CHECK(resolve_output_dir(std::filesystem::path("from_cli"), cfg) == "from_cli");
    ::unsetenv("WORKBENCH_OUT");
}

TEST_CASE("print defaults") {
    std::ostringstream out;
    CHECK(cmd_print_defaults(out) == kExitOk);
    CHECK(out.str().find("\"asmc-nn\"") != std::string::npos);
    CHECK(out.str().find("\"reaching_sign\": 1") != std::string::npos);
}

}
