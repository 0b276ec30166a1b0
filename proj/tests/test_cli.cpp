#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "qtt/cli.hpp"
#include "qtt/serialize.hpp"
#include "qtt/sweep.hpp"

using namespace qtt;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = std::string(QTT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliRun run;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe))
        run.output.append(buf, n);
    const int status = pclose(pipe);
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return run;
}

std::vector<SweepRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

} // namespace

TEST_CASE("compute: free propagation record") {
    const CliRun run = run_cli("compute --energy 0.5 --v0 0 --v1 0 --width 2");
    REQUIRE(run.exit_code == 0);
    const auto records = parse_csv(run.output);
    REQUIRE(records.size() == 1);
    CHECK(records[0].t_prob == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(records[0].absorption == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(records[0].tau_analytic == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("compute: real-barrier transmission against the textbook value") {
    const CliRun run = run_cli("compute --energy 0.5 --v0 1 --v1 0 --width 2");
    REQUIRE(run.exit_code == 0);
    const auto records = parse_csv(run.output);
    REQUIRE(records.size() == 1);
    const double mu = 1.0, s = std::sinh(mu * 2.0);
    const double expected = 1.0 / (1.0 + s * s); // v0^2/(4E(v0-E)) = 1 here
    CHECK(records[0].t_prob == doctest::Approx(expected).epsilon(1e-9));
    CHECK(records[0].absorption == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("compute: limiting speed appears in the record") {
    const CliRun run = run_cli("compute --energy 0.5 --v0 1 --v1 0.5 --width 10");
    REQUIRE(run.exit_code == 0);
    const auto records = parse_csv(run.output);
    REQUIRE(records.size() == 1);
    CHECK(records[0].v_limit == doctest::Approx(3.1075479480600747).epsilon(1e-10));
    CHECK(std::abs(records[0].v_limit - 3.10755) < 1e-4);
}

TEST_CASE("compute: json format carries the unbounded-speed marker") {
    const CliRun run = run_cli("compute --energy 0.5 --v0 1 --v1 0 --width 2 --format json");
    REQUIRE(run.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(run.output);
    CHECK(j.at("v_limit").is_null());
    CHECK(j.at("v_limit_unbounded").get<bool>() == true);
    CHECK(j.at("T").get<double>() == doctest::Approx(0.07065082485316446).epsilon(1e-9));
}

TEST_CASE("sweep: row count, inf token and byte-identical reruns") {
    const std::string args =
        "sweep --axis width --start 0.5 --stop 30 --count 60 --energy 0.5 --v0 1 --v1 0";
    const CliRun first = run_cli(args);
    REQUIRE(first.exit_code == 0);

    std::istringstream in(first.output);
    std::string line;
    int lines = 0;
    bool saw_inf = false;
    while (std::getline(in, line)) {
        if (lines > 0 && line.find(",inf,") != std::string::npos) saw_inf = true;
        ++lines;
    }
    CHECK(lines == 61); // header + 60 rows
    CHECK(saw_inf);     // v1 = 0 rows carry the literal token for v_limit

    const CliRun second = run_cli(args);
    CHECK(second.output == first.output);
}

TEST_CASE("sweep: CSV output equals the in-process records bit for bit") {
    const CliRun run = run_cli(
        "sweep --axis width --start 1 --stop 12 --count 12 --energy 0.5 --v0 1 --v1 0.5");
    REQUIRE(run.exit_code == 0);
    const auto from_cli = parse_csv(run.output);

    SweepSpec spec;
    spec.axis = SweepAxis::width;
    spec.start = 1.0;
    spec.stop = 12.0;
    spec.count = 12;
    spec.energy = 0.5;
    spec.v0 = 1.0;
    spec.v1 = 0.5;
    spec.width = 2.0;
    const auto in_process = run_sweep(spec);

    REQUIRE(from_cli.size() == in_process.size());
    for (std::size_t i = 0; i < in_process.size(); ++i) {
        CHECK(from_cli[i].axis_value == in_process[i].axis_value);
        CHECK(from_cli[i].t_prob == in_process[i].t_prob);
        CHECK(from_cli[i].tau_analytic == in_process[i].tau_analytic);
        CHECK(from_cli[i].tau_numeric == in_process[i].tau_numeric);
        CHECK(from_cli[i].v_limit == in_process[i].v_limit);
    }
}

TEST_CASE("sweep: json array parses and mirrors the column names") {
    const CliRun run = run_cli(
        "sweep --axis v1 --start 0.1 --stop 1 --count 5 --energy 0.5 --v0 1 --width 2 "
        "--format json");
    REQUIRE(run.exit_code == 0);
    const nlohmann::json arr = nlohmann::json::parse(run.output);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 5);
    for (const auto& rec : arr) {
        CHECK(rec.contains("axis_value"));
        CHECK(rec.contains("E"));
        CHECK(rec.contains("tau_analytic"));
        CHECK(rec.contains("flags"));
        CHECK(rec.at("absorption").get<double>() > 0.0);
    }
}

TEST_CASE("hartman: saturating and linear-growth reports") {
    const CliRun sat = run_cli("hartman --energy 0.5 --v0 1 --v1 0 --start 1 --stop 40 --count 60");
    REQUIRE(sat.exit_code == 0);
    const nlohmann::json js = nlohmann::json::parse(sat.output);
    CHECK(js.at("regime").get<std::string>() == "saturating");
    CHECK(js.at("saturation_value").get<double>() == doctest::Approx(2.0).epsilon(1e-3));

    const CliRun lin =
        run_cli("hartman --energy 0.5 --v0 1 --v1 0.5 --start 9.2 --stop 27.3 --count 30");
    REQUIRE(lin.exit_code == 0);
    const nlohmann::json jl = nlohmann::json::parse(lin.output);
    CHECK(jl.at("regime").get<std::string>() == "linear-growth");
    CHECK(jl.at("slope_rel_error").get<double>() < 0.01);
}

TEST_CASE("hartman: a shallow width range is undetermined, exit 0") {
    const CliRun run =
        run_cli("hartman --energy 0.5 --v0 1 --v1 0.5 --start 0.5 --stop 2.7 --count 20");
    REQUIRE(run.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(run.output);
    CHECK(j.at("regime").get<std::string>() == "undetermined");
    CHECK(j.contains("note"));
}

TEST_CASE("exit codes distinguish usage, domain and validation problems") {
    CHECK(cli::kExitUsage != cli::kExitDomain);
    CHECK(cli::kExitDomain != cli::kExitValidation);
    CHECK(cli::kExitUsage != cli::kExitValidation);

    SUBCASE("unknown flag is a usage error") {
        const CliRun run = run_cli("compute --no-such-flag 1");
        CHECK(run.exit_code == cli::kExitUsage);
    }
    SUBCASE("unknown subcommand is a usage error") {
        const CliRun run = run_cli("frobnicate");
        CHECK(run.exit_code == cli::kExitUsage);
    }
    SUBCASE("non-positive energy is a domain error") {
        const CliRun run = run_cli("compute --energy -1 --v0 1 --v1 0 --width 2");
        CHECK(run.exit_code == cli::kExitDomain);
    }
    SUBCASE("degenerate physics point names the flag") {
        const CliRun run = run_cli("compute --energy 1 --v0 1 --v1 0 --width 2");
        CHECK(run.exit_code == cli::kExitDomain);
        CHECK(run.output.find("degenerate") != std::string::npos);
    }
}

TEST_CASE("electron units: dimensionless outputs invariant, times scale exactly") {
    // The same dimensionless problem expressed in eV/nm: E_nat = E_eV/(2C),
    // lengths unchanged, so T, R, absorption match and times scale by 2C.
    const double c2 = 2.0 * cli::kHbarSqOver2MeEvNm2;
    const double e_ev = 0.25, v0_ev = 0.5, v1_ev = 0.1, a_nm = 1.2;

    const UnitSystem natural = cli::units_for_mode("natural");
    const UnitSystem electron = cli::units_for_mode("electron");

    const SweepRecord nat =
        compute_record(e_ev / c2, {v0_ev / c2, v1_ev / c2, a_nm}, natural);
    const SweepRecord ele = compute_record(e_ev, {v0_ev, v1_ev, a_nm}, electron);

    CHECK(ele.t_prob == doctest::Approx(nat.t_prob).epsilon(1e-12));
    CHECK(ele.r_prob == doctest::Approx(nat.r_prob).epsilon(1e-12));
    CHECK(ele.absorption == doctest::Approx(nat.absorption).epsilon(1e-12));
    CHECK(ele.phi_unwrapped == doctest::Approx(nat.phi_unwrapped).epsilon(1e-12));
    // k, xi, mu are per length in both schemes and must agree exactly
    CHECK(ele.k == doctest::Approx(nat.k).epsilon(1e-12));
    CHECK(ele.xi == doctest::Approx(nat.xi).epsilon(1e-12));
    CHECK(ele.mu == doctest::Approx(nat.mu).epsilon(1e-12));
    // times in hbar/eV = natural times / (2C); speeds the inverse
    CHECK(ele.tau_analytic * c2 == doctest::Approx(nat.tau_analytic).epsilon(1e-12));
    CHECK(ele.tau_asy * c2 == doctest::Approx(nat.tau_asy).epsilon(1e-12));
    CHECK(ele.v_limit == doctest::Approx(nat.v_limit * c2).epsilon(1e-12));
}

TEST_CASE("electron units through the CLI") {
    const CliRun run =
        run_cli("compute --energy 0.25 --v0 0.5 --v1 0.1 --width 1.2 --units electron");
    REQUIRE(run.exit_code == 0);
    const auto records = parse_csv(run.output);
    REQUIRE(records.size() == 1);
    const double c2 = 2.0 * cli::kHbarSqOver2MeEvNm2;
    const SweepRecord nat = compute_record(0.25 / c2, {0.5 / c2, 0.1 / c2, 1.2},
                                           cli::units_for_mode("natural"));
    CHECK(records[0].t_prob == doctest::Approx(nat.t_prob).epsilon(1e-12));
    CHECK(records[0].tau_analytic * c2 == doctest::Approx(nat.tau_analytic).epsilon(1e-12));
}

TEST_CASE("config file supplies defaults, flags override") {
    const std::string path = "qtt_test_config.json";
    {
        std::ofstream out(path);
        out << R"({"energy": 0.5, "v0": 1.0, "v1": 0.5, "width": 10.0, "format": "json"})";
    }

    SUBCASE("config values are used") {
        const CliRun run = run_cli("compute --config " + path);
        REQUIRE(run.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(run.output);
        CHECK(j.at("a").get<double>() == 10.0);
        CHECK(j.at("V1").get<double>() == 0.5);
    }
    SUBCASE("flags win over the config") {
        const CliRun run = run_cli("compute --config " + path + " --v1 0");
        REQUIRE(run.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(run.output);
        CHECK(j.at("V1").get<double>() == 0.0);
        CHECK(j.at("absorption").get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    }
    std::remove(path.c_str());
}

TEST_CASE("missing config file is a usage error") {
    const CliRun run = run_cli("compute --config /no/such/file.json");
    CHECK(run.exit_code == cli::kExitUsage);
}
