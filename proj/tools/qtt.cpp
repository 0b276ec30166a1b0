#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtt/cli.hpp"
#include "qtt/serialize.hpp"
#include "qtt/sweep.hpp"
#include "qtt/validate.hpp"

namespace {

using qtt::cli::kExitDomain;
using qtt::cli::kExitOk;
using qtt::cli::kExitUsage;
using qtt::cli::kExitValidation;

struct Options {
    double energy = 0.5;
    double v0 = 1.0;
    double v1 = 0.0;
    double width = 2.0;
    std::string axis = "width";
    double start = 1.0;
    double stop = 10.0;
    int count = 50;
    bool log_spacing = false;
    std::string units = "natural";
    std::string format = "csv";
    std::string output;
};

// Flags override the JSON config file, the config overrides defaults.
// The config is applied by pre-loading it as defaults before parsing.
void apply_config(Options& opt, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qtt::domain_error("cannot open config file '" + path + "'");
    nlohmann::json cfg;
    in >> cfg;
    if (!cfg.is_object()) throw qtt::domain_error("config must be a flat JSON object");

    const auto num = [&cfg](const char* key, double& target) {
        if (cfg.contains(key)) target = cfg.at(key).get<double>();
    };
    num("energy", opt.energy);
    num("v0", opt.v0);
    num("v1", opt.v1);
    num("width", opt.width);
    num("start", opt.start);
    num("stop", opt.stop);
    if (cfg.contains("count")) opt.count = cfg.at("count").get<int>();
    if (cfg.contains("log")) opt.log_spacing = cfg.at("log").get<bool>();
    const auto str = [&cfg](const char* key, std::string& target) {
        if (cfg.contains(key)) target = cfg.at(key).get<std::string>();
    };
    str("axis", opt.axis);
    str("units", opt.units);
    str("format", opt.format);
    str("output", opt.output);
}

std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return {};
}

int write_result(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << output_path << "'\n";
        return kExitDomain;
    }
    out << text;
    return kExitOk;
}

qtt::SweepAxis parse_axis(const std::string& axis) {
    if (axis == "energy") return qtt::SweepAxis::energy;
    if (axis == "width") return qtt::SweepAxis::width;
    if (axis == "v0") return qtt::SweepAxis::v0;
    if (axis == "v1") return qtt::SweepAxis::v1;
    throw qtt::domain_error("unknown sweep axis '" + axis + "'");
}

int run_compute(const Options& opt) {
    const qtt::UnitSystem units = qtt::cli::units_for_mode(opt.units);
    const qtt::BarrierConfig barrier{opt.v0, opt.v1, opt.width};
    qtt::SweepRecord rec = qtt::compute_record(opt.energy, barrier, units);
    rec.axis_value = opt.energy;
    if (rec.flags.degenerate) {
        std::cerr << "error: degenerate point (" << rec.flags.to_string()
                  << "): the interior wavenumber or a precondition vanishes\n";
        return kExitDomain;
    }

    std::ostringstream out;
    if (opt.format == "json") {
        out << qtt::to_json(rec) << '\n';
    } else if (opt.format == "csv") {
        const qtt::SweepRecord records[] = {rec};
        qtt::write_csv(out, records);
    } else {
        throw qtt::domain_error("unknown format '" + opt.format + "'");
    }
    return write_result(out.str(), opt.output);
}

int run_sweep(const Options& opt) {
    qtt::SweepSpec spec;
    spec.axis = parse_axis(opt.axis);
    spec.start = opt.start;
    spec.stop = opt.stop;
    spec.count = opt.count;
    spec.spacing = opt.log_spacing ? qtt::SweepSpacing::logarithmic : qtt::SweepSpacing::linear;
    spec.energy = opt.energy;
    spec.v0 = opt.v0;
    spec.v1 = opt.v1;
    spec.width = opt.width;
    spec.units = qtt::cli::units_for_mode(opt.units);

    const std::vector<qtt::SweepRecord> records = qtt::run_sweep(spec);
    std::ostringstream out;
    if (opt.format == "json") {
        out << qtt::to_json(records) << '\n';
    } else if (opt.format == "csv") {
        qtt::write_csv(out, records);
    } else {
        throw qtt::domain_error("unknown format '" + opt.format + "'");
    }
    return write_result(out.str(), opt.output);
}

int run_hartman(const Options& opt) {
    const qtt::UnitSystem units = qtt::cli::units_for_mode(opt.units);
    const qtt::HartmanReport report = qtt::hartman_analysis(
        opt.energy, opt.v0, opt.v1, qtt::WidthRange{opt.start, opt.stop, opt.count}, units);
    return write_result(qtt::to_json(report) + "\n", opt.output);
}

int run_validate() {
    const std::vector<qtt::CheckResult> results = qtt::run_validation_suite();
    bool all_passed = true;
    double total = 0.0;
    for (const qtt::CheckResult& res : results) {
        std::cout << (res.passed ? "PASS" : "FAIL") << "  " << res.name << "  ("
                  << res.seconds << " s)\n      " << res.detail << '\n';
        all_passed &= res.passed;
        total += res.seconds;
    }
    std::cout << (all_passed ? "all checks passed" : "some checks FAILED") << " in " << total
              << " s\n";
    return all_passed ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qtt — phase times for tunnelling through an absorptive square barrier\n"
        "Computes transmission amplitudes, channel probabilities and the\n"
        "group-delay tunnelling time for V(x) = v0 - i*v1 on (0, width)."};
    app.require_subcommand(1);

    Options opt;
    std::string config_path;

    const auto add_common = [&](CLI::App* cmd, bool with_point, bool with_sweep) {
        if (with_point) {
            cmd->add_option("--energy", opt.energy, "incident energy (eV in electron mode)");
            cmd->add_option("--v0", opt.v0, "real barrier height");
            cmd->add_option("--v1", opt.v1, "absorption strength (>= 0)");
        }
        if (with_sweep) {
            cmd->add_option("--start", opt.start, "first axis value");
            cmd->add_option("--stop", opt.stop, "last axis value");
            cmd->add_option("--count", opt.count, "number of grid points");
        }
        cmd->add_option("--units", opt.units,
                        "units mode: natural (hbar=m=1) or electron (energies in eV, lengths "
                        "in nm via hbar^2/(2 m_e) = 0.0380998 eV nm^2; times in hbar/eV, "
                        "speeds in nm eV/hbar)")
            ->check(CLI::IsMember({"natural", "electron"}));
        cmd->add_option("--output", opt.output, "output file (default: stdout)");
        cmd->add_option("--config", config_path, "JSON config file; flags override it");
    };

    CLI::App* compute = app.add_subcommand("compute", "one parameter point, full record");
    add_common(compute, true, false);
    compute->add_option("--width", opt.width, "barrier width (nm in electron mode)");
    compute->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter axis");
    add_common(sweep, true, true);
    sweep->add_option("--width", opt.width, "barrier width (fixed unless axis=width)");
    sweep->add_option("--axis", opt.axis, "sweep axis: energy, width, v0 or v1")
        ->check(CLI::IsMember({"energy", "width", "v0", "v1"}));
    sweep->add_flag("--log", opt.log_spacing, "logarithmic axis spacing");
    sweep->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* hartman = app.add_subcommand(
        "hartman", "classify tau(width): saturation vs linear growth (JSON report)");
    add_common(hartman, true, true);

    CLI::App* validate =
        app.add_subcommand("validate", "run the built-in verification suite");
    (void)validate;

    // Config file first (as replacement defaults), then flags on top.
    const std::string pre_config = find_config_path(argc, argv);
    if (!pre_config.empty()) {
        try {
            apply_config(opt, pre_config);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitUsage;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (compute->parsed()) return run_compute(opt);
        if (sweep->parsed()) return run_sweep(opt);
        if (hartman->parsed()) return run_hartman(opt);
        return run_validate();
    } catch (const qtt::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const qtt::degenerate_error& e) {
        std::cerr << "degenerate input: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}
