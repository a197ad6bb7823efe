// Command-line front end: parameter sweeps over the detector-pair pipeline
// with CSV output, figure presets, a key=value config file layer, and a
// closed-form-vs-oracle verification mode.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "udw/sweep.hpp"

namespace {

struct CliValues {
    std::optional<double> alpha, theta, omega_gap, lambda_a, lambda_b, lambda,
        eta, separation, delay;
    std::optional<std::string> family;
    std::vector<std::string> sweeps;
};

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw udw::validation_error(key + ": not a number: " + text);
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
        ++used;
    if (used != text.size())
        throw udw::validation_error(key + ": trailing characters in: " + text);
    return v;
}

udw::InitialFamily parse_family(const std::string& text) {
    if (text == "gg") return udw::InitialFamily::GroundGround;
    if (text == "ge") return udw::InitialFamily::GroundExcited;
    throw udw::validation_error("family must be gg or ge, got: " + text);
}

udw::AxisSpec parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == ':') {
            parts.push_back(text.substr(begin, i - begin));
            begin = i + 1;
        }
    if (parts.size() != 4)
        throw udw::validation_error("--sweep expects AXIS:START:STOP:STEPS, got: " + text);
    udw::AxisSpec ax;
    ax.axis = udw::axis_from_name(parts[0]);
    ax.start = parse_double("sweep start", parts[1]);
    ax.stop = parse_double("sweep stop", parts[2]);
    const double steps = parse_double("sweep steps", parts[3]);
    if (!(steps >= 2.0 && steps <= 1e7 && steps == std::floor(steps)))
        throw udw::validation_error("sweep steps must be an integer >= 2");
    ax.steps = static_cast<int>(steps);
    return ax;
}

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// key=value lines, one per line, '#' starts a comment. Returned in file
// order; `sweep` may repeat.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw udw::validation_error(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

void apply_scalar(udw::SweepParams& p, const std::string& key,
                  const std::string& value) {
    if (key == "alpha") p.alpha = parse_double(key, value);
    else if (key == "theta") p.theta = parse_double(key, value);
    else if (key == "omega-gap") p.omega_gap = parse_double(key, value);
    else if (key == "lambda-a") p.lambda_a = parse_double(key, value);
    else if (key == "lambda-b") p.lambda_b = parse_double(key, value);
    else if (key == "lambda") p.lambda_a = p.lambda_b = parse_double(key, value);
    else if (key == "eta") p.eta = parse_double(key, value);
    else if (key == "L") p.separation = parse_double(key, value);
    else if (key == "dtau") p.delay = parse_double(key, value);
    else if (key == "family") p.family = parse_family(value);
    else throw udw::validation_error("unknown config key: " + key);
}

// The relative phase is periodic; accepting any finite angle at the
// interface and reducing it here is friendlier than rejecting 2 pi.
double normalize_theta(double theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(theta, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

int run_verify(bool dense, double fault) {
    const udw::VerifyReport report = udw::run_verification(dense, fault);
    for (const udw::CheckResult& c : report.checks) {
        std::printf("%-40s max error %.3e (tolerance %.0e)%s%s: %s\n",
                    c.name.c_str(), c.max_error, c.tolerance,
                    c.worst_point.empty() ? "" : " at ",
                    c.worst_point.c_str(), c.pass ? "PASS" : "FAIL");
    }
    std::printf("verification: %s\n", report.pass ? "PASS" : "FAIL");
    return report.pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Two delta-switched detectors in the Minkowski vacuum: closed-form "
        "joint state, entanglement and mutual-information measures, swept "
        "over couplings, geometry, and the initial state, as CSV."};

    CliValues cli;
    std::string config_path, preset, out_path, grid = "default", family_text;
    int workers = 1;
    double fault = 0.0;
    bool verify = false;

    const auto add_opt = [&app](const char* name, std::optional<double>& slot,
                                const char* desc) {
        app.add_option_function<double>(
            name, [&slot](const double& v) { slot = v; }, desc);
    };
    add_opt("--alpha", cli.alpha, "initial-state weight, in [0, 1]");
    add_opt("--theta", cli.theta, "initial-state relative phase (any angle; reduced mod 2 pi)");
    add_opt("--omega-gap", cli.omega_gap, "energy gap Omega * sigma, both detectors");
    add_opt("--lambda-a", cli.lambda_a, "coupling of detector A");
    add_opt("--lambda-b", cli.lambda_b, "coupling of detector B");
    add_opt("--lambda", cli.lambda, "coupling of both detectors");
    add_opt("--eta", cli.eta, "switching weight eta / sigma, both detectors");
    add_opt("--L", cli.separation, "detector separation L / sigma");
    add_opt("--dtau", cli.delay, "switching delay dtau / sigma, >= 0");
    app.add_option("--family", family_text, "initial-state family: gg or ge");
    app.add_option("--sweep", cli.sweeps,
                   "axis as AXIS:START:STOP:STEPS with AXIS one of lambda, "
                   "lambda_a, lambda_b, alpha, L_over_sigma, dtau_over_sigma, "
                   "eta_over_sigma, theta_phase; repeat for a 2D grid (first "
                   "axis is the outer, row-major CSV order)");
    app.add_option("--preset", preset,
                   "figure preset: fig1, fig2, fig3a, fig3b, fig3c, fig3d, "
                   "fig4, fig5, fig6. fig1 is the single-detector sweep; it "
                   "accepts --omega-gap but the result is gap-independent "
                   "there. fig4 shares fig2's grid (its plot reads the "
                   "mutual_information column)");
    app.add_option("--out", out_path, "output CSV path (default: stdout)");
    app.add_option("--config", config_path,
                   "key=value file ('#' comments); keys: alpha, theta, "
                   "omega-gap, lambda-a, lambda-b, lambda, eta, L, dtau, "
                   "family, preset, out, sweep. CLI flags override the file");
    app.add_flag("--verify", verify,
                 "check closed forms against the quadrature oracle and the "
                 "independent assembly path, then exit");
    app.add_option("--grid", grid, "verification grid: default or dense")
        ->check(CLI::IsMember({"default", "dense"}));
    app.add_option("--workers", workers, "worker threads for sweeps")
        ->check(CLI::Range(1, 256));
    app.add_option("--inject-fault", fault)->group(""); // test hook, hidden

    try {
        app.parse(argc, argv);

        if (verify) return run_verify(grid == "dense", fault);

        std::vector<std::pair<std::string, std::string>> config;
        if (!config_path.empty()) config = read_config(config_path);

        // precedence: defaults < preset < config file < CLI flags
        std::string preset_name = preset;
        if (preset_name.empty())
            for (const auto& [key, value] : config)
                if (key == "preset") preset_name = value;

        udw::SweepSpec spec;
        if (!preset_name.empty()) spec = udw::preset_spec(preset_name);

        std::vector<udw::AxisSpec> config_axes;
        for (const auto& [key, value] : config) {
            if (key == "preset") continue;
            if (key == "out") {
                if (out_path.empty()) out_path = value;
                continue;
            }
            if (key == "sweep") {
                config_axes.push_back(parse_sweep(value));
                continue;
            }
            apply_scalar(spec.fixed, key, value);
        }
        if (!config_axes.empty()) spec.axes = std::move(config_axes);

        udw::SweepParams& p = spec.fixed;
        if (cli.alpha) p.alpha = *cli.alpha;
        if (cli.theta) p.theta = *cli.theta;
        if (cli.omega_gap) p.omega_gap = *cli.omega_gap;
        if (cli.lambda) p.lambda_a = p.lambda_b = *cli.lambda;
        if (cli.lambda_a) p.lambda_a = *cli.lambda_a;
        if (cli.lambda_b) p.lambda_b = *cli.lambda_b;
        if (cli.eta) p.eta = *cli.eta;
        if (cli.separation) p.separation = *cli.separation;
        if (cli.delay) p.delay = *cli.delay;
        if (!family_text.empty()) p.family = parse_family(family_text);
        p.theta = normalize_theta(p.theta);

        if (!cli.sweeps.empty()) {
            spec.axes.clear();
            for (const std::string& s : cli.sweeps)
                spec.axes.push_back(parse_sweep(s));
        }
        if (spec.axes.empty())
            throw udw::validation_error(
                "nothing to do: give --sweep, --preset, or a config with a sweep");
        spec.output_path = out_path;

        const std::vector<udw::ResultRow> rows = udw::run_sweep(spec, workers);

        if (out_path.empty()) {
            udw::write_csv(rows, std::cout);
        } else {
            std::ofstream out(out_path);
            if (!out) throw std::ios_base::failure("cannot open output file: " + out_path);
            udw::write_csv(rows, out);
            out.flush();
            if (!out) throw std::ios_base::failure("failed writing: " + out_path);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
