#include "oversmooth/errors.hpp"
#include "oversmooth/harness.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>
#include <vector>

using namespace oversmooth;

namespace {

void print(const SuiteResult& r) {
    std::cout << "[" << (r.passed ? "PASS" : "FAIL") << "] " << r.name << '\n';
    for (const std::string& line : r.lines) {
        std::cout << "    " << line << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oversmoothing Tikhonov regularization experiments on exp(Gu)"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file with any of the long options below");

    ExperimentConfig cfg;
    std::string regime = "hoelder";
    std::string noise = "smooth_bump";
    bool no_warm = false;
    app.add_option("--grid-n", cfg.grid_n, "grid points on [0,1]")->capture_default_str();
    app.add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "directory for CSV/JSON output");
    app.add_option("--regime", regime, "parameter choice regime")
        ->check(CLI::IsMember({"none", "hoelder", "low-order"}))
        ->capture_default_str();
    app.add_option("--p", cfg.p, "hoelder smoothness of the truth")->capture_default_str();
    app.add_option("--r", cfg.r, "Tikhonov exponent")->capture_default_str();
    app.add_option("--m", cfg.m, "Lavrentiev iterations")->capture_default_str();
    app.add_option("--alpha-c", cfg.alpha_c, "constant in the alpha rule")->capture_default_str();
    app.add_option("--deltas", cfg.delta_list, "noise levels, strictly decreasing");
    app.add_option("--noise", noise, "noise model")
        ->check(CLI::IsMember({"random_sign", "smooth_bump"}))
        ->capture_default_str();
    app.add_option("--bump-width", cfg.bump_width, "bump width in units of beta")->capture_default_str();
    app.add_option("--tail-tol", cfg.quad.tail_tol, "quadrature tail tolerance")->capture_default_str();
    app.add_option("--slope-tol", cfg.slope_tolerance, "accepted slope deviation")->capture_default_str();
    app.add_flag("--no-warm-start", no_warm, "solve every noise level from scratch");

    std::vector<std::string> suite_list;
    auto* suite = app.add_subcommand("suite", "run several checks; all of them by default");
    suite->add_option("names", suite_list, "suite names");
    for (const std::string& name : suite_names()) {
        app.add_subcommand(name, "run the " + name + " check");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.regime = parse_alpha_rule(regime);
        cfg.noise = parse_noise_kind(noise);
        cfg.warm_start = !no_warm;
        cfg.validate();

        std::vector<std::string> names;
        if (suite->parsed()) {
            names = suite_list;
        } else {
            names.push_back(app.get_subcommands().front()->get_name());
        }
        const SuiteSummary summary = run_suite(names, cfg);
        for (const SuiteResult& r : summary.results) {
            print(r);
        }
        return summary.all_passed() ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const StudyError& e) {
        std::cerr << "study failed: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
