// Command-line front end: grid, classify, zeros, rate, experiment.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "spikedland/cli_commands.hpp"
#include "spikedland/quadrature.hpp"
#include "spikedland/seeding.hpp"

using namespace spiked;

namespace {

struct ModelFlags {
    int p = 3;
    std::vector<int> k;
    std::vector<double> lambda;

    void attach(CLI::App* cmd) {
        cmd->add_option("--p", p, "noise degree p >= 3")->capture_default_str();
        cmd->add_option("--k", k, "spike degrees (default: p for every spike)")->delimiter(',');
        cmd->add_option("--lambda", lambda, "spike strengths, descending")->delimiter(',')->required();
    }

    ModelParams build() const {
        std::vector<int> degrees = k.empty() ? std::vector<int>(lambda.size(), p) : k;
        try {
            return ModelParams::make(p, degrees, lambda);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
};

Axis parse_axis(const std::string& text) {
    const auto v = parse_list(text, "--axis");
    if (v.size() != 2 && v.size() != 3) throw UsageError("--axis: expected min,max[,steps]");
    Axis a{v[0], v[1], 200};
    if (v.size() == 3) {
        if (v[2] != static_cast<int>(v[2])) throw UsageError("--axis: steps must be an integer");
        a.steps = static_cast<int>(v[2]);
    }
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complexity landscapes of spiked p-spin models"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key-value file; keys mirror flags, flags win");

    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
    app.add_option("--seed", seed, "root seed for every random stream");
    app.add_option("--out", out, "output path (default: stdout)");
    app.add_option("--threads", threads, "worker threads, 0 for all cores")->capture_default_str();

    // grid
    auto* grid = app.add_subcommand("grid", "sweep a quantity over an overlap grid");
    ModelFlags grid_model;
    grid_model.attach(grid);
    std::vector<std::string> grid_axes;
    std::vector<double> grid_fixed;
    std::string grid_quantity = "sigma_tot";
    double grid_tol = 1e-6;
    grid->add_option("--axis", grid_axes, "min,max[,steps] for m1 then m2 (default 0,1,200)");
    grid->add_option("--fixed", grid_fixed, "slice values for the remaining coordinates")->delimiter(',');
    grid->add_option("--quantity", grid_quantity, "sigma_tot|sigma_max|regime|gamma1|tau|eta")
        ->capture_default_str();
    grid->add_option("--tol", grid_tol, "zero tolerance for regime labels")->capture_default_str();

    // classify
    auto* classify = app.add_subcommand("classify", "regime and auxiliary statistics at one point");
    ModelFlags cls_model;
    cls_model.attach(classify);
    std::vector<double> cls_m;
    double cls_tol = 1e-6;
    classify->add_option("--m", cls_m, "overlap vector")->delimiter(',')->required();
    classify->add_option("--tol", cls_tol, "zero tolerance")->capture_default_str();

    // zeros
    auto* zeros = app.add_subcommand("zeros", "solve the subexponential zero locus");
    ModelFlags zero_model;
    zero_model.attach(zeros);
    std::vector<int> zero_pattern;
    zeros->add_option("--pattern", zero_pattern, "1-based support indices (default: all)")->delimiter(',');

    // rate
    auto* rate = app.add_subcommand("rate", "tabulate largest-eigenvalue rate functions");
    std::vector<double> rate_gamma;
    Axis rate_axis{1.5, 4.0, 251};
    rate->add_option("--gamma", rate_gamma, "spike values, descending")->delimiter(',')->required();
    rate->add_option("--tmin", rate_axis.min)->capture_default_str();
    rate->add_option("--tmax", rate_axis.max)->capture_default_str();
    rate->add_option("--steps", rate_axis.steps)->capture_default_str();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo and Kac-Rice experiments");
    ExperimentConfig exp_cfg;
    std::vector<std::string> exp_params;
    experiment->add_option("name", exp_cfg.experiment,
                           "mc-det|mc-lmax|mc-restricted|esd|spherical|kacrice-count|kacrice-formula")
        ->required();
    experiment->add_option("--trials", exp_cfg.trials, "Monte Carlo trials")->required();
    experiment->add_option("--param", exp_params, "key=value, repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Io);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::Usage);
    }

    try {
        set_worker_count(threads);
        if (*grid) {
            GridRequest req;
            req.params = grid_model.build();
            if (grid_axes.empty()) grid_axes.assign(std::min(2, req.params.r()), "0,1,200");
            for (const auto& a : grid_axes) req.axes.push_back(parse_axis(a));
            req.fixed = grid_fixed;
            req.quantity = parse_quantity(grid_quantity);
            req.tol = grid_tol;
            req.out = out;
            cmd_grid(req);
        } else if (*classify) {
            cmd_classify(cls_model.build(), OverlapPoint(cls_m), cls_tol, out);
        } else if (*zeros) {
            const ModelParams params = zero_model.build();
            if (zero_pattern.empty())
                for (int i = 1; i <= params.r(); ++i) zero_pattern.push_back(i);
            cmd_zeros(params, zero_pattern, out);
        } else if (*rate) {
            cmd_rate(rate_gamma, rate_axis, out);
        } else if (*experiment) {
            for (const auto& kv : exp_params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw UsageError("--param: expected key=value, got '" + kv + "'");
                exp_cfg.parameters[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            exp_cfg.seed = seed;
            exp_cfg.out = out;
            cmd_experiment(exp_cfg);
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Io);
    } catch (const QuadratureError& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return static_cast<int>(ExitCode::NonConvergence);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::NonConvergence);
    }
    return static_cast<int>(ExitCode::Success);
}
