#include "spikedland/cli_commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include "spikedland/kac_rice.hpp"
#include "spikedland/ldp_rates.hpp"
#include "spikedland/rmt_lab.hpp"
#include "spikedland/spike_spectrum.hpp"

namespace spiked {

namespace {

void emit_csv(const CsvTable& table, const std::string& out) {
    if (out.empty()) {
        write_csv(std::cout, table);
    } else {
        write_csv_file(out, table);
    }
}

void emit_json(const nlohmann::json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        write_json_file(out, j);
    }
}

std::string sidecar_path(const std::string& out) { return out + ".json"; }

nlohmann::json regime_codes() {
    nlohmann::json j = nlohmann::json::object();
    for (auto label : {RegimeLabel::PositiveComplexity, RegimeLabel::ZeroBoundary,
                       RegimeLabel::NegativeComplexity, RegimeLabel::SubexponentialZeroLocus,
                       RegimeLabel::OutOfDomain})
        j[std::to_string(regime_code(label))] = std::string(regime_name(label));
    return j;
}

void validate_axis(const Axis& a, const std::string& name, std::vector<std::string>& errors) {
    if (a.steps < 2) errors.push_back(name + ": steps must be >= 2");
    if (!(a.min < a.max)) errors.push_back(name + ": min must be < max");
    if (a.min < 0.0 || a.max > 1.0) errors.push_back(name + ": range must lie in [0,1]");
}

void throw_if(const std::vector<std::string>& errors) {
    if (errors.empty()) return;
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
    throw UsageError(msg);
}

ExtendedReal grid_value(const GridRequest& req, const OverlapPoint& m, std::optional<RegimeLabel>& regime) {
    const auto& prm = req.params;
    switch (req.quantity) {
        case GridQuantity::SigmaTot: return sigma_tot_projected(prm, m);
        case GridQuantity::SigmaMax: return sigma_max_projected(prm, m);
        case GridQuantity::Regime:
            regime = classify_regime(prm, m, req.tol);
            return sigma_tot_projected(prm, m);
        case GridQuantity::Gamma1:
            if (!m.in_domain()) return ExtendedReal::neg_inf();
            return spike_eigenvalues(prm, m).gamma.front();
        case GridQuantity::Tau: return tau_of(prm, m);
        case GridQuantity::Eta: return ExtendedReal::from_double(aux_statistics(prm, m).eta);
    }
    return ExtendedReal::neg_inf();
}

}  // namespace

GridQuantity parse_quantity(const std::string& name) {
    if (name == "sigma_tot") return GridQuantity::SigmaTot;
    if (name == "sigma_max") return GridQuantity::SigmaMax;
    if (name == "regime") return GridQuantity::Regime;
    if (name == "gamma1") return GridQuantity::Gamma1;
    if (name == "tau") return GridQuantity::Tau;
    if (name == "eta") return GridQuantity::Eta;
    throw UsageError("unknown quantity '" + name + "' (sigma_tot, sigma_max, regime, gamma1, tau, eta)");
}

std::string quantity_name(GridQuantity q) {
    switch (q) {
        case GridQuantity::SigmaTot: return "sigma_tot";
        case GridQuantity::SigmaMax: return "sigma_max";
        case GridQuantity::Regime: return "regime";
        case GridQuantity::Gamma1: return "gamma1";
        case GridQuantity::Tau: return "tau";
        case GridQuantity::Eta: return "eta";
    }
    return "unknown";
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_double(item));
        } catch (const std::invalid_argument&) {
            throw UsageError(field + ": '" + item + "' is not a number");
        }
    }
    return out;
}

nlohmann::json model_json(const ModelParams& params) {
    return {{"p", params.p}, {"r", params.r()}, {"k", params.k}, {"lambda", params.lambda}};
}

nlohmann::json threshold_json(const ModelParams& params) {
    nlohmann::json j;
    j["tau_c"] = tau_critical(params.p);
    const auto eta_c = eta_critical(params);
    j["eta_c"] = eta_c ? nlohmann::json(*eta_c) : nlohmann::json(nullptr);
    j["lambda_c"] = lambda_critical(params.p);
    return j;
}

GridResult evaluate_grid(const GridRequest& req) {
    std::vector<std::string> errors;
    try {
        req.params.validate();
    } catch (const std::invalid_argument& e) {
        errors.push_back(e.what());
    }
    const int r = req.params.r();
    const int swept = static_cast<int>(req.axes.size());
    if (swept < 1 || swept > 2) errors.push_back("grid: one or two swept axes required");
    for (int i = 0; i < swept; ++i) validate_axis(req.axes[i], "m" + std::to_string(i + 1), errors);
    if (swept + static_cast<int>(req.fixed.size()) != r)
        errors.push_back("grid: r = " + std::to_string(r) + " needs " + std::to_string(std::max(0, r - swept)) +
                         " fixed slice coordinates");
    for (double f : req.fixed)
        if (f < 0.0 || f > 1.0) errors.push_back("grid: fixed coordinates must lie in [0,1]");
    throw_if(errors);

    GridResult res;
    res.table.header = {"m1"};
    if (swept == 2) res.table.header.push_back("m2");
    res.table.header.push_back("value");
    if (req.quantity == GridQuantity::Regime) res.table.header.push_back("regime");

    const int n1 = req.axes[0].steps;
    const int n2 = swept == 2 ? req.axes[1].steps : 1;
    res.cells.reserve(static_cast<std::size_t>(n1) * n2);
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            std::vector<double> mv{req.axes[0].at(i)};
            if (swept == 2) mv.push_back(req.axes[1].at(j));
            mv.insert(mv.end(), req.fixed.begin(), req.fixed.end());
            GridCell cell;
            cell.m = mv;
            const OverlapPoint m(std::move(mv));
            cell.value = grid_value(req, m, cell.regime);

            std::vector<std::string> row{format_double(cell.m[0])};
            if (swept == 2) row.push_back(format_double(cell.m[1]));
            row.push_back(format_extended(cell.value));
            if (cell.regime) row.push_back(std::to_string(regime_code(*cell.regime)));
            res.table.rows.push_back(std::move(row));
            res.cells.push_back(std::move(cell));
        }
    }

    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : req.axes) axes.push_back({{"min", a.min}, {"max", a.max}, {"steps", a.steps}});
    res.metadata = {{"command", "grid"},
                    {"params", model_json(req.params)},
                    {"quantity", quantity_name(req.quantity)},
                    {"axes", axes},
                    {"fixed", req.fixed},
                    {"thresholds", threshold_json(req.params)},
                    {"version", build_version()},
                    {"timestamp", utc_timestamp()}};
    if (req.quantity == GridQuantity::Regime) {
        res.metadata["tol"] = req.tol;
        res.metadata["regime_codes"] = regime_codes();
    }
    return res;
}

GridResult cmd_grid(const GridRequest& req) {
    GridResult res = evaluate_grid(req);
    emit_csv(res.table, req.out);
    if (!req.out.empty()) write_json_file(sidecar_path(req.out), res.metadata);
    return res;
}

CsvTable cmd_rate(const std::vector<double>& gamma, const Axis& t_axis, const std::string& out) {
    std::vector<std::string> errors;
    if (gamma.empty()) errors.push_back("rate: gamma must be nonempty");
    for (std::size_t i = 1; i < gamma.size(); ++i)
        if (gamma[i] > gamma[i - 1]) errors.push_back("rate: gamma must be sorted descending");
    if (t_axis.steps < 2) errors.push_back("rate: steps must be >= 2");
    if (!(t_axis.min < t_axis.max)) errors.push_back("rate: tmin must be < tmax");
    throw_if(errors);

    CsvTable table;
    table.header = {"t", "i_max", "L", "L_left"};
    for (int i = 0; i < t_axis.steps; ++i) {
        const double t = t_axis.at(i);
        table.rows.push_back({format_double(t), format_extended(i_max(gamma, t)),
                              format_extended(big_l(gamma, t)), format_extended(big_l_left(gamma, t))});
    }
    emit_csv(table, out);
    return table;
}

nlohmann::json cmd_classify(const ModelParams& params, const OverlapPoint& m, double tol,
                            const std::string& out) {
    params.validate();
    if (static_cast<int>(m.size()) != params.r()) throw UsageError("classify: --m needs r coordinates");
    if (!m.nonnegative()) throw UsageError("classify: overlaps must lie in [0,1]");
    if (!(tol > 0.0)) throw UsageError("classify: tol must be positive");
    const AuxStatistics aux = aux_statistics(params, m);
    auto opt = [](const std::optional<double>& v) {
        return v ? json_number(*v) : nlohmann::json(nullptr);
    };
    const RegimeLabel label = classify_regime(params, m, tol);
    nlohmann::json j = {{"command", "classify"},
                        {"params", model_json(params)},
                        {"m", std::vector<double>(m.m().begin(), m.m().end())},
                        {"regime", std::string(regime_name(label))},
                        {"regime_code", regime_code(label)},
                        {"sigma_tot", json_number(sigma_tot_projected(params, m).to_double())},
                        {"sigma_max", json_number(sigma_max_projected(params, m).to_double())},
                        {"tau", aux.tau},
                        {"alpha", aux.alpha},
                        {"beta", opt(aux.beta)},
                        {"eta", json_number(aux.eta)},
                        {"tau_star", opt(aux.tau_star)},
                        {"thresholds", threshold_json(params)},
                        {"tol", tol},
                        {"version", build_version()},
                        {"timestamp", utc_timestamp()}};
    emit_json(j, out);
    return j;
}

CsvTable cmd_zeros(const ModelParams& params, const std::vector<int>& pattern, const std::string& out) {
    params.validate();
    std::vector<std::size_t> idx;
    for (int i : pattern) {
        if (i < 1 || i > params.r()) throw UsageError("zeros: pattern indices must lie in 1..r");
        idx.push_back(static_cast<std::size_t>(i - 1));
    }
    const auto roots = zero_locus_solve(params, idx);
    CsvTable table;
    for (int i = 0; i < params.r(); ++i) table.header.push_back("m" + std::to_string(i + 1));
    table.header.insert(table.header.end(), {"sigma_tot", "sigma_tot_large", "tau", "above_threshold"});
    const double tau_c = tau_critical(params.p);
    for (const auto& m : roots) {
        std::vector<std::string> row;
        for (double v : m.m()) row.push_back(format_double(v));
        const double tau = tau_of(params, m);
        row.push_back(format_extended(sigma_tot_projected(params, m)));
        row.push_back(format_double(sigma_tot_large(params, m)));
        row.push_back(format_double(tau));
        row.push_back(tau >= tau_c ? "1" : "0");
        table.rows.push_back(std::move(row));
    }
    emit_csv(table, out);
    return table;
}

namespace {

// Typed access to the flat key-value parameters, accumulating every error.
class ParamReader {
public:
    explicit ParamReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

    int get_int(const std::string& key, std::optional<int> fallback = std::nullopt) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            if (!fallback) errors.push_back(key + ": required");
            return fallback.value_or(0);
        }
        try {
            std::size_t pos = 0;
            const int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            errors.push_back(key + ": '" + it->second + "' is not an integer");
            return 0;
        }
    }

    double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            if (!fallback) errors.push_back(key + ": required");
            return fallback.value_or(0.0);
        }
        try {
            return parse_double(it->second);
        } catch (const std::exception&) {
            errors.push_back(key + ": '" + it->second + "' is not a number");
            return 0.0;
        }
    }

    std::vector<double> get_list(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            if (!fallback) errors.push_back(key + ": required");
            return fallback.value_or(std::vector<double>{});
        }
        if (it->second.empty()) return {};
        try {
            return parse_list(it->second, key);
        } catch (const UsageError& e) {
            errors.push_back(e.what());
            return {};
        }
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    void check_unknown() {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) errors.push_back(k + ": unknown parameter for this experiment");
    }

    std::vector<std::string> errors;

private:
    const std::map<std::string, std::string>& kv_;
    std::set<std::string> used_;
};

Interval parse_interval(const std::string& text, const std::string& key, std::vector<std::string>& errors) {
    const auto colon = text.find(':');
    if (text == "empty") return {1.0, 0.0};
    if (colon == std::string::npos) {
        errors.push_back(key + ": expected lo:hi");
        return {};
    }
    try {
        return {parse_double(text.substr(0, colon)), parse_double(text.substr(colon + 1))};
    } catch (const std::exception&) {
        errors.push_back(key + ": expected lo:hi with numeric bounds");
        return {};
    }
}

CountSelector parse_which(const std::string& text, std::vector<std::string>& errors) {
    if (text == "total") return CountSelector::total();
    if (text == "max") return CountSelector::maxima();
    if (text.rfind("index:", 0) == 0) {
        try {
            return CountSelector::of_index(std::stoi(text.substr(6)));
        } catch (const std::exception&) {
        }
    }
    errors.push_back("which: expected total, max or index:<l>");
    return {};
}

std::vector<double> sorted_gamma_check(const std::vector<double>& g, std::vector<std::string>& errors) {
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] > g[i - 1]) {
            errors.push_back("gamma: must be sorted descending");
            break;
        }
    return g;
}

nlohmann::json estimate_json(const MCEstimate& e) {
    nlohmann::json j;
    if (e.acceptance) j["acceptance"] = *e.acceptance;
    if (e.sample_mean) j["sample_mean"] = *e.sample_mean;
    if (e.sample_sd) j["sample_sd"] = *e.sample_sd;
    j["degenerate"] = e.degenerate;
    return j;
}

}  // namespace

nlohmann::json cmd_experiment(const ExperimentConfig& cfg) {
    std::vector<std::string> errors;
    if (!cfg.seed) errors.push_back("seed: required for experiments (--seed)");
    if (cfg.experiment == "kacrice-formula" ? cfg.trials < 0 : cfg.trials < 2)
        errors.push_back(cfg.experiment == "kacrice-formula" ? "trials: must be >= 0 (0 selects a pilot run)"
                                                             : "trials: must be >= 2");
    ParamReader rd(cfg.parameters);
    const std::uint64_t seed = cfg.seed.value_or(0);

    const auto started = std::chrono::steady_clock::now();
    std::optional<double> theory;
    MCEstimate est;
    nlohmann::json extra = nlohmann::json::object();
    std::function<void()> run;

    const std::string& name = cfg.experiment;
    if (name == "mc-det" || name == "mc-restricted" || name == "mc-lmax" || name == "esd") {
        GOESpec spec;
        spec.n = rd.get_int("n");
        spec.gamma = sorted_gamma_check(rd.get_list("gamma", std::vector<double>{}), errors);
        spec.seed = seed;
        const double t = name == "esd" ? 0.0 : rd.get_double("t", name == "mc-lmax" ? std::nullopt : std::optional<double>(0.0));
        if (spec.n < 1 || (name == "esd" && spec.n < 2)) errors.push_back("n: too small");
        if (static_cast<int>(spec.gamma.size()) > spec.n) errors.push_back("gamma: more spikes than n");
        run = [&, spec, t]() mutable {
            const std::vector<double> g = spec.gamma.empty() ? std::vector<double>{0.0} : spec.gamma;
            if (name == "mc-det") {
                spec.shift = t;
                est = mc_log_abs_det(spec, cfg.trials);
                theory = phi_star(t);
            } else if (name == "mc-restricted") {
                spec.shift = t;
                est = mc_restricted_det(spec, cfg.trials);
                theory = (ExtendedReal(phi_star(t)) - big_l(g, t)).to_double();
            } else if (name == "mc-lmax") {
                est = mc_lambda_max_tail(spec, cfg.trials, t);
                theory = (-big_l(g, t)).to_double();
            } else {
                const EsdDistance d = esd_distance(spec);
                est.value = d.w1;
                est.trials = 1;
                est.seed = seed;
                extra["d_bl"] = d.d_bl;
                extra["d_bl_is_lower_bound"] = true;
                theory = 0.0;
            }
        };
    } else if (name == "spherical") {
        const int n = rd.get_int("n");
        const auto gamma = rd.get_list("gamma", std::vector<double>{});
        std::vector<double> equi;
        for (int i = 0; i < std::max(n, 1); ++i) equi.push_back(n > 1 ? -2.0 + 4.0 * i / (n - 1) : 0.0);
        const auto diag = rd.get_list("diag", equi);
        if (n < 1) errors.push_back("n: must be >= 1");
        if (static_cast<int>(gamma.size()) > n) errors.push_back("gamma: more spikes than n");
        if (static_cast<int>(diag.size()) != n) errors.push_back("diag: needs n entries");
        run = [&, n, gamma, diag] {
            est = spherical_integral_mc(n, gamma, diag, cfg.trials, seed);
            bool zero = true;
            for (double g : gamma) zero = zero && g == 0.0;
            if (zero) theory = 1.0;
        };
    } else if (name == "kacrice-count" || name == "kacrice-formula") {
        const int p = rd.get_int("p", 3);
        const auto lambda = rd.get_list("lambda", std::vector<double>{0.0});
        const auto kl = rd.get_list("k", std::vector<double>{});
        const int n = rd.get_int("n", 2);
        const CountSelector which = parse_which(rd.get_string("which", "total"), errors);
        const Interval value_window = parse_interval(rd.get_string("value_window", "-inf:+inf"), "value_window", errors);
        std::vector<Interval> windows;
        const std::string wtext = rd.get_string("windows", "");
        if (!wtext.empty()) {
            std::stringstream ss(wtext);
            std::string item;
            while (std::getline(ss, item, ';')) windows.push_back(parse_interval(item, "windows", errors));
        }
        const int budget = rd.get_int("budget", 200);
        const long inner = rd.get_int("inner_trials", static_cast<int>(cfg.trials));
        const double rel_tol = rd.get_double("rel_tol", 1e-4);
        std::vector<int> k;
        for (double v : kl) k.push_back(static_cast<int>(v));
        if (k.empty()) k.assign(lambda.size(), p);
        std::optional<ModelParams> params;
        try {
            params = ModelParams::make(p, k, lambda);
        } catch (const std::invalid_argument& e) {
            errors.push_back(e.what());
        }
        if (windows.empty()) windows = full_overlap_windows(static_cast<int>(lambda.size()));
        if (windows.size() != lambda.size()) errors.push_back("windows: need one lo:hi per spike");
        run = [&, params, n, which, value_window, windows, budget, inner, rel_tol] {
            if (name == "kacrice-count") {
                const CountEstimate c = count_expected(*params, n, cfg.trials, seed, windows, value_window, which, budget);
                est = c.estimate;
                extra["complete"] = c.complete;
                extra["degenerate_points"] = c.degenerate_points;
                extra["discarded_starts"] = c.discarded_starts;
                if (!c.complete) {
                    // count against budget, so saturation can be judged
                    nlohmann::json curve = nlohmann::json::array();
                    for (int b : {budget / 4, budget / 2}) {
                        if (b < 1) continue;
                        const auto partial = count_expected(*params, n, cfg.trials, seed, windows, value_window, which, b);
                        curve.push_back({{"budget", b}, {"estimate", partial.estimate.value}});
                    }
                    curve.push_back({{"budget", budget}, {"estimate", est.value}});
                    extra["budget_curve"] = curve;
                }
            } else {
                KacRiceOptions opt;
                opt.seed = seed;
                opt.rel_tol = rel_tol;
                est = kac_rice_eval(*params, n, windows, value_window, inner, which, opt);
            }
        };
    } else {
        errors.push_back("experiment: unknown '" + name +
                         "' (mc-det, mc-lmax, mc-restricted, esd, spherical, kacrice-count, kacrice-formula)");
    }
    rd.check_unknown();
    errors.insert(errors.end(), rd.errors.begin(), rd.errors.end());
    throw_if(errors);

    run();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [k, v] : cfg.parameters) inputs[k] = v;
    nlohmann::json j = {{"experiment", name},
                        {"inputs", inputs},
                        {"estimate", json_number(est.value)},
                        {"std_error", json_number(est.std_error)},
                        {"trials", est.trials},
                        {"seed", seed},
                        {"wall_time", wall},
                        {"theory_value", theory ? json_number(*theory) : nlohmann::json(nullptr)},
                        {"discrepancy", nullptr},
                        {"details", estimate_json(est)},
                        {"version", build_version()},
                        {"timestamp", utc_timestamp()}};
    if (theory && std::isfinite(*theory) && std::isfinite(est.value)) j["discrepancy"] = est.value - *theory;
    for (auto& [k, v] : extra.items()) j["details"][k] = v;
    emit_json(j, cfg.out);
    return j;
}

}  // namespace spiked
