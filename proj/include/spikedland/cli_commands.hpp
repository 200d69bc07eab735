#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikedland/complexity.hpp"
#include "spikedland/extended_real.hpp"
#include "spikedland/model.hpp"
#include "spikedland/serialization.hpp"

namespace spiked {

/// Bad flags or parameters; the message lists every offending field.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ExitCode { Success = 0, Usage = 2, NonConvergence = 3, Io = 4 };

struct Axis {
    double min = 0.0;
    double max = 1.0;
    int steps = 200;
    double at(int i) const { return min + (max - min) * i / (steps - 1); }
};

enum class GridQuantity { SigmaTot, SigmaMax, Regime, Gamma1, Tau, Eta };
GridQuantity parse_quantity(const std::string& name);
std::string quantity_name(GridQuantity q);

struct GridRequest {
    ModelParams params;
    std::vector<Axis> axes;      // one or two swept coordinates
    std::vector<double> fixed;   // values of the remaining coordinates when r > axes.size()
    GridQuantity quantity = GridQuantity::SigmaTot;
    double tol = 1e-6;
    std::string out;             // empty: CSV to stdout, no sidecar
};

struct GridCell {
    std::vector<double> m;
    ExtendedReal value;
    std::optional<RegimeLabel> regime;
};

struct GridResult {
    std::vector<GridCell> cells;  // row-major, last axis fastest
    CsvTable table;
    nlohmann::json metadata;
};

/// Evaluates the grid, writes CSV `m1[,m2],value[,regime]` and a `.json` sidecar next to it.
GridResult cmd_grid(const GridRequest& req);
GridResult evaluate_grid(const GridRequest& req);

CsvTable cmd_rate(const std::vector<double>& gamma, const Axis& t_axis, const std::string& out);

nlohmann::json cmd_classify(const ModelParams& params, const OverlapPoint& m, double tol,
                            const std::string& out);

/// `pattern` uses 1-based spike indices.
CsvTable cmd_zeros(const ModelParams& params, const std::vector<int>& pattern, const std::string& out);

struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> parameters;
    std::optional<std::uint64_t> seed;
    long trials = 0;
    std::string out;
};

/// Validates, dispatches, and writes the JSON result record.
nlohmann::json cmd_experiment(const ExperimentConfig& cfg);

/// Parses "a,b,c" into numbers; throws UsageError naming `field`.
std::vector<double> parse_list(const std::string& text, const std::string& field);

nlohmann::json model_json(const ModelParams& params);
nlohmann::json threshold_json(const ModelParams& params);

}  // namespace spiked
