#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spikedland/model.hpp"

namespace spiked {

/// theta_i and the Gram matrix of the unit vectors v_i carrying the perturbation.
struct PerturbationFactors {
    std::vector<double> theta;
    Eigen::MatrixXd gram;
};

struct SpikeSpectrum {
    std::vector<double> gamma;  // descending
    std::vector<double> mu;     // eigensolver order
};

/// Throws std::domain_error when some |m_i| >= 1 or alpha >= 1.
PerturbationFactors perturbation_factors(const ModelParams& params, const OverlapPoint& m);

/// Nonzero eigenvalues of the rank-r Hessian perturbation, via D_theta * Gram.
SpikeSpectrum spike_eigenvalues(const ModelParams& params, const OverlapPoint& m);

/// Closed form for two spikes, (larger, smaller). Throws std::invalid_argument if r != 2.
std::pair<double, double> spike_eigenvalues_r2(const ModelParams& params, const OverlapPoint& m);

}  // namespace spiked
