#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spikedland/seeding.hpp"

namespace spiked {

/// W + sum_i gamma_i e_i e_i^T - shift * I, with W a GOE(n) matrix whose
/// entries have variance (1 + delta_ij)/n (semicircle on [-2,2]).
struct GOESpec {
    int n = 1;
    std::vector<double> gamma;
    double shift = 0.0;
    std::uint64_t seed = 0;
};

struct MCEstimate {
    double value = 0.0;  // may be -inf when `degenerate`
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;  // every trial underflowed or was rejected
    std::optional<double> acceptance;
    std::optional<double> sample_mean;
    std::optional<double> sample_sd;
};

struct SpectralSample {
    std::vector<double> eigenvalues;  // ascending
};

/// Symmetric GOE(n) draw with the normalization above.
Eigen::MatrixXd sample_goe(int n, Rng& rng);

/// Spectrum of trial 0 of `spec`; trial i of the Monte Carlo drivers uses make_rng(seed, i).
SpectralSample sample_spectrum(const GOESpec& spec);
SpectralSample sample_spectrum_trial(const GOESpec& spec, std::uint64_t trial);

/// (1/n) log E|det|, log-mean-exp stabilized, delta-method standard error.
MCEstimate mc_log_abs_det(const GOESpec& spec, long trials);

/// (1/n) log E[|det| 1{all eigenvalues <= 0}]; acceptance is the indicator frequency.
MCEstimate mc_restricted_det(const GOESpec& spec, long trials);

/// (1/n) log P(lambda_max <= t), with the sample mean and sd of lambda_max.
MCEstimate mc_lambda_max_tail(const GOESpec& spec, long trials, double t);

struct EsdDistance {
    double w1 = 0.0;    // exact for the sample
    double d_bl = 0.0;  // lower bound over a fixed dictionary of test functions
};

/// CDF of the semicircle law on [-2,2].
double semicircle_cdf(double x);

EsdDistance esd_distance(const GOESpec& spec);
EsdDistance esd_distance(const std::vector<double>& eigenvalues);

/// E over Haar frames (e_1..e_r) of exp((n/2) sum_i gamma_i <e_i, D e_i>).
MCEstimate spherical_integral_mc(int n, const std::vector<double>& gamma,
                                 const std::vector<double>& diag, long trials, std::uint64_t seed);

}  // namespace spiked
