#include "spikedland/spike_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace spiked {

PerturbationFactors perturbation_factors(const ModelParams& params, const OverlapPoint& m) {
    require_arity(params, m);
    if (m.alpha() >= 1.0)
        throw std::domain_error("perturbation_factors: overlap point outside D_Sigma");
    const int r = params.r();
    const double p = params.p;
    const double scale = std::sqrt(2.0 / (p * (p - 1.0)));

    PerturbationFactors out;
    out.theta.resize(r);
    std::vector<double> s(r);
    for (int i = 0; i < r; ++i) {
        const double mi = m[i];
        if (std::abs(mi) >= 1.0)
            throw std::domain_error("perturbation_factors: |m_i| = 1 leaves v_i undefined");
        const int k = params.k[i];
        out.theta[i] = scale * k * (k - 1.0) * params.lambda[i] * ipow(mi, k - 2) * (1.0 - mi * mi);
        s[i] = std::sqrt(1.0 - mi * mi);
    }
    out.gram = Eigen::MatrixXd::Identity(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            out.gram(i, j) = out.gram(j, i) = -m[i] * m[j] / (s[i] * s[j]);
    return out;
}

SpikeSpectrum spike_eigenvalues(const ModelParams& params, const OverlapPoint& m) {
    const PerturbationFactors f = perturbation_factors(params, m);
    const int r = params.r();
    SpikeSpectrum out;
    out.mu.resize(r);

    const bool nonnegative =
        std::all_of(f.theta.begin(), f.theta.end(), [](double t) { return t >= 0.0; });
    if (r == 1) {
        out.mu[0] = f.theta[0];
    } else if (nonnegative) {
        Eigen::VectorXd root(r);
        for (int i = 0; i < r; ++i) root(i) = std::sqrt(f.theta[i]);
        const Eigen::MatrixXd sym = root.asDiagonal() * f.gram * root.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
        for (int i = 0; i < r; ++i) out.mu[i] = es.eigenvalues()(i);
    } else {
        Eigen::VectorXd th(r);
        for (int i = 0; i < r; ++i) th(i) = f.theta[i];
        const Eigen::MatrixXd a = th.asDiagonal() * f.gram;
        Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
        for (int i = 0; i < r; ++i) out.mu[i] = es.eigenvalues()(i).real();
    }
    out.gamma = out.mu;
    std::sort(out.gamma.begin(), out.gamma.end(), std::greater<>());
    return out;
}

std::pair<double, double> spike_eigenvalues_r2(const ModelParams& params, const OverlapPoint& m) {
    if (params.r() != 2) throw std::invalid_argument("spike_eigenvalues_r2: requires r = 2");
    const PerturbationFactors f = perturbation_factors(params, m);
    const double t1 = f.theta[0], t2 = f.theta[1], c = f.gram(0, 1);
    const double disc = std::sqrt((t1 - t2) * (t1 - t2) + 4.0 * t1 * t2 * c * c);
    return {0.5 * (t1 + t2 + disc), 0.5 * (t1 + t2 - disc)};
}

}  // namespace spiked
