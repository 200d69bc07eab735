#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "spikedland/model.hpp"
#include "spikedland/rmt_lab.hpp"

namespace spiked {

/// f(sigma) = sum_i lambda_i sigma_i^{k_i} + H(sigma) on S^{n-1}, spikes on e_1..e_r.
/// H(sigma) = sum_I T_I sigma_I with T the symmetrized Gaussian couplings scaled by 1/sqrt(2n),
/// so that E[H(s)H(s')] = <s,s'>^p / (2n).
struct SpikedPolynomial {
    int n = 2;
    ModelParams params;
    std::uint64_t seed = 0;
    std::vector<double> coupling;  // dense n^p, row-major in (i_1, ..., i_p)

    double coupling_at(const std::vector<int>& idx) const;

    double value(const Eigen::VectorXd& sigma) const;
    double noise_value(const Eigen::VectorXd& sigma) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& sigma) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& sigma) const;

    /// Riemannian gradient P_sigma^perp grad f, as a vector in R^n.
    Eigen::VectorXd riemannian_gradient(const Eigen::VectorXd& sigma) const;
    /// B^T Hess f B - <sigma, grad f> I_{n-1} in an orthonormal tangent basis B.
    Eigen::MatrixXd riemannian_hessian(const Eigen::VectorXd& sigma) const;

private:
    // M = T[sigma^{p-2}], so that H = s^T M s, grad H = p M s, Hess H = p(p-1) M.
    Eigen::MatrixXd contract(const Eigen::VectorXd& sigma) const;
};

/// Throws std::invalid_argument unless n >= 2 and r <= n.
SpikedPolynomial build_polynomial(const ModelParams& params, int n, std::uint64_t seed);

/// Orthonormal basis of the tangent space at sigma (n x (n-1)).
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& sigma);

struct CriticalPointRecord {
    Eigen::VectorXd location;
    double value = 0.0;
    int index = 0;              // negative Riemannian Hessian eigenvalues
    std::vector<double> overlaps;
    double residual = 0.0;      // Riemannian gradient norm
    double zero_tolerance = 0.0;
    bool degenerate = false;    // some Hessian eigenvalue within zero_tolerance
};

struct CriticalPointSearch {
    std::vector<CriticalPointRecord> points;
    bool complete = false;      // exhaustive circle scan
    int discarded_starts = 0;   // Newton starts that did not converge
};

inline constexpr int kCircleScanSamples = 100000;
inline constexpr double kDedupRadius = 1e-6;

/// n = 2: exhaustive scan of the circle then bisection (budget unused).
/// n >= 3: multistart Riemannian Newton from `budget` uniform starts, best effort.
CriticalPointSearch find_critical_points(const SpikedPolynomial& poly, double tol = 1e-10,
                                         int budget = 200);

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool empty() const { return !(lo <= hi); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    static Interval all() { return {}; }
};

/// Which critical points to count: all of them, those of a given index, or local maxima.
struct CountSelector {
    enum class Kind { Total, Index, Max };
    Kind kind = Kind::Total;
    int index = 0;

    static CountSelector total() { return {}; }
    static CountSelector of_index(int l) { return {Kind::Index, l}; }
    static CountSelector maxima() { return {Kind::Max, 0}; }
};

/// Full windows [-1,1]^r.
std::vector<Interval> full_overlap_windows(int r);

/// Monte Carlo mean of the filtered critical-point count over fresh polynomials.
/// `complete` in the result is false in the best-effort regime n >= 3.
struct CountEstimate {
    MCEstimate estimate;
    bool complete = true;
    long degenerate_points = 0;
    long discarded_starts = 0;
};

CountEstimate count_expected(const ModelParams& params, int n, long trials, std::uint64_t seed,
                             const std::vector<Interval>& overlap_windows,
                             const Interval& value_window, CountSelector which, int budget = 200);

/// Volume of the unit sphere S^{n-1}, 2 pi^{n/2} / Gamma(n/2).
double sphere_volume(int n);
/// The finite-N Kac-Rice prefactor C(N, r, p).
double kac_rice_constant(int n, int r, int p);

struct KacRiceOptions {
    double rel_tol = 1e-4;
    int batches = 32;
    std::uint64_t seed = 0;
    int max_intervals = 2000;
};

/// Finite-N Kac-Rice expectation by nested adaptive quadrature over (m, x), the
/// determinant expectation by Monte Carlo over common GOE(n-1) draws. inner_trials == 0
/// selects the trial count by a pilot run targeting 1% relative error. The standard
/// error comes from the spread of `batches` independent batch integrals.
/// Throws QuadratureError on non-convergence.
MCEstimate kac_rice_eval(const ModelParams& params, int n, const std::vector<Interval>& overlap_windows,
                         const Interval& value_window, long inner_trials, CountSelector which,
                         const KacRiceOptions& options = {});

}  // namespace spiked
