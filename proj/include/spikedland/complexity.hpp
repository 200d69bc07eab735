#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "spikedland/extended_real.hpp"
#include "spikedland/model.hpp"

namespace spiked {

/// Log-potential of the semicircle law on [-2,2]. Even, C^1 at |x| = 2.
double phi_star(double x);

/// Closed antiderivative A(x) = int_2^x sqrt(t^2-4) dt for x >= 2.
double semicircle_antiderivative(double x);

/// Exponent S(m,x) of the finite-N Kac-Rice density, without the determinant factor.
ExtendedReal s_func(const ModelParams& params, const OverlapPoint& m, double x);

/// y(m,x) = x - sum_i lambda_i (1 - k_i/p) m_i^{k_i}.
double y_shift(const ModelParams& params, const OverlapPoint& m, double x);

/// t(m,x) = sqrt(2p/(p-1)) y(m,x), the spectral location seen by the Hessian.
double t_func(const ModelParams& params, const OverlapPoint& m, double x);

/// Joint complexity Sigma^tot(m,x); -inf off D_Sigma.
ExtendedReal sigma_tot_joint(const ModelParams& params, const OverlapPoint& m, double x);

/// max_x Sigma^tot(m,x) through the small/large-tau closed forms.
ExtendedReal sigma_tot_projected(const ModelParams& params, const OverlapPoint& m);

/// The two branches, evaluated regardless of where tau sits.
double sigma_tot_small(const ModelParams& params, const OverlapPoint& m);
double sigma_tot_large(const ModelParams& params, const OverlapPoint& m);

/// tau(m) = (1/p) sum_i lambda_i k_i m_i^{k_i}.
double tau_of(const ModelParams& params, const OverlapPoint& m);

/// The x maximizing sigma_tot_joint(m, .) on D_Sigma.
double argmax_x(const ModelParams& params, const OverlapPoint& m);

double tau_critical(int p);
/// Needs all k_i equal; nullopt otherwise.
std::optional<double> eta_critical(const ModelParams& params);
double eta_critical(int p, int k);
/// BBP-type strength threshold for a single spike with k = p.
double lambda_critical(int p);

struct AuxStatistics {
    double tau = 0.0;
    double alpha = 0.0;
    std::optional<double> beta;      // undefined when tau == 0
    double eta = 0.0;                // +inf when a zero-strength spike has m_i != 0
    std::optional<double> tau_star;  // undefined when the root argument is negative or 0/0
    double tau_c = 0.0;
    std::optional<double> eta_c;     // only for a common spike degree
};

AuxStatistics aux_statistics(const ModelParams& params, const OverlapPoint& m);

enum class RegimeLabel {
    PositiveComplexity,
    ZeroBoundary,
    NegativeComplexity,
    SubexponentialZeroLocus,
    OutOfDomain,
};

std::string_view regime_name(RegimeLabel label);
/// Stable integer code used in CSV output.
int regime_code(RegimeLabel label);

/// Sign structure of Sigma^tot(m). Negative coordinates throw std::invalid_argument.
RegimeLabel classify_regime(const ModelParams& params, const OverlapPoint& m, double tol = 1e-6);

/// Residuals of the zero-locus conditions: max spread of lambda_i m_i^{k-2} over the
/// support, and tau - alpha / (sqrt(2p) sqrt(1-alpha)).
struct ZeroLocusResidual {
    double proportionality = 0.0;
    double balance = 0.0;
};
ZeroLocusResidual zero_locus_residual(const ModelParams& params, const OverlapPoint& m);

/// Every m supported on `pattern` (0-based spike indices) satisfying both zero-locus
/// conditions. Roots come from the scalar equation in the common value delta and are
/// ordered by increasing delta. Throws UnsupportedConfiguration for mixed degrees.
std::vector<OverlapPoint> zero_locus_solve(const ModelParams& params,
                                           const std::vector<std::size_t>& pattern);

/// g_{a,b} and f_{a,b}, the one-dimensional reductions of the two branches.
double g_ab(int p, double a, double b, double x);
double f_ab(double a, double b, double x);

struct AppendixDiagnostics {
    std::optional<double> x_star;
    std::optional<double> x_max;
    std::optional<double> value_at_max;
};

/// Zero x* of g_{a,b} and the maximizer/maximum of f_{a,b}.
AppendixDiagnostics appendix_diagnostics(int p, double a, double b);

/// argmax of a unimodal function on [lo, hi] by golden-section search.
template <class F>
double golden_section_max(F&& f, double lo, double hi, double xtol = 1e-10) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a); fd = f(d);
        } else {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a); fc = f(c);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace spiked
