#include "spikedland/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spiked {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The lambda-dependent part shared by S, Sigma and both projected branches:
// -(1/p) sum lambda^2 k^2 m^{2k-2}(1-m^2) + (2/p) sum_{i<j} lambda_i lambda_j k_i k_j m_i^k_i m_j^k_j
double gradient_terms(const ModelParams& params, const OverlapPoint& m) {
    const double p = params.p;
    double diag = 0.0;
    double cross = 0.0;
    double running = 0.0;  // sum over j < i of lambda_j k_j m_j^{k_j}
    for (int i = 0; i < params.r(); ++i) {
        const double mi = m[i];
        const int ki = params.k[i];
        const double li = params.lambda[i];
        const double g = li * ki * ipow(mi, ki - 1);
        diag += g * g * (1.0 - mi * mi);
        const double v = li * ki * ipow(mi, ki);
        cross += v * running;
        running += v;
    }
    return -diag / p + 2.0 * cross / p;
}

double centering(const ModelParams& params, const OverlapPoint& m) {
    double s = 0.0;
    for (int i = 0; i < params.r(); ++i) s += params.lambda[i] * ipow(m[i], params.k[i]);
    return s;
}

double shift(const ModelParams& params, const OverlapPoint& m) {
    double s = 0.0;
    for (int i = 0; i < params.r(); ++i)
        s += params.lambda[i] * (1.0 - static_cast<double>(params.k[i]) / params.p) *
             ipow(m[i], params.k[i]);
    return s;
}

double c_of(int p) { return std::sqrt(2.0 * p / (p - 1.0)); }

// Optimal y for the joint complexity given tau >= 0.
double y_opt(int p, double tau) {
    if (tau < tau_critical(p)) return 2.0 * tau * (p - 1.0) / (p - 2.0);
    const double c = c_of(p);
    const double b = (p - 1.0) * tau * c;
    const double g = 0.5 * (-b + std::sqrt(b * b + 4.0 * (p - 1.0)));
    return (g + 1.0 / g) / c;
}

}  // namespace

double phi_star(double x) {
    if (!std::isfinite(x)) throw std::domain_error("phi_star: argument must be finite");
    const double bulk = 0.25 * x * x - 0.5;
    const double ax = std::abs(x);
    if (ax <= 2.0) return bulk;
    const double s = std::sqrt(ax * ax - 4.0);
    return bulk - (0.25 * ax * s - std::log(0.5 * (ax + s)));
}

double semicircle_antiderivative(double x) {
    if (x < 2.0) throw std::domain_error("semicircle_antiderivative: x must be >= 2");
    const double s = std::sqrt(x * x - 4.0);
    return 0.5 * x * s - 2.0 * std::log(0.5 * (x + s));
}

ExtendedReal s_func(const ModelParams& params, const OverlapPoint& m, double x) {
    require_arity(params, m);
    if (!m.in_domain()) return ExtendedReal::neg_inf();
    const double p = params.p;
    const double d = x - centering(params, m);
    return 0.5 * (std::log(p - 1.0) + 1.0) + 0.5 * std::log(1.0 - m.alpha()) +
           gradient_terms(params, m) - d * d;
}

double y_shift(const ModelParams& params, const OverlapPoint& m, double x) {
    require_arity(params, m);
    return x - shift(params, m);
}

double t_func(const ModelParams& params, const OverlapPoint& m, double x) {
    return c_of(params.p) * y_shift(params, m, x);
}

double tau_of(const ModelParams& params, const OverlapPoint& m) {
    require_arity(params, m);
    double s = 0.0;
    for (int i = 0; i < params.r(); ++i)
        s += params.lambda[i] * params.k[i] * ipow(m[i], params.k[i]);
    return s / params.p;
}

ExtendedReal sigma_tot_joint(const ModelParams& params, const OverlapPoint& m, double x) {
    require_arity(params, m);
    if (!m.in_domain()) return ExtendedReal::neg_inf();
    const double p = params.p;
    const double y = y_shift(params, m, x);
    const double d = y - tau_of(params, m);
    return 0.5 * (std::log(p - 1.0) + 1.0) + 0.5 * std::log(1.0 - m.alpha()) +
           gradient_terms(params, m) - d * d + phi_star(c_of(params.p) * y);
}

double sigma_tot_small(const ModelParams& params, const OverlapPoint& m) {
    const double p = params.p;
    const double tau = tau_of(params, m);
    return 0.5 * std::log(p - 1.0) + 0.5 * std::log(1.0 - m.alpha()) + gradient_terms(params, m) +
           p / (p - 2.0) * tau * tau;
}

double sigma_tot_large(const ModelParams& params, const OverlapPoint& m) {
    const double X = std::sqrt(params.p / 2.0) * std::abs(tau_of(params, m));
    return 0.5 * std::log(1.0 - m.alpha()) + gradient_terms(params, m) - X * X +
           X * std::sqrt(X * X + 1.0) + std::asinh(X);
}

ExtendedReal sigma_tot_projected(const ModelParams& params, const OverlapPoint& m) {
    require_arity(params, m);
    if (!m.in_domain()) return ExtendedReal::neg_inf();
    // Sigma(m, y) is symmetric under (tau, y) -> (-tau, -y), so only |tau| matters.
    if (std::abs(tau_of(params, m)) >= tau_critical(params.p)) return sigma_tot_large(params, m);
    return sigma_tot_small(params, m);
}

double argmax_x(const ModelParams& params, const OverlapPoint& m) {
    const double tau = tau_of(params, m);
    const double y = std::copysign(y_opt(params.p, std::abs(tau)), tau);
    return y + shift(params, m);
}

double tau_critical(int p) { return (p - 2.0) / std::sqrt(2.0 * p * (p - 1.0)); }

double eta_critical(int p, int k) {
    const double base = 2.0 * k * k / (p * std::pow(k - 1.0, k - 1.0));
    return (k - 2.0) * std::pow(base, 1.0 / (k - 2.0));
}

std::optional<double> eta_critical(const ModelParams& params) {
    const auto k = params.common_degree();
    if (!k) return std::nullopt;
    return eta_critical(params.p, *k);
}

double lambda_critical(int p) {
    return std::sqrt(std::pow(p - 1.0, p - 1.0) / std::pow(p - 2.0, p - 2.0) / (2.0 * p));
}

AuxStatistics aux_statistics(const ModelParams& params, const OverlapPoint& m) {
    require_arity(params, m);
    AuxStatistics aux;
    const int p = params.p;
    aux.tau = tau_of(params, m);
    aux.alpha = m.alpha();
    aux.tau_c = tau_critical(p);
    aux.eta_c = eta_critical(params);

    for (int i = 0; i < params.r(); ++i) {
        if (m[i] == 0.0) continue;
        const double li = params.lambda[i];
        aux.eta += li == 0.0 ? kInf : std::pow(li, -2.0 / (params.k[i] - 2.0));
    }

    if (aux.tau != 0.0) {
        double g2 = 0.0;
        for (int i = 0; i < params.r(); ++i) {
            const double g = params.lambda[i] * params.k[i] * ipow(m[i], params.k[i] - 1);
            g2 += g * g;
        }
        aux.beta = aux.alpha / (aux.tau * aux.tau) * g2 / (static_cast<double>(p) * p);
    }

    if (aux.beta && aux.alpha > 0.0 && aux.alpha < 1.0) {
        const double num = -0.5 * std::log((1.0 - aux.alpha) * (p - 1.0));
        const double den = (p - 1.0) / (p - 2.0) - *aux.beta / aux.alpha;
        if (den != 0.0 && num / den >= 0.0) aux.tau_star = std::sqrt(num / den) / std::sqrt(p);
    }
    return aux;
}

std::string_view regime_name(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::PositiveComplexity: return "PositiveComplexity";
        case RegimeLabel::ZeroBoundary: return "ZeroBoundary";
        case RegimeLabel::NegativeComplexity: return "NegativeComplexity";
        case RegimeLabel::SubexponentialZeroLocus: return "SubexponentialZeroLocus";
        case RegimeLabel::OutOfDomain: return "OutOfDomain";
    }
    return "Unknown";
}

int regime_code(RegimeLabel label) { return static_cast<int>(label); }

ZeroLocusResidual zero_locus_residual(const ModelParams& params, const OverlapPoint& m) {
    require_arity(params, m);
    ZeroLocusResidual res;
    double lo = kInf, hi = -kInf;
    for (int i = 0; i < params.r(); ++i) {
        if (m[i] == 0.0) continue;
        const double v = params.lambda[i] * ipow(m[i], params.k[i] - 2);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    res.proportionality = hi >= lo ? hi - lo : 0.0;
    const double a = m.alpha();
    res.balance = a < 1.0 ? tau_of(params, m) - a / (std::sqrt(2.0 * params.p) * std::sqrt(1.0 - a))
                          : kInf;
    return res;
}

RegimeLabel classify_regime(const ModelParams& params, const OverlapPoint& m, double tol) {
    require_arity(params, m);
    if (!(tol > 0.0)) throw std::invalid_argument("classify_regime: tol must be positive");
    if (!m.nonnegative())
        throw std::invalid_argument("classify_regime: overlaps must lie in [0,1]^r");
    if (!m.in_domain()) return RegimeLabel::OutOfDomain;

    const int p = params.p;
    const AuxStatistics aux = aux_statistics(params, m);
    const double sigma = sigma_tot_projected(params, m).value();

    auto by_sign = [&](double v) {
        if (std::abs(v) <= tol) return RegimeLabel::ZeroBoundary;
        return v > 0.0 ? RegimeLabel::PositiveComplexity : RegimeLabel::NegativeComplexity;
    };

    if (aux.tau >= aux.tau_c) {
        if (aux.eta_c && aux.eta <= *aux.eta_c) {
            const auto res = zero_locus_residual(params, m);
            if (res.proportionality <= tol && std::abs(res.balance) <= tol)
                return RegimeLabel::SubexponentialZeroLocus;
        }
        return by_sign(sigma);
    }

    if (aux.alpha < (p - 2.0) / (p - 1.0)) {
        if (!aux.beta) return by_sign(sigma);  // tau == 0: the constant branch
        if (aux.tau_star) {
            if (std::abs(sigma) <= tol) return RegimeLabel::ZeroBoundary;
            return aux.tau < *aux.tau_star ? RegimeLabel::PositiveComplexity
                                           : RegimeLabel::NegativeComplexity;
        }
    }
    return by_sign(sigma);
}

std::vector<OverlapPoint> zero_locus_solve(const ModelParams& params,
                                           const std::vector<std::size_t>& pattern) {
    const auto kk = params.common_degree();
    if (!kk) throw UnsupportedConfiguration("zero_locus_solve: spike degrees must all be equal");
    if (pattern.empty()) throw std::invalid_argument("zero_locus_solve: empty pattern");
    const int k = *kk;
    const int p = params.p;

    std::vector<std::size_t> support(pattern);
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
        throw std::invalid_argument("zero_locus_solve: repeated index in pattern");
    double eta = 0.0;
    for (std::size_t i : support) {
        if (i >= static_cast<std::size_t>(params.r()))
            throw std::invalid_argument("zero_locus_solve: pattern index out of range");
        if (params.lambda[i] == 0.0) return {};
        eta += std::pow(params.lambda[i], -2.0 / (k - 2.0));
    }
    if (eta > eta_critical(p, k)) return {};

    const double C = 2.0 * p * std::pow(static_cast<double>(p) / k, 2.0 / (k - 2.0)) * eta;
    const double e = (2.0 * k - 2.0) / (k - 2.0);
    auto h = [&](double x) { return C * std::pow(x, e) - 2.0 * p * x * x + 1.0; };

    const double x_min =
        (static_cast<double>(k) / p) * std::pow((k - 2.0) / (k - 1.0) / eta, (k - 2.0) / 2.0);
    const double h_min = h(x_min);
    if (h_min > 0.0) return {};

    auto bisect = [&](double lo, double hi) {
        // h(lo) and h(hi) have opposite signs
        const bool lo_pos = h(lo) > 0.0;
        while (hi - lo > 1e-12 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            if ((h(mid) > 0.0) == lo_pos) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    std::vector<double> deltas;
    if (h_min == 0.0) {
        deltas.push_back(x_min);
    } else {
        deltas.push_back(bisect(0.0, x_min));
        double x_hi = 2.0 * x_min;
        while (h(x_hi) <= 0.0) x_hi *= 2.0;
        deltas.push_back(bisect(x_min, x_hi));
    }

    std::vector<OverlapPoint> roots;
    for (double delta : deltas) {
        std::vector<double> mv(params.r(), 0.0);
        bool ok = true;
        for (std::size_t i : support) {
            mv[i] = std::pow(delta * p / (k * params.lambda[i]), 1.0 / (k - 2.0));
            if (mv[i] > 1.0) ok = false;
        }
        if (!ok) continue;
        OverlapPoint pt(std::move(mv));
        if (pt.in_domain()) roots.push_back(std::move(pt));
    }
    return roots;
}

double g_ab(int p, double a, double b, double x) {
    return 0.5 * std::log(1.0 - a) + 0.5 * std::log(p - 1.0) + ((p - 1.0) / (p - 2.0) - b / a) * x * x;
}

double f_ab(double a, double b, double x) {
    return 0.5 * std::log(1.0 - a) - 2.0 * b / a * x * x + x * x + x * std::sqrt(1.0 + x * x) +
           std::asinh(x);
}

AppendixDiagnostics appendix_diagnostics(int p, double a, double b) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("appendix_diagnostics: a must lie in (0,1)");
    if (!(b >= 1.0)) throw std::invalid_argument("appendix_diagnostics: b must be >= 1");
    AppendixDiagnostics out;
    const double num = -0.5 * (std::log(1.0 - a) + std::log(p - 1.0));
    const double den = (p - 1.0) / (p - 2.0) - b / a;
    if (den != 0.0 && num / den >= 0.0) out.x_star = std::sqrt(num / den);
    if (b > a) {
        out.x_max = a / (2.0 * std::sqrt(b * (b - a)));
        out.value_at_max = 0.5 * std::log(b * (1.0 - a) / (b - a));
    }
    return out;
}

}  // namespace spiked
