#include "spikedland/ldp_rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spikedland/complexity.hpp"
#include "spikedland/spike_spectrum.hpp"

namespace spiked {

namespace {

void require_sorted(const std::vector<double>& gamma) {
    if (gamma.empty()) throw std::invalid_argument("rate functions: gamma must be nonempty");
    for (std::size_t i = 1; i < gamma.size(); ++i)
        if (gamma[i] > gamma[i - 1])
            throw std::invalid_argument("rate functions: gamma must be sorted descending");
}

double rho(double g) { return g + 1.0 / g; }

// Contribution of the supercritical spikes at x >= 2: I_{gamma_1}(x) plus every other
// gamma_i >= 1 whose own rate is still decreasing at x.
double supercritical_sum(const std::vector<double>& gamma, double x) {
    double total = i_gamma(gamma[0], x);
    for (std::size_t i = 1; i < gamma.size() && gamma[i] >= 1.0; ++i)
        if (x < rho(gamma[i])) total += i_gamma(gamma[i], x);
    return total;
}

}  // namespace

ExtendedReal i_goe(double x) {
    if (!std::isfinite(x) && x > 0) return ExtendedReal::pos_inf();
    if (x < 2.0) return ExtendedReal::pos_inf();
    return 0.5 * semicircle_antiderivative(x);
}

double stieltjes_sc(double x) {
    if (x < 2.0) throw std::domain_error("stieltjes_sc: x must be >= 2");
    return 0.5 * (x - std::sqrt(x * x - 4.0));
}

double j_coupling(double gamma, double x) {
    if (!(gamma > 0.0)) throw std::domain_error("j_coupling: gamma must be positive");
    if (x < 2.0) throw std::domain_error("j_coupling: x must be >= 2");
    if (stieltjes_sc(x) <= gamma) return gamma * x - 1.0 - std::log(gamma) - phi_star(x);
    return 0.5 * gamma * gamma;
}

double i_gamma(double gamma, double x) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("i_gamma: gamma must be >= 1");
    if (x < 2.0) throw std::domain_error("i_gamma: x must be >= 2");
    const double r = rho(gamma);
    return 0.25 * (semicircle_antiderivative(x) - semicircle_antiderivative(r)) -
           0.5 * gamma * (x - r) + 0.125 * (x * x - r * r);
}

ExtendedReal i_max(const std::vector<double>& gamma, double x) {
    require_sorted(gamma);
    if (x < 2.0) return ExtendedReal::pos_inf();
    const double g1 = gamma[0];
    if (g1 >= 1.0) return supercritical_sum(gamma, x);
    if (g1 <= 0.0) return i_goe(x);
    const double a = semicircle_antiderivative(x);
    if (x <= rho(g1)) return 0.5 * a;
    return 0.25 * a + 0.125 * x * x - 0.5 * g1 * x + 0.25 + 0.5 * std::log(g1) + 0.25 * g1 * g1;
}

ExtendedReal big_l(const std::vector<double>& gamma, double t) {
    require_sorted(gamma);
    if (t < 2.0) return ExtendedReal::pos_inf();
    if (gamma[0] < 1.0 || t >= rho(gamma[0])) return 0.0;
    return supercritical_sum(gamma, t);
}

ExtendedReal big_l_left(const std::vector<double>& gamma, double t) {
    if (t <= 2.0) {
        require_sorted(gamma);
        return ExtendedReal::pos_inf();
    }
    return big_l(gamma, t);
}

ExtendedReal sigma_max_joint(const ModelParams& params, const OverlapPoint& m, double x) {
    const ExtendedReal tot = sigma_tot_joint(params, m, x);
    if (tot.is_neg_inf()) return tot;
    const ExtendedReal l = big_l(spike_eigenvalues(params, m).gamma, t_func(params, m, x));
    if (l.is_pos_inf()) return ExtendedReal::neg_inf();
    return tot - l;
}

namespace {

struct MaxResult {
    double x = std::numeric_limits<double>::quiet_NaN();
    ExtendedReal value = ExtendedReal::neg_inf();
};

MaxResult maximize_sigma_max(const ModelParams& params, const OverlapPoint& m) {
    MaxResult best;
    if (!m.in_domain()) return best;
    const std::vector<double> gamma = spike_eigenvalues(params, m).gamma;
    const double c = std::sqrt(2.0 * params.p / (params.p - 1.0));
    const double y0 = y_shift(params, m, 0.0);  // y = x + y0
    auto x_of_t = [&](double t) { return t / c - y0; };
    auto value_at_t = [&](double t) {
        const double x = x_of_t(t);
        const double tot = sigma_tot_joint(params, m, x).value();
        return tot - big_l(gamma, t).value();
    };
    auto consider = [&](double t) {
        const double v = value_at_t(t);
        if (best.value.is_neg_inf() || v > best.value.value()) {
            best.value = v;
            best.x = x_of_t(t);
        }
    };

    // Above the largest kink L vanishes and Sigma^tot is concave in t.
    const double t_free = c * y_shift(params, m, argmax_x(params, m));
    double top = 2.0;
    std::vector<double> kinks;
    for (double g : gamma)
        if (g >= 1.0) kinks.push_back(rho(g));
    std::sort(kinks.begin(), kinks.end());
    if (!kinks.empty()) top = kinks.back();
    consider(std::max(top, t_free));

    // Bounded concave pieces [2, rho_l], [rho_l, rho_{l-1}], ...
    double lo = 2.0;
    for (double hi : kinks) {
        if (hi > lo) consider(golden_section_max(value_at_t, lo, hi, 1e-12 * std::max(1.0, hi)));
        consider(lo);
        lo = hi;
    }
    return best;
}

}  // namespace

ExtendedReal sigma_max_projected(const ModelParams& params, const OverlapPoint& m) {
    require_arity(params, m);
    return maximize_sigma_max(params, m).value;
}

double sigma_max_argmax(const ModelParams& params, const OverlapPoint& m) {
    require_arity(params, m);
    return maximize_sigma_max(params, m).x;
}

}  // namespace spiked
