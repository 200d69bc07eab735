#include "spikedland/rmt_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spiked {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate(const GOESpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("GOESpec: n must be >= 1");
    if (static_cast<int>(spec.gamma.size()) > spec.n)
        throw std::invalid_argument("GOESpec: more spikes than dimensions");
}

void require_trials(long trials) {
    if (trials < 2) throw std::invalid_argument("Monte Carlo: trials must be >= 2");
}

std::vector<std::vector<double>> all_spectra(const GOESpec& spec, long trials) {
    std::vector<std::vector<double>> out(trials);
    parallel_for(trials, [&](std::size_t i) { out[i] = sample_spectrum_trial(spec, i).eigenvalues; });
    return out;
}

// (1/n) log of the mean of exp(logs), with a delta-method standard error.
MCEstimate log_mean_exp(const std::vector<double>& logs, int n) {
    MCEstimate est;
    est.trials = static_cast<long>(logs.size());
    const double top = *std::max_element(logs.begin(), logs.end());
    if (top == kNegInf) {
        est.value = kNegInf;
        est.std_error = 0.0;
        est.degenerate = true;
        return est;
    }
    double sum = 0.0, sum2 = 0.0;
    for (double l : logs) {
        const double w = std::exp(l - top);
        sum += w;
        sum2 += w * w;
    }
    const double T = static_cast<double>(logs.size());
    const double mean = sum / T;
    const double var = std::max(0.0, (sum2 - T * mean * mean) / (T - 1.0));
    est.value = (top + std::log(mean)) / n;
    est.std_error = std::sqrt(var / T) / mean / n;
    return est;
}

double log_abs_det(const std::vector<double>& eig) {
    double s = 0.0;
    for (double e : eig) s += std::log(std::abs(e));
    return s;
}

}  // namespace

Eigen::MatrixXd sample_goe(int n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double off = std::sqrt(1.0 / n);
    const double diag = std::sqrt(2.0 / n);
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i) {
        w(i, i) = diag * normal(rng);
        for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = off * normal(rng);
    }
    return w;
}

SpectralSample sample_spectrum_trial(const GOESpec& spec, std::uint64_t trial) {
    validate(spec);
    Rng rng = make_rng(spec.seed, trial);
    Eigen::MatrixXd x = sample_goe(spec.n, rng);
    for (std::size_t i = 0; i < spec.gamma.size(); ++i) x(i, i) += spec.gamma[i];
    x.diagonal().array() -= spec.shift;
    SpectralSample out;
    if (spec.n == 1) {
        out.eigenvalues = {x(0, 0)};
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    return out;
}

SpectralSample sample_spectrum(const GOESpec& spec) { return sample_spectrum_trial(spec, 0); }

MCEstimate mc_log_abs_det(const GOESpec& spec, long trials) {
    validate(spec);
    require_trials(trials);
    const auto spectra = all_spectra(spec, trials);
    std::vector<double> logs(trials);
    for (long i = 0; i < trials; ++i) logs[i] = log_abs_det(spectra[i]);
    MCEstimate est = log_mean_exp(logs, spec.n);
    est.seed = spec.seed;
    return est;
}

MCEstimate mc_restricted_det(const GOESpec& spec, long trials) {
    validate(spec);
    require_trials(trials);
    const auto spectra = all_spectra(spec, trials);
    std::vector<double> logs(trials);
    long accepted = 0;
    for (long i = 0; i < trials; ++i) {
        if (spectra[i].back() <= 0.0) {
            ++accepted;
            logs[i] = log_abs_det(spectra[i]);
        } else {
            logs[i] = kNegInf;
        }
    }
    MCEstimate est = log_mean_exp(logs, spec.n);
    est.seed = spec.seed;
    est.acceptance = static_cast<double>(accepted) / trials;
    return est;
}

MCEstimate mc_lambda_max_tail(const GOESpec& spec, long trials, double t) {
    validate(spec);
    require_trials(trials);
    const auto spectra = all_spectra(spec, trials);
    long hits = 0;
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : spectra) {
        const double top = s.back();
        if (top <= t) ++hits;
        sum += top;
        sum2 += top * top;
    }
    const double T = static_cast<double>(trials);
    MCEstimate est;
    est.trials = trials;
    est.seed = spec.seed;
    const double mean = sum / T;
    est.sample_mean = mean;
    est.sample_sd = std::sqrt(std::max(0.0, (sum2 - T * mean * mean) / (T - 1.0)));
    const double prob = hits / T;
    est.acceptance = prob;
    if (hits == 0) {
        est.value = kNegInf;
        est.degenerate = true;
        return est;
    }
    est.value = std::log(prob) / spec.n;
    est.std_error = std::sqrt((1.0 - prob) / (prob * T)) / spec.n;
    return est;
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(0.5 * x) / std::numbers::pi;
}

namespace {

// int_{-2}^{x} s rho_sc(ds)
double semicircle_first_moment(double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    const double u = 4.0 - x * x;
    return -u * std::sqrt(u) / (6.0 * std::numbers::pi);
}

// int_{-inf}^{x} F_sc(s) ds
double cdf_integral(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 2.0 + (x - 2.0);
    return x * semicircle_cdf(x) - semicircle_first_moment(x);
}

// int_a^b |c - F_sc(s)| ds for a constant level c.
double abs_gap(double a, double b, double c) {
    if (b <= a) return 0.0;
    const double fa = semicircle_cdf(a), fb = semicircle_cdf(b);
    auto signed_part = [&](double lo, double hi) {
        return c * (hi - lo) - (cdf_integral(hi) - cdf_integral(lo));
    };
    if (fa >= c || fb <= c) return std::abs(signed_part(a, b));
    double lo = a, hi = b;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (semicircle_cdf(mid) < c) lo = mid; else hi = mid;
    }
    const double xs = 0.5 * (lo + hi);
    return std::abs(signed_part(a, xs)) + std::abs(signed_part(xs, b));
}

// int (alpha + beta s) rho_sc(ds) over [a, b]
double linear_moment(double alpha, double beta, double a, double b) {
    if (b <= a) return 0.0;
    return alpha * (semicircle_cdf(b) - semicircle_cdf(a)) +
           beta * (semicircle_first_moment(b) - semicircle_first_moment(a));
}

// Piecewise-linear test function: knots (x_j, y_j), constant outside.
struct PiecewiseLinear {
    std::vector<double> xs, ys;

    double operator()(double x) const {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - xs.begin());
        const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return ys[j - 1] + t * (ys[j] - ys[j - 1]);
    }

    double semicircle_mean() const {
        double total = ys.front() * semicircle_cdf(xs.front()) +
                       ys.back() * (1.0 - semicircle_cdf(xs.back()));
        for (std::size_t j = 1; j < xs.size(); ++j) {
            const double slope = (ys[j] - ys[j - 1]) / (xs[j] - xs[j - 1]);
            total += linear_moment(ys[j - 1] - slope * xs[j - 1], slope, xs[j - 1], xs[j]);
        }
        return total;
    }
};

std::vector<PiecewiseLinear> bl_dictionary() {
    std::vector<PiecewiseLinear> dict;
    const double widths[] = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
    for (double w : widths) {
        const double h = w / (1.0 + w);  // sup norm + Lipschitz constant = 1
        for (int i = 0; i <= 100; ++i) {
            const double c = -2.5 + 0.05 * i;
            dict.push_back({{c - w, c, c + w}, {0.0, h, 0.0}});
            dict.push_back({{c - w, c + w}, {-h, h}});
        }
    }
    return dict;
}

}  // namespace

EsdDistance esd_distance(const std::vector<double>& eigenvalues) {
    if (eigenvalues.size() < 2) throw std::invalid_argument("esd_distance: need n >= 2");
    std::vector<double> ev(eigenvalues);
    std::sort(ev.begin(), ev.end());
    const double n = static_cast<double>(ev.size());
    EsdDistance out;

    // W1 = int |F_n - F_sc| over the real line, split at the sample points.
    double w1 = 0.0;
    const double left = std::min(ev.front(), -2.0);
    const double right = std::max(ev.back(), 2.0);
    w1 += abs_gap(left, ev.front(), 0.0);
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) w1 += abs_gap(ev[i], ev[i + 1], (i + 1) / n);
    w1 += abs_gap(ev.back(), right, 1.0);
    out.w1 = w1;

    static const std::vector<PiecewiseLinear> dict = bl_dictionary();
    double best = 0.0;
    for (const auto& f : dict) {
        double emp = 0.0;
        for (double e : ev) emp += f(e);
        best = std::max(best, std::abs(emp / n - f.semicircle_mean()));
    }
    out.d_bl = best;
    return out;
}

EsdDistance esd_distance(const GOESpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("esd_distance: need n >= 2");
    return esd_distance(sample_spectrum(spec).eigenvalues);
}

MCEstimate spherical_integral_mc(int n, const std::vector<double>& gamma,
                                 const std::vector<double>& diag, long trials, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("spherical_integral_mc: n must be >= 1");
    if (static_cast<int>(gamma.size()) > n)
        throw std::invalid_argument("spherical_integral_mc: more spikes than dimensions");
    if (static_cast<int>(diag.size()) != n)
        throw std::invalid_argument("spherical_integral_mc: diag must have n entries");
    require_trials(trials);
    const int r = static_cast<int>(gamma.size());
    const double d0 = diag.front();

    std::vector<double> samples(trials);
    parallel_for(trials, [&](std::size_t trial) {
        Rng rng = make_rng(seed, trial);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd g(n, std::max(r, 1));
        for (int j = 0; j < g.cols(); ++j)
            for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
        // Gram-Schmidt frame; the Rayleigh quotient is taken relative to diag[0]
        // so that a constant diagonal gives an exactly constant integrand.
        double exponent = 0.0;
        for (int j = 0; j < r; ++j) {
            Eigen::VectorXd v = g.col(j);
            for (int t = 0; t < j; ++t) v -= g.col(t).dot(v) * g.col(t);
            v.normalize();
            g.col(j) = v;
            double q = 0.0;
            for (int i = 0; i < n; ++i) q += (diag[i] - d0) * v(i) * v(i);
            exponent += gamma[j] * (d0 + q);
        }
        samples[trial] = std::exp(0.5 * n * exponent);
    });

    MCEstimate est;
    est.trials = trials;
    est.seed = seed;
    // Running mean: identical samples reproduce their common value exactly.
    double mean = 0.0;
    for (long i = 0; i < trials; ++i) mean += (samples[i] - mean) / (i + 1.0);
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    est.value = mean;
    est.std_error = std::sqrt(ss / (trials - 1.0) / trials);
    return est;
}

}  // namespace spiked
