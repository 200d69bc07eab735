#include "spikedland/kac_rice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "spikedland/complexity.hpp"
#include "spikedland/quadrature.hpp"
#include "spikedland/seeding.hpp"
#include "spikedland/spike_spectrum.hpp"

namespace spiked {

namespace {

std::size_t ipow_size(int n, int p) {
    std::size_t s = 1;
    for (int i = 0; i < p; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

}  // namespace

double SpikedPolynomial::coupling_at(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int i : idx) flat = flat * n + static_cast<std::size_t>(i);
    return coupling.at(flat);
}

Eigen::MatrixXd SpikedPolynomial::contract(const Eigen::VectorXd& sigma) const {
    std::vector<double> v(coupling);
    std::size_t len = v.size();
    for (int step = 0; step < params.p - 2; ++step) {
        const std::size_t out = len / n;
        std::vector<double> w(out, 0.0);
        for (std::size_t j = 0; j < out; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += v[j * n + i] * sigma(i);
            w[j] = acc;
        }
        v.swap(w);
        len = out;
    }
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), n, n);
}

double SpikedPolynomial::noise_value(const Eigen::VectorXd& sigma) const {
    return sigma.dot(contract(sigma) * sigma);
}

double SpikedPolynomial::value(const Eigen::VectorXd& sigma) const {
    double v = noise_value(sigma);
    for (int i = 0; i < params.r(); ++i) v += params.lambda[i] * ipow(sigma(i), params.k[i]);
    return v;
}

Eigen::VectorXd SpikedPolynomial::gradient(const Eigen::VectorXd& sigma) const {
    Eigen::VectorXd g = params.p * (contract(sigma) * sigma);
    for (int i = 0; i < params.r(); ++i)
        g(i) += params.lambda[i] * params.k[i] * ipow(sigma(i), params.k[i] - 1);
    return g;
}

Eigen::MatrixXd SpikedPolynomial::hessian(const Eigen::VectorXd& sigma) const {
    Eigen::MatrixXd h = params.p * (params.p - 1.0) * contract(sigma);
    for (int i = 0; i < params.r(); ++i) {
        const int k = params.k[i];
        h(i, i) += params.lambda[i] * k * (k - 1.0) * ipow(sigma(i), k - 2);
    }
    return h;
}

Eigen::VectorXd SpikedPolynomial::riemannian_gradient(const Eigen::VectorXd& sigma) const {
    const Eigen::VectorXd g = gradient(sigma);
    return g - sigma.dot(g) * sigma;
}

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& sigma) {
    const int n = static_cast<int>(sigma.size());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(sigma)};
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    return q.rightCols(n - 1);
}

Eigen::MatrixXd SpikedPolynomial::riemannian_hessian(const Eigen::VectorXd& sigma) const {
    const Eigen::MatrixXd b = tangent_basis(sigma);
    const double radial = sigma.dot(gradient(sigma));
    Eigen::MatrixXd h = b.transpose() * hessian(sigma) * b;
    h.diagonal().array() -= radial;
    return h;
}

SpikedPolynomial build_polynomial(const ModelParams& params, int n, std::uint64_t seed) {
    params.validate();
    if (n < 2) throw std::invalid_argument("build_polynomial: n must be >= 2");
    if (params.r() > n) throw std::invalid_argument("build_polynomial: r must not exceed n");
    SpikedPolynomial poly;
    poly.n = n;
    poly.params = params;
    poly.seed = seed;

    const int p = params.p;
    const std::size_t size = ipow_size(n, p);
    Rng rng = make_rng(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> g(size);
    for (auto& x : g) x = normal(rng);

    // Average over each permutation orbit: the (1/p!) sum over S_p of G^pi.
    std::map<std::vector<int>, std::pair<double, int>> orbits;
    std::vector<std::vector<int>> keys(size);
    std::vector<int> idx(p);
    for (std::size_t flat = 0; flat < size; ++flat) {
        std::size_t rest = flat;
        for (int d = p - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(rest % n);
            rest /= n;
        }
        std::vector<int> key(idx);
        std::sort(key.begin(), key.end());
        auto& slot = orbits[key];
        slot.first += g[flat];
        slot.second += 1;
        keys[flat] = std::move(key);
    }
    const double scale = 1.0 / std::sqrt(2.0 * n);
    poly.coupling.resize(size);
    for (std::size_t flat = 0; flat < size; ++flat) {
        const auto& slot = orbits[keys[flat]];
        poly.coupling[flat] = scale * slot.first / slot.second;
    }
    return poly;
}

namespace {

CriticalPointRecord make_record(const SpikedPolynomial& poly, const Eigen::VectorXd& sigma) {
    CriticalPointRecord rec;
    rec.location = sigma;
    rec.value = poly.value(sigma);
    rec.residual = poly.riemannian_gradient(sigma).norm();
    rec.overlaps.resize(poly.params.r());
    for (int i = 0; i < poly.params.r(); ++i) rec.overlaps[i] = sigma(i);

    const Eigen::MatrixXd h = poly.riemannian_hessian(sigma);
    const double scale = poly.hessian(sigma).norm() + std::abs(sigma.dot(poly.gradient(sigma)));
    rec.zero_tolerance = 1e-8 * scale;
    Eigen::VectorXd eig;
    if (h.rows() == 1) {
        eig = h.diagonal();
    } else {
        eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    }
    for (int i = 0; i < eig.size(); ++i) {
        if (std::abs(eig(i)) <= rec.zero_tolerance) rec.degenerate = true;
        if (eig(i) < 0.0) ++rec.index;
    }
    return rec;
}

void add_unique(std::vector<CriticalPointRecord>& points, CriticalPointRecord rec) {
    for (const auto& q : points)
        if ((q.location - rec.location).norm() < kDedupRadius) return;
    points.push_back(std::move(rec));
}

// f restricted to the circle as sum_t coef * cos^a sin^b.
struct TrigTerm {
    double coef;
    int a, b;
};

std::vector<TrigTerm> circle_terms(const SpikedPolynomial& poly) {
    const int p = poly.params.p;
    std::map<std::pair<int, int>, double> acc;
    for (std::size_t flat = 0; flat < poly.coupling.size(); ++flat) {
        int zeros = 0;
        std::size_t rest = flat;
        for (int d = 0; d < p; ++d) {
            if (rest % 2 == 0) ++zeros;
            rest /= 2;
        }
        acc[{zeros, p - zeros}] += poly.coupling[flat];
    }
    const auto& prm = poly.params;
    acc[{prm.k[0], 0}] += prm.lambda[0];
    if (prm.r() > 1) acc[{0, prm.k[1]}] += prm.lambda[1];
    std::vector<TrigTerm> out;
    for (const auto& [ab, c] : acc)
        if (c != 0.0) out.push_back({c, ab.first, ab.second});
    return out;
}

std::vector<TrigTerm> differentiate(const std::vector<TrigTerm>& terms) {
    std::map<std::pair<int, int>, double> acc;
    for (const auto& t : terms) {
        if (t.a > 0) acc[{t.a - 1, t.b + 1}] -= t.coef * t.a;
        if (t.b > 0) acc[{t.a + 1, t.b - 1}] += t.coef * t.b;
    }
    std::vector<TrigTerm> out;
    for (const auto& [ab, c] : acc)
        if (c != 0.0) out.push_back({c, ab.first, ab.second});
    return out;
}

double eval_terms(const std::vector<TrigTerm>& terms, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    double v = 0.0;
    for (const auto& t : terms) v += t.coef * ipow(c, t.a) * ipow(s, t.b);
    return v;
}

// cos^a and sin^b on the scan grid, shared across polynomials.
struct PowerTable {
    int degree;
    std::vector<std::vector<double>> cos_pow, sin_pow;
};

const PowerTable& power_table(int degree) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<PowerTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[degree];
    if (!slot) {
        slot = std::make_unique<PowerTable>();
        slot->degree = degree;
        slot->cos_pow.assign(degree + 1, std::vector<double>(kCircleScanSamples, 1.0));
        slot->sin_pow.assign(degree + 1, std::vector<double>(kCircleScanSamples, 1.0));
        for (int j = 0; j < kCircleScanSamples; ++j) {
            const double th = 2.0 * std::numbers::pi * j / kCircleScanSamples;
            const double c = std::cos(th), s = std::sin(th);
            for (int d = 1; d <= degree; ++d) {
                slot->cos_pow[d][j] = slot->cos_pow[d - 1][j] * c;
                slot->sin_pow[d][j] = slot->sin_pow[d - 1][j] * s;
            }
        }
    }
    return *slot;
}

CriticalPointSearch circle_scan(const SpikedPolynomial& poly) {
    const auto df = differentiate(circle_terms(poly));
    int degree = 1;
    for (const auto& t : df) degree = std::max({degree, t.a, t.b});
    const PowerTable& table = power_table(degree);

    std::vector<double> vals(kCircleScanSamples, 0.0);
    for (const auto& t : df) {
        const double* cp = table.cos_pow[t.a].data();
        const double* sp = table.sin_pow[t.b].data();
        for (int j = 0; j < kCircleScanSamples; ++j) vals[j] += t.coef * cp[j] * sp[j];
    }

    CriticalPointSearch out;
    out.complete = true;
    const double step = 2.0 * std::numbers::pi / kCircleScanSamples;
    for (int j = 0; j < kCircleScanSamples; ++j) {
        const int nx = (j + 1) % kCircleScanSamples;
        double root;
        if (vals[j] == 0.0) {
            root = j * step;
        } else if ((vals[j] < 0.0) != (vals[nx] < 0.0) && vals[nx] != 0.0) {
            double lo = j * step, hi = (j + 1) * step;
            const bool lo_neg = vals[j] < 0.0;
            for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((eval_terms(df, mid) < 0.0) == lo_neg) lo = mid; else hi = mid;
            }
            root = 0.5 * (lo + hi);
        } else {
            continue;
        }
        Eigen::VectorXd sigma(2);
        sigma << std::cos(root), std::sin(root);
        add_unique(out.points, make_record(poly, sigma));
    }
    return out;
}

CriticalPointSearch newton_multistart(const SpikedPolynomial& poly, double tol, int budget) {
    CriticalPointSearch out;
    const int n = poly.n;
    for (int start = 0; start < budget; ++start) {
        Rng rng = make_rng(poly.seed ^ 0x5EED5EED5EED5EEDULL, static_cast<std::uint64_t>(start));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd sigma(n);
        for (int i = 0; i < n; ++i) sigma(i) = normal(rng);
        sigma.normalize();

        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            const Eigen::VectorXd g = poly.riemannian_gradient(sigma);
            if (g.norm() <= tol) {
                converged = true;
                break;
            }
            const Eigen::MatrixXd b = tangent_basis(sigma);
            const Eigen::VectorXd gt = b.transpose() * g;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(poly.riemannian_hessian(sigma));
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n - 1);
            for (int i = 0; i < n - 1; ++i) {
                const double mu = es.eigenvalues()(i);
                if (std::abs(mu) < 1e-14) continue;
                v -= (es.eigenvectors().col(i).dot(gt) / mu) * es.eigenvectors().col(i);
            }
            const double len = v.norm();
            if (len > 0.5) v *= 0.5 / len;
            sigma = (sigma + b * v).normalized();
        }
        if (!converged) {
            ++out.discarded_starts;
            continue;
        }
        add_unique(out.points, make_record(poly, sigma));
    }
    return out;
}

bool selected(const CriticalPointRecord& rec, int n, CountSelector which) {
    switch (which.kind) {
        case CountSelector::Kind::Total: return true;
        case CountSelector::Kind::Index: return !rec.degenerate && rec.index == which.index;
        case CountSelector::Kind::Max: return !rec.degenerate && rec.index == n - 1;
    }
    return false;
}

}  // namespace

CriticalPointSearch find_critical_points(const SpikedPolynomial& poly, double tol, int budget) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_critical_points: tol must be positive");
    if (poly.n == 2) return circle_scan(poly);
    if (budget < 1) throw std::invalid_argument("find_critical_points: budget must be >= 1");
    return newton_multistart(poly, tol, budget);
}

std::vector<Interval> full_overlap_windows(int r) { return std::vector<Interval>(r, Interval{-1.0, 1.0}); }

CountEstimate count_expected(const ModelParams& params, int n, long trials, std::uint64_t seed,
                             const std::vector<Interval>& overlap_windows,
                             const Interval& value_window, CountSelector which, int budget) {
    params.validate();
    if (trials < 2) throw std::invalid_argument("count_expected: trials must be >= 2");
    if (static_cast<int>(overlap_windows.size()) != params.r())
        throw std::invalid_argument("count_expected: need one overlap window per spike");

    struct TrialResult {
        double count = 0.0;
        long degenerate = 0;
        long discarded = 0;
        bool complete = true;
    };
    std::vector<TrialResult> results(trials);
    parallel_for(trials, [&](std::size_t t) {
        TrialResult& res = results[t];
        if (value_window.empty()) return;
        const SpikedPolynomial poly = build_polynomial(params, n, trial_seed(seed, t));
        const CriticalPointSearch search = find_critical_points(poly, 1e-10, budget);
        res.complete = search.complete;
        res.discarded = search.discarded_starts;
        for (const auto& rec : search.points) {
            if (rec.degenerate) ++res.degenerate;
            if (!value_window.contains(rec.value)) continue;
            bool inside = true;
            for (int i = 0; i < params.r(); ++i)
                if (overlap_windows[i].empty() || !overlap_windows[i].contains(rec.overlaps[i])) inside = false;
            if (inside && selected(rec, n, which)) res.count += 1.0;
        }
    });

    CountEstimate out;
    double mean = 0.0;
    for (long t = 0; t < trials; ++t) mean += results[t].count;
    mean /= trials;
    double ss = 0.0;
    for (const auto& r : results) {
        ss += (r.count - mean) * (r.count - mean);
        out.degenerate_points += r.degenerate;
        out.discarded_starts += r.discarded;
        out.complete = out.complete && r.complete;
    }
    out.estimate.value = mean;
    out.estimate.std_error = std::sqrt(ss / (trials - 1.0) / trials);
    out.estimate.trials = trials;
    out.estimate.seed = seed;
    return out;
}

double sphere_volume(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double kac_rice_constant(int n, int r, int p) {
    const double N = n;
    const double log_c = std::log(2.0) + 0.5 * (N - 1.0) * std::log((N - 1.0) / (2.0 * std::numbers::e)) -
                         std::lgamma(0.5 * (N - r)) - 0.5 * (r - 1.0) * std::log(std::numbers::pi) +
                         0.5 * std::log(N / ((p - 1.0) * std::numbers::e * std::numbers::pi));
    return std::exp(log_c);
}

namespace {

struct KacRiceProblem {
    const ModelParams& params;
    int n;
    const std::vector<Interval>& windows;
    Interval value_window;
    CountSelector which;
    double rel_tol;
    int batches;
    int max_intervals;
    long trials;
    std::vector<Eigen::MatrixXd> goe;  // common random numbers, one per inner trial
    double prefactor;

    int dim() const { return n - 1; }
    double spike_scale() const { return std::sqrt(static_cast<double>(n) / (n - 1)); }

    // Eigenvalues of W_j + s diag(gamma(m)) for every inner trial, column j.
    Eigen::MatrixXd shifted_spectra(const OverlapPoint& m) const {
        const std::vector<double> gamma = spike_eigenvalues(params, m).gamma;
        const int d = dim();
        const double s = spike_scale();
        Eigen::MatrixXd out(d, trials);
        for (long j = 0; j < trials; ++j) {
            if (d == 1) {
                out(0, j) = goe[j](0, 0) + s * gamma[0];
                continue;
            }
            Eigen::MatrixXd a = goe[j];
            for (std::size_t i = 0; i < gamma.size(); ++i) a(i, i) += s * gamma[i];
            out.col(j) = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
        }
        return out;
    }

    // Batch means of |det H| * selector at spectral shift s t.
    Eigen::VectorXd det_batches(const Eigen::MatrixXd& spectra, double shift) const {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(batches);
        const int d = dim();
        const long per = trials / batches;
        for (long j = 0; j < trials; ++j) {
            double det = 1.0;
            int neg = 0;
            for (int i = 0; i < d; ++i) {
                const double e = spectra(i, j) - shift;
                det *= std::abs(e);
                if (e < 0.0) ++neg;
            }
            bool keep = true;
            if (which.kind == CountSelector::Kind::Index) keep = neg == which.index;
            if (which.kind == CountSelector::Kind::Max) keep = neg == d;
            if (keep) acc(j / per) += det;
        }
        return acc / static_cast<double>(per);
    }

    Eigen::VectorXd x_integral(const OverlapPoint& m, double weight) const {
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(batches);
        if (!(weight > 0.0)) return zero;
        double centre = 0.0;
        for (int i = 0; i < params.r(); ++i) centre += params.lambda[i] * ipow(m[i], params.k[i]);
        const double reach = std::sqrt(60.0 / n);
        const double lo = std::max(value_window.lo, centre - reach);
        const double hi = std::min(value_window.hi, centre + reach);
        if (!(hi > lo)) return zero;

        const Eigen::MatrixXd spectra = shifted_spectra(m);
        const double half_log = 0.5 * std::log(1.0 - m.alpha());
        const double s = spike_scale();
        auto integrand = [&](double x) -> Eigen::VectorXd {
            const double s0 = s_func(params, m, x).value() - half_log;
            const double t = t_func(params, m, x);
            return det_batches(spectra, s * t) * std::exp(n * s0);
        };
        const QuadratureResult q = integrate_gk15(integrand, batches, lo, hi, 0.1 * rel_tol, 0.0, max_intervals);
        return q.value * weight;
    }

    // Nested integration over m_1..m_r; the last coordinate is m_r = rho sin(phi),
    // which absorbs the (1 - alpha)^{(n-r-2)/2} endpoint behaviour.
    Eigen::VectorXd m_integral(std::vector<double>& prefix) const {
        const int r = params.r();
        const int i = static_cast<int>(prefix.size());
        double used = 0.0;
        for (double v : prefix) used += v * v;
        const double rho = std::sqrt(std::max(0.0, 1.0 - used));
        const Interval& w = windows[i];
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(batches);
        if (w.empty() || rho <= 0.0) return zero;

        if (i + 1 < r) {
            const double lo = std::max(w.lo, -rho), hi = std::min(w.hi, rho);
            if (!(hi > lo)) return zero;
            auto f = [&](double mi) -> Eigen::VectorXd {
                prefix.push_back(mi);
                Eigen::VectorXd v = m_integral(prefix);
                prefix.pop_back();
                return v;
            };
            return integrate_gk15(f, batches, lo, hi, rel_tol, 0.0, max_intervals).value;
        }

        const double lo = std::asin(std::clamp(w.lo / rho, -1.0, 1.0));
        const double hi = std::asin(std::clamp(w.hi / rho, -1.0, 1.0));
        if (!(hi > lo)) return zero;
        auto f = [&](double phi) -> Eigen::VectorXd {
            const double radial = rho * std::cos(phi);
            std::vector<double> mv(prefix);
            mv.push_back(rho * std::sin(phi));
            const OverlapPoint m(std::move(mv));
            if (!m.in_domain() || radial <= 0.0) return Eigen::VectorXd::Zero(batches);
            const double weight = std::pow(radial, n - r - 1);
            return x_integral(m, weight);
        };
        return integrate_gk15(f, batches, lo, hi, rel_tol, 0.0, max_intervals).value;
    }
};

long pilot_trials(const ModelParams& params, int n, const std::vector<Interval>& windows,
                  std::uint64_t seed, int batches) {
    // Relative spread of |det H| at the centre of the window, 1% target.
    std::vector<double> mv;
    double used = 0.0;
    for (const auto& w : windows) {
        double c = 0.5 * (std::max(w.lo, -1.0) + std::min(w.hi, 1.0));
        const double cap = 0.9 * std::sqrt(std::max(0.0, 1.0 - used));
        c = std::clamp(c, -cap, cap);
        used += c * c;
        mv.push_back(c);
    }
    if (used == 0.0) mv[0] = 0.1;
    const OverlapPoint m(std::move(mv));
    const std::vector<double> gamma = spike_eigenvalues(params, m).gamma;
    double centre = 0.0;
    for (int i = 0; i < params.r(); ++i) centre += params.lambda[i] * ipow(m[i], params.k[i]);
    const double shift = std::sqrt(static_cast<double>(n) / (n - 1)) * t_func(params, m, centre);

    const long pilot = 2000;
    double sum = 0.0, sum2 = 0.0;
    for (long j = 0; j < pilot; ++j) {
        Rng rng = make_rng(seed ^ 0x9170779170779170ULL, j);
        Eigen::MatrixXd a = sample_goe(n - 1, rng);
        for (std::size_t i = 0; i < gamma.size(); ++i)
            a(i, i) += std::sqrt(static_cast<double>(n) / (n - 1)) * gamma[i];
        Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
        double det = 1.0;
        for (int i = 0; i < ev.size(); ++i) det *= std::abs(ev(i) - shift);
        sum += det;
        sum2 += det * det;
    }
    const double mean = sum / pilot;
    const double var = std::max(0.0, sum2 / pilot - mean * mean);
    const double cv = mean > 0.0 ? std::sqrt(var) / mean : 1.0;
    long want = static_cast<long>(std::ceil(cv * cv / 1e-4));
    want = std::clamp<long>(want, 2000, 400000);
    return (want + batches - 1) / batches * batches;
}

}  // namespace

MCEstimate kac_rice_eval(const ModelParams& params, int n, const std::vector<Interval>& overlap_windows,
                         const Interval& value_window, long inner_trials, CountSelector which,
                         const KacRiceOptions& options) {
    params.validate();
    const int r = params.r();
    if (n < 2) throw std::invalid_argument("kac_rice_eval: n must be >= 2");
    if (r > n - 1) throw std::invalid_argument("kac_rice_eval: needs r <= n - 1");
    if (static_cast<int>(overlap_windows.size()) != r)
        throw std::invalid_argument("kac_rice_eval: need one overlap window per spike");
    if (options.batches < 2) throw std::invalid_argument("kac_rice_eval: batches must be >= 2");
    if (inner_trials < 0) throw std::invalid_argument("kac_rice_eval: inner_trials must be >= 0");

    long trials = inner_trials;
    if (trials == 0) trials = pilot_trials(params, n, overlap_windows, options.seed, options.batches);
    trials = std::max<long>(trials, options.batches) / options.batches * options.batches;

    KacRiceProblem prob{params,         n,     overlap_windows, value_window,        which,
                        options.rel_tol, options.batches, options.max_intervals, trials, {},
                        kac_rice_constant(n, r, params.p)};
    prob.goe.resize(trials);
    parallel_for(trials, [&](std::size_t j) {
        Rng rng = make_rng(options.seed, j);
        prob.goe[j] = sample_goe(n - 1, rng);
    });

    MCEstimate est;
    est.trials = trials;
    est.seed = options.seed;
    if (value_window.empty()) return est;

    std::vector<double> prefix;
    const Eigen::VectorXd batch = prob.m_integral(prefix) * prob.prefactor;
    const double mean = batch.mean();
    const double var = (batch.array() - mean).square().sum() / (options.batches - 1.0);
    est.value = mean;
    est.std_error = std::sqrt(var / options.batches);
    return est;
}

}  // namespace spiked
