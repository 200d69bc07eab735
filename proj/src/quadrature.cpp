#include "spikedland/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <queue>
#include <vector>

namespace spiked {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    Eigen::VectorXd value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const VectorIntegrand& f, int dim, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Eigen::VectorXd kron = Eigen::VectorXd::Zero(dim), gauss = Eigen::VectorXd::Zero(dim);
    const Eigen::VectorXd fc = f(c);
    kron += kWgk[7] * fc;
    gauss += kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const Eigen::VectorXd sum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    Segment s{a, b, kron * h, 0.0};
    s.error = ((kron - gauss) * h).cwiseAbs().maxCoeff();
    return s;
}

}  // namespace

QuadratureResult integrate_gk15(const VectorIntegrand& f, int dim, double a, double b,
                                double rel_tol, double abs_tol, int max_intervals) {
    QuadratureResult out;
    out.value = Eigen::VectorXd::Zero(dim);
    if (!(b > a)) return out;

    std::priority_queue<Segment> heap;
    Segment first = gk15(f, dim, a, b);
    Eigen::VectorXd total = first.value;
    double err = first.error;
    heap.push(std::move(first));
    int count = 1;

    auto target = [&] { return std::max(abs_tol, rel_tol * total.cwiseAbs().maxCoeff()); };
    while (err > target()) {
        if (count >= max_intervals) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "integrate_gk15: no convergence after %d intervals (error %.3e, target %.3e)",
                          count, err, target());
            throw QuadratureError(buf, err, target());
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("integrate_gk15: interval collapsed below machine resolution", err,
                                  target());
        }
        Segment left = gk15(f, dim, worst.a, mid);
        Segment right = gk15(f, dim, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        ++count;
    }
    // Re-sum to shed the drift of incremental updates.
    total.setZero();
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = err;
    out.intervals = count;
    return out;
}

}  // namespace spiked
