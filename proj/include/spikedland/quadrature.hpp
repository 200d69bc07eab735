#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spiked {

/// Adaptive quadrature gave up before reaching the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_error, double target_error)
        : std::runtime_error(what), achieved(achieved_error), target(target_error) {}
    double achieved;
    double target;
};

struct QuadratureResult {
    Eigen::VectorXd value;
    double error = 0.0;  // sup-norm estimate
    int intervals = 0;
};

using VectorIntegrand = std::function<Eigen::VectorXd(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) for a vector-valued integrand of fixed
/// length `dim`. Stops once the sup-norm error is below max(abs_tol, rel_tol * |I|_inf).
QuadratureResult integrate_gk15(const VectorIntegrand& f, int dim, double a, double b,
                                double rel_tol, double abs_tol = 0.0, int max_intervals = 2000);

}  // namespace spiked
