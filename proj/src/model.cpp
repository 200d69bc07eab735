#include "spikedland/model.hpp"

#include <cmath>
#include <string>

#include "spikedland/extended_real.hpp"

namespace spiked {

ModelParams ModelParams::make(int p, std::vector<int> k, std::vector<double> lambda) {
    ModelParams params{p, std::move(k), std::move(lambda)};
    params.validate();
    return params;
}

ModelParams ModelParams::uniform(int p, int k, std::vector<double> lambda) {
    std::vector<int> degrees(lambda.size(), k);
    return make(p, std::move(degrees), std::move(lambda));
}

std::optional<int> ModelParams::common_degree() const {
    if (k.empty()) return std::nullopt;
    for (int ki : k)
        if (ki != k.front()) return std::nullopt;
    return k.front();
}

void ModelParams::validate() const {
    if (p < 3) throw std::invalid_argument("ModelParams: p must be >= 3, got " + std::to_string(p));
    if (lambda.empty()) throw std::invalid_argument("ModelParams: r must be >= 1");
    if (k.size() != lambda.size())
        throw std::invalid_argument("ModelParams: k and lambda must both have r entries");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 3)
            throw std::invalid_argument("ModelParams: k_" + std::to_string(i + 1) + " must be >= 3");
        if (!std::isfinite(lambda[i]) || lambda[i] < 0.0)
            throw std::invalid_argument("ModelParams: lambda_" + std::to_string(i + 1) +
                                        " must be finite and nonnegative");
        if (i > 0 && lambda[i] > lambda[i - 1])
            throw std::invalid_argument("ModelParams: lambda must be sorted descending");
    }
}

OverlapPoint::OverlapPoint(std::vector<double> m) : m_(std::move(m)) {
    if (m_.empty()) throw std::invalid_argument("OverlapPoint: at least one coordinate required");
    for (double mi : m_) {
        if (!std::isfinite(mi) || std::abs(mi) > 1.0)
            throw std::invalid_argument("OverlapPoint: coordinates must lie in [-1,1]");
        alpha_ += mi * mi;
    }
}

bool OverlapPoint::nonnegative() const {
    for (double mi : m_)
        if (mi < 0.0) return false;
    return true;
}

void require_arity(const ModelParams& params, const OverlapPoint& m) {
    if (static_cast<int>(m.size()) != params.r())
        throw std::invalid_argument("overlap point has " + std::to_string(m.size()) +
                                    " coordinates, model has r = " + std::to_string(params.r()));
}

double ipow(double x, int n) {
    if (n < 0) return 1.0 / ipow(x, -n);
    double result = 1.0;
    double base = x;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

std::string format_double(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "+inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_extended(ExtendedReal x) { return format_double(x.to_double()); }

}  // namespace spiked
