#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace spiked {

/// Raised when an operation is asked for a configuration it does not cover,
/// e.g. zero-locus solving with mixed spike degrees.
class UnsupportedConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Landscape f = sum_i lambda_i <u_i, sigma>^{k_i} + H_N(sigma), H_N a pure p-spin.
struct ModelParams {
    int p = 3;
    std::vector<int> k;
    std::vector<double> lambda;

    /// Validates p >= 3, every k_i >= 3, lambda nonnegative and sorted descending.
    static ModelParams make(int p, std::vector<int> k, std::vector<double> lambda);
    /// Same degree k for every spike.
    static ModelParams uniform(int p, int k, std::vector<double> lambda);

    int r() const { return static_cast<int>(lambda.size()); }
    /// The common degree when all k_i agree.
    std::optional<int> common_degree() const;
    void validate() const;
};

/// An overlap vector m in [-1,1]^r with alpha = sum m_i^2 cached.
class OverlapPoint {
public:
    explicit OverlapPoint(std::vector<double> m);
    OverlapPoint(std::initializer_list<double> m) : OverlapPoint(std::vector<double>(m)) {}

    std::span<const double> m() const { return m_; }
    double operator[](std::size_t i) const { return m_[i]; }
    std::size_t size() const { return m_.size(); }
    double alpha() const { return alpha_; }

    /// Membership in D_Sigma: alpha in (0,1). alpha == 1 is outside.
    bool in_domain() const { return alpha_ > 0.0 && alpha_ < 1.0; }
    bool nonnegative() const;

private:
    std::vector<double> m_;
    double alpha_ = 0.0;
};

/// Throws std::invalid_argument unless m has exactly r coordinates.
void require_arity(const ModelParams& params, const OverlapPoint& m);

/// x^n for an integer exponent, exact for the small degrees used here.
double ipow(double x, int n);

}  // namespace spiked
