#pragma once

#include <vector>

#include "spikedland/extended_real.hpp"
#include "spikedland/model.hpp"

namespace spiked {

/// I_GOE(x) = (1/2) int_2^x sqrt(y^2-4) dy; +inf below the edge.
ExtendedReal i_goe(double x);

/// Stieltjes transform of the semicircle outside the bulk, G(x) = (x - sqrt(x^2-4))/2.
double stieltjes_sc(double x);

/// J(rho_sc, gamma, x). Needs gamma > 0 and x >= 2.
double j_coupling(double gamma, double x);

/// Rate of a single supercritical spike (gamma >= 1), zero at gamma + 1/gamma.
double i_gamma(double gamma, double x);

/// Rate of the top eigenvalue of the spiked GOE with strengths gamma (sorted descending).
ExtendedReal i_max(const std::vector<double>& gamma, double x);

/// Tail rate L(gamma, t) = inf_{[2,t]} I_max; +inf for t < 2.
ExtendedReal big_l(const std::vector<double>& gamma, double t);
/// Left limit L(gamma, t-); differs from big_l only at t = 2.
ExtendedReal big_l_left(const std::vector<double>& gamma, double t);

/// Sigma^max(m,x) = Sigma^tot(m,x) - L(gamma(m), t(m,x)).
ExtendedReal sigma_max_joint(const ModelParams& params, const OverlapPoint& m, double x);

/// max_x Sigma^max(m,x), maximized piecewise between the kinks of L.
ExtendedReal sigma_max_projected(const ModelParams& params, const OverlapPoint& m);

/// The x at which sigma_max_projected is attained (NaN off D_Sigma).
double sigma_max_argmax(const ModelParams& params, const OverlapPoint& m);

}  // namespace spiked
