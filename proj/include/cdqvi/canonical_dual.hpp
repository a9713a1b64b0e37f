#pragma once

#include "cdqvi/aqvi.hpp"

namespace cdqvi {

/// Geometric operator xi_i = sqrt(lambda_i^2 + g_i^2) - lambda_i + g_i,
/// i.e. xi_i = fb(lambda_i, -g_i(tau)).
Vec lambda_op(const AqviInstance& inst, const Vec& tau, const Vec& lambda);

/// Same operator with the root smoothed by eps.
Vec lambda_op_smoothed(const AqviInstance& inst, const Vec& tau, const Vec& lambda, double eps);

/// Canonical function 1/2 |xi|^2.
double v0(const Vec& xi);

/// Its Legendre conjugate, 1/2 |sigma|^2.
double v0_conj(const Vec& sigma);

/// Total complementarity function
///   sum_i [sigma_i xi_i(tau, lambda) - sigma_i^2 / 2] + 1/2 z^T M z - fvec^T z.
double total_complementarity(const AqviInstance& inst, const Vec& tau, const Vec& lambda,
                             const Vec& sigma);

/// Smoothed total complementarity; eps = 0 gives the unsmoothed function.
double total_complementarity_smoothed(const AqviInstance& inst, const Vec& tau, const Vec& lambda,
                                      const Vec& sigma, double eps);

/// Alternative grouping of the sigma-linear terms:
///   fbar(sigma) = fvec + (-(A + B)^T sigma; sigma).
/// With it, Xi_0 = sum_i [sigma_i sqrt(lambda_i^2 + g_i^2) - sigma_i^2 / 2]
///                 - sigma^T c + 1/2 z^T M z - fbar(sigma)^T z.
/// Not used by any evaluation routine.
Vec regrouped_linear_term(const AqviInstance& inst, const Vec& sigma);

/// Everything the inner solver needs at one point.
struct CanonicalEval {
  Vec xi;           // smoothed Lambda at (tau, lambda)
  double value = 0; // Xi_eps
  Vec grad_primal;  // d Xi_eps / d(tau, lambda)
  Vec grad_dual;    // d Xi_eps / d sigma
  double eps = 0;
};

CanonicalEval evaluate_canonical(const AqviInstance& inst, const Vec& tau, const Vec& lambda,
                                 const Vec& sigma, double eps);

/// H_eps = (grad_{tau,lambda} Xi_eps; -grad_sigma Xi_eps), length N + 2m.
/// Variables are packed as w = (tau, lambda, sigma). Requires eps > 0.
Vec h_eps(const AqviInstance& inst, const Vec& w, double eps);

/// Jacobian of h_eps:
///   [ M + sum sigma_i Hess(rho_i)   grad Lambda^T ]
///   [ -grad Lambda                   I_m           ]
Mat jh_eps(const AqviInstance& inst, const Vec& w, double eps);

/// Split a packed w into its three blocks.
PrimalDualPoint unpack(const AqviInstance& inst, const Vec& w);
Vec pack(const Vec& tau, const Vec& lambda, const Vec& sigma);

}  // namespace cdqvi
