#pragma once

#include <Eigen/Core>

namespace pkcone {

/// Eigenvalue list of a symmetric matrix (dimensionless, finite entries).
using Spectrum = Eigen::VectorXd;

/// k-th elementary symmetric function of `lam`. Total on k: returns 1 for
/// k == 0 and 0 for k < 0 or k > lam.size().
double sigma(int k, const Spectrum& lam);

/// [sigma_0, ..., sigma_kmax] in one O(n*kmax) pass.
Eigen::VectorXd sigma_prefix(const Spectrum& lam, int kmax);

/// sigma_k of `lam` with entry `drop` deleted; equals the partial derivative
/// of sigma_{k+1} in coordinate `drop`.
double sigma_minor(int k, const Spectrum& lam, Eigen::Index drop);

/// Garding cone membership: sigma_j(lam) > 0 for 1 <= j <= level.
/// Strict inequality with zero tolerance; use gamma_margin for boundary queries.
bool in_gamma(const Spectrum& lam, int level);

/// min over 1 <= j <= level of sigma_j(lam). Positive iff lam lies in Gamma_level.
double gamma_margin(const Spectrum& lam, int level);

/// sigma_k / sigma_l for lam in Gamma_k, 0 <= l < k. Throws std::domain_error
/// on a cone violation.
double quotient(int k, int l, const Spectrum& lam);

/// Componentwise partial derivatives of quotient(k, l, .),
/// grad_i = (sigma_{k-1}(lam|i) sigma_l - sigma_k sigma_{l-1}(lam|i)) / sigma_l^2.
Eigen::VectorXd quotient_grad(int k, int l, const Spectrum& lam);

}  // namespace pkcone
