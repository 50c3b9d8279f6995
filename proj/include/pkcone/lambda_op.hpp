#pragma once

#include <Eigen/Core>

#include "pkcone/multiindex.hpp"
#include "pkcone/problem.hpp"
#include "pkcone/symfunc.hpp"

namespace pkcone {

/// The eigenvalue-sum map: entry at table position of I equals sum_{i in I} lam_i.
Eigen::VectorXd lambda_vector(const Spectrum& lam, const IndexTable& table);

/// Membership of lam in the (P, k)-cone, i.e. lambda_vector(lam) in Gamma_k.
bool in_pk_cone(const Spectrum& lam, int P, int k);
bool in_pk_cone(const Spectrum& lam, const IndexTable& table, int k);

/// min over 1 <= j <= k of sigma_j(lambda_vector(lam)); positive iff in the cone.
double pk_cone_margin(const Spectrum& lam, const IndexTable& table, int k);

/// N x N matrix of the eigenvalue-sum lift of a symmetric matrix A in the
/// canonical wedge basis. Symmetric for symmetric A; its eigenvalue multiset
/// equals lambda_vector of the eigenvalues of A.
Eigen::MatrixXd derivation_matrix(const Eigen::MatrixXd& A, const IndexTable& table);

/// Operator value / gradient as a function of the eigenvalue list. These are
/// the workhorses of the solver: grad_i = sum over indices containing i of the
/// quotient partials, pushed through the selected mode transform.
double f_from_spectrum(const Spectrum& lam, const IndexTable& table, int k, int l, OperatorMode mode);
Eigen::VectorXd f_grad_spectrum(const Spectrum& lam, const IndexTable& table, int k, int l, OperatorMode mode);

/// Operator value/gradient on a symmetric matrix via the eigen path
/// (n x n eigendecomposition, then symmetric-function calculus in the
/// eigenframe). Throws std::domain_error when the spectrum leaves the cone.
double f_value(const Eigen::MatrixXd& A, const ProblemSpec& spec, OperatorMode mode);
Eigen::MatrixXd f_grad(const Eigen::MatrixXd& A, const ProblemSpec& spec, OperatorMode mode);

/// Cross-check oracle: same value computed from the eigenvalues of the
/// derivation matrix instead of the eigenvalues of A.
double f_value_w_path(const Eigen::MatrixXd& A, const ProblemSpec& spec, OperatorMode mode);

/// Mode transform of a raw quotient value (exposed for reuse in the solver).
double apply_mode(double raw, int k, int l, OperatorMode mode);
/// d(mode transform)/d(raw) at the given raw value.
double apply_mode_derivative(double raw, int k, int l, OperatorMode mode);

}  // namespace pkcone
