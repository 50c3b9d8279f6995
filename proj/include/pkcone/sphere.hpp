#pragma once

#include <Eigen/Core>
#include <string>

#include "pkcone/problem.hpp"

namespace pkcone {

enum class GridBackend {
    Axisym,  // profiles u(theta) on S^n, theta in [0, pi] inclusive, reflective ends
    FullS2,  // full 2-sphere grid, staggered colatitudes (no pole nodes), periodic phi
};

/// Finite-difference grid on the sphere. Second-order centered stencils;
/// the full-S2 backend crosses the poles by the index reflection phi -> phi + pi.
class SphereGrid {
public:
    static SphereGrid axisym(int n_theta, int dim);
    static SphereGrid full_s2(int n_theta, int n_phi);

    GridBackend backend() const { return backend_; }
    int dim() const { return dim_; }  // sphere dimension n (eigenvalues per node)
    int node_count() const;
    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }

    double theta(int node) const;
    double phi(int node) const;
    double spacing() const;  // h entering the O(h^2) slack rules

    // full-S2 node numbering: row-major over (theta row j, phi column i)
    int node(int j, int i) const { return j * n_phi_ + i; }

private:
    SphereGrid(GridBackend backend, int n_theta, int n_phi, int dim);

    GridBackend backend_;
    int n_theta_;
    int n_phi_;
    int dim_;
};

/// Per-node covariant first and second derivatives in the local orthonormal
/// frame. Axisym: grad is M x 1 (u'), hess is M x 2 with columns
/// (u'', cot(theta) u'), the tangential value carrying multiplicity dim-1 and
/// the L'Hopital limit u'' at the poles. FullS2: grad is M x 2, hess is M x 3
/// with columns (u_;11, u_;12, u_;22).
struct FrameDerivs {
    Eigen::MatrixXd grad;
    Eigen::MatrixXd hess;
};

FrameDerivs covariant_derivs(const Eigen::VectorXd& u, const SphereGrid& grid);

/// Discrete Laplace-Beltrami in conservative (divergence) form. Independent
/// route used to cross-check trace(hess).
Eigen::VectorXd laplace_beltrami(const Eigen::VectorXd& u, const SphereGrid& grid);

/// Discretized solution with cached derivatives, the per-node eigenvalue list
/// of D^2 u + u I (sorted ascending), and the per-node cone margin.
struct SolutionField {
    SphereGrid grid;
    Eigen::VectorXd u;
    FrameDerivs derivs;
    Eigen::MatrixXd spectrum;  // node x dim, sorted ascending
    Eigen::VectorXd margin;    // min_{j<=k} sigma_j(Lambda) per node
    Eigen::VectorXd residual;  // filled by the solver; zero otherwise

    double grad_sq(int node) const;
    double min_margin() const { return margin.minCoeff(); }
    double min_eig() const { return spectrum.col(0).minCoeff(); }
};

/// Builds the solution field for positive u; throws on a nonpositive node.
SolutionField spectrum_field(const Eigen::VectorXd& u, const SphereGrid& grid, const ProblemSpec& spec);

/// CSV columns: theta, phi, u, lambda_1..lambda_n, margin, residual.
void write_solution_csv(const SolutionField& field, const std::string& path);

}  // namespace pkcone
