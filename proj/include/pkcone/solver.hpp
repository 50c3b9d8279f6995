#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <stdexcept>
#include <vector>

#include "pkcone/problem.hpp"
#include "pkcone/sphere.hpp"

namespace pkcone {

/// One equation instance on a grid: parameters plus the per-node positive
/// density phi.
struct SphereProblem {
    ProblemSpec spec;
    SphereGrid grid;
    Eigen::VectorXd phi;

    void validate() const;
};

/// Homotopy target at time t: deforms the constant that makes u == 1 exact at
/// t = 0 into phi at t = 1, affinely in phi^{-1/(k-l+p-1)}. `eps` shifts the
/// exponent p (the regularized path of the scale-invariant case).
Eigen::VectorXd phi_homotopy(const SphereProblem& prob, double t, double eps = 0.0);

enum class ResidualForm {
    Raw,   // sigma_k/sigma_l - u^{p-1}(u^2+|Du|^2)^{(k+1-q)/2} phi_t
    Root,  // difference of the (k-l)-th roots; the form the linearization differentiates
};

/// Per-node residual. Throws std::domain_error naming the first inadmissible
/// node (cone margin <= 0).
Eigen::VectorXd residual(const SolutionField& field, const SphereProblem& prob, double t,
                         ResidualForm form = ResidualForm::Raw, double eps = 0.0);

/// Sparse linearized operator of the Root-form residual at `field`:
/// L_u(v) = F^{ij}(v_ij + v delta_ij) - (d rhs/d u) v - (d rhs/d grad u) . grad v.
Eigen::SparseMatrix<double> linearize(const SolutionField& field, const SphereProblem& prob, double t,
                                      double eps = 0.0);

struct NewtonOptions {
    double tol = 1e-10;   // on ||root residual||_inf, relative to max(1, ||rhs||_inf)
    int max_iters = 50;
    int max_halvings = 40;
};

struct NewtonResult {
    SolutionField field;
    int iters = 0;
    double res_inf = 0.0;
};

/// Thrown when a Newton solve cannot make progress (line-search exhaustion,
/// iteration cap, linear-solve breakdown). Continuation reacts by halving dt.
struct NewtonFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Damped cone-preserving Newton for the t-slice of the homotopy. Every
/// accepted iterate keeps all node margins and u positive. Throws
/// std::domain_error if u0 is inadmissible, NewtonFailure on breakdown.
NewtonResult newton_solve(const Eigen::VectorXd& u0, const SphereProblem& prob, double t,
                          const NewtonOptions& opts = {}, double eps = 0.0);

struct HomotopyState {
    double t;
    int newton_iters;
    double res_inf;
    double min_margin;
    double min_eig_a;  // smallest eigenvalue of D^2 u + u I over nodes
};

struct ContinuationResult {
    SolutionField field;
    std::vector<HomotopyState> trace;
};

/// Continuation from the exact constant solution at t = 0 to t = 1 on an
/// adaptive grid (initially `steps` uniform steps, dt halved on Newton
/// failure, floor 1e-4). Requires p + eps > q - l.
ContinuationResult continuation(const SphereProblem& prob, int steps = 10, const NewtonOptions& opts = {},
                                double eps = 0.0);

struct HomogeneousResult {
    SolutionField field;              // final solution, normalized to min u == 1
    double gamma;                     // (min u_eps)^eps at the smallest eps
    std::vector<double> gamma_eps;    // one entry per eps, same order as eps_list
    std::vector<double> min_u_eps;
    std::vector<HomotopyState> trace; // concatenated traces of the eps runs
};

/// The scale-invariant case p = q - l > 1: solves the exponent-regularized
/// equation for each eps in the (strictly decreasing, positive) list, extracts
/// gamma_eps = (min u_eps)^eps, and requires the last three entries to be
/// Cauchy within 1e-4. The returned field solves the limit equation with
/// gamma * phi up to O(eps); its residual column reports exactly that defect.
HomogeneousResult homogeneous_solve(const SphereProblem& prob, const std::vector<double>& eps_list,
                                    const NewtonOptions& opts = {}, int steps = 10);

/// Default regularization schedule.
std::vector<double> default_eps_list();

}  // namespace pkcone
