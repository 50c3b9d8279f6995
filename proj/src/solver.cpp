#include "pkcone/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "pkcone/lambda_op.hpp"
#include "pkcone/symfunc.hpp"

namespace pkcone {

namespace {

constexpr double kGammaCauchyTol = 1e-4;
constexpr double kMinDt = 1e-4;

struct Stencil {
    // (node, coefficient) pairs; duplicates are summed on insertion into triplets
    std::vector<std::pair<int, double>> taps;
    void add(int node, double c) { taps.emplace_back(node, c); }
};

// Linear stencils of the covariant derivatives used by the Jacobian. These
// mirror covariant_derivs exactly so the assembled matrix is the exact
// derivative of the discrete residual.
class GridStencils {
public:
    explicit GridStencils(const SphereGrid& grid) : grid_(grid) {}

    // axisym: d/dtheta and d2/dtheta2 with reflective ends
    Stencil d1_axi(int i) const {
        const int m = grid_.n_theta();
        const double h = grid_.spacing();
        Stencil s;
        s.add(reflect(i + 1, m), 1.0 / (2.0 * h));
        s.add(reflect(i - 1, m), -1.0 / (2.0 * h));
        return s;
    }
    Stencil d2_axi(int i) const {
        const int m = grid_.n_theta();
        const double h = grid_.spacing();
        Stencil s;
        s.add(reflect(i + 1, m), 1.0 / (h * h));
        s.add(i, -2.0 / (h * h));
        s.add(reflect(i - 1, m), 1.0 / (h * h));
        return s;
    }

    // full S2: ghost nodes map through the cross-pole reflection
    int wrap(int j, int i) const {
        const int nt = grid_.n_theta();
        const int np = grid_.n_phi();
        i = ((i % np) + np) % np;
        if (j < 0) {
            j = -j - 1;
            i = (i + np / 2) % np;
        } else if (j >= nt) {
            j = 2 * nt - 1 - j;
            i = (i + np / 2) % np;
        }
        return grid_.node(j, i);
    }

private:
    static int reflect(int i, int m) {
        if (i < 0) return -i;
        if (i >= m) return 2 * (m - 1) - i;
        return i;
    }
    const SphereGrid& grid_;
};

struct NodeOperator {
    double f_raw;       // sigma_k/sigma_l at the node
    double rhs_raw;     // u^{pe-1} (u^2+|Du|^2)^{(k+1-q)/2} phi_t
    double f_root;      // (k-l)-th roots
    double rhs_root;
};

// Evaluates the operator side and the prescribed side at one node.
NodeOperator eval_node(const SolutionField& field, const SphereProblem& prob, const IndexTable& table,
                       const Eigen::VectorXd& phi_t, double eps, int node) {
    const ProblemSpec& s = prob.spec;
    const double km = 1.0 / static_cast<double>(s.k - s.l);
    const Eigen::VectorXd big = lambda_vector(field.spectrum.row(node), table);
    const double margin = gamma_margin(big, s.k);
    if (!(margin > 0.0)) {
        std::ostringstream msg;
        msg << "residual: inadmissible iterate at node " << node << " (theta=" << field.grid.theta(node)
            << ", cone margin " << margin << ")";
        throw std::domain_error(msg.str());
    }
    const double f_raw = quotient(s.k, s.l, big);
    const double u = field.u[node];
    const double w = u * u + field.grad_sq(node);
    const double pe = s.p + eps;
    const double rhs_raw = std::pow(u, pe - 1.0) * std::pow(w, 0.5 * (s.k + 1 - s.q)) * phi_t[node];
    return {f_raw, rhs_raw, std::pow(f_raw, km), std::pow(rhs_raw, km)};
}

}  // namespace

void SphereProblem::validate() const {
    spec.validate();
    if (grid.dim() != spec.n) throw std::invalid_argument("grid: dimension does not match problem.n");
    if (static_cast<int>(phi.size()) != grid.node_count())
        throw std::invalid_argument("phi: size does not match the grid");
    for (int i = 0; i < static_cast<int>(phi.size()); ++i)
        if (!(phi[i] > 0.0)) throw std::invalid_argument("phi: must be positive at every node");
}

Eigen::VectorXd phi_homotopy(const SphereProblem& prob, double t, double eps) {
    const ProblemSpec& s = prob.spec;
    const double e = s.k - s.l + (s.p + eps) - 1.0;
    const double anchor = std::pow(s.c0(), -1.0 / e);
    Eigen::VectorXd out(prob.phi.size());
    for (int i = 0; i < static_cast<int>(prob.phi.size()); ++i)
        out[i] = std::pow((1.0 - t) * anchor + t * std::pow(prob.phi[i], -1.0 / e), -e);
    return out;
}

Eigen::VectorXd residual(const SolutionField& field, const SphereProblem& prob, double t, ResidualForm form,
                         double eps) {
    prob.validate();
    const IndexTable table(prob.spec.P, prob.spec.n);
    const Eigen::VectorXd phi_t = phi_homotopy(prob, t, eps);
    Eigen::VectorXd out(field.grid.node_count());
    for (int i = 0; i < field.grid.node_count(); ++i) {
        const NodeOperator v = eval_node(field, prob, table, phi_t, eps, i);
        out[i] = form == ResidualForm::Raw ? v.f_raw - v.rhs_raw : v.f_root - v.rhs_root;
    }
    return out;
}

namespace {

// Shared by linearize() and the Newton loop: root-form residual, its exact
// Jacobian, and the scale of the prescribed side.
struct Assembled {
    Eigen::VectorXd root;
    double rhs_scale = 0.0;
    Eigen::SparseMatrix<double> jac;
};

Assembled assemble(const SolutionField& field, const SphereProblem& prob, double t, double eps,
                   bool with_jacobian) {
    const ProblemSpec& s = prob.spec;
    const int m = field.grid.node_count();
    const IndexTable table(s.P, s.n);
    const Eigen::VectorXd phi_t = phi_homotopy(prob, t, eps);
    const GridStencils stencils(field.grid);
    const double km = 1.0 / static_cast<double>(s.k - s.l);
    const double alpha = (s.p + eps - 1.0) * km;          // exponent of u in the root rhs
    const double beta = 0.5 * (s.k + 1 - s.q) * km;       // exponent of (u^2+|Du|^2)

    Assembled out;
    out.root.resize(m);
    std::vector<Eigen::Triplet<double>> trips;
    if (with_jacobian) trips.reserve(static_cast<size_t>(m) * 16);

    for (int node = 0; node < m; ++node) {
        const NodeOperator v = eval_node(field, prob, table, phi_t, eps, node);
        out.root[node] = v.f_root - v.rhs_root;
        out.rhs_scale = std::max(out.rhs_scale, std::abs(v.rhs_root));
        if (!with_jacobian) continue;

        const double u = field.u[node];
        const double w = u * u + field.grad_sq(node);
        const double phi_root = std::pow(phi_t[node], km);
        // d rhs_root / du and d rhs_root / d(grad u) (Lemma-style coefficient groups)
        const double rhs_u = phi_root * (alpha * std::pow(u, alpha - 1.0) * std::pow(w, beta) +
                                         std::pow(u, alpha) * beta * std::pow(w, beta - 1.0) * 2.0 * u);
        const double rhs_grad_coef = phi_root * std::pow(u, alpha) * beta * std::pow(w, beta - 1.0) * 2.0;

        auto add_stencil = [&](const Stencil& st, double coef) {
            for (const auto& [col, c] : st.taps) trips.emplace_back(node, col, coef * c);
        };
        auto add_diag = [&](double coef) { trips.emplace_back(node, node, coef); };

        // gradient of the root-form operator with respect to the eigenvalue roles
        const Eigen::VectorXd g = f_grad_spectrum(field.spectrum.row(node), table, s.k, s.l, OperatorMode::Root);

        if (field.grid.backend() == GridBackend::Axisym) {
            // roles: spectrum row is sorted, but partials only depend on the value,
            // so g evaluated on the sorted row maps back by value
            const double rad = field.derivs.hess(node, 0) + u;
            const double tan = field.derivs.hess(node, 1) + u;
            double g_rad, g_tan;
            if (rad <= tan) {
                g_rad = g[0];
                g_tan = g[s.n - 1];
            } else {
                g_rad = g[s.n - 1];
                g_tan = g[0];
            }
            const double g_tan_sum = g.sum() - g_rad;
            const int i = node;
            const int last = field.grid.n_theta() - 1;
            if (i == 0 || i == last) {
                // at the poles every eigenvalue is u'' + u
                add_stencil(stencils.d2_axi(i), g_rad + g_tan_sum);
                add_diag(g_rad + g_tan_sum);
            } else {
                add_stencil(stencils.d2_axi(i), g_rad);
                add_stencil(stencils.d1_axi(i), g_tan_sum / std::tan(field.grid.theta(i)));
                add_diag(g_rad + g_tan_sum);
            }
            add_diag(-rhs_u);
            add_stencil(stencils.d1_axi(i), -rhs_grad_coef * field.derivs.grad(node, 0));
        } else {
            // frame-space gradient G = Q diag(g) Q^T of the 2x2 spectral function
            const double a11 = field.derivs.hess(node, 0) + u;
            const double a12 = field.derivs.hess(node, 1);
            const double a22 = field.derivs.hess(node, 2) + u;
            Eigen::Matrix2d a;
            a << a11, a12, a12, a22;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
            eig.computeDirect(a);
            // map per-position partials to the eigenvalues actually stored
            Eigen::Vector2d gpos;
            gpos << g[0], g[1];  // spectrum row ascending == eig.eigenvalues() ascending
            const Eigen::Matrix2d G = eig.eigenvectors() * gpos.asDiagonal() * eig.eigenvectors().transpose();

            const int j = node / field.grid.n_phi();
            const int i = node % field.grid.n_phi();
            const double ht = field.grid.spacing();
            const double hp = 2.0 * 3.14159265358979323846 / field.grid.n_phi();
            const double th = field.grid.theta(node);
            const double sin_t = std::sin(th);
            const double cot_t = std::cos(th) / sin_t;

            auto tap = [&](int jj, int ii, double c) {
                if (c != 0.0) trips.emplace_back(node, stencils.wrap(jj, ii), c);
            };
            // h11 = v_tt
            const double c_tt = G(0, 0);
            tap(j + 1, i, c_tt / (ht * ht));
            tap(j, i, -2.0 * c_tt / (ht * ht));
            tap(j - 1, i, c_tt / (ht * ht));
            // h12 = (v_tp - cot v_p)/sin   (enters twice via symmetry)
            const double c_tp = 2.0 * G(0, 1) / sin_t;
            tap(j + 1, i + 1, c_tp / (4.0 * ht * hp));
            tap(j + 1, i - 1, -c_tp / (4.0 * ht * hp));
            tap(j - 1, i + 1, -c_tp / (4.0 * ht * hp));
            tap(j - 1, i - 1, c_tp / (4.0 * ht * hp));
            tap(j, i + 1, -c_tp * cot_t / (2.0 * hp));
            tap(j, i - 1, c_tp * cot_t / (2.0 * hp));
            // h22 = v_pp/sin^2 + cot v_t
            const double c_pp = G(1, 1);
            tap(j, i + 1, c_pp / (hp * hp * sin_t * sin_t));
            tap(j, i, -2.0 * c_pp / (hp * hp * sin_t * sin_t));
            tap(j, i - 1, c_pp / (hp * hp * sin_t * sin_t));
            tap(j + 1, i, c_pp * cot_t / (2.0 * ht));
            tap(j - 1, i, -c_pp * cot_t / (2.0 * ht));
            // v I part of da, and the rhs u-derivative
            add_diag(G(0, 0) + G(1, 1) - rhs_u);
            // rhs gradient derivative: grad v = (v_t, v_p / sin)
            const double cg1 = -rhs_grad_coef * field.derivs.grad(node, 0);
            tap(j + 1, i, cg1 / (2.0 * ht));
            tap(j - 1, i, -cg1 / (2.0 * ht));
            const double cg2 = -rhs_grad_coef * field.derivs.grad(node, 1) / sin_t;
            tap(j, i + 1, cg2 / (2.0 * hp));
            tap(j, i - 1, -cg2 / (2.0 * hp));
        }
    }
    out.rhs_scale = std::max(1.0, out.rhs_scale);
    if (with_jacobian) {
        out.jac.resize(m, m);
        out.jac.setFromTriplets(trips.begin(), trips.end());
    }
    return out;
}

Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() == Eigen::Success) {
        Eigen::VectorXd x = lu.solve(rhs);
        if (lu.info() == Eigen::Success && x.allFinite()) return x;
    }
    // near-singular system (scaling freedom): pin the value at node 0
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(J.nonZeros()) + 1);
    for (int c = 0; c < J.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(J, c); it; ++it)
            if (it.row() != 0) trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    trips.emplace_back(0, 0, 1.0);
    Eigen::SparseMatrix<double> J2(J.rows(), J.cols());
    J2.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd rhs2 = rhs;
    rhs2[0] = 0.0;
    lu.compute(J2);
    if (lu.info() != Eigen::Success) throw NewtonFailure("newton: linear solve breakdown (singular Jacobian)");
    Eigen::VectorXd x = lu.solve(rhs2);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw NewtonFailure("newton: linear solve breakdown");
    return x;
}

}  // namespace

Eigen::SparseMatrix<double> linearize(const SolutionField& field, const SphereProblem& prob, double t,
                                      double eps) {
    prob.validate();
    return assemble(field, prob, t, eps, true).jac;
}

NewtonResult newton_solve(const Eigen::VectorXd& u0, const SphereProblem& prob, double t,
                          const NewtonOptions& opts, double eps) {
    prob.validate();
    SolutionField field = spectrum_field(u0, prob.grid, prob.spec);
    if (!(field.min_margin() > 0.0)) {
        std::ostringstream msg;
        msg << "newton: start iterate is inadmissible (min cone margin " << field.min_margin() << ")";
        throw std::domain_error(msg.str());
    }

    Assembled cur = assemble(field, prob, t, eps, false);
    double res_inf = cur.root.cwiseAbs().maxCoeff();
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (res_inf <= opts.tol * cur.rhs_scale) return {std::move(field), iter, res_inf};
        cur = assemble(field, prob, t, eps, true);
        res_inf = cur.root.cwiseAbs().maxCoeff();
        if (res_inf <= opts.tol * cur.rhs_scale) return {std::move(field), iter, res_inf};
        const Eigen::VectorXd step = solve_linear(cur.jac, -cur.root);

        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= opts.max_halvings; ++halving, alpha *= 0.5) {
            const Eigen::VectorXd u_try = field.u + alpha * step;
            if ((u_try.array() <= 0.0).any()) continue;
            SolutionField trial = spectrum_field(u_try, prob.grid, prob.spec);
            if (!(trial.min_margin() > 0.0)) continue;
            const Assembled res_try = assemble(trial, prob, t, eps, false);
            const double try_inf = res_try.root.cwiseAbs().maxCoeff();
            if (try_inf <= (1.0 - 0.25 * alpha) * res_inf || try_inf <= opts.tol * res_try.rhs_scale) {
                field = std::move(trial);
                res_inf = try_inf;
                cur.rhs_scale = res_try.rhs_scale;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw NewtonFailure("newton: line search exhausted at t=" + std::to_string(t));
    }
    if (res_inf <= opts.tol * cur.rhs_scale) return {std::move(field), opts.max_iters, res_inf};
    throw NewtonFailure("newton: iteration cap reached with residual " + std::to_string(res_inf));
}

ContinuationResult continuation(const SphereProblem& prob, int steps, const NewtonOptions& opts, double eps) {
    prob.validate();
    if (!(prob.spec.p + eps > prob.spec.q - prob.spec.l + 1e-12))
        throw std::invalid_argument(
            "continuation: requires p > q - l (scale-invariant problems go through homogeneous_solve)");
    if (steps < 1) throw std::invalid_argument("continuation: steps must be >= 1");

    std::vector<HomotopyState> trace;
    Eigen::VectorXd u = Eigen::VectorXd::Ones(prob.grid.node_count());
    SolutionField field = spectrum_field(u, prob.grid, prob.spec);
    trace.push_back({0.0, 0, 0.0, field.min_margin(), field.min_eig()});

    const double dt0 = 1.0 / steps;
    double t = 0.0;
    double dt = dt0;
    while (t < 1.0 - 1e-14) {
        const double t_try = std::min(1.0, t + dt);
        try {
            NewtonResult step = newton_solve(u, prob, t_try, opts, eps);
            u = step.field.u;
            t = t_try;
            trace.push_back({t, step.iters, step.res_inf, step.field.min_margin(), step.field.min_eig()});
            field = std::move(step.field);
            if (dt < dt0) dt = std::min(2.0 * dt, dt0);
        } catch (const NewtonFailure&) {
            dt *= 0.5;
            if (dt < kMinDt) {
                std::ostringstream msg;
                msg << "continuation: dt underflow below " << kMinDt << ", last good t = " << t;
                throw std::runtime_error(msg.str());
            }
        }
    }
    field.residual = residual(field, prob, 1.0, ResidualForm::Raw, eps);
    return {std::move(field), std::move(trace)};
}

std::vector<double> default_eps_list() { return {0.5, 0.25, 0.1, 0.05, 0.02}; }

HomogeneousResult homogeneous_solve(const SphereProblem& prob, const std::vector<double>& eps_list,
                                    const NewtonOptions& opts, int steps) {
    prob.validate();
    if (prob.spec.exponent_case() != ExponentCase::Homogeneous)
        throw std::invalid_argument("homogeneous_solve: requires p = q - l (use continuation otherwise)");
    if (eps_list.empty()) throw std::invalid_argument("homogeneous_solve: eps_list must be nonempty");
    for (size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) throw std::invalid_argument("homogeneous_solve: eps values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("homogeneous_solve: eps_list must be strictly decreasing");
    }

    std::vector<double> gamma_eps;
    std::vector<double> min_u_eps;
    std::vector<HomotopyState> trace;
    Eigen::VectorXd u_last;
    for (double eps : eps_list) {
        ContinuationResult run = continuation(prob, steps, opts, eps);
        const double min_u = run.field.u.minCoeff();
        min_u_eps.push_back(min_u);
        gamma_eps.push_back(std::pow(min_u, eps));
        trace.insert(trace.end(), run.trace.begin(), run.trace.end());
        u_last = run.field.u;
    }
    if (gamma_eps.size() >= 3) {
        const size_t n = gamma_eps.size();
        for (size_t i = n - 2; i < n; ++i) {
            const double jump = std::abs(gamma_eps[i] - gamma_eps[i - 1]);
            if (jump > kGammaCauchyTol) {
                std::ostringstream msg;
                msg << "homogeneous_solve: gamma_eps sequence not Cauchy within " << kGammaCauchyTol << " (";
                for (size_t j = 0; j < n; ++j) msg << (j ? ", " : "") << gamma_eps[j];
                msg << ")";
                throw std::runtime_error(msg.str());
            }
        }
    }
    const double gamma = gamma_eps.back();

    // normalized field, with the defect against the limit equation gamma*phi
    const Eigen::VectorXd u_tilde = u_last / u_last.minCoeff();
    SolutionField field = spectrum_field(u_tilde, prob.grid, prob.spec);
    SphereProblem limit = prob;
    limit.phi = gamma * prob.phi;
    field.residual = residual(field, limit, 1.0, ResidualForm::Raw, 0.0);
    return {std::move(field), gamma, std::move(gamma_eps), std::move(min_u_eps), std::move(trace)};
}

}  // namespace pkcone
