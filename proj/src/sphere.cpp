#include "pkcone/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pkcone/lambda_op.hpp"

namespace pkcone {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SphereGrid::SphereGrid(GridBackend backend, int n_theta, int n_phi, int dim)
    : backend_(backend), n_theta_(n_theta), n_phi_(n_phi), dim_(dim) {}

SphereGrid SphereGrid::axisym(int n_theta, int dim) {
    if (n_theta < 8) throw std::invalid_argument("grid.resolution: axisym backend needs >= 8 theta nodes");
    if (dim < 2) throw std::invalid_argument("grid: sphere dimension must be >= 2");
    return SphereGrid(GridBackend::Axisym, n_theta, 1, dim);
}

SphereGrid SphereGrid::full_s2(int n_theta, int n_phi) {
    if (n_theta < 8 || n_phi < 8)
        throw std::invalid_argument("grid.resolution: full_s2 backend needs >= 8 nodes per dimension");
    if (n_phi % 2 != 0)
        throw std::invalid_argument("grid.resolution: full_s2 backend needs an even phi count (cross-pole reflection)");
    return SphereGrid(GridBackend::FullS2, n_theta, n_phi, 2);
}

int SphereGrid::node_count() const {
    return backend_ == GridBackend::Axisym ? n_theta_ : n_theta_ * n_phi_;
}

double SphereGrid::theta(int node) const {
    if (backend_ == GridBackend::Axisym) return node * kPi / (n_theta_ - 1);
    return (node / n_phi_ + 0.5) * kPi / n_theta_;
}

double SphereGrid::phi(int node) const {
    if (backend_ == GridBackend::Axisym) return 0.0;
    return (node % n_phi_) * 2.0 * kPi / n_phi_;
}

double SphereGrid::spacing() const {
    return backend_ == GridBackend::Axisym ? kPi / (n_theta_ - 1) : kPi / n_theta_;
}

namespace {

FrameDerivs derivs_axisym(const Eigen::VectorXd& u, const SphereGrid& grid) {
    const int m = grid.n_theta();
    const double h = grid.spacing();
    FrameDerivs out;
    out.grad.resize(m, 1);
    out.hess.resize(m, 2);
    auto at = [&](int i) {
        // reflective ends: u(-theta) = u(theta), u(pi + s) = u(pi - s)
        if (i < 0) return u[-i];
        if (i >= m) return u[2 * (m - 1) - i];
        return u[i];
    };
    for (int i = 0; i < m; ++i) {
        const double up = (at(i + 1) - at(i - 1)) / (2.0 * h);
        const double upp = (at(i + 1) - 2.0 * u[i] + at(i - 1)) / (h * h);
        out.grad(i, 0) = up;
        out.hess(i, 0) = upp;
        if (i == 0 || i == m - 1) {
            out.hess(i, 1) = upp;  // cot(theta) u' -> u'' at the poles
        } else {
            out.hess(i, 1) = up / std::tan(grid.theta(i));
        }
    }
    return out;
}

FrameDerivs derivs_full_s2(const Eigen::VectorXd& u, const SphereGrid& grid) {
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    const double ht = kPi / nt;
    const double hp = 2.0 * kPi / np;
    auto at = [&](int j, int i) {
        i = ((i % np) + np) % np;
        if (j < 0) {
            j = -j - 1;
            i = (i + np / 2) % np;
        } else if (j >= nt) {
            j = 2 * nt - 1 - j;
            i = (i + np / 2) % np;
        }
        return u[grid.node(j, i)];
    };
    FrameDerivs out;
    out.grad.resize(grid.node_count(), 2);
    out.hess.resize(grid.node_count(), 3);
    for (int j = 0; j < nt; ++j) {
        const double th = (j + 0.5) * ht;
        const double sin_t = std::sin(th);
        const double cot_t = std::cos(th) / sin_t;
        for (int i = 0; i < np; ++i) {
            const int node = grid.node(j, i);
            const double u_t = (at(j + 1, i) - at(j - 1, i)) / (2.0 * ht);
            const double u_p = (at(j, i + 1) - at(j, i - 1)) / (2.0 * hp);
            const double u_tt = (at(j + 1, i) - 2.0 * u[node] + at(j - 1, i)) / (ht * ht);
            const double u_pp = (at(j, i + 1) - 2.0 * u[node] + at(j, i - 1)) / (hp * hp);
            const double u_tp = (at(j + 1, i + 1) - at(j + 1, i - 1) - at(j - 1, i + 1) + at(j - 1, i - 1)) /
                                (4.0 * ht * hp);
            out.grad(node, 0) = u_t;
            out.grad(node, 1) = u_p / sin_t;
            out.hess(node, 0) = u_tt;
            out.hess(node, 1) = (u_tp - cot_t * u_p) / sin_t;
            out.hess(node, 2) = u_pp / (sin_t * sin_t) + cot_t * u_t;
        }
    }
    return out;
}

}  // namespace

FrameDerivs covariant_derivs(const Eigen::VectorXd& u, const SphereGrid& grid) {
    if (static_cast<int>(u.size()) != grid.node_count())
        throw std::invalid_argument("covariant_derivs: field size does not match the grid");
    if (!u.allFinite()) throw std::invalid_argument("covariant_derivs: field has non-finite entries");
    return grid.backend() == GridBackend::Axisym ? derivs_axisym(u, grid) : derivs_full_s2(u, grid);
}

Eigen::VectorXd laplace_beltrami(const Eigen::VectorXd& u, const SphereGrid& grid) {
    if (static_cast<int>(u.size()) != grid.node_count())
        throw std::invalid_argument("laplace_beltrami: field size does not match the grid");
    Eigen::VectorXd out(grid.node_count());
    if (grid.backend() == GridBackend::Axisym) {
        const int m = grid.n_theta();
        const double h = grid.spacing();
        const int w = grid.dim() - 1;  // metric weight sin^{n-1}
        for (int i = 0; i < m; ++i) {
            if (i == 0) {
                out[i] = grid.dim() * 2.0 * (u[1] - u[0]) / (h * h);
            } else if (i == m - 1) {
                out[i] = grid.dim() * 2.0 * (u[m - 2] - u[m - 1]) / (h * h);
            } else {
                const double sp = std::pow(std::sin(grid.theta(i) + 0.5 * h), w);
                const double sm = std::pow(std::sin(grid.theta(i) - 0.5 * h), w);
                const double s0 = std::pow(std::sin(grid.theta(i)), w);
                out[i] = (sp * (u[i + 1] - u[i]) - sm * (u[i] - u[i - 1])) / (h * h * s0);
            }
        }
    } else {
        const int nt = grid.n_theta();
        const int np = grid.n_phi();
        const double ht = kPi / nt;
        const double hp = 2.0 * kPi / np;
        auto at = [&](int j, int i) {
            i = ((i % np) + np) % np;
            if (j < 0) {
                j = -j - 1;
                i = (i + np / 2) % np;
            } else if (j >= nt) {
                j = 2 * nt - 1 - j;
                i = (i + np / 2) % np;
            }
            return u[grid.node(j, i)];
        };
        for (int j = 0; j < nt; ++j) {
            const double th = (j + 0.5) * ht;
            const double s0 = std::sin(th);
            const double sp = std::sin(th + 0.5 * ht);
            const double sm = std::sin(std::abs(th - 0.5 * ht));
            for (int i = 0; i < np; ++i) {
                const int node = grid.node(j, i);
                const double flux = (sp * (at(j + 1, i) - u[node]) - sm * (u[node] - at(j - 1, i))) / (ht * ht * s0);
                const double azim = (at(j, i + 1) - 2.0 * u[node] + at(j, i - 1)) / (hp * hp * s0 * s0);
                out[node] = flux + azim;
            }
        }
    }
    return out;
}

double SolutionField::grad_sq(int node) const {
    double s = 0.0;
    for (Eigen::Index c = 0; c < derivs.grad.cols(); ++c) s += derivs.grad(node, c) * derivs.grad(node, c);
    return s;
}

SolutionField spectrum_field(const Eigen::VectorXd& u, const SphereGrid& grid, const ProblemSpec& spec) {
    if (grid.dim() != spec.n)
        throw std::invalid_argument("spectrum_field: grid dimension does not match problem.n");
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        if (!(u[i] > 0.0)) {
            std::ostringstream msg;
            msg << "spectrum_field: u must be positive, node " << i << " has u = " << u[i];
            throw std::invalid_argument(msg.str());
        }
    }
    SolutionField f{grid, u, covariant_derivs(u, grid), {}, {}, Eigen::VectorXd::Zero(grid.node_count())};
    const int m = grid.node_count();
    const int n = grid.dim();
    f.spectrum.resize(m, n);
    if (grid.backend() == GridBackend::Axisym) {
        for (int i = 0; i < m; ++i) {
            const double rad = f.derivs.hess(i, 0) + u[i];
            const double tan = f.derivs.hess(i, 1) + u[i];  // multiplicity n-1
            if (rad <= tan) {
                f.spectrum(i, 0) = rad;
                for (int c = 1; c < n; ++c) f.spectrum(i, c) = tan;
            } else {
                for (int c = 0; c < n - 1; ++c) f.spectrum(i, c) = tan;
                f.spectrum(i, n - 1) = rad;
            }
        }
    } else {
        for (int i = 0; i < m; ++i) {
            const double a11 = f.derivs.hess(i, 0) + u[i];
            const double a12 = f.derivs.hess(i, 1);
            const double a22 = f.derivs.hess(i, 2) + u[i];
            const double mean = 0.5 * (a11 + a22);
            const double disc = std::hypot(0.5 * (a11 - a22), a12);
            f.spectrum(i, 0) = mean - disc;
            f.spectrum(i, 1) = mean + disc;
        }
    }
    const IndexTable table(spec.P, n);
    f.margin.resize(m);
    for (int i = 0; i < m; ++i) f.margin[i] = pk_cone_margin(f.spectrum.row(i), table, spec.k);
    return f;
}

void write_solution_csv(const SolutionField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_solution_csv: cannot open " + path);
    out << "theta,phi,u";
    for (int c = 1; c <= field.grid.dim(); ++c) out << ",lambda_" << c;
    out << ",margin,residual\n";
    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    for (int i = 0; i < field.grid.node_count(); ++i) {
        emit(field.grid.theta(i));
        out << ',';
        emit(field.grid.phi(i));
        out << ',';
        emit(field.u[i]);
        for (int c = 0; c < field.grid.dim(); ++c) {
            out << ',';
            emit(field.spectrum(i, c));
        }
        out << ',';
        emit(field.margin[i]);
        out << ',';
        emit(field.residual[i]);
        out << '\n';
    }
}

}  // namespace pkcone
