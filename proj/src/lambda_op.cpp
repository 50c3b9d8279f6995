#include "pkcone/lambda_op.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

namespace pkcone {

namespace {

void require_symmetric(const Eigen::MatrixXd& A, const char* where) {
    if (A.rows() != A.cols()) throw std::invalid_argument(std::string(where) + ": matrix must be square");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument(std::string(where) + ": matrix must be symmetric");
}

void require_table(const Spectrum& lam, const IndexTable& table, const char* where) {
    if (static_cast<int>(lam.size()) != table.ambient())
        throw std::invalid_argument(std::string(where) + ": spectrum length does not match the index table");
}

}  // namespace

Eigen::VectorXd lambda_vector(const Spectrum& lam, const IndexTable& table) {
    require_table(lam, table, "lambda_vector");
    Eigen::VectorXd out(table.size());
    for (int pos = 0; pos < table.size(); ++pos) {
        double s = 0.0;
        for (int i : table[pos]) s += lam[i];
        out[pos] = s;
    }
    return out;
}

bool in_pk_cone(const Spectrum& lam, int P, int k) {
    const IndexTable table(P, static_cast<int>(lam.size()));
    return in_pk_cone(lam, table, k);
}

bool in_pk_cone(const Spectrum& lam, const IndexTable& table, int k) {
    return pk_cone_margin(lam, table, k) > 0.0;
}

double pk_cone_margin(const Spectrum& lam, const IndexTable& table, int k) {
    return gamma_margin(lambda_vector(lam, table), k);
}

Eigen::MatrixXd derivation_matrix(const Eigen::MatrixXd& A, const IndexTable& table) {
    require_symmetric(A, "derivation_matrix");
    if (static_cast<int>(A.rows()) != table.ambient())
        throw std::invalid_argument("derivation_matrix: matrix size does not match the index table");
    const int N = table.size();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
    for (int a = 0; a < N; ++a) {
        const MultiIndex& I = table[a];
        for (int i : I) W(a, a) += A(i, i);
        for (int b = a + 1; b < N; ++b) {
            const MultiIndex& J = table[b];
            // Nonzero exactly when I and J share all but one entry.
            MultiIndex shared;
            std::set_intersection(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(shared));
            if (static_cast<int>(shared.size()) != table.order() - 1) continue;
            int iI = -1, jJ = -1;
            for (int v : I)
                if (!std::binary_search(shared.begin(), shared.end(), v)) iI = v;
            for (int v : J)
                if (!std::binary_search(shared.begin(), shared.end(), v)) jJ = v;
            const double w = perm_sign({iI}, shared) * perm_sign({jJ}, shared) * A(iI, jJ);
            W(a, b) = w;
            W(b, a) = w;
        }
    }
    return W;
}

double apply_mode(double raw, int k, int l, OperatorMode mode) {
    const double e = 1.0 / static_cast<double>(k - l);
    switch (mode) {
        case OperatorMode::Raw: return raw;
        case OperatorMode::Root: return std::pow(raw, e);
        case OperatorMode::NegInvRoot: return -std::pow(raw, -e);
    }
    throw std::logic_error("apply_mode: unknown mode");
}

double apply_mode_derivative(double raw, int k, int l, OperatorMode mode) {
    const double e = 1.0 / static_cast<double>(k - l);
    switch (mode) {
        case OperatorMode::Raw: return 1.0;
        case OperatorMode::Root: return e * std::pow(raw, e - 1.0);
        case OperatorMode::NegInvRoot: return e * std::pow(raw, -e - 1.0);
    }
    throw std::logic_error("apply_mode_derivative: unknown mode");
}

double f_from_spectrum(const Spectrum& lam, const IndexTable& table, int k, int l, OperatorMode mode) {
    const Eigen::VectorXd big = lambda_vector(lam, table);
    return apply_mode(quotient(k, l, big), k, l, mode);
}

Eigen::VectorXd f_grad_spectrum(const Spectrum& lam, const IndexTable& table, int k, int l, OperatorMode mode) {
    const Eigen::VectorXd big = lambda_vector(lam, table);
    const double raw = quotient(k, l, big);
    const Eigen::VectorXd dbig = quotient_grad(k, l, big);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(lam.size());
    for (int pos = 0; pos < table.size(); ++pos)
        for (int i : table[pos]) g[i] += dbig[pos];
    return apply_mode_derivative(raw, k, l, mode) * g;
}

double f_value(const Eigen::MatrixXd& A, const ProblemSpec& spec, OperatorMode mode) {
    require_symmetric(A, "f_value");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
    const IndexTable table(spec.P, static_cast<int>(A.rows()));
    return f_from_spectrum(eig.eigenvalues(), table, spec.k, spec.l, mode);
}

Eigen::MatrixXd f_grad(const Eigen::MatrixXd& A, const ProblemSpec& spec, OperatorMode mode) {
    require_symmetric(A, "f_grad");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    const IndexTable table(spec.P, static_cast<int>(A.rows()));
    const Eigen::VectorXd g = f_grad_spectrum(eig.eigenvalues(), table, spec.k, spec.l, mode);
    // Gradient of a spectral function: Q diag(df/dlambda) Q^T. Exact across
    // eigenvalue crossings since equal eigenvalues carry equal partials.
    return eig.eigenvectors() * g.asDiagonal() * eig.eigenvectors().transpose();
}

double f_value_w_path(const Eigen::MatrixXd& A, const ProblemSpec& spec, OperatorMode mode) {
    const IndexTable table(spec.P, static_cast<int>(A.rows()));
    const Eigen::MatrixXd W = derivation_matrix(A, table);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W, Eigen::EigenvaluesOnly);
    return apply_mode(quotient(spec.k, spec.l, eig.eigenvalues()), spec.k, spec.l, mode);
}

}  // namespace pkcone
