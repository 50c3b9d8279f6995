#include "pkcone/symfunc.hpp"

#include <sstream>
#include <stdexcept>

namespace pkcone {

namespace {

// One pass over the spectrum, updating e_j for the prefix seen so far.
// Skipping an entry yields the minors without a separate code path.
Eigen::VectorXd prefix_dp(const Spectrum& lam, int kmax, Eigen::Index skip) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(kmax + 1);
    e[0] = 1.0;
    int used = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (i == skip) continue;
        ++used;
        for (int j = std::min(kmax, used); j >= 1; --j) e[j] += lam[i] * e[j - 1];
    }
    return e;
}

}  // namespace

double sigma(int k, const Spectrum& lam) {
    const int n = static_cast<int>(lam.size());
    if (k == 0) return 1.0;
    if (k < 0 || k > n) return 0.0;
    return prefix_dp(lam, k, -1)[k];
}

Eigen::VectorXd sigma_prefix(const Spectrum& lam, int kmax) {
    if (kmax < 0) throw std::invalid_argument("sigma_prefix: kmax must be >= 0");
    const int top = std::min<int>(kmax, static_cast<int>(lam.size()));
    Eigen::VectorXd e = Eigen::VectorXd::Zero(kmax + 1);
    e.head(top + 1) = prefix_dp(lam, top, -1);
    return e;
}

double sigma_minor(int k, const Spectrum& lam, Eigen::Index drop) {
    const int n = static_cast<int>(lam.size());
    if (drop < 0 || drop >= n) throw std::out_of_range("sigma_minor: index out of range");
    if (k == 0) return 1.0;
    if (k < 0 || k > n - 1) return 0.0;
    return prefix_dp(lam, k, drop)[k];
}

bool in_gamma(const Spectrum& lam, int level) {
    return gamma_margin(lam, level) > 0.0;
}

double gamma_margin(const Spectrum& lam, int level) {
    const int n = static_cast<int>(lam.size());
    if (level < 1 || level > n) throw std::invalid_argument("gamma_margin: level must be in [1, n]");
    const Eigen::VectorXd e = prefix_dp(lam, level, -1);
    return e.segment(1, level).minCoeff();
}

double quotient(int k, int l, const Spectrum& lam) {
    const int n = static_cast<int>(lam.size());
    if (!(0 <= l && l < k && k <= n))
        throw std::invalid_argument("quotient: require 0 <= l < k <= n");
    const double margin = gamma_margin(lam, k);
    if (!(margin > 0.0)) {
        std::ostringstream msg;
        msg << "quotient: spectrum outside Gamma_" << k << " (margin " << margin << ")";
        throw std::domain_error(msg.str());
    }
    const Eigen::VectorXd e = prefix_dp(lam, k, -1);
    return e[k] / e[l];
}

Eigen::VectorXd quotient_grad(int k, int l, const Spectrum& lam) {
    const int n = static_cast<int>(lam.size());
    quotient(k, l, lam);  // validates arguments and cone membership
    const Eigen::VectorXd e = prefix_dp(lam, k, -1);
    const double sk = e[k];
    const double sl = e[l];
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd m = prefix_dp(lam, k, i);
        const double mk = (k - 1 <= n - 1) ? m[k - 1] : 0.0;
        const double ml = (l >= 1) ? m[l - 1] : 0.0;
        g[i] = (mk * sl - sk * ml) / (sl * sl);
    }
    return g;
}

}  // namespace pkcone
