#include "pkcone/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pkcone/multiindex.hpp"

namespace pkcone {

namespace {
constexpr double kCaseTol = 1e-12;
}

long ProblemSpec::N() const { return binomial(n, P); }

ExponentCase ProblemSpec::exponent_case() const {
    const double gap = p - (q - l);
    if (std::abs(gap) <= kCaseTol) return ExponentCase::Homogeneous;
    if (gap > 0.0) return ExponentCase::Nonhomogeneous;
    throw std::invalid_argument("problem.p: p < q - l is outside the solvable range (need p >= q - l)");
}

bool ProblemSpec::special_q() const { return std::abs(q - (k + 1)) <= kCaseTol; }

double ProblemSpec::c0() const {
    return static_cast<double>(binomial(static_cast<int>(N()), k)) /
           static_cast<double>(binomial(static_cast<int>(N()), l)) * std::pow(static_cast<double>(P), k - l);
}

void ProblemSpec::validate() const {
    if (n < 2) throw std::invalid_argument("problem.n: sphere dimension must be >= 2");
    if (P < 1 || P > n) throw std::invalid_argument("problem.P: must satisfy 1 <= P <= n");
    const long bigN = N();
    if (!(0 <= l && l < k && k <= bigN)) {
        std::ostringstream msg;
        msg << "problem.k/problem.l: require 0 <= l < k <= N = C(n,P) = " << bigN
            << ", got k=" << k << ", l=" << l;
        throw std::invalid_argument(msg.str());
    }
    if (!std::isfinite(p) || !std::isfinite(q))
        throw std::invalid_argument("problem.p/problem.q: exponents must be finite");
    exponent_case();  // rejects p < q - l
    if (exponent_case() == ExponentCase::Homogeneous && !(p > 1.0))
        throw std::invalid_argument("problem.p: homogeneous case requires p = q - l > 1");
}

std::string ProblemSpec::describe() const {
    std::ostringstream out;
    out << "(n=" << n << ", P=" << P << ", k=" << k << ", l=" << l << ", p=" << p << ", q=" << q << ")";
    return out.str();
}

}  // namespace pkcone
