#pragma once

#include <string>

namespace pkcone {

/// Presentation of the eigenvalue-sum quotient operator.
/// All three are strictly increasing transforms of one another on the cone.
enum class OperatorMode {
    Raw,         // sigma_k(Lambda) / sigma_l(Lambda)
    Root,        // [sigma_k / sigma_l]^{1/(k-l)}, degree-1 homogeneous, concave
    NegInvRoot,  // -[sigma_k / sigma_l]^{-1/(k-l)}, the inverse-convex form
};

enum class ExponentCase { Nonhomogeneous, Homogeneous };

/// Parameters of one instance of the equation
/// sigma_k(Lambda(D^2 u + u I)) / sigma_l(Lambda(...)) = u^{p-1} (u^2+|Du|^2)^{(k+1-q)/2} phi.
/// n is the sphere dimension, P the number of eigenvalues summed per entry of
/// Lambda, and N = C(n, P) the dimension Lambda lives in.
struct ProblemSpec {
    int n = 3;
    int P = 2;
    int k = 1;
    int l = 0;
    double p = 2.0;
    double q = 1.0;

    long N() const;

    /// p > q - l (continuation case) vs p == q - l (scale-invariant case).
    /// Computed from the exponents, never user-declared.
    ExponentCase exponent_case() const;

    /// q == k + 1 makes the (u^2 + |Du|^2) factor exponent vanish identically.
    bool special_q() const;

    /// C(N,k)/C(N,l) * P^{k-l}: the operator value on the unit constant.
    double c0() const;

    /// Throws std::invalid_argument with a field-level message on the first
    /// violated constraint.
    void validate() const;

    std::string describe() const;
};

}  // namespace pkcone
