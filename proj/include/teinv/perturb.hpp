#pragma once

#include <optional>

#include "teinv/ginv.hpp"
#include "teinv/tensor.hpp"

namespace teinv {

enum class NormKind { frobenius, spectral };
enum class Route { multiplicative, rank };

double norm_of(const Tensor& a, NormKind norm);

// Resolvent factors of a perturbation E against an inverse X:
//   rho   = (I + E*X)^(-1)   (right factor)
//   delta = (I + X*E)^(-1)   (left factor)
// A factor is absent when its flattened system is numerically singular, which
// can only happen when the norm hypothesis fails.  Whenever both exist they
// intertwine: X*rho = delta*X.
struct Resolvents {
    std::optional<Tensor> rho;
    std::optional<Tensor> delta;
    double norm_product = 0.0;  // |X| * |E| in the chosen norm
    bool hypothesis_ok = false;  // norm_product < 1
};

Resolvents resolvents(const Tensor& x, const Tensor& e, NormKind norm = NormKind::frobenius);

struct PerturbOptions {
    NormKind norm = NormKind::frobenius;
    double tol = kVerifyTol;   // identity-verification tolerance
    double rank_tol = -1.0;    // rank tolerance (negative selects the default)
};

// Outcome of one perturbation analysis.  Every hypothesis lands in
// `conditions` as a pass/fail entry with its residual; gate failures populate
// the report instead of throwing, because the failure path is a first-class
// result.  `verified` re-checks the defining identities of the inverse class
// on the perturbed tensor; it is computed, never assumed.
struct PerturbReport {
    std::optional<Tensor> perturbed_inverse;   // inverse of D = A + E
    std::optional<Tensor> reference_inverse;   // same-class inverse of A
    std::optional<Resolvents> factors;
    ConditionReport conditions;
    std::optional<double> measured_ratio;      // |D^inv - A^inv| / |A^inv|
    std::optional<double> bound;               // theorem's right-hand side
    std::optional<double> corollary_bound;     // sharper bound when the
                                               // reverse-order law holds
    bool bound_holds = false;                  // measured_ratio <= bound
    bool verified = false;

    // All required gates passed, the defining identities hold on D, and the
    // measured ratio respects the bound.
    bool success() const;
};

// Inner-inverse perturbation: H = A1 * (I + E*A1)^(-1) is an inner inverse of
// D = A + E exactly when |A1||E| < 1 and rshrank(D) = rshrank(A).  The
// multiplicative conditions E = E*A1*A / E = A*A1*E are evaluated as an
// alternative (informational) gate, the difference identity
// H - A1 = A1*(rho - I) is checked, and the bound is
// (2 - |E*A1|)/(1 - |E*A1|).  `a1` may supply a precomputed inner inverse;
// by default the Moore-Penrose inverse is used.
PerturbReport perturb_inner(const Tensor& a, const Tensor& e,
                            const std::optional<Tensor>& a1 = std::nullopt,
                            const PerturbOptions& opts = {});

// Outer-inverse perturbation: for an outer inverse X of A (throws
// precondition_error otherwise) with |E*X| < 1 and E = E*X*A or E = A*X*E,
// D2 = X * (I + E*X)^(-1) = (I + X*E)^(-1) * X is an outer inverse of D.
PerturbReport perturb_outer(const Tensor& a, const Tensor& x2, const Tensor& e,
                            const PerturbOptions& opts = {});

// Perturbation of the prescribed-range outer inverse.
//   multiplicative: X = A2_{R(B)} with gates |E*X| < 1, E = E*X*A;
//                   D2 = X*rho2, bound (2-t)/(1-t) with t = |E*X|.
//   rank:           gates are the idempotency of D1*D*B*B1, the rank chain
//                   rshrank(A*B) = rshrank(D*B) = rshrank(B), |A1||E| < 1 and
//                   rshrank(A) = rshrank(D); then D2 = B*B1*A1*rho and the
//                   bound is |B*B1||A1| / ((1-|E*A1|)|B*(A*B)^(1)|) + 1, with
//                   the sharper (1/(1-|E*A1|)) + 1 recorded when the
//                   reverse-order law for (A,B) holds.
// In both routes range_equal(D2, B) is verified.
PerturbReport perturb_b_inverse(const Tensor& a, const Tensor& b, const Tensor& e,
                                Route route = Route::rank, const PerturbOptions& opts = {});

// Perturbation of the prescribed-null-space outer inverse; mirrors
// perturb_b_inverse with C-side conditions (idempotency of C1*C*D*D1, rank
// chain on C*D / C*A / C, formula D2 = A1*rho*C1*C, bound
// |A1||C1*C| / ((1-|E*A1|)|(C*A)^(1)*C|) + 1) and null_equal(D2, C) verified.
// The multiplicative route uses the left-handed condition E = A*X*E.
PerturbReport perturb_c_inverse(const Tensor& a, const Tensor& c, const Tensor& e,
                                Route route = Route::rank, const PerturbOptions& opts = {});

// Perturbation of the outer inverse with both range and null space
// prescribed.
//   multiplicative: gates |E*X| < 1 and the two-sided condition
//                   E = E*X*A = A*X*E; D2 = X*rho2.
//   rank:           gates are two projector idempotencies
//                   ((C*D)^(1)*C*D*B*B1 and C1*C*D*D1) or the equivalent
//                   alternative pair (C1*C*D*B*(D*B)^(1) and D1*D*B*B1), the
//                   four-way rank chain rshrank(C*A*B) = rshrank(C*D*B) =
//                   rshrank(C) = rshrank(B), plus the norm and rank gates;
//                   then D2 = B*B1*A1*rho*C1*C with bound
//                   |B*B1||A1||C1*C| / ((1-|E*A1|)|B*(C*A*B)^(1)*C|) + 1.
// Both range_equal(D2, B) and null_equal(D2, C) are verified.
PerturbReport perturb_bc_inverse(const Tensor& a, const Tensor& b, const Tensor& c,
                                 const Tensor& e, Route route = Route::rank,
                                 const PerturbOptions& opts = {});

}  // namespace teinv
