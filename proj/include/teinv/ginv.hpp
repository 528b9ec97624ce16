#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "teinv/reshape.hpp"
#include "teinv/tensor.hpp"

namespace teinv {

// Default relative tolerance for identity verification.
inline constexpr double kVerifyTol = 1e-8;

// One named hypothesis check.  `residual` is the measured scalar the decision
// is based on (a relative defect, a norm value, or a rank deviation).
// Informational entries (required == false) document alternative or
// supplementary conditions and do not affect overall pass/fail.
struct ConditionEntry {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string note;
    bool required = true;
};

// Ordered collection of named hypothesis checks.
struct ConditionReport {
    std::vector<ConditionEntry> entries;

    void add(std::string name, bool pass, double residual, std::string note = {},
             bool required = true);
    void merge(const ConditionReport& other, const std::string& prefix = {});
    const ConditionEntry* find(std::string_view name) const;
    bool passed(std::string_view name) const;
    // True when every entry passes.
    bool all_passed() const;
    // True when every required (non-informational) entry passes.
    bool all_required_passed() const;
};

// Moore-Penrose inverse together with the verification of all four defining
// conditions: (1) A*X*A = A, (2) X*A*X = X, (3) (A*X)^H = A*X,
// (4) (X*A)^H = X*A.
struct InverseReport {
    Tensor inverse;
    std::array<bool, 4> penrose_flags{};
    std::array<double, 4> residuals{};

    bool all_penrose() const {
        return penrose_flags[0] && penrose_flags[1] && penrose_flags[2] && penrose_flags[3];
    }
};

// Moore-Penrose inverse via the SVD pseudoinverse of the flattened matrix;
// the zero tensor maps to the (transposed-shape) zero tensor.
InverseReport moore_penrose(const Tensor& a, double tol = kVerifyTol);

// An inner inverse: some X with A*X*A = A.  Deterministically instantiated as
// the Moore-Penrose inverse, which in particular satisfies that identity.
Tensor inner_inverse(const Tensor& a);

enum class IdentityKind { inner, outer, penrose3, penrose4 };

// Residual check of one defining identity: inner |A*X*A - A|/|A|,
// outer |X*A*X - X|/|X|, penrose3 Hermitian defect of A*X, penrose4 Hermitian
// defect of X*A.  All norms Frobenius, relative to the comparison operand.
ConditionReport verify_identity(const Tensor& a, const Tensor& x, IdentityKind kind,
                                double tol = kVerifyTol);

// Outer inverse of a with prescribed range: X = B * (A*B)^(1), defined when
// rshrank(A*B) = rshrank(B).  Throws precondition_error when the rank
// condition fails.
Tensor outer_inverse_range(const Tensor& a, const Tensor& b, double rank_tol = -1.0);

// Outer inverse of a with prescribed null space: X = (C*A)^(1) * C, defined
// when rshrank(C*A) = rshrank(C).  Throws precondition_error when the rank
// condition fails.
Tensor outer_inverse_null(const Tensor& a, const Tensor& c, double rank_tol = -1.0);

// Outer inverse with prescribed range and null space simultaneously:
// X = B * (C*A*B)^(1) * C, defined when rshrank(C*A*B) = rshrank(C) =
// rshrank(B); X then satisfies C*A*X = C and X*A*B = B and is unique.
// Throws precondition_error when the rank chain fails.
Tensor bc_inverse(const Tensor& a, const Tensor& b, const Tensor& c, double rank_tol = -1.0);

// Reverse-order-law test for inner inverses: (P*Q)^(1) = Q^(1)*P^(1) holds
// exactly when the mixed projector P1*P*Q*Q1 is idempotent.  Reports the
// idempotency residual under key "rol_idempotent".
ConditionReport check_reverse_order(const Tensor& p, const Tensor& q, const Tensor& p1,
                                    const Tensor& q1, double tol = kVerifyTol);

enum class SubspaceRelation { range_equal, null_equal, range_intersection_trivial };

// Subspace comparisons decided by rank arithmetic on flattened matrices:
//   range_equal            rank[X|Y] = rank X = rank Y
//   null_equal             equality of conjugate-transpose ranges
//   range_intersection_trivial   rank[X|Y] = rank X + rank Y
// The residual is the rank deviation (for intersections, the dimension of the
// overlap).
ConditionReport subspace_relation(const Tensor& x, const Tensor& y, SubspaceRelation relation,
                                  double rank_tol = -1.0);

// Equivalent characterizations of when H = A1*(I + E*A1)^(-1) is an inner
// inverse of D = A + E, checked on computed null-space bases:
//   trivial_intersection   N(A*A1) and R(D) meet only in 0
//   null_map_equal         delta maps N(A) onto N(D)
//   defect_null_containment  rho*D*N(A) lies in N(A1*A*A1 - A1)
// plus the norm gate |A1||E| < 1.  Failures are report entries, never throws.
ConditionReport check_inner_stability(const Tensor& a, const Tensor& a1, const Tensor& e,
                                         double rank_tol = -1.0);

}  // namespace teinv
