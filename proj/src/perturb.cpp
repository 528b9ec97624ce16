#include "teinv/perturb.hpp"

#include <sstream>
#include <string>

#include "teinv/errors.hpp"
#include "teinv/reshape.hpp"

namespace teinv {

namespace {

// Tolerance for identities that hold exactly in exact arithmetic
// (intertwining, difference identities).
constexpr double kStructuralTol = 1e-10;

double rel_defect(const Tensor& x, const Tensor& y) {
    const double denom = frobenius_norm(y);
    const double num = frobenius_norm(x - y);
    return denom > 0.0 ? num / denom : num;
}

double ratio_of(const Tensor& diff, const Tensor& reference, NormKind norm) {
    const double denom = norm_of(reference, norm);
    const double num = norm_of(diff, norm);
    return denom > 0.0 ? num / denom : num;
}

std::string rank_pair_note(const char* left_label, Index left, const char* right_label,
                           Index right) {
    std::ostringstream os;
    os << left_label << "=" << left << ", " << right_label << "=" << right;
    return os.str();
}

// Copies the single entry of `from` into `to` under a new name.
void add_renamed(ConditionReport& to, const ConditionReport& from, std::string name,
                 bool required, std::string note = {}) {
    ConditionEntry entry = from.entries.front();
    entry.name = std::move(name);
    entry.required = required;
    if (!note.empty()) entry.note = std::move(note);
    to.entries.push_back(std::move(entry));
}

// Shared engine of the multiplicative-condition theorems: for an outer
// inverse X of A and a perturbation E with |E*X| < 1 and the appropriate
// multiplicative condition, D2 = X*rho is an outer inverse of D = A + E with
// bound (2 - |E*X|)/(1 - |E*X|).  `need_right`/`need_left` select which of
// E = E*X*A / E = A*X*E the theorem requires; when neither is marked, either
// one suffices.
PerturbReport multiplicative_core(const Tensor& a, const Tensor& x, const Tensor& e,
                                  const PerturbOptions& opts, bool need_right, bool need_left) {
    PerturbReport rep;
    rep.reference_inverse = x;

    const Resolvents factors = resolvents(x, e, opts.norm);
    rep.factors = factors;
    rep.conditions.add("norm_product", factors.norm_product < 1.0, factors.norm_product,
                       "|X|*|E|", false);

    const double t = norm_of(einstein_product(e, x), opts.norm);
    rep.conditions.add("contraction_norm", t < 1.0, t, "|E*X|");

    const double right =
        rel_defect(einstein_product(einstein_product(e, x), a), e);
    const double left =
        rel_defect(einstein_product(einstein_product(a, x), e), e);
    if (need_right || need_left) {
        rep.conditions.add("mult_condition_right", right <= opts.tol, right, "E = E*X*A",
                           need_right);
        rep.conditions.add("mult_condition_left", left <= opts.tol, left, "E = A*X*E",
                           need_left);
    } else {
        rep.conditions.add("mult_condition_right", right <= opts.tol, right, "E = E*X*A", false);
        rep.conditions.add("mult_condition_left", left <= opts.tol, left, "E = A*X*E", false);
        rep.conditions.add("mult_condition", right <= opts.tol || left <= opts.tol,
                           std::min(right, left), "E = E*X*A or E = A*X*E");
    }

    if (!factors.rho || !factors.delta) {
        rep.conditions.add("resolvent_factors", false, 1.0, "a resolvent factor is singular");
        return rep;
    }
    rep.conditions.add("resolvent_factors", true, 0.0);

    const Tensor d2 = einstein_product(x, *factors.rho);
    rep.perturbed_inverse = d2;

    const double intertwine = rel_defect(d2, einstein_product(*factors.delta, x));
    rep.conditions.add("intertwining", intertwine <= kStructuralTol, intertwine,
                       "X*rho = delta*X");

    const Tensor eye = identity(x.shape().col_extents());
    const double diff_defect =
        rel_defect(d2 - x, einstein_product(x, *factors.rho - eye));
    rep.conditions.add("difference_identity", diff_defect <= kStructuralTol, diff_defect,
                       "D2 - X = X*(rho - I)");

    const Tensor d = a + e;
    const ConditionReport outer_check = verify_identity(d, d2, IdentityKind::outer, opts.tol);
    rep.conditions.merge(outer_check);
    rep.verified = outer_check.entries.front().pass;

    rep.measured_ratio = ratio_of(d2 - x, x, opts.norm);
    if (t < 1.0) {
        rep.bound = (2.0 - t) / (1.0 - t);
        rep.bound_holds = *rep.measured_ratio <= *rep.bound;
    }
    return rep;
}

// Appends a subspace verification and folds it into `verified`.
void verify_subspace(PerturbReport& rep, const Tensor& prescribed, SubspaceRelation relation,
                     const PerturbOptions& opts) {
    if (!rep.perturbed_inverse) return;
    const ConditionReport check =
        subspace_relation(*rep.perturbed_inverse, prescribed, relation, opts.rank_tol);
    rep.conditions.merge(check);
    rep.verified = rep.verified && check.entries.front().pass;
}

}  // namespace

double norm_of(const Tensor& a, NormKind norm) {
    return norm == NormKind::frobenius ? frobenius_norm(a) : spectral_norm(a);
}

Resolvents resolvents(const Tensor& x, const Tensor& e, NormKind norm) {
    Resolvents r;
    r.norm_product = norm_of(x, norm) * norm_of(e, norm);
    r.hypothesis_ok = r.norm_product < 1.0;
    try {
        r.rho = square_inverse(identity(e.shape().row_extents()) + einstein_product(e, x));
    } catch (const singular_error&) {
        // Reported through the absent factor; only possible when the
        // hypothesis fails.
    }
    try {
        r.delta = square_inverse(identity(x.shape().row_extents()) + einstein_product(x, e));
    } catch (const singular_error&) {
    }
    return r;
}

bool PerturbReport::success() const {
    return conditions.all_required_passed() && verified && bound_holds;
}

PerturbReport perturb_inner(const Tensor& a, const Tensor& e, const std::optional<Tensor>& a1,
                            const PerturbOptions& opts) {
    PerturbReport rep;
    const Tensor x = a1 ? *a1 : inner_inverse(a);
    rep.reference_inverse = x;
    const Tensor d = a + e;

    const Resolvents factors = resolvents(x, e, opts.norm);
    rep.factors = factors;

    const Index rank_a = rshrank(a, opts.rank_tol);
    const Index rank_d = rshrank(d, opts.rank_tol);
    const bool rank_ok = rank_a == rank_d;
    const double t = norm_of(einstein_product(e, x), opts.norm);
    const double right = rel_defect(einstein_product(einstein_product(e, x), a), e);
    const double left = rel_defect(einstein_product(einstein_product(a, x), e), e);

    rep.conditions.add("norm_product", factors.norm_product < 1.0, factors.norm_product,
                       "|A1|*|E|; primary gate together with rank_equal", false);
    rep.conditions.add("rank_equal", rank_ok,
                       static_cast<double>(std::abs(rank_d - rank_a)),
                       rank_pair_note("rshrank(D)", rank_d, "rshrank(A)", rank_a), false);
    rep.conditions.add("mult_condition_right", right <= opts.tol, right,
                       "E = E*A1*A; alternative gate", false);
    rep.conditions.add("mult_condition_left", left <= opts.tol, left,
                       "E = A*A1*E; alternative gate", false);
    rep.conditions.add("contraction_norm", t < 1.0, t, "|E*A1|", false);

    const bool primary = factors.norm_product < 1.0 && rank_ok;
    const bool alternative = (right <= opts.tol || left <= opts.tol) && t < 1.0;
    std::string gate_note = primary              ? "norm and rank gates satisfied"
                            : alternative        ? "multiplicative condition satisfied"
                                                 : "neither gate route satisfied";
    rep.conditions.add("hypothesis_gate", primary || alternative,
                       primary || alternative ? 0.0 : 1.0, std::move(gate_note));

    if (!factors.rho) {
        rep.conditions.add("resolvent_factors", false, 1.0, "right factor singular");
        return rep;
    }
    rep.conditions.add("resolvent_factors", true, 0.0);

    const Tensor h = einstein_product(x, *factors.rho);
    rep.perturbed_inverse = h;

    const Tensor eye = identity(x.shape().col_extents());
    const double diff_defect = rel_defect(h - x, einstein_product(x, *factors.rho - eye));
    rep.conditions.add("difference_identity", diff_defect <= kStructuralTol, diff_defect,
                       "D1 - A1 = A1*(rho - I)");

    const ConditionReport inner_check = verify_identity(d, h, IdentityKind::inner, opts.tol);
    rep.conditions.merge(inner_check);
    rep.verified = inner_check.entries.front().pass;

    rep.measured_ratio = ratio_of(h - x, x, opts.norm);
    if (t < 1.0) {
        rep.bound = (2.0 - t) / (1.0 - t);
        rep.bound_holds = *rep.measured_ratio <= *rep.bound;
    }
    return rep;
}

PerturbReport perturb_outer(const Tensor& a, const Tensor& x2, const Tensor& e,
                            const PerturbOptions& opts) {
    const ConditionReport outer_check = verify_identity(a, x2, IdentityKind::outer, opts.tol);
    if (!outer_check.entries.front().pass) {
        throw precondition_error("x2 is not an outer inverse of a (residual " +
                                 std::to_string(outer_check.entries.front().residual) + ")");
    }
    return multiplicative_core(a, x2, e, opts, false, false);
}

PerturbReport perturb_b_inverse(const Tensor& a, const Tensor& b, const Tensor& e, Route route,
                                const PerturbOptions& opts) {
    if (route == Route::multiplicative) {
        PerturbReport rep;
        std::optional<Tensor> x;
        try {
            x = outer_inverse_range(a, b, opts.rank_tol);
        } catch (const precondition_error& err) {
            rep.conditions.add("range_construction", false, 1.0, err.what());
            return rep;
        }
        rep = multiplicative_core(a, *x, e, opts, /*need_right=*/true, /*need_left=*/false);
        verify_subspace(rep, b, SubspaceRelation::range_equal, opts);
        return rep;
    }

    // Rank route.
    PerturbReport rep;
    const Tensor d = a + e;
    const Tensor a1 = inner_inverse(a);
    const Tensor b1 = inner_inverse(b);
    const Tensor d1 = inner_inverse(d);

    add_renamed(rep.conditions, check_reverse_order(d, b, d1, b1, opts.tol),
                "rol_idempotent_db", true, "projector D1*D*B*B1");

    const Index rank_ab = rshrank(einstein_product(a, b), opts.rank_tol);
    const Index rank_db = rshrank(einstein_product(d, b), opts.rank_tol);
    const Index rank_b = rshrank(b, opts.rank_tol);
    const bool chain_ok = rank_ab == rank_b && rank_db == rank_b;
    std::ostringstream chain;
    chain << "rshrank(A*B)=" << rank_ab << ", rshrank(D*B)=" << rank_db << ", rshrank(B)="
          << rank_b;
    rep.conditions.add("rank_chain", chain_ok,
                       static_cast<double>(std::abs(rank_ab - rank_b) +
                                           std::abs(rank_db - rank_b)),
                       chain.str());

    const Resolvents factors = resolvents(a1, e, opts.norm);
    rep.factors = factors;
    rep.conditions.add("norm_product", factors.norm_product < 1.0, factors.norm_product,
                       "|A1|*|E|");
    const Index rank_a = rshrank(a, opts.rank_tol);
    const Index rank_d = rshrank(d, opts.rank_tol);
    rep.conditions.add("rank_equal", rank_a == rank_d,
                       static_cast<double>(std::abs(rank_d - rank_a)),
                       rank_pair_note("rshrank(A)", rank_a, "rshrank(D)", rank_d));
    const double t = norm_of(einstein_product(e, a1), opts.norm);
    rep.conditions.add("contraction_norm", t < 1.0, t, "|E*A1|", false);

    if (!factors.rho) {
        rep.conditions.add("resolvent_factors", false, 1.0, "right factor singular");
        return rep;
    }
    rep.conditions.add("resolvent_factors", true, 0.0);

    const Tensor d2 = einstein_product(
        einstein_product(einstein_product(b, b1), a1), *factors.rho);
    rep.perturbed_inverse = d2;

    const ConditionReport outer_check = verify_identity(d, d2, IdentityKind::outer, opts.tol);
    rep.conditions.merge(outer_check);
    rep.verified = outer_check.entries.front().pass;
    verify_subspace(rep, b, SubspaceRelation::range_equal, opts);

    if (rank_ab == rank_b) {
        const Tensor a2 = einstein_product(b, inner_inverse(einstein_product(a, b)));
        rep.reference_inverse = a2;
        rep.measured_ratio = ratio_of(d2 - a2, a2, opts.norm);
        if (t < 1.0) {
            rep.bound = norm_of(einstein_product(b, b1), opts.norm) * norm_of(a1, opts.norm) /
                            ((1.0 - t) * norm_of(a2, opts.norm)) +
                        1.0;
            rep.bound_holds = *rep.measured_ratio <= *rep.bound;

            const ConditionReport rol_ab = check_reverse_order(a, b, a1, b1, opts.tol);
            add_renamed(rep.conditions, rol_ab, "rol_idempotent_ab", false,
                        "reverse-order simplification applies when idempotent");
            if (rol_ab.entries.front().pass) rep.corollary_bound = 1.0 / (1.0 - t) + 1.0;
        }
    }
    return rep;
}

PerturbReport perturb_c_inverse(const Tensor& a, const Tensor& c, const Tensor& e, Route route,
                                const PerturbOptions& opts) {
    if (route == Route::multiplicative) {
        PerturbReport rep;
        std::optional<Tensor> x;
        try {
            x = outer_inverse_null(a, c, opts.rank_tol);
        } catch (const precondition_error& err) {
            rep.conditions.add("null_construction", false, 1.0, err.what());
            return rep;
        }
        rep = multiplicative_core(a, *x, e, opts, /*need_right=*/false, /*need_left=*/true);
        verify_subspace(rep, c, SubspaceRelation::null_equal, opts);
        return rep;
    }

    // Rank route.
    PerturbReport rep;
    const Tensor d = a + e;
    const Tensor a1 = inner_inverse(a);
    const Tensor c1 = inner_inverse(c);
    const Tensor d1 = inner_inverse(d);

    add_renamed(rep.conditions, check_reverse_order(c, d, c1, d1, opts.tol),
                "rol_idempotent_cd", true, "projector C1*C*D*D1");

    const Index rank_cd = rshrank(einstein_product(c, d), opts.rank_tol);
    const Index rank_ca = rshrank(einstein_product(c, a), opts.rank_tol);
    const Index rank_c = rshrank(c, opts.rank_tol);
    const bool chain_ok = rank_cd == rank_c && rank_ca == rank_c;
    std::ostringstream chain;
    chain << "rshrank(C*D)=" << rank_cd << ", rshrank(C*A)=" << rank_ca << ", rshrank(C)="
          << rank_c;
    rep.conditions.add("rank_chain", chain_ok,
                       static_cast<double>(std::abs(rank_cd - rank_c) +
                                           std::abs(rank_ca - rank_c)),
                       chain.str());

    const Resolvents factors = resolvents(a1, e, opts.norm);
    rep.factors = factors;
    rep.conditions.add("norm_product", factors.norm_product < 1.0, factors.norm_product,
                       "|A1|*|E|");
    const Index rank_a = rshrank(a, opts.rank_tol);
    const Index rank_d = rshrank(d, opts.rank_tol);
    rep.conditions.add("rank_equal", rank_a == rank_d,
                       static_cast<double>(std::abs(rank_d - rank_a)),
                       rank_pair_note("rshrank(A)", rank_a, "rshrank(D)", rank_d));
    const double t = norm_of(einstein_product(e, a1), opts.norm);
    rep.conditions.add("contraction_norm", t < 1.0, t, "|E*A1|", false);

    if (!factors.rho) {
        rep.conditions.add("resolvent_factors", false, 1.0, "right factor singular");
        return rep;
    }
    rep.conditions.add("resolvent_factors", true, 0.0);

    const Tensor d2 = einstein_product(
        einstein_product(einstein_product(a1, *factors.rho), c1), c);
    rep.perturbed_inverse = d2;

    const ConditionReport outer_check = verify_identity(d, d2, IdentityKind::outer, opts.tol);
    rep.conditions.merge(outer_check);
    rep.verified = outer_check.entries.front().pass;
    verify_subspace(rep, c, SubspaceRelation::null_equal, opts);

    if (rank_ca == rank_c) {
        const Tensor a2 = einstein_product(inner_inverse(einstein_product(c, a)), c);
        rep.reference_inverse = a2;
        rep.measured_ratio = ratio_of(d2 - a2, a2, opts.norm);
        if (t < 1.0) {
            rep.bound = norm_of(a1, opts.norm) * norm_of(einstein_product(c1, c), opts.norm) /
                            ((1.0 - t) * norm_of(a2, opts.norm)) +
                        1.0;
            rep.bound_holds = *rep.measured_ratio <= *rep.bound;

            const ConditionReport rol_ca = check_reverse_order(c, a, c1, a1, opts.tol);
            add_renamed(rep.conditions, rol_ca, "rol_idempotent_ca", false,
                        "reverse-order simplification applies when idempotent");
            if (rol_ca.entries.front().pass) rep.corollary_bound = 1.0 / (1.0 - t) + 1.0;
        }
    }
    return rep;
}

PerturbReport perturb_bc_inverse(const Tensor& a, const Tensor& b, const Tensor& c,
                                 const Tensor& e, Route route, const PerturbOptions& opts) {
    if (route == Route::multiplicative) {
        PerturbReport rep;
        std::optional<Tensor> x;
        try {
            x = bc_inverse(a, b, c, opts.rank_tol);
        } catch (const precondition_error& err) {
            rep.conditions.add("bc_construction", false, 1.0, err.what());
            return rep;
        }
        rep = multiplicative_core(a, *x, e, opts, /*need_right=*/true, /*need_left=*/true);
        verify_subspace(rep, b, SubspaceRelation::range_equal, opts);
        verify_subspace(rep, c, SubspaceRelation::null_equal, opts);
        return rep;
    }

    // Rank route.
    PerturbReport rep;
    const Tensor d = a + e;
    const Tensor a1 = inner_inverse(a);
    const Tensor b1 = inner_inverse(b);
    const Tensor c1 = inner_inverse(c);
    const Tensor d1 = inner_inverse(d);
    const Tensor cd = einstein_product(c, d);
    const Tensor db = einstein_product(d, b);

    // Primary idempotency pair and the accepted alternative pair.
    const ConditionReport idem_cdb =
        check_reverse_order(cd, b, inner_inverse(cd), b1, opts.tol);
    const ConditionReport idem_cd = check_reverse_order(c, d, c1, d1, opts.tol);
    const ConditionReport alt_idem_c_db =
        check_reverse_order(c, db, c1, inner_inverse(db), opts.tol);
    const ConditionReport alt_idem_db = check_reverse_order(d, b, d1, b1, opts.tol);
    add_renamed(rep.conditions, idem_cdb, "rol_idempotent_cdb", false,
                "projector (C*D)1*C*D*B*B1");
    add_renamed(rep.conditions, idem_cd, "rol_idempotent_cd", false, "projector C1*C*D*D1");
    add_renamed(rep.conditions, alt_idem_c_db, "alt_rol_idempotent_c_db", false,
                "projector C1*C*D*B*(D*B)1");
    add_renamed(rep.conditions, alt_idem_db, "alt_rol_idempotent_db", false,
                "projector D1*D*B*B1");
    const bool primary_pair =
        idem_cdb.entries.front().pass && idem_cd.entries.front().pass;
    const bool alternative_pair =
        alt_idem_c_db.entries.front().pass && alt_idem_db.entries.front().pass;
    rep.conditions.add("idempotency_gate", primary_pair || alternative_pair,
                       primary_pair || alternative_pair ? 0.0 : 1.0,
                       primary_pair ? "primary projector pair idempotent"
                                    : (alternative_pair ? "alternative projector pair idempotent"
                                                        : "neither projector pair idempotent"));

    const Index rank_cab =
        rshrank(einstein_product(einstein_product(c, a), b), opts.rank_tol);
    const Index rank_cdb = rshrank(einstein_product(cd, b), opts.rank_tol);
    const Index rank_c = rshrank(c, opts.rank_tol);
    const Index rank_b = rshrank(b, opts.rank_tol);
    const bool chain_ok = rank_cab == rank_b && rank_cdb == rank_b && rank_c == rank_b;
    std::ostringstream chain;
    chain << "rshrank(C*A*B)=" << rank_cab << ", rshrank(C*D*B)=" << rank_cdb
          << ", rshrank(C)=" << rank_c << ", rshrank(B)=" << rank_b;
    rep.conditions.add("rank_chain", chain_ok,
                       static_cast<double>(std::abs(rank_cab - rank_b) +
                                           std::abs(rank_cdb - rank_b) +
                                           std::abs(rank_c - rank_b)),
                       chain.str());

    const Resolvents factors = resolvents(a1, e, opts.norm);
    rep.factors = factors;
    rep.conditions.add("norm_product", factors.norm_product < 1.0, factors.norm_product,
                       "|A1|*|E|");
    const Index rank_a = rshrank(a, opts.rank_tol);
    const Index rank_d = rshrank(d, opts.rank_tol);
    rep.conditions.add("rank_equal", rank_a == rank_d,
                       static_cast<double>(std::abs(rank_d - rank_a)),
                       rank_pair_note("rshrank(A)", rank_a, "rshrank(D)", rank_d));
    const double t = norm_of(einstein_product(e, a1), opts.norm);
    rep.conditions.add("contraction_norm", t < 1.0, t, "|E*A1|", false);

    if (!factors.rho) {
        rep.conditions.add("resolvent_factors", false, 1.0, "right factor singular");
        return rep;
    }
    rep.conditions.add("resolvent_factors", true, 0.0);

    const Tensor d2 = einstein_product(
        einstein_product(
            einstein_product(einstein_product(einstein_product(b, b1), a1), *factors.rho), c1),
        c);
    rep.perturbed_inverse = d2;

    const ConditionReport outer_check = verify_identity(d, d2, IdentityKind::outer, opts.tol);
    rep.conditions.merge(outer_check);
    rep.verified = outer_check.entries.front().pass;
    verify_subspace(rep, b, SubspaceRelation::range_equal, opts);
    verify_subspace(rep, c, SubspaceRelation::null_equal, opts);

    if (rank_cab == rank_b && rank_cab == rank_c) {
        const Tensor cab = einstein_product(einstein_product(c, a), b);
        const Tensor a2 =
            einstein_product(einstein_product(b, inner_inverse(cab)), c);
        rep.reference_inverse = a2;
        rep.measured_ratio = ratio_of(d2 - a2, a2, opts.norm);
        if (t < 1.0) {
            rep.bound = norm_of(einstein_product(b, b1), opts.norm) * norm_of(a1, opts.norm) *
                            norm_of(einstein_product(c1, c), opts.norm) /
                            ((1.0 - t) * norm_of(a2, opts.norm)) +
                        1.0;
            rep.bound_holds = *rep.measured_ratio <= *rep.bound;

            // Reverse-order premise for the simplified bound: B1*A1*C1 must be
            // an inner inverse of C*A*B.
            const Tensor candidate =
                einstein_product(einstein_product(b1, a1), c1);
            const ConditionReport premise =
                verify_identity(cab, candidate, IdentityKind::inner, opts.tol);
            add_renamed(rep.conditions, premise, "reverse_order_premise", false,
                        "B1*A1*C1 inner-inverts C*A*B");
            if (premise.entries.front().pass) rep.corollary_bound = 1.0 / (1.0 - t) + 1.0;
        }
    }
    return rep;
}

}  // namespace teinv
