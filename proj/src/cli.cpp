#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teinv/errors.hpp"
#include "teinv/ginv.hpp"
#include "teinv/io.hpp"
#include "teinv/perturb.hpp"
#include "teinv/reshape.hpp"
#include "teinv/tensor.hpp"

namespace teinv {

namespace {

struct CommonOpts {
    double tol = kVerifyTol;
    double rank_tol = -1.0;
    NormKind norm = NormKind::frobenius;
    Route route = Route::rank;
    std::string format = "json";
    std::string out_path;
};

double rel_defect(const Tensor& x, const Tensor& y) {
    const double denom = frobenius_norm(y);
    const double num = frobenius_norm(x - y);
    return denom > 0.0 ? num / denom : num;
}

void render(const ReportDocument& rep, const std::string& format, std::ostream& out) {
    if (format == "text") {
        rep.to_text(out);
    } else {
        out << rep.to_json().dump(2) << '\n';
    }
}

// The --out flag redirects the command's primary result to a file; other
// result tensors are embedded in the report.
void attach_primary(ReportDocument& rep, const Tensor& t, const std::string& label,
                    const CommonOpts& opts) {
    if (!opts.out_path.empty()) {
        save_tensor(t, opts.out_path, label);
        rep.outputs.emplace_back(label, opts.out_path);
    } else {
        rep.tensors.emplace_back(label, TensorDocument::from_tensor(t, label));
    }
}

void attach_inline(ReportDocument& rep, const Tensor& t, const std::string& label) {
    rep.tensors.emplace_back(label, TensorDocument::from_tensor(t, label));
}

void fill_perturb(ReportDocument& rep, const PerturbReport& result, const CommonOpts& opts) {
    rep.conditions = result.conditions;
    if (result.factors) rep.scalars.emplace_back("norm_product", result.factors->norm_product);
    if (result.measured_ratio) rep.scalars.emplace_back("measured_ratio", *result.measured_ratio);
    if (result.bound) rep.scalars.emplace_back("bound", *result.bound);
    if (result.corollary_bound) {
        rep.scalars.emplace_back("corollary_bound", *result.corollary_bound);
    }
    if (result.perturbed_inverse) {
        attach_primary(rep, *result.perturbed_inverse, "perturbed_inverse", opts);
    }
    if (result.reference_inverse) {
        attach_inline(rep, *result.reference_inverse, "reference_inverse");
    }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized tensor inverses under the Einstein product"};
    app.name("teinv");
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--tol", opts.tol, "identity verification tolerance")
        ->capture_default_str();
    app.add_option("--rank-tol", opts.rank_tol,
                   "relative singular-value cutoff for ranks (default: size-scaled)");
    const std::map<std::string, NormKind> norm_names{{"frobenius", NormKind::frobenius},
                                                     {"spectral", NormKind::spectral}};
    app.add_option("--norm", opts.norm, "norm used for gates, ratios and bounds")
        ->transform(CLI::CheckedTransformer(norm_names, CLI::ignore_case));
    const std::map<std::string, Route> route_names{{"multiplicative", Route::multiplicative},
                                                   {"rank", Route::rank}};
    app.add_option("--route", opts.route, "hypothesis route for perturb-b/c/bc")
        ->transform(CLI::CheckedTransformer(route_names, CLI::ignore_case));
    app.add_option("--format", opts.format, "report rendering")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_option("--out", opts.out_path, "write the primary result tensor to this file");

    std::string path_a, path_b, path_c, path_e, path_x, kind;
    std::size_t contract_modes = 0;

    auto* cmd_product = app.add_subcommand("product", "Einstein product of two tensors");
    cmd_product->add_option("a", path_a, "left tensor document")->required();
    cmd_product->add_option("b", path_b, "right tensor document")->required();
    auto* modes_opt = cmd_product->add_option(
        "--modes", contract_modes,
        "modes to contract (default: all column modes of the left tensor)");

    auto* cmd_norm = app.add_subcommand("norm", "Frobenius and spectral norms");
    cmd_norm->add_option("a", path_a, "tensor document")->required();

    auto* cmd_rank = app.add_subcommand("rank", "reshape rank");
    cmd_rank->add_option("a", path_a, "tensor document")->required();

    auto* cmd_pinv = app.add_subcommand("pinv", "Moore-Penrose inverse");
    cmd_pinv->add_option("a", path_a, "tensor document")->required();

    auto* cmd_ginv_b = app.add_subcommand("ginv-b", "outer inverse with prescribed range");
    cmd_ginv_b->add_option("a", path_a, "tensor document")->required();
    cmd_ginv_b->add_option("b", path_b, "range prescription")->required();

    auto* cmd_ginv_c = app.add_subcommand("ginv-c", "outer inverse with prescribed null space");
    cmd_ginv_c->add_option("a", path_a, "tensor document")->required();
    cmd_ginv_c->add_option("c", path_c, "null-space prescription")->required();

    auto* cmd_ginv_bc =
        app.add_subcommand("ginv-bc", "outer inverse with prescribed range and null space");
    cmd_ginv_bc->add_option("a", path_a, "tensor document")->required();
    cmd_ginv_bc->add_option("b", path_b, "range prescription")->required();
    cmd_ginv_bc->add_option("c", path_c, "null-space prescription")->required();

    auto* cmd_p_inner =
        app.add_subcommand("perturb-inner", "perturbed inner inverse with gates and bound");
    cmd_p_inner->add_option("a", path_a, "tensor document")->required();
    cmd_p_inner->add_option("e", path_e, "perturbation document")->required();
    auto* a1_opt = cmd_p_inner->add_option("a1", path_x, "inner inverse to perturb (default: "
                                                         "Moore-Penrose)");

    auto* cmd_p_outer =
        app.add_subcommand("perturb-outer", "perturbed outer inverse with gates and bound");
    cmd_p_outer->add_option("a", path_a, "tensor document")->required();
    cmd_p_outer->add_option("x2", path_x, "outer inverse to perturb")->required();
    cmd_p_outer->add_option("e", path_e, "perturbation document")->required();

    auto* cmd_p_b = app.add_subcommand("perturb-b", "perturbed range-prescribed inverse");
    cmd_p_b->add_option("a", path_a, "tensor document")->required();
    cmd_p_b->add_option("b", path_b, "range prescription")->required();
    cmd_p_b->add_option("e", path_e, "perturbation document")->required();

    auto* cmd_p_c = app.add_subcommand("perturb-c", "perturbed null-space-prescribed inverse");
    cmd_p_c->add_option("a", path_a, "tensor document")->required();
    cmd_p_c->add_option("c", path_c, "null-space prescription")->required();
    cmd_p_c->add_option("e", path_e, "perturbation document")->required();

    auto* cmd_p_bc = app.add_subcommand("perturb-bc", "perturbed (range, null-space) inverse");
    cmd_p_bc->add_option("a", path_a, "tensor document")->required();
    cmd_p_bc->add_option("b", path_b, "range prescription")->required();
    cmd_p_bc->add_option("c", path_c, "null-space prescription")->required();
    cmd_p_bc->add_option("e", path_e, "perturbation document")->required();

    auto* cmd_verify = app.add_subcommand("verify", "check an inverse identity or subspace "
                                                    "relation between two tensors");
    cmd_verify
        ->add_option("kind", kind,
                     "one of inner, outer, penrose-3, penrose-4, range-equal, null-equal, "
                     "trivial-intersection")
        ->required()
        ->check(CLI::IsMember({"inner", "outer", "penrose-3", "penrose-4", "range-equal",
                               "null-equal", "trivial-intersection"}));
    cmd_verify->add_option("a", path_a, "tensor document")->required();
    cmd_verify->add_option("x", path_x, "candidate inverse / comparison tensor")->required();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    ReportDocument rep;
    int code = 0;
    PerturbOptions popts;
    popts.norm = opts.norm;
    popts.tol = opts.tol;
    popts.rank_tol = opts.rank_tol;

    try {
        if (cmd_product->parsed()) {
            rep.command = "product";
            rep.inputs = {{"a", path_a}, {"b", path_b}};
            const Tensor a = load_tensor(path_a);
            const Tensor b = load_tensor(path_b);
            const Tensor result = (*modes_opt) ? einstein_product(a, b, contract_modes)
                                               : einstein_product(a, b);
            rep.scalars.emplace_back("frobenius_norm", frobenius_norm(result));
            attach_primary(rep, result, "product", opts);
        } else if (cmd_norm->parsed()) {
            rep.command = "norm";
            rep.inputs = {{"a", path_a}};
            const Tensor a = load_tensor(path_a);
            rep.scalars.emplace_back("frobenius_norm", frobenius_norm(a));
            rep.scalars.emplace_back("spectral_norm", spectral_norm(a));
        } else if (cmd_rank->parsed()) {
            rep.command = "rank";
            rep.inputs = {{"a", path_a}};
            rep.counts.emplace_back("rshrank", rshrank(load_tensor(path_a), opts.rank_tol));
        } else if (cmd_pinv->parsed()) {
            rep.command = "pinv";
            rep.inputs = {{"a", path_a}};
            const InverseReport result = moore_penrose(load_tensor(path_a), opts.tol);
            static const char* kPenroseNames[4] = {"penrose_1", "penrose_2", "penrose_3",
                                                   "penrose_4"};
            for (int i = 0; i < 4; ++i) {
                rep.conditions.add(kPenroseNames[i], result.penrose_flags[i],
                                   result.residuals[i]);
            }
            attach_primary(rep, result.inverse, "pinv", opts);
            if (!result.all_penrose()) code = 2;
        } else if (cmd_ginv_b->parsed()) {
            rep.command = "ginv-b";
            rep.inputs = {{"a", path_a}, {"b", path_b}};
            const Tensor a = load_tensor(path_a);
            const Tensor b = load_tensor(path_b);
            const Tensor x = outer_inverse_range(a, b, opts.rank_tol);
            rep.conditions.merge(verify_identity(a, x, IdentityKind::outer, opts.tol));
            rep.conditions.merge(
                subspace_relation(x, b, SubspaceRelation::range_equal, opts.rank_tol));
            attach_primary(rep, x, "ginv", opts);
            if (!rep.conditions.all_passed()) code = 2;
        } else if (cmd_ginv_c->parsed()) {
            rep.command = "ginv-c";
            rep.inputs = {{"a", path_a}, {"c", path_c}};
            const Tensor a = load_tensor(path_a);
            const Tensor c = load_tensor(path_c);
            const Tensor x = outer_inverse_null(a, c, opts.rank_tol);
            rep.conditions.merge(verify_identity(a, x, IdentityKind::outer, opts.tol));
            rep.conditions.merge(
                subspace_relation(x, c, SubspaceRelation::null_equal, opts.rank_tol));
            attach_primary(rep, x, "ginv", opts);
            if (!rep.conditions.all_passed()) code = 2;
        } else if (cmd_ginv_bc->parsed()) {
            rep.command = "ginv-bc";
            rep.inputs = {{"a", path_a}, {"b", path_b}, {"c", path_c}};
            const Tensor a = load_tensor(path_a);
            const Tensor b = load_tensor(path_b);
            const Tensor c = load_tensor(path_c);
            const Tensor x = bc_inverse(a, b, c, opts.rank_tol);
            rep.conditions.merge(verify_identity(a, x, IdentityKind::outer, opts.tol));
            rep.conditions.merge(
                subspace_relation(x, b, SubspaceRelation::range_equal, opts.rank_tol));
            rep.conditions.merge(
                subspace_relation(x, c, SubspaceRelation::null_equal, opts.rank_tol));
            const double right =
                rel_defect(einstein_product(einstein_product(x, a), b), b);
            const double left =
                rel_defect(einstein_product(einstein_product(c, a), x), c);
            rep.conditions.add("defining_range", right <= opts.tol, right, "X*A*B = B");
            rep.conditions.add("defining_null", left <= opts.tol, left, "C*A*X = C");
            attach_primary(rep, x, "ginv", opts);
            if (!rep.conditions.all_passed()) code = 2;
        } else if (cmd_p_inner->parsed()) {
            rep.command = "perturb-inner";
            rep.inputs = {{"a", path_a}, {"e", path_e}};
            const Tensor a = load_tensor(path_a);
            const Tensor e = load_tensor(path_e);
            std::optional<Tensor> a1;
            if (*a1_opt) {
                rep.inputs.emplace_back("a1", path_x);
                a1 = load_tensor(path_x);
            }
            const PerturbReport result = perturb_inner(a, e, a1, popts);
            fill_perturb(rep, result, opts);
            if (!result.success()) code = 2;
        } else if (cmd_p_outer->parsed()) {
            rep.command = "perturb-outer";
            rep.inputs = {{"a", path_a}, {"x2", path_x}, {"e", path_e}};
            const Tensor a = load_tensor(path_a);
            const Tensor x2 = load_tensor(path_x);
            const Tensor e = load_tensor(path_e);
            const PerturbReport result = perturb_outer(a, x2, e, popts);
            fill_perturb(rep, result, opts);
            if (!result.success()) code = 2;
        } else if (cmd_p_b->parsed()) {
            rep.command = "perturb-b";
            rep.inputs = {{"a", path_a}, {"b", path_b}, {"e", path_e}};
            const Tensor a = load_tensor(path_a);
            const Tensor b = load_tensor(path_b);
            const Tensor e = load_tensor(path_e);
            const PerturbReport result = perturb_b_inverse(a, b, e, opts.route, popts);
            fill_perturb(rep, result, opts);
            if (!result.success()) code = 2;
        } else if (cmd_p_c->parsed()) {
            rep.command = "perturb-c";
            rep.inputs = {{"a", path_a}, {"c", path_c}, {"e", path_e}};
            const Tensor a = load_tensor(path_a);
            const Tensor c = load_tensor(path_c);
            const Tensor e = load_tensor(path_e);
            const PerturbReport result = perturb_c_inverse(a, c, e, opts.route, popts);
            fill_perturb(rep, result, opts);
            if (!result.success()) code = 2;
        } else if (cmd_p_bc->parsed()) {
            rep.command = "perturb-bc";
            rep.inputs = {{"a", path_a}, {"b", path_b}, {"c", path_c}, {"e", path_e}};
            const Tensor a = load_tensor(path_a);
            const Tensor b = load_tensor(path_b);
            const Tensor c = load_tensor(path_c);
            const Tensor e = load_tensor(path_e);
            const PerturbReport result = perturb_bc_inverse(a, b, c, e, opts.route, popts);
            fill_perturb(rep, result, opts);
            if (!result.success()) code = 2;
        } else if (cmd_verify->parsed()) {
            rep.command = "verify";
            rep.inputs = {{"a", path_a}, {"x", path_x}};
            const Tensor a = load_tensor(path_a);
            const Tensor x = load_tensor(path_x);
            if (kind == "inner" || kind == "outer" || kind == "penrose-3" ||
                kind == "penrose-4") {
                const IdentityKind identity = kind == "inner"       ? IdentityKind::inner
                                              : kind == "outer"     ? IdentityKind::outer
                                              : kind == "penrose-3" ? IdentityKind::penrose3
                                                                    : IdentityKind::penrose4;
                rep.conditions.merge(verify_identity(a, x, identity, opts.tol));
            } else {
                const SubspaceRelation relation =
                    kind == "range-equal" ? SubspaceRelation::range_equal
                    : kind == "null-equal"
                        ? SubspaceRelation::null_equal
                        : SubspaceRelation::range_intersection_trivial;
                rep.conditions.merge(subspace_relation(a, x, relation, opts.rank_tol));
            }
            if (!rep.conditions.all_passed()) code = 2;
        }
    } catch (const precondition_error& e) {
        rep.conditions.add("precondition", false, 1.0, e.what());
        code = 2;
    } catch (const singular_error& e) {
        rep.conditions.add("nonsingular", false, 1.0, e.what());
        code = 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    render(rep, opts.format, out);
    return code;
}

}  // namespace teinv
