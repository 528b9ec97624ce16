#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "support.hpp"

using namespace teinv;
using namespace testsup;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
    json report;  // parsed stdout when it is JSON, else null
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult result;
    result.code = run_command(args, out, err);
    result.out = out.str();
    result.err = err.str();
    result.report = json::parse(result.out, nullptr, /*allow_exceptions=*/false);
    return result;
}

// Scratch directory for files the tests create; removed when the suite ends.
struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / "teinv_test_scratch") {
        fs::create_directories(dir);
    }
    ~Scratch() { std::error_code ignored; fs::remove_all(dir, ignored); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

std::string fixture(const std::string& name) { return fixture_path(name).string(); }

}  // namespace

TEST_SUITE_BEGIN("io_cli");

TEST_CASE("tensor documents load with shape, split and exact entries") {
    const TensorDocument doc = load_document(fixture_path("ex31_A"));
    CHECK(doc.shape == std::vector<Index>{2, 2, 2, 2});
    CHECK(doc.split == 2);
    CHECK(doc.layout == std::string(kLayoutId));
    CHECK(doc.entries.size() == 16);

    const Tensor a = doc.to_tensor();
    CHECK(a.at({0, 0, 0, 0}) == Complex(1.0, 0.0));
    CHECK(a.at({1, 1, 1, 1}) == Complex(-1.0, 0.0));
}

TEST_CASE("save and load round-trip bit-exactly") {
    Scratch scratch;
    Rng rng(223);
    const Tensor t = random_tensor(rng, Shape({3, 2, 1, 2, 3}, 2));
    const fs::path path = scratch.dir / "roundtrip.json";
    save_tensor(t, path, "sample");
    const TensorDocument doc = load_document(path);
    CHECK(doc.name == "sample");
    const Tensor back = doc.to_tensor();
    CHECK(back.shape() == t.shape());
    CHECK((back.entries() - t.entries()).cwiseAbs().maxCoeff() == 0.0);

    const Tensor zero = Tensor::zero(Shape({2, 2}, 1));
    const fs::path zpath = scratch.dir / "zero.json";
    save_tensor(zero, zpath);
    CHECK(frobenius_norm(load_tensor(zpath)) == 0.0);
}

TEST_CASE("document validation failures carry context") {
    Scratch scratch;

    // Entry count mismatch.
    TensorDocument short_doc;
    short_doc.shape = {2, 2};
    short_doc.split = 1;
    short_doc.entries = {{1, 0}, {2, 0}, {3, 0}};
    CHECK_THROWS_WITH_AS(short_doc.to_tensor(), doctest::Contains("entry count"), value_error);

    // Unknown layout tag.
    TensorDocument alien;
    alien.shape = {2, 2};
    alien.split = 1;
    alien.layout = "last-index-fastest";
    alien.entries = {{0, 0}, {0, 0}, {0, 0}, {0, 0}};
    CHECK_THROWS_WITH_AS(alien.to_tensor(), doctest::Contains("layout"), value_error);

    // Missing fields and malformed entries.
    CHECK_THROWS_WITH_AS(TensorDocument::from_json(json::parse(R"({"split": 1})")),
                         doctest::Contains("shape"), value_error);
    CHECK_THROWS_WITH_AS(
        TensorDocument::from_json(json::parse(
            R"({"shape": [2], "split": 1, "layout": "first-index-fastest", "entries": [[1]]})")),
        doctest::Contains("entries"), value_error);

    // Broken file: the error names the path.
    const fs::path bad = scratch.dir / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_WITH_AS(load_document(bad), doctest::Contains("bad.json"), value_error);

    CHECK_THROWS_WITH_AS(load_tensor(scratch.dir / "missing.json"),
                         doctest::Contains("cannot open"), value_error);
}

TEST_CASE("saved computation results agree with the stored expectations") {
    Scratch scratch;
    const Tensor mp = moore_penrose(fx("ex31_A")).inverse;
    const fs::path path = scratch.dir / "a1.json";
    save_tensor(mp, path, "pinv");
    CHECK(max_abs_diff(load_tensor(path), fx("ex31_A1")) < 5e-4);
}

TEST_CASE("cli: rank and norm report the worked values") {
    const CliResult rank = run_cli({"rank", fixture("ex31_A")});
    CHECK(rank.code == 0);
    REQUIRE(!rank.report.is_discarded());
    CHECK(rank.report["command"] == "rank");
    CHECK(rank.report["counts"]["rshrank"] == 2);

    const CliResult norm = run_cli({"norm", fixture("ex31_E1")});
    CHECK(norm.code == 0);
    CHECK(std::abs(norm.report["scalars"]["frobenius_norm"].get<double>() - 0.8718) < 5e-4);
    CHECK(norm.report["scalars"].contains("spectral_norm"));
}

TEST_CASE("cli: perturb-inner succeeds and fails with the worked pair") {
    const CliResult good =
        run_cli({"perturb-inner", fixture("ex31_A"), fixture("ex31_E2")});
    CHECK(good.code == 0);
    REQUIRE(!good.report.is_discarded());
    CHECK(std::abs(good.report["scalars"]["measured_ratio"].get<double>() - 0.2) < 5e-4);
    CHECK(std::abs(good.report["scalars"]["bound"].get<double>() - 2.3415) < 5e-4);
    CHECK(good.report["tensors"].contains("perturbed_inverse"));
    CHECK(good.report["tensors"].contains("reference_inverse"));
    bool saw_gate = false;
    for (const json& row : good.report["conditions"]) {
        if (row["name"] == "hypothesis_gate") {
            saw_gate = true;
            CHECK(row["pass"].get<bool>());
            CHECK(row["required"].get<bool>());
        }
    }
    CHECK(saw_gate);

    const CliResult bad = run_cli({"perturb-inner", fixture("ex31_A"), fixture("ex31_E1")});
    CHECK(bad.code == 2);
    REQUIRE(!bad.report.is_discarded());
    bool saw_rank = false;
    for (const json& row : bad.report["conditions"]) {
        if (row["name"] == "rank_equal") {
            saw_rank = true;
            CHECK(!row["pass"].get<bool>());
        }
    }
    CHECK(saw_rank);
}

TEST_CASE("cli: perturbation subcommands reproduce the worked bounds") {
    const CliResult b =
        run_cli({"perturb-b", fixture("ex45_A"), fixture("ex45_B"), fixture("ex45_E")});
    CHECK(b.code == 0);
    CHECK(std::abs(b.report["scalars"]["measured_ratio"].get<double>() - 0.0726) < 5e-4);
    CHECK(std::abs(b.report["scalars"]["bound"].get<double>() - 2.6116) < 5e-4);

    const CliResult c =
        run_cli({"perturb-c", fixture("ex46_A"), fixture("ex46_C"), fixture("ex46_E")});
    CHECK(c.code == 0);
    CHECK(std::abs(c.report["scalars"]["measured_ratio"].get<double>() - 0.1429) < 5e-4);
    CHECK(std::abs(c.report["scalars"]["bound"].get<double>() - 2.8503) < 5e-4);

    const CliResult bc = run_cli({"perturb-bc", fixture("ex47_A"), fixture("ex47_B"),
                                  fixture("ex47_C"), fixture("ex47_E")});
    CHECK(bc.code == 0);
    CHECK(std::abs(bc.report["scalars"]["measured_ratio"].get<double>() - 0.2731) < 5e-4);
    CHECK(std::abs(bc.report["scalars"]["bound"].get<double>() - 6.8812) < 5e-4);
    CHECK(bc.report["scalars"].contains("corollary_bound"));
}

TEST_CASE("cli: pinv writes the primary result with --out") {
    Scratch scratch;
    const std::string out_file = scratch.file("pinv.json");
    const CliResult r = run_cli({"pinv", fixture("ex31_A"), "--out", out_file});
    CHECK(r.code == 0);
    CHECK(r.report["outputs"]["pinv"] == out_file);
    CHECK(!r.report["tensors"].contains("pinv"));
    CHECK(max_abs_diff(load_tensor(out_file), fx("ex31_A1")) < 5e-4);
    for (const json& row : r.report["conditions"]) CHECK(row["pass"].get<bool>());
}

TEST_CASE("cli: ginv subcommands verify their defining relations") {
    const CliResult bc = run_cli({"ginv-bc", fixture("ex47_A"), fixture("ex47_B"),
                                  fixture("ex47_C")});
    CHECK(bc.code == 0);
    bool saw_range = false, saw_null = false;
    for (const json& row : bc.report["conditions"]) {
        if (row["name"] == "defining_range") saw_range = true;
        if (row["name"] == "defining_null") saw_null = true;
        CHECK(row["pass"].get<bool>());
    }
    CHECK(saw_range);
    CHECK(saw_null);

    // Rank-precondition violation surfaces as a failed condition, exit 2.
    Scratch scratch;
    Rng rng(227);
    const Tensor deficient = random_conditioned(rng, Shape({2, 2, 2, 2}, 2), 2);
    const std::string a_path = scratch.file("deficient.json");
    const std::string b_path = scratch.file("eye.json");
    save_tensor(deficient, a_path);
    save_tensor(identity({2, 2}), b_path);
    const CliResult fails = run_cli({"ginv-b", a_path, b_path});
    CHECK(fails.code == 2);
    bool saw_precondition = false;
    for (const json& row : fails.report["conditions"]) {
        if (row["name"] == "precondition") {
            saw_precondition = true;
            CHECK(!row["pass"].get<bool>());
        }
    }
    CHECK(saw_precondition);
}

TEST_CASE("cli: verify subcommand distinguishes tolerances") {
    Scratch scratch;
    const Tensor d = fx("ex31_A") + fx("ex31_E2");
    const std::string d_path = scratch.file("d.json");
    save_tensor(d, d_path);

    // The stored inverse is printed to 4 decimals: it passes only at a
    // tolerance looser than the rounding error.
    const CliResult strict = run_cli({"verify", "inner", d_path, fixture("ex31_D1_E2")});
    CHECK(strict.code == 2);
    const CliResult loose =
        run_cli({"--tol", "1e-3", "verify", "inner", d_path, fixture("ex31_D1_E2")});
    CHECK(loose.code == 0);

    // Subspace comparison against a rounded tensor needs a rank tolerance
    // above the rounding noise.
    const CliResult subspace = run_cli({"--rank-tol", "1e-3", "verify", "range-equal",
                                        fixture("ex45_A2"), fixture("ex45_B")});
    CHECK(subspace.code == 0);
}

TEST_CASE("cli: product contracts the requested number of modes") {
    const CliResult r =
        run_cli({"product", fixture("ex31_A"), fixture("ex31_A"), "--modes", "2"});
    CHECK(r.code == 0);
    const Tensor a = fx("ex31_A");
    const Tensor expected = einstein_product(a, a, 2);
    CHECK(std::abs(r.report["scalars"]["frobenius_norm"].get<double>() -
                   frobenius_norm(expected)) < 1e-12);

    const CliResult mismatch = run_cli({"product", fixture("ex31_A"), fixture("ex45_B")});
    CHECK(mismatch.code == 1);
    CHECK(mismatch.err.find("error:") != std::string::npos);
}

TEST_CASE("cli: text format renders the report sections") {
    const CliResult r = run_cli({"--format", "text", "norm", fixture("ex31_A")});
    CHECK(r.code == 0);
    CHECK(r.out.find("command: norm") != std::string::npos);
    CHECK(r.out.find("scalars:") != std::string::npos);
    CHECK(r.out.find("frobenius_norm") != std::string::npos);
}

TEST_CASE("cli: usage errors") {
    std::ostringstream out, err;
    CHECK(run_command({"no-such-command"}, out, err) == 1);

    const CliResult missing = run_cli({"rank", "/nonexistent/tensor.json"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("cannot open") != std::string::npos);

    const CliResult help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("teinv") != std::string::npos);
}

TEST_CASE("cli binary runs end to end") {
    const std::string command =
        std::string(TEINV_CLI_PATH) + " rank " + fixture("ex31_A") + " > /dev/null 2>&1";
    CHECK(std::system(command.c_str()) == 0);
}

TEST_SUITE_END();
