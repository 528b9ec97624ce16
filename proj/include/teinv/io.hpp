#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teinv/ginv.hpp"
#include "teinv/tensor.hpp"

namespace teinv {

// Identifier of the entry linearization order used by every document this
// library reads or writes.
inline constexpr const char* kLayoutId = "first-index-fastest";

// Serializable tensor: shape, split, layout tag, flat [re, im] entry list and
// an optional name.  Documents round-trip bit-exactly through JSON.
struct TensorDocument {
    std::string name;  // empty means absent
    std::vector<Index> shape;
    std::size_t split = 0;
    std::string layout = kLayoutId;
    std::vector<std::pair<double, double>> entries;

    static TensorDocument from_tensor(const Tensor& t, std::string name = {});
    // Validates shape, layout and entry count; throws value_error/shape_error.
    Tensor to_tensor() const;

    static TensorDocument from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Reads a tensor document from disk.  Throws value_error with file/field
// context on parse problems, shape/entry-count mismatches or an unknown
// layout tag.
TensorDocument load_document(const std::filesystem::path& path);
Tensor load_tensor(const std::filesystem::path& path);

// Writes a document that load_tensor round-trips exactly.
void save_tensor(const Tensor& t, const std::filesystem::path& path, std::string name = {});

// Rendered result of one CLI command: scalar results, rank counts, the
// condition table, and references to (or inline copies of) produced tensors.
struct ReportDocument {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;    // label -> source
    std::vector<std::pair<std::string, double>> scalars;        // ordered, >= 6 sig digits
    std::vector<std::pair<std::string, Index>> counts;          // ranks and friends
    ConditionReport conditions;
    std::vector<std::pair<std::string, std::string>> outputs;   // label -> file path
    std::vector<std::pair<std::string, TensorDocument>> tensors;  // inline results

    nlohmann::json to_json() const;
    void to_text(std::ostream& out) const;
};

// Executes one CLI invocation (arguments excluding the program name) writing
// the report to `out` and diagnostics to `err`.  Returns 0 on success with
// all gates passed, 2 on a theorem-gate failure (report still emitted), and 1
// on usage or I/O errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teinv
