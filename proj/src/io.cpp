#include "teinv/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "teinv/errors.hpp"

namespace teinv {

namespace {

using nlohmann::json;

std::string count_text(std::size_t n) { return std::to_string(n); }

}  // namespace

TensorDocument TensorDocument::from_tensor(const Tensor& t, std::string name) {
    TensorDocument doc;
    doc.name = std::move(name);
    doc.shape = t.shape().extents();
    doc.split = t.shape().split();
    doc.entries.reserve(static_cast<std::size_t>(t.entries().size()));
    for (Eigen::Index i = 0; i < t.entries().size(); ++i) {
        doc.entries.emplace_back(t.entries()[i].real(), t.entries()[i].imag());
    }
    return doc;
}

Tensor TensorDocument::to_tensor() const {
    if (layout != kLayoutId) {
        throw value_error("unknown layout '" + layout + "' (this library uses '" +
                          std::string(kLayoutId) + "')");
    }
    const Shape tshape(shape, split);
    const auto expected = static_cast<std::size_t>(tshape.entry_count());
    if (entries.size() != expected) {
        throw value_error("entry count " + count_text(entries.size()) +
                          " does not match shape " + tshape.to_string() + " (expected " +
                          count_text(expected) + ")");
    }
    Eigen::VectorXcd values(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        values[static_cast<Eigen::Index>(i)] = Complex(entries[i].first, entries[i].second);
    }
    return Tensor(tshape, std::move(values));
}

TensorDocument TensorDocument::from_json(const json& j) {
    if (!j.is_object()) throw value_error("document root must be a JSON object");
    TensorDocument doc;
    try {
        doc.shape = j.at("shape").get<std::vector<Index>>();
    } catch (const json::exception& e) {
        throw value_error(std::string("field 'shape': ") + e.what());
    }
    try {
        doc.split = j.at("split").get<std::size_t>();
    } catch (const json::exception& e) {
        throw value_error(std::string("field 'split': ") + e.what());
    }
    try {
        doc.layout = j.at("layout").get<std::string>();
    } catch (const json::exception& e) {
        throw value_error(std::string("field 'layout': ") + e.what());
    }
    if (!j.contains("entries") || !j.at("entries").is_array()) {
        throw value_error("field 'entries': expected an array of [re, im] pairs");
    }
    const json& arr = j.at("entries");
    doc.entries.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& pair = arr[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            throw value_error("field 'entries': element " + count_text(i) +
                              " must be an [re, im] number pair");
        }
        doc.entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    if (j.contains("name")) {
        try {
            doc.name = j.at("name").get<std::string>();
        } catch (const json::exception& e) {
            throw value_error(std::string("field 'name': ") + e.what());
        }
    }
    return doc;
}

json TensorDocument::to_json() const {
    json j;
    if (!name.empty()) j["name"] = name;
    j["shape"] = shape;
    j["split"] = split;
    j["layout"] = layout;
    json arr = json::array();
    for (const auto& [re, im] : entries) arr.push_back(json::array({re, im}));
    j["entries"] = std::move(arr);
    return j;
}

TensorDocument load_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw value_error("cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw value_error("'" + path.string() + "': " + e.what());
    }
    try {
        return TensorDocument::from_json(j);
    } catch (const value_error& e) {
        throw value_error("'" + path.string() + "': " + e.what());
    }
}

Tensor load_tensor(const std::filesystem::path& path) {
    try {
        return load_document(path).to_tensor();
    } catch (const shape_error& e) {
        throw value_error("'" + path.string() + "': " + e.what());
    }
}

void save_tensor(const Tensor& t, const std::filesystem::path& path, std::string name) {
    std::ofstream out(path);
    if (!out) throw value_error("cannot write '" + path.string() + "'");
    out << TensorDocument::from_tensor(t, std::move(name)).to_json().dump(2) << '\n';
    if (!out) throw value_error("write to '" + path.string() + "' failed");
}

json ReportDocument::to_json() const {
    json j;
    j["command"] = command;
    json in = json::object();
    for (const auto& [label, source] : inputs) in[label] = source;
    j["inputs"] = std::move(in);
    json sc = json::object();
    for (const auto& [label, value] : scalars) sc[label] = value;
    j["scalars"] = std::move(sc);
    json ct = json::object();
    for (const auto& [label, value] : counts) ct[label] = value;
    j["counts"] = std::move(ct);
    json conds = json::array();
    for (const ConditionEntry& entry : conditions.entries) {
        json row;
        row["name"] = entry.name;
        row["pass"] = entry.pass;
        row["residual"] = entry.residual;
        row["required"] = entry.required;
        if (!entry.note.empty()) row["note"] = entry.note;
        conds.push_back(std::move(row));
    }
    j["conditions"] = std::move(conds);
    json outs = json::object();
    for (const auto& [label, file] : outputs) outs[label] = file;
    j["outputs"] = std::move(outs);
    json tens = json::object();
    for (const auto& [label, doc] : tensors) tens[label] = doc.to_json();
    j["tensors"] = std::move(tens);
    return j;
}

void ReportDocument::to_text(std::ostream& out) const {
    out << "command: " << command << '\n';
    if (!inputs.empty()) {
        out << "inputs:\n";
        for (const auto& [label, source] : inputs) {
            out << "  " << label << ": " << source << '\n';
        }
    }
    if (!scalars.empty()) {
        out << "scalars:\n";
        const auto saved = out.flags();
        const auto saved_precision = out.precision();
        out << std::setprecision(10);
        for (const auto& [label, value] : scalars) {
            out << "  " << label << ": " << value << '\n';
        }
        out.flags(saved);
        out.precision(saved_precision);
    }
    if (!counts.empty()) {
        out << "counts:\n";
        for (const auto& [label, value] : counts) {
            out << "  " << label << ": " << value << '\n';
        }
    }
    if (!conditions.entries.empty()) {
        out << "conditions:\n";
        const auto saved = out.flags();
        const auto saved_precision = out.precision();
        out << std::setprecision(6);
        for (const ConditionEntry& entry : conditions.entries) {
            out << "  [" << (entry.pass ? "pass" : "FAIL") << "] " << entry.name;
            if (!entry.required) out << " (informational)";
            out << "  residual=" << entry.residual;
            if (!entry.note.empty()) out << "  (" << entry.note << ")";
            out << '\n';
        }
        out.flags(saved);
        out.precision(saved_precision);
    }
    if (!outputs.empty()) {
        out << "outputs:\n";
        for (const auto& [label, file] : outputs) {
            out << "  " << label << ": " << file << '\n';
        }
    }
    if (!tensors.empty()) {
        const auto saved = out.flags();
        const auto saved_precision = out.precision();
        out << std::setprecision(6);
        for (const auto& [label, doc] : tensors) {
            out << "tensor " << label << ": shape (";
            for (std::size_t i = 0; i < doc.shape.size(); ++i) {
                if (i == doc.split) out << "|";
                else if (i > 0) out << "x";
                out << doc.shape[i];
            }
            out << ")\n  entries:";
            for (const auto& [re, im] : doc.entries) {
                out << " (" << re;
                if (im != 0.0) out << (im < 0 ? "" : "+") << im << "i";
                out << ")";
            }
            out << '\n';
        }
        out.flags(saved);
        out.precision(saved_precision);
    }
}

}  // namespace teinv
