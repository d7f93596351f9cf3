#include "state_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "entrank/error.hpp"

namespace entrank::cli {

using nlohmann::json;

StateFile make_state_file(const BipartiteState& s, StateMetadata metadata) {
    return StateFile{kSchemaVersion, s.dims(), s.rho(), std::move(metadata)};
}

json to_json(const StateFile& f) {
    json j;
    j["schema_version"] = f.schema_version;
    j["dA"] = f.dims.a;
    j["dB"] = f.dims.b;
    json rows = json::array();
    for (std::size_t i = 0; i < f.matrix.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < f.matrix.cols(); ++k) row.push_back({f.matrix(i, k).real(), f.matrix(i, k).imag()});
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    json meta = json::object();
    if (f.metadata.label) meta["label"] = *f.metadata.label;
    if (f.metadata.seed) meta["seed"] = *f.metadata.seed;
    if (f.metadata.provenance) meta["provenance"] = *f.metadata.provenance;
    if (!meta.empty()) j["metadata"] = std::move(meta);
    return j;
}

namespace {

std::size_t positive_dim(const json& j, const char* key) {
    if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
        throw InputError(std::string("field '") + key + "' must be a positive integer");
    return v.get<std::size_t>();
}

}  // namespace

StateFile state_file_from_json(const json& j) {
    if (!j.is_object()) throw InputError("top level must be a JSON object");
    StateFile f;
    if (!j.contains("schema_version")) throw InputError("missing field 'schema_version'");
    if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion)
        throw InputError("field 'schema_version' must be " + std::to_string(kSchemaVersion));
    f.dims = Dims{positive_dim(j, "dA"), positive_dim(j, "dB")};
    const std::size_t n = f.dims.total();
    if (n > 4096) throw InputError("dA*dB exceeds 4096");

    if (!j.contains("matrix")) throw InputError("missing field 'matrix'");
    const json& rows = j["matrix"];
    if (!rows.is_array() || rows.size() != n)
        throw InputError("field 'matrix' must be an array of " + std::to_string(n) + " rows");
    f.matrix = ComplexMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = rows[i];
        const std::string where = "matrix[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != n)
            throw InputError("field '" + where + "' must be an array of " + std::to_string(n) + " entries");
        for (std::size_t k = 0; k < n; ++k) {
            const json& e = row[k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw InputError("field '" + where + "[" + std::to_string(k) + "]' must be a [real, imag] pair");
            f.matrix(i, k) = cplx{e[0].get<double>(), e[1].get<double>()};
        }
    }

    if (j.contains("metadata")) {
        const json& m = j["metadata"];
        if (!m.is_object()) throw InputError("field 'metadata' must be an object");
        if (m.contains("label")) {
            if (!m["label"].is_string()) throw InputError("field 'metadata.label' must be a string");
            f.metadata.label = m["label"].get<std::string>();
        }
        if (m.contains("seed")) {
            if (!m["seed"].is_number_unsigned()) throw InputError("field 'metadata.seed' must be a non-negative integer");
            f.metadata.seed = m["seed"].get<std::uint64_t>();
        }
        if (m.contains("provenance")) {
            if (!m["provenance"].is_string()) throw InputError("field 'metadata.provenance' must be a string");
            f.metadata.provenance = m["provenance"].get<std::string>();
        }
    }
    return f;
}

StateFile parse_state_file(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError("JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
    }
    return state_file_from_json(j);
}

std::string serialize(const StateFile& f) { return to_json(f).dump(2) + "\n"; }

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw InputError("write failed for '" + path.string() + "'");
}

StateFile load_state_file(const std::filesystem::path& path) {
    try {
        return parse_state_file(read_text(path));
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void save_state_file(const std::filesystem::path& path, const StateFile& f) { write_text(path, serialize(f)); }

BipartiteState to_state(const StateFile& f, double psd_tol) {
    try {
        return BipartiteState(f.dims, f.matrix, psd_tol);
    } catch (const Error& e) {
        throw InputError(std::string("field 'matrix' is not a valid density matrix: ") + e.what());
    }
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace entrank::cli
