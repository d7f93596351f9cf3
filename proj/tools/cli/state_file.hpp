#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "entrank/states.hpp"

namespace entrank::cli {

inline constexpr int kSchemaVersion = 1;

// Bad user input (parse errors, schema violations, invalid states). The
// message names the line or field at fault; the CLI maps it to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StateMetadata {
    std::optional<std::string> label;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> provenance;
};

// On-disk state: UTF-8 JSON with schema_version, dA, dB, a row-major matrix
// of [real, imag] pairs (A-major composite index) and optional metadata.
struct StateFile {
    int schema_version = kSchemaVersion;
    Dims dims;
    ComplexMatrix matrix;
    StateMetadata metadata;
};

StateFile make_state_file(const BipartiteState& s, StateMetadata metadata = {});

nlohmann::json to_json(const StateFile& f);
// Throws InputError naming the offending field.
StateFile state_file_from_json(const nlohmann::json& j);
// Throws InputError with line and column for syntax errors.
StateFile parse_state_file(const std::string& text);

std::string serialize(const StateFile& f);
StateFile load_state_file(const std::filesystem::path& path);
void save_state_file(const std::filesystem::path& path, const StateFile& f);

// Validates the matrix as a density matrix; InputError on failure.
BipartiteState to_state(const StateFile& f, double psd_tol = kDefaultPsdTolerance);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// FNV-1a 64-bit, lowercase hex.
std::string content_hash(const std::string& bytes);

}  // namespace entrank::cli
