#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrank/criteria.hpp"

namespace entrank::cli {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitCap = 3 };

// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "3x3" -> {3, 3}; throws InputError.
Dims parse_dims(const std::string& text);
// "0.6", "-0.2+0.1i", "0.5i"; throws InputError.
cplx parse_complex(const std::string& text);
CVector parse_complex_list(const std::string& text);

enum class TrialClass {
    Distillable,          // some sufficient test fired
    Separable,            // PPT on a support where PPT is decisive
    Candidate,            // passes every necessary condition; nothing certified
    EntangledUndecided,   // a necessary separability condition failed, distillability not shown
};

const char* to_string(TrialClass c) noexcept;
TrialClass classify(const CriterionReport& r);

struct SearchConfig {
    Dims dims;
    std::size_t rank = 1;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    Tolerances tolerances;
    std::optional<std::filesystem::path> out_dir;
    bool inject_tiles = false;
};

struct Histogram {
    double low = 1.0;
    double width = 0.25;
    std::vector<std::size_t> counts;

    void add(double x);
};

inline constexpr std::size_t kMaxSearchTrials = 10'000'000;
inline constexpr std::size_t kMaxSearchLocalDim = 4;

struct SearchSummary {
    SearchConfig config;
    std::size_t distillable = 0;
    std::size_t separable = 0;
    std::size_t candidates = 0;
    std::size_t entangled_undecided = 0;
    std::size_t ppt = 0;
    std::size_t npt = 0;
    std::size_t npt_not_distillable = 0;
    std::vector<std::size_t> survivor_trials;  // trial indices passing every necessary condition
    std::vector<TrialClass> survivor_classes;
    Histogram participation_all;
    Histogram participation_ppt;
    double participation_min = 0.0;
    double participation_max = 0.0;
    double participation_ppt_sum = 0.0;
    std::optional<TrialClass> injected_tiles;

    nlohmann::json to_json() const;
};

// Trial i analyzes random_state(dims, rank, derive_seed(seed, i)).
// Writes survivors, summary.json and participation_histogram.json when
// out_dir is set. Throws CapExceeded or InputError for bad configs.
SearchSummary run_search(const SearchConfig& config);

}  // namespace entrank::cli
