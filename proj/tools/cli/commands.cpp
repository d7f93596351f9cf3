#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "entrank/ef_optimizer.hpp"
#include "entrank/error.hpp"
#include "entrank/random.hpp"
#include "entrank/states.hpp"
#include "report.hpp"
#include "state_file.hpp"

namespace entrank::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, const std::string& context) {
    double x = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last) throw InputError("cannot parse '" + context + "' as a number");
    return x;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

Dims parse_dims(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) throw InputError("dimensions must look like MxN, got '" + text + "'");
    const double a = parse_real(text.substr(0, x), text);
    const double b = parse_real(text.substr(x + 1), text);
    if (a < 1 || b < 1 || a != std::floor(a) || b != std::floor(b))
        throw InputError("dimensions must be positive integers, got '" + text + "'");
    return Dims{static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

cplx parse_complex(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw InputError("empty complex number");
    const char last = s.back();
    if (last != 'i' && last != 'j') return {parse_real(s, s), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_of = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_real(t, s);
    };
    if (split == std::string::npos) return {0.0, imag_of(body)};
    return {parse_real(body.substr(0, split), s), imag_of(body.substr(split))};
}

CVector parse_complex_list(const std::string& text) {
    CVector out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) out.push_back(parse_complex(token));
    return out;
}

const char* to_string(TrialClass c) noexcept {
    switch (c) {
        case TrialClass::Distillable: return "distillable";
        case TrialClass::Separable: return "separable";
        case TrialClass::Candidate: return "candidate: passes all necessary conditions";
        case TrialClass::EntangledUndecided: return "entangled: distillability not shown";
    }
    return "unknown";
}

TrialClass classify(const CriterionReport& r) {
    if (r.overall == Overall::Distillable) return TrialClass::Distillable;
    bool passes = r.ppt.ppt && !r.reduction.violated && r.support.confined;
    for (const auto& e : r.entropy) passes = passes && !e.violated;
    if (!passes) return TrialClass::EntangledUndecided;
    return r.ppt.verdict == Verdict::Separable ? TrialClass::Separable : TrialClass::Candidate;
}

void Histogram::add(double x) {
    if (counts.empty()) return;
    const double pos = (x - low) / width;
    std::size_t bin = pos <= 0.0 ? 0 : static_cast<std::size_t>(pos);
    if (bin >= counts.size()) bin = counts.size() - 1;
    ++counts[bin];
}

namespace {

json histogram_json(const Histogram& h) {
    return json{{"low", h.low}, {"bin_width", h.width}, {"counts", h.counts}};
}

Histogram make_histogram(std::size_t rank) {
    Histogram h;
    const double high = static_cast<double>(std::max<std::size_t>(rank, 2));
    h.counts.assign(static_cast<std::size_t>(std::ceil((high - h.low) / h.width)), 0);
    return h;
}

std::string trial_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "survivor_%07zu", i);
    return buf;
}

}  // namespace

json SearchSummary::to_json() const {
    json survivors = json::array();
    for (std::size_t i = 0; i < survivor_trials.size(); ++i)
        survivors.push_back({{"trial", survivor_trials[i]},
                             {"seed", derive_seed(config.seed, survivor_trials[i])},
                             {"class", cli::to_string(survivor_classes[i])}});
    const double n = static_cast<double>(config.trials);
    json j{{"dims", {config.dims.a, config.dims.b}},
           {"rank", config.rank},
           {"trials", config.trials},
           {"seed", config.seed},
           {"counts",
            {{"distillable", distillable},
             {"separable", separable},
             {"candidates", candidates},
             {"entangled_undecided", entangled_undecided},
             {"ppt", ppt},
             {"npt", npt},
             {"npt_not_distillable", npt_not_distillable}}},
           {"pass_rates",
            {{"ppt", ppt / n},
             {"survivors", static_cast<double>(survivor_trials.size()) / n},
             {"candidates", candidates / n}}},
           {"survivors", survivors},
           {"participation_ratio",
            {{"all", histogram_json(participation_all)},
             {"ppt_only", histogram_json(participation_ppt)},
             {"min", participation_min},
             {"max", participation_max},
             {"ppt_mean", ppt > 0 ? json(participation_ppt_sum / static_cast<double>(ppt)) : json(nullptr)}}},
           {"labelling", "survivors are never labelled bound entangled; candidates only pass necessary conditions"}};
    if (injected_tiles) j["injected_tiles_fixture"] = cli::to_string(*injected_tiles);
    return j;
}

SearchSummary run_search(const SearchConfig& cfg) {
    if (cfg.dims.a < 1 || cfg.dims.b < 1) throw InputError("dimensions must be positive");
    if (cfg.dims.a > kMaxSearchLocalDim || cfg.dims.b > kMaxSearchLocalDim)
        throw Error(ErrorKind::CapExceeded, "search dimensions are limited to 4x4");
    if (cfg.trials < 1) throw InputError("trials must be at least 1");
    if (cfg.trials > kMaxSearchTrials) throw Error(ErrorKind::CapExceeded, "trials are limited to 10^7");
    if (cfg.rank < 1 || cfg.rank > cfg.dims.total())
        throw InputError("rank must lie in [1, " + std::to_string(cfg.dims.total()) + "]");
    if (cfg.inject_tiles && cfg.dims != Dims{3, 3}) throw InputError("--inject-tiles requires 3x3");
    if (cfg.out_dir) std::filesystem::create_directories(*cfg.out_dir);

    SearchSummary s;
    s.config = cfg;
    s.participation_all = make_histogram(cfg.rank);
    s.participation_ppt = make_histogram(cfg.rank);
    s.participation_min = std::numeric_limits<double>::infinity();
    s.participation_max = 0.0;

    for (std::size_t i = 0; i < cfg.trials; ++i) {
        const std::uint64_t seed = derive_seed(cfg.seed, i);
        const BipartiteState state = random_state(cfg.dims, cfg.rank, seed);
        const CriterionReport rep = analyze(state, cfg.tolerances);
        const TrialClass cls = classify(rep);

        s.participation_all.add(rep.participation_ratio);
        s.participation_min = std::min(s.participation_min, rep.participation_ratio);
        s.participation_max = std::max(s.participation_max, rep.participation_ratio);
        if (rep.ppt.ppt) {
            ++s.ppt;
            s.participation_ppt.add(rep.participation_ratio);
            s.participation_ppt_sum += rep.participation_ratio;
        } else {
            ++s.npt;
            if (rep.overall != Overall::Distillable) ++s.npt_not_distillable;
        }
        switch (cls) {
            case TrialClass::Distillable: ++s.distillable; break;
            case TrialClass::Separable: ++s.separable; break;
            case TrialClass::Candidate: ++s.candidates; break;
            case TrialClass::EntangledUndecided: ++s.entangled_undecided; break;
        }
        if (cls == TrialClass::Separable || cls == TrialClass::Candidate) {
            s.survivor_trials.push_back(i);
            s.survivor_classes.push_back(cls);
            if (cfg.out_dir) {
                StateMetadata meta{std::string(to_string(cls)), seed,
                                   "entrank search trial " + std::to_string(i)};
                const std::string base = trial_name(i);
                save_state_file(*cfg.out_dir / (base + ".state.json"), make_state_file(state, meta));
                json report = report_envelope("search", content_hash(serialize(make_state_file(state, meta))),
                                              cfg.tolerances);
                report["report"] = to_json(rep);
                report["class"] = to_string(cls);
                write_text(*cfg.out_dir / (base + ".report.json"), dump(report));
            }
        }
    }
    if (cfg.inject_tiles) s.injected_tiles = classify(analyze(tiles_fixture(), cfg.tolerances));

    if (cfg.out_dir) {
        write_text(*cfg.out_dir / "summary.json", dump(s.to_json()));
        write_text(*cfg.out_dir / "participation_histogram.json", dump(s.to_json()["participation_ratio"]));
    }
    return s;
}

namespace {

struct GlobalFlags {
    std::string json_path;
    std::uint64_t seed = 0;
    Tolerances tol;
};

void write_json_report(const GlobalFlags& g, const json& j) {
    if (!g.json_path.empty()) write_text(g.json_path, dump(j));
}

BipartiteState load_input(const std::string& path, const GlobalFlags& g, std::string& hash) {
    const std::string text = read_text(path);
    hash = content_hash(text);
    try {
        return to_state(parse_state_file(text), g.tol.psd);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

int cmd_analyze(const std::string& input, const GlobalFlags& g, std::ostream& out) {
    std::string hash;
    const BipartiteState s = load_input(input, g, hash);
    const CriterionReport rep = analyze(s, g.tol);
    print_report(out, rep);
    json j = report_envelope("analyze", hash, g.tol);
    j["report"] = to_json(rep);
    write_json_report(g, j);
    return kExitOk;
}

struct GenerateArgs {
    std::string kind;
    std::string out;
    std::string dims;
    std::size_t rank = 0;
    std::size_t terms = 0;
    double p = 0.0;
    std::string psi;
    std::string label;
};

int cmd_generate(const GenerateArgs& a, const GlobalFlags& g, std::ostream& out) {
    const std::optional<Dims> dims = a.dims.empty() ? std::nullopt : std::optional<Dims>(parse_dims(a.dims));
    StateMetadata meta;
    std::ostringstream prov;
    prov << "entrank generate " << a.kind;
    std::optional<BipartiteState> state;

    if (a.kind == "bell") {
        const Dims d = dims.value_or(Dims{2, 2});
        if (d.a != d.b) throw InputError("bell needs square dimensions");
        state = BipartiteState::pure(maximally_entangled(d.a));
        prov << " --dims " << d.a << "x" << d.b;
    } else if (a.kind == "product") {
        const Dims d = dims.value_or(Dims{2, 2});
        state = BipartiteState::pure(random_product_pure(d, g.seed));
        meta.seed = g.seed;
        prov << " --dims " << d.a << "x" << d.b << " --seed " << g.seed;
    } else if (a.kind == "tiles") {
        state = tiles_fixture();
    } else if (a.kind == "random") {
        const Dims d = dims.value_or(Dims{2, 2});
        const std::size_t rank = a.rank == 0 ? d.total() : a.rank;
        try {
            state = random_state(d, rank, g.seed);
        } catch (const Error& e) {
            throw InputError(e.what());
        }
        meta.seed = g.seed;
        prov << " --dims " << d.a << "x" << d.b << " --rank " << rank << " --seed " << g.seed;
    } else if (a.kind == "random-separable") {
        const Dims d = dims.value_or(Dims{2, 2});
        const std::size_t terms = a.terms == 0 ? d.total() : a.terms;
        state = random_separable(d, terms, g.seed);
        meta.seed = g.seed;
        prov << " --dims " << d.a << "x" << d.b << " --terms " << terms << " --seed " << g.seed;
    } else if (a.kind == "mixture") {
        if (a.psi.empty()) throw InputError("mixture needs --psi a,b,c,d");
        if (!(a.p >= 0.0)) throw InputError("mixture needs --p >= 0");
        CVector amps = parse_complex_list(a.psi);
        if (amps.size() != 4) throw InputError("--psi needs four amplitudes for |00>,|01>,|10>,|11>");
        PureState psi = [&] {
            try {
                return PureState::normalized(Dims{2, 2}, amps);
            } catch (const Error& e) {
                throw InputError(std::string("--psi: ") + e.what());
            }
        }();
        ComplexMatrix m = psi.projector();
        m(0, 0) += a.p;
        m *= 1.0 / (1.0 + a.p);
        state = BipartiteState::from_unnormalized(Dims{2, 2}, m);
        prov << " --p " << std::setprecision(17) << a.p << " --psi " << a.psi;
    } else {
        throw InputError("unknown kind '" + a.kind + "'");
    }
    meta.label = a.label.empty() ? a.kind : a.label;
    meta.provenance = prov.str();
    const StateFile f = make_state_file(*state, meta);
    save_state_file(a.out, f);
    out << "wrote " << a.kind << " state (" << f.dims.a << "x" << f.dims.b << ") to " << a.out << "\n";
    return kExitOk;
}

struct EfArgs {
    std::string input;
    std::size_t k = 0;
    std::size_t restarts = 20;
    std::size_t tensor_n = 1;
    std::size_t k_cap = kDefaultKCap;
    double budget_seconds = 300.0;
};

inline constexpr std::size_t kMaxEnsembleSize = 4096;

int cmd_ef(const EfArgs& a, const GlobalFlags& g, std::ostream& out) {
    std::string hash;
    const BipartiteState s = load_input(a.input, g, hash);
    json j = report_envelope("ef", hash, g.tol);
    j["seed"] = g.seed;
    if (a.tensor_n > 1) {
        const TimeBudget budget{std::chrono::milliseconds(static_cast<long long>(a.budget_seconds * 1000.0))};
        const AdditivityTable t = additivity_explore(s, a.tensor_n, budget, {a.restarts, g.seed, a.k_cap});
        print_additivity(out, t);
        j["additivity"] = to_json(t);
        write_json_report(g, j);
        return kExitOk;
    }
    if (s.dims().total() > kMaxExplorerDimension)
        throw Error(ErrorKind::CapExceeded, "state dimension exceeds " + std::to_string(kMaxExplorerDimension));
    if (a.k > kMaxEnsembleSize)
        throw Error(ErrorKind::CapExceeded, "k above " + std::to_string(kMaxEnsembleSize) +
                                                "; ensembles grow like r^2 per copy (r^(2n) for n copies)");
    EfOptions opt;
    opt.k = a.k;
    opt.restarts = a.restarts;
    opt.seed = g.seed;
    opt.rank_epsilon = g.tol.rank_epsilon;
    const EfResult r = ef_minimize(s, opt);
    std::optional<double> oracle;
    if (s.dims() == Dims{2, 2}) oracle = ef_oracle_2q(s);
    print_ef(out, r, oracle);
    j["ef"] = to_json(r);
    if (oracle) {
        j["oracle_2q"] = *oracle;
        j["oracle_difference"] = r.value - *oracle;
    }
    write_json_report(g, j);
    return kExitOk;
}

struct SearchArgs {
    std::string dims;
    std::size_t rank = 1;
    std::size_t trials = 1000;
    std::string out;
    bool inject_tiles = false;
};

int cmd_search(const SearchArgs& a, const GlobalFlags& g, std::ostream& out) {
    SearchConfig cfg;
    cfg.dims = parse_dims(a.dims);
    cfg.rank = a.rank;
    cfg.trials = a.trials;
    cfg.seed = g.seed;
    cfg.tolerances = g.tol;
    cfg.inject_tiles = a.inject_tiles;
    if (!a.out.empty()) cfg.out_dir = a.out;
    const SearchSummary s = run_search(cfg);
    out << "search " << cfg.dims.a << "x" << cfg.dims.b << " rank " << cfg.rank << ", " << cfg.trials
        << " trials, seed " << cfg.seed << "\n";
    out << "  distillable " << s.distillable << ", separable " << s.separable << ", candidates " << s.candidates
        << ", entangled (distillability not shown) " << s.entangled_undecided << "\n";
    out << "  PPT " << s.ppt << ", NPT " << s.npt << "\n";
    out << "  participation ratio range [" << std::setprecision(6) << s.participation_min << ", "
        << s.participation_max << "]\n";
    if (s.injected_tiles) out << "  injected Tiles fixture: " << to_string(*s.injected_tiles) << "\n";
    out << "  candidates pass necessary conditions only and are not certified bound entangled\n";
    json j = report_envelope("search", content_hash(dump(s.to_json())), g.tol);
    j["summary"] = s.to_json();
    write_json_report(g, j);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"entrank: distillability and separability criteria for bipartite mixed states"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--json", g.json_path, "Write the machine-readable report to PATH");
    app.add_option("--seed", g.seed, "Master seed for all randomness");
    app.add_option("--epsilon-rank", g.tol.rank_epsilon, "Relative eigenvalue cutoff for ranks")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-psd", g.tol.psd, "Positivity tolerance")->check(CLI::NonNegativeNumber);

    std::string analyze_input;
    auto* analyze_cmd = app.add_subcommand("analyze", "Run every criterion on a state file");
    analyze_cmd->add_option("input", analyze_input, "StateFile path")->required();

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Write a fixture or random state file");
    gen_cmd->add_option("kind", gen.kind, "bell | product | tiles | random | random-separable | mixture")
        ->required()
        ->check(CLI::IsMember({"bell", "product", "tiles", "random", "random-separable", "mixture"}));
    gen_cmd->add_option("--out", gen.out, "Output StateFile path")->required();
    gen_cmd->add_option("--dims", gen.dims, "Local dimensions MxN");
    gen_cmd->add_option("--rank", gen.rank, "Rank for random states (default full)");
    gen_cmd->add_option("--terms", gen.terms, "Product terms for random-separable (default dA*dB)");
    gen_cmd->add_option("--p", gen.p, "Weight of |00><00| in the mixture family");
    gen_cmd->add_option("--psi", gen.psi, "Amplitudes a,b,c,d of the mixed-in pure state");
    gen_cmd->add_option("--label", gen.label, "Metadata label");

    EfArgs ef;
    auto* ef_cmd = app.add_subcommand("ef", "Upper-bound the entanglement of formation");
    ef_cmd->add_option("input", ef.input, "StateFile path")->required();
    ef_cmd->add_option("--k", ef.k, "Ensemble size (default rank^2)");
    ef_cmd->add_option("--restarts", ef.restarts, "Descent restarts")->check(CLI::PositiveNumber);
    ef_cmd->add_option("--tensor-n", ef.tensor_n, "Explore additivity up to n copies")->check(CLI::PositiveNumber);
    ef_cmd->add_option("--k-cap", ef.k_cap, "Ensemble size cap for n-copy runs")->check(CLI::PositiveNumber);
    ef_cmd->add_option("--budget-seconds", ef.budget_seconds, "Time budget for n-copy runs")
        ->check(CLI::PositiveNumber);

    SearchArgs search;
    auto* search_cmd = app.add_subcommand("search", "Screen random states for low-rank bound entanglement candidates");
    search_cmd->add_option("--dims", search.dims, "Local dimensions MxN (at most 4x4)")->required();
    search_cmd->add_option("--rank", search.rank, "Rank of the random states")->required();
    search_cmd->add_option("--trials", search.trials, "Number of random states");
    search_cmd->add_option("--out", search.out, "Directory for survivors and the summary");
    search_cmd->add_flag("--inject-tiles", search.inject_tiles, "Also run the Tiles fixture through the filter");

    for (auto* sub : {analyze_cmd, gen_cmd, ef_cmd, search_cmd}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(analyze_input, g, out);
        if (gen_cmd->parsed()) return cmd_generate(gen, g, out);
        if (ef_cmd->parsed()) return cmd_ef(ef, g, out);
        if (search_cmd->parsed()) return cmd_search(search, g, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::CapExceeded ? kExitCap : kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"entrank"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace entrank::cli
