// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/report.hpp"
#include "cli/state_file.hpp"
#include "entrank/criteria.hpp"
#include "entrank/ef_optimizer.hpp"
#include "support.hpp"

using namespace entrank;
using namespace entrank::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;
    std::string first_failure;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) first_failure = what;
        ok = ok && cond;
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    const double t = seconds_since(t0);
    if (time_limit_s > 0) c.require(t < time_limit_s, "runtime " + std::to_string(t) + " s over limit");
    if (!c.ok) ++failures;
    std::printf("%s [%2d] %s: %s(%.1f s", c.ok ? "PASS" : "FAIL", id, name.c_str(), c.detail.str().c_str(), t);
    if (!c.ok) std::printf(", first failure: %s", c.first_failure.c_str());
    if (time_limit_s > 0) std::printf(", limit %.0f s", time_limit_s);
    std::printf(")\n");
    std::fflush(stdout);
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("entrank_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

BipartiteState bell_pm_mixture() {
    const double r = 1 / std::sqrt(2.0);
    const std::vector<WeightedPure> c{{0.5, two_qubit(r, 0, 0, r)}, {0.5, two_qubit(r, 0, 0, -r)}};
    return mix(c);
}

std::string hash_tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = cli::content_hash(cli::read_text(e.path()));
    std::string all;
    for (const auto& [name, h] : files) all += name + ":" + h + "\n";
    return cli::content_hash(all) + " over " + std::to_string(files.size()) + " files";
}

}  // namespace

int main() {
    std::printf("entrank acceptance run\n");

    criterion(1, "rank below max marginal rank: filter then reduction, witness <= 1/R - 1/r + 1e-8, 200 states",
              30, [](Check& c) {
                  std::size_t tested = 0, per_dims[5][5] = {};
                  double worst_margin = -1e300;
                  for (std::uint64_t seed = 0; tested < 200; ++seed) {
                      SplitMix64 g(derive_seed(1, seed));
                      const Dims d{2 + g() % 3, 2 + g() % 3};
                      const std::size_t r = 1 + g() % (std::max(d.a, d.b) - 1);
                      const BipartiteState s = random_state(d, r, derive_seed(2, seed));
                      const RankCriterionResult res = rank_criterion(s);
                      const std::size_t big_r = std::max(res.rank_a, res.rank_b);
                      if (!(res.rank < big_r)) continue;
                      ++tested;
                      ++per_dims[d.a][d.b];
                      const double bound = 1.0 / big_r - 1.0 / static_cast<double>(res.rank) + 1e-8;
                      c.require(res.verdict == Verdict::Distillable, "verdict for seed " + std::to_string(seed));
                      c.require(res.witness_value.has_value(), "witness missing for seed " + std::to_string(seed));
                      if (res.witness_value) {
                          c.require(*res.witness_value <= bound, "bound for seed " + std::to_string(seed));
                          worst_margin = std::max(worst_margin, *res.witness_value - bound);
                      }
                  }
                  std::size_t dims_covered = 0;
                  for (auto& row : per_dims)
                      for (std::size_t n : row) dims_covered += n > 0;
                  c.require(dims_covered == 9, "not every dimension pair in 2x2..4x4 was sampled");
                  c.detail << tested << " states over " << dims_covered
                           << " dimension pairs, max(witness - bound) = " << worst_margin << " ";
              });

    criterion(2, "rank-two sweep: 1e5 states each in 2x2, 2x3, 3x3, zero candidates, NPT in <= 2x3 distillable", 300,
              [](Check& c) {
                  for (const Dims d : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
                      cli::SearchConfig cfg;
                      cfg.dims = d;
                      cfg.rank = 2;
                      cfg.trials = 100000;
                      cfg.seed = 2;
                      cfg.out_dir = scratch("rank2_" + std::to_string(d.a) + "x" + std::to_string(d.b));
                      const cli::SearchSummary s = cli::run_search(cfg);
                      const std::string tag = std::to_string(d.a) + "x" + std::to_string(d.b);
                      c.require(s.candidates == 0, tag + " produced candidates");
                      if (d.a * d.b <= 6) {
                          c.require(s.npt_not_distillable == 0, tag + " has NPT states not flagged distillable");
                          c.require(s.entangled_undecided == 0, tag + " has undecided entangled states");
                          for (auto cls : s.survivor_classes)
                              c.require(cls == cli::TrialClass::Separable, tag + " survivor without separable verdict");
                      }
                      c.detail << tag << ": distillable " << s.distillable << ", separable " << s.separable
                               << ", candidates " << s.candidates << "; ";
                      fs::remove_all(*cfg.out_dir);
                  }
              });

    criterion(3, "product+pure two-qubit mixtures: 500 draws distillable, determinant identity and closed form within 1e-10",
              10, [](Check& c) {
                  double worst_identity = 0, worst_closed = 0, worst_direct = 0;
                  std::size_t drawn = 0;
                  for (std::uint64_t seed = 0; drawn < 500; ++seed) {
                      Random rng(derive_seed(3, seed));
                      const double p = 5.0 * rng.uniform();
                      const PureState psi = random_pure({2, 2}, derive_seed(4, seed));
                      const auto& v = psi.amplitudes();
                      const cplx q = v[0] * v[3] - v[1] * v[2];
                      if (std::abs(q) < 1e-6) continue;
                      ++drawn;
                      const TwoQubitMixtureResult r = two_qubit_mixture_test(p, psi);
                      c.require(r.verdict == Verdict::Distillable, "verdict at draw " + std::to_string(seed));
                      c.require(r.agree, "closed form and direct PT disagree at draw " + std::to_string(seed));

                      // Independent evaluation of every term.
                      ComplexMatrix pure = psi.projector();
                      ComplexMatrix m = pure;
                      m(0, 0) += p;
                      const ComplexMatrix pt = oracle_partial_transpose(m, 2, 2);
                      const double det = oracle_determinant(pt).real();
                      Eigen::Matrix3cd minor = to_eigen(pt).bottomRightCorner(3, 3);
                      const double det_minor = minor.determinant().real();
                      const double det_pure = oracle_determinant(oracle_partial_transpose(pure, 2, 2)).real();
                      const double closed = -p * std::norm(v[3]) * std::norm(q);
                      const double scale = std::max({std::abs(det), std::abs(p * det_minor), std::abs(det_pure)});
                      const double id_err = std::abs(det - (p * det_minor + det_pure)) / scale;
                      const double cf_err = std::abs(p * det_minor - closed) / std::max(std::abs(closed), 1e-300);
                      const double lib_err = std::max(std::abs(r.det_pt - det) / scale,
                                                      std::abs(r.closed_form_term - closed) / std::max(std::abs(closed), 1e-300));
                      worst_identity = std::max(worst_identity, id_err);
                      worst_closed = std::max(worst_closed, cf_err);
                      worst_direct = std::max(worst_direct, lib_err);
                      c.require(id_err <= 1e-10, "determinant identity at draw " + std::to_string(seed));
                      c.require(cf_err <= 1e-10, "closed-form term at draw " + std::to_string(seed));
                      c.require(lib_err <= 1e-10, "library terms differ from oracle at draw " + std::to_string(seed));
                      c.require(oracle_min_eigenvalue(pt) < 0, "mixture not NPT at draw " + std::to_string(seed));
                  }
                  c.detail << drawn << " draws, max relative errors: identity " << worst_identity << ", closed form "
                           << worst_closed << ", library vs oracle " << worst_direct << " ";
              });

    criterion(4, "equal mixture of (|00> +/- |11>)/sqrt2: PPT, separable verdict, E_f <= 1e-4", 0, [](Check& c) {
        const BipartiteState s = bell_pm_mixture();
        const PptResult p = ppt_test(s);
        const EfResult ef = ef_minimize(s, 0, 20, 4);
        c.require(p.ppt, "not PPT");
        c.require(p.verdict == Verdict::Separable, "verdict is not Separable");
        c.require(ef.value <= 1e-4, "E_f upper bound above 1e-4");
        c.detail << "min PT eigenvalue " << p.min_eigenvalue << ", verdict " << to_string(p.verdict) << ", E_f <= "
                 << ef.value << " ";
    });

    criterion(5, "Tiles fixture: rank 4, marginal ranks 3 and 3, PPT, reduction and entropy tests satisfied", 0,
              [](Check& c) {
                  const CriterionReport r = analyze(tiles_fixture());
                  c.require(r.rank.rank == 4, "rank");
                  c.require(r.rank.rank_a == 3 && r.rank.rank_b == 3, "marginal ranks");
                  c.require(r.ppt.ppt, "not PPT");
                  c.require(!r.reduction.violated, "reduction violated");
                  c.require(r.entropy.size() == 4, "entropy alphas");
                  for (const auto& e : r.entropy) c.require(!e.violated, "entropy inequality violated");
                  c.require(r.overall == Overall::NotDistillableByTheseTests, "overall verdict");
                  c.detail << "rank " << r.rank.rank << ", marginals " << r.rank.rank_a << "," << r.rank.rank_b
                           << ", PT min eigenvalue " << r.ppt.min_eigenvalue << ", overall " << to_string(r.overall)
                           << " ";
              });

    criterion(6, "entropy inequalities on 500 separable states (alpha 0, 1, 2, inf, slack 1e-9); Bell violates alpha=0 by 1 bit",
              0, [](Check& c) {
                  double worst = -1e300;
                  for (std::uint64_t seed = 0; seed < 500; ++seed) {
                      SplitMix64 g(derive_seed(6, seed));
                      const Dims d{1 + g() % 3, 1 + g() % 3};
                      const std::size_t terms = 1 + g() % (2 * d.total());
                      const BipartiteState s = random_separable(d, terms, derive_seed(7, seed));
                      for (double alpha : {0.0, 1.0, 2.0, kAlphaInfinity}) {
                          const double sj = oracle_renyi(s.rho(), alpha);
                          const double sa = oracle_renyi(s.marginal(Party::A), alpha);
                          const double sb = oracle_renyi(s.marginal(Party::B), alpha);
                          const double gap = std::max(sa, sb) - sj;
                          worst = std::max(worst, gap);
                          c.require(gap <= 1e-9, "oracle inequality fails at seed " + std::to_string(seed));
                          const EntropyResult e = entropy_inequality_test(s, alpha);
                          c.require(!e.violated, "library flags violation at seed " + std::to_string(seed));
                          c.require(std::abs(e.s_state - sj) <= 1e-9, "library entropy differs from oracle");
                      }
                  }
                  const EntropyResult b = entropy_inequality_test(BipartiteState::pure(bell()), 0.0);
                  const double margin = std::max(b.s_a, b.s_b) - b.s_state;
                  c.require(b.violated && std::abs(margin - 1.0) <= 1e-12, "Bell alpha=0 margin");
                  c.detail << "max(S(marginal) - S(state)) = " << worst << ", Bell margin " << margin << " bit ";
              });

    criterion(7, "E_f vs two-qubit closed form: 50 states per rank 1-4 within 1e-3 (k=4, 20 restarts); Bell 1 +/- 1e-6",
              120, [](Check& c) {
                  double worst = 0, worst_oracle = 0;
                  for (std::size_t rank = 1; rank <= 4; ++rank) {
                      for (std::uint64_t i = 0; i < 50; ++i) {
                          const BipartiteState s = random_state({2, 2}, rank, derive_seed(70 + rank, i));
                          const double ef = ef_minimize(s, 4, 20, derive_seed(8, i)).value;
                          const double lib = ef_oracle_2q(s);
                          worst = std::max(worst, std::abs(ef - lib));
                          worst_oracle = std::max(worst_oracle, std::abs(lib - oracle_ef_2q(s.rho())));
                          c.require(std::abs(ef - lib) <= 1e-3, "rank " + std::to_string(rank) + " state " +
                                                                   std::to_string(i));
                      }
                  }
                  c.require(worst_oracle <= 1e-6, "closed form disagrees with the independent oracle");
                  const double bell_value = ef_minimize(BipartiteState::pure(bell()), 4, 20, 0).value;
                  c.require(std::abs(bell_value - 1.0) <= 1e-6, "Bell value");
                  c.detail << "max |E_f - closed form| = " << worst << ", closed form vs independent oracle "
                           << worst_oracle << ", Bell " << bell_value << " ";
              });

    criterion(8, "additivity explorer: Phi+ per-copy 1 +/- 1e-6 for n <= 3, separable fixtures 0 +/- 1e-4", 0,
              [](Check& c) {
                  const AdditivityTable b = additivity_explore(BipartiteState::pure(bell()), 3, {});
                  c.require(b.rows.size() == 3, "Phi+ table incomplete");
                  for (const auto& row : b.rows)
                      c.require(std::abs(row.per_copy - 1.0) <= 1e-6, "Phi+ n=" + std::to_string(row.n));
                  c.detail << "Phi+ per-copy";
                  for (const auto& row : b.rows) c.detail << " " << row.per_copy;
                  const std::vector<std::pair<std::string, BipartiteState>> fixtures{
                      {"Bell +/- mixture", bell_pm_mixture()},
                      {"random separable 2x2", random_separable({2, 2}, 2, 8)},
                      {"random separable 2x3", random_separable({2, 3}, 2, 9)}};
                  for (const auto& [name, s] : fixtures) {
                      const AdditivityTable t = additivity_explore(s, 2, {});
                      c.require(t.rows.size() == 2 && !t.budget_exceeded, name + " table incomplete");
                      double worst = 0;
                      for (const auto& row : t.rows) worst = std::max(worst, std::abs(row.per_copy));
                      c.require(worst <= 1e-4, name);
                      c.detail << "; " << name << " max per-copy " << worst;
                  }
                  c.detail << " ";
              });

    criterion(9, "participation ratio, 1e4 rank-8 states in 2x4: 1 <= R <= 8 and histogram emitted", 0, [](Check& c) {
        cli::SearchConfig cfg;
        cfg.dims = {2, 4};
        cfg.rank = 8;
        cfg.trials = 10000;
        cfg.seed = 9;
        cfg.out_dir = scratch("participation");
        const cli::SearchSummary s = cli::run_search(cfg);
        c.require(s.participation_min >= 1.0 - 1e-12, "R below 1");
        c.require(s.participation_max <= 8.0 + 1e-12, "R above rank");
        const fs::path hist = *cfg.out_dir / "participation_histogram.json";
        c.require(fs::exists(hist), "histogram file missing");
        if (fs::exists(hist)) {
            const auto j = nlohmann::json::parse(cli::read_text(hist));
            std::size_t total = 0;
            for (std::size_t n : j["all"]["counts"].get<std::vector<std::size_t>>()) total += n;
            c.require(total == cfg.trials, "histogram counts do not sum to the trial count");
        }
        c.detail << "R range [" << s.participation_min << ", " << s.participation_max << "], PPT " << s.ppt << " of "
                 << cfg.trials;
        if (s.ppt > 0) c.detail << ", PPT mean R " << s.participation_ppt_sum / static_cast<double>(s.ppt);
        c.detail << " (reported only) ";
        fs::remove_all(*cfg.out_dir);
    });

    criterion(10, "determinism: every CLI command twice with fixed seeds, identical output hashes", 0, [](Check& c) {
        auto pipeline = [](const fs::path& dir) {
            std::ostringstream log;
            auto call = [&](std::vector<std::string> args) {
                std::ostringstream out, err;
                const int code = cli::run(args, out, err);
                log << code << "\n" << out.str() << err.str();
            };
            const std::string d = dir.string() + "/";
            call({"generate", "bell", "--out", d + "bell.json"});
            call({"generate", "tiles", "--out", d + "tiles.json"});
            call({"--seed", "5", "generate", "product", "--dims", "3x2", "--out", d + "prod.json"});
            call({"--seed", "7", "generate", "random", "--dims", "2x4", "--rank", "5", "--out", d + "rand.json"});
            call({"--seed", "3", "generate", "random-separable", "--dims", "3x3", "--terms", "4", "--out", d + "sep.json"});
            call({"generate", "mixture", "--p", "0.5", "--psi", "0.6,0.1i,0,0.8", "--out", d + "mix.json"});
            for (const char* f : {"bell", "tiles", "prod", "rand", "sep", "mix"})
                call({"--json", d + f + ".analyze.json", "analyze", d + f + ".json"});
            call({"--seed", "11", "--json", d + "rand.ef.json", "ef", d + "rand.json", "--restarts", "4"});
            call({"--seed", "11", "--json", d + "mix.ef.json", "ef", d + "mix.json"});
            call({"--seed", "11", "--json", d + "mix.tensor.json", "ef", d + "mix.json", "--tensor-n", "2", "--restarts",
                  "3"});
            call({"--seed", "13", "--json", d + "search.json", "search", "--dims", "3x3", "--rank", "4", "--trials",
                  "300", "--out", d + "search", "--inject-tiles"});
            cli::write_text(dir / "stdout.log", log.str());
        };
        const fs::path a = scratch("det_a"), b = scratch("det_b");
        pipeline(a);
        pipeline(b);
        // Paths differ between the runs only through the directory name.
        auto normalize = [](const fs::path& dir) {
            for (const auto& e : fs::recursive_directory_iterator(dir)) {
                if (!e.is_regular_file()) continue;
                std::string t = cli::read_text(e.path());
                const std::string needle = dir.string();
                for (std::size_t pos; (pos = t.find(needle)) != std::string::npos;) t.replace(pos, needle.size(), "DIR");
                cli::write_text(e.path(), t);
            }
        };
        normalize(a);
        normalize(b);
        const std::string ha = hash_tree(a), hb = hash_tree(b);
        c.require(ha == hb, "run hashes differ");

        // Library-level reproducibility for the randomized paths.
        auto library = [] {
            std::ostringstream os;
            for (std::uint64_t i = 0; i < 40; ++i) {
                const BipartiteState s = random_state({3, 3}, 1 + i % 9, i);
                os << cli::to_json(analyze(s)).dump();
            }
            os << cli::to_json(ef_minimize(random_state({2, 3}, 3, 1), 0, 5, 2)).dump();
            return cli::content_hash(os.str());
        };
        const std::string la = library(), lb = library();
        c.require(la == lb, "library hashes differ");
        c.detail << "CLI " << ha << " (both runs), library " << la << " ";
        fs::remove_all(a);
        fs::remove_all(b);
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
