#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "entrank/states.hpp"

namespace entrank {

struct EnsembleMember {
    double weight;
    PureState psi;
};

// Pure-state decomposition of a density matrix.
struct Ensemble {
    std::vector<EnsembleMember> members;
    BipartiteState realized_state;

    // sum_i p_i E(psi_i), bits.
    double average_entanglement() const;
    // max-norm distance between sum_i p_i |psi_i><psi_i| and realized_state.
    double reconstruction_error() const;
    double weight_sum() const;
};

// Members u_j = sum_i V_ji sqrt(lambda_i) e_i over the eigenpairs of rho
// (lambda_i above the rank cutoff); zero-weight members are dropped. V must
// be k x R with V^dagger V = 1_R (NotIsometry otherwise).
Ensemble ensemble_from_isometry(const BipartiteState& rho, const ComplexMatrix& v,
                                double rank_epsilon = kDefaultRankEpsilon);

struct EfOptions {
    std::size_t k = 0;  // 0 selects R^2
    std::size_t restarts = 20;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 10000;
    // A restart stops once the objective drops by less than this over one
    // sweep of kSweepIterations iterations.
    double sweep_tolerance = 1e-10;
    double initial_step = 0.1;  // radians, spectral norm of the first rotation
    double rank_epsilon = kDefaultRankEpsilon;
    // Extra k x R starting isometries tried before the seeded restarts.
    std::vector<ComplexMatrix> warm_starts;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

inline constexpr std::size_t kSweepIterations = 10;

struct EfResult {
    double value;  // bits; an upper bound on the entanglement of formation
    Ensemble best_ensemble;
    ComplexMatrix best_isometry;
    std::size_t k;
    std::size_t restarts;  // restarts actually run
    std::size_t best_restart;
    bool converged;        // the best restart met the sweep criterion
    std::vector<double> per_restart_values;
};

// Multi-restart descent over k x R isometries. Restart 0 starts from the
// eigen-ensemble; later restarts from random isometries seeded with
// derive_seed(seed, restart). Stops early once a restart reaches zero.
// Throws KTooSmall when k < rank(rho), BudgetExceeded past the deadline.
EfResult ef_minimize(const BipartiteState& rho, const EfOptions& options);
EfResult ef_minimize(const BipartiteState& rho, std::size_t k, std::size_t restarts, std::uint64_t seed);

// Two-qubit concurrence from the spin-flipped state.
double concurrence_2q(const BipartiteState& rho);
// Closed-form two-qubit entanglement of formation in bits. Throws
// DimensionNotTwoByTwo.
double ef_oracle_2q(const BipartiteState& rho);

// rho^{(x) n} with the parties regrouped as (A_1 ... A_n) | (B_1 ... B_n):
// local dimensions a^n and b^n, digits of each party ordered by copy.
BipartiteState tensor_power(const BipartiteState& rho, std::size_t n);

inline constexpr std::size_t kMaxExplorerDimension = 256;
inline constexpr std::size_t kDefaultKCap = 64;

struct TimeBudget {
    std::chrono::milliseconds limit{std::chrono::minutes(5)};
};

struct AdditivityOptions {
    std::size_t restarts = 20;
    std::uint64_t seed = 0;
    std::size_t k_cap = kDefaultKCap;
};

struct AdditivityRow {
    std::size_t n;
    std::size_t rank;
    std::size_t k;
    double ef_upper_bound;
    double per_copy;
};

struct AdditivityTable {
    std::vector<AdditivityRow> rows;
    std::size_t k_cap = kDefaultKCap;
    bool budget_exceeded = false;
    bool subadditivity_evidence = false;  // bound(n)/n < bound(1) - 1e-4 for some n
};

// Throws CapExceeded when (a*b)^n_max exceeds kMaxExplorerDimension. On
// budget exhaustion the completed rows are returned with budget_exceeded set.
AdditivityTable additivity_explore(const BipartiteState& rho, std::size_t n_max, TimeBudget budget,
                                   const AdditivityOptions& options = {});

}  // namespace entrank
