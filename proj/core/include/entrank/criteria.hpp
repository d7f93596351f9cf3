#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entrank/linalg.hpp"
#include "entrank/states.hpp"

namespace entrank {

enum class Verdict {
    Distillable,          // a sufficient condition for distillability fired
    Separable,            // proven separable (PPT on a support of size <= 6)
    SeparableConsistent,  // necessary condition for separability satisfied
    Violated,             // necessary condition violated; entangled but distillability not implied
    Inconclusive,
};

enum class Overall { Distillable, NotDistillableByTheseTests };

const char* to_string(Verdict v) noexcept;
const char* to_string(Overall o) noexcept;

struct Tolerances {
    double rank_epsilon = kDefaultRankEpsilon;
    double psd = kDefaultPsdTolerance;
};

struct PptResult {
    bool ppt = true;
    double min_eigenvalue = 0.0;
    std::size_t support_a = 0;  // marginal ranks; PPT is decisive when their product is <= 6
    std::size_t support_b = 0;
    Verdict verdict = Verdict::Inconclusive;
};

struct ReductionResult {
    double min_eigenvalue_a = 0.0;  // rho^A (x) 1 - rho
    double min_eigenvalue_b = 0.0;  // 1 (x) rho^B - rho
    bool violated = false;
    Party witness_side = Party::A;
    double witness_value = 0.0;
    CVector witness_vector;
    Verdict verdict = Verdict::SeparableConsistent;
};

struct FilterOutcome {
    BipartiteState filtered_state;
    double success_probability;
    double marginal_flatness;  // max deviation of the filtered marginal spectrum from 1/R on its range
    Party side;
    std::size_t marginal_rank;
};

struct RankCriterionResult {
    Verdict verdict = Verdict::Inconclusive;
    std::size_t rank = 0;
    std::size_t rank_a = 0;
    std::size_t rank_b = 0;
    std::optional<Party> filtered_side;
    std::optional<double> success_probability;
    std::optional<double> filtered_lambda_max;
    std::optional<double> witness_value;  // min eigenvalue of the reduction operator after filtering
    std::optional<double> bound;          // 1/R - lambda_max(filtered); <= 1/R - 1/r
    std::string diagnostic;
};

struct EntropyResult {
    double alpha = 0.0;
    double s_state = 0.0;
    double s_a = 0.0;
    double s_b = 0.0;
    bool violated = false;
    bool proven_case = true;  // alpha in {0, 1, 2, inf}
    Verdict verdict = Verdict::SeparableConsistent;
};

struct SupportResult {
    std::size_t rank = 0;
    std::size_t rank_a = 0;
    std::size_t rank_b = 0;
    bool confined = true;  // both marginal ranks <= rank
    Verdict verdict = Verdict::SeparableConsistent;
};

// Mixture (p |00><00| + |psi><psi|)/(1+p) of two qubits with the product
// component rotated to |00>.
struct TwoQubitMixtureResult {
    double p = 0.0;
    cplx a, b, c, d;           // aligned coefficients of psi
    ComplexMatrix rotation_a;  // local unitaries taking the product factors to |0>
    ComplexMatrix rotation_b;
    double det_pt = 0.0;             // det PT(p|00><00| + |psi><psi|), unnormalized
    double det_minor = 0.0;          // det of PT with first row and column removed
    double closed_form_term = 0.0;   // -p |d|^2 |ad - bc|^2
    double det_pt_pure = 0.0;        // det PT(|psi><psi|)
    double decomposition_residual = 0.0;  // |det_pt - (p det_minor + det_pt_pure)|
    double min_eigenvalue = 0.0;     // of PT of the normalized mixture
    bool psi_entangled = false;
    bool closed_form_used = false;   // false when |closed_form_term| < 1e-12 (direct test decides)
    bool direct_npt = false;
    bool closed_form_npt = false;
    bool agree = true;
    Verdict verdict = Verdict::Inconclusive;
};

struct CriterionReport {
    Dims dims;
    Tolerances tolerances;
    PptResult ppt;
    ReductionResult reduction;
    RankCriterionResult rank;
    std::vector<EntropyResult> entropy;  // alpha = 0, 1, 2, inf
    double participation_ratio = 0.0;
    SupportResult support;
    std::optional<TwoQubitMixtureResult> two_qubit;

    std::map<std::string, Verdict> verdicts;
    std::map<std::string, std::map<std::string, double>> witnesses;
    std::vector<std::string> notes;
    Overall overall = Overall::NotDistillableByTheseTests;

    std::size_t distillable_witness_count() const;
};

inline constexpr double kAlphaInfinity = std::numeric_limits<double>::infinity();

PptResult ppt_test(const BipartiteState& s, const Tolerances& tol = {});
ReductionResult reduction_test(const BipartiteState& s, const Tolerances& tol = {});

// Kraus filter K = sum_i sqrt(mu_min/mu_i) |mu_i><mu_i| on `side`, which
// flattens that marginal to 1_R/R. Throws SingularScaling when
// mu_min/mu_max < 1e-14.
FilterOutcome local_filter(const BipartiteState& s, Party side, const Tolerances& tol = {});

RankCriterionResult rank_criterion(const BipartiteState& s, const Tolerances& tol = {});

// Renyi entropy in bits. alpha = 0 uses the numerical rank, alpha = 1 the
// von Neumann limit, alpha = inf the min-entropy. Throws NegativeAlpha.
double renyi_entropy(std::span<const double> eigenvalues, double alpha, double rank_epsilon = kDefaultRankEpsilon);
double renyi_entropy(const ComplexMatrix& rho, double alpha, double rank_epsilon = kDefaultRankEpsilon);
double renyi_entropy(const BipartiteState& s, double alpha, double rank_epsilon = kDefaultRankEpsilon);

EntropyResult entropy_inequality_test(const BipartiteState& s, double alpha, const Tolerances& tol = {});

double participation_ratio(const BipartiteState& s);

SupportResult support_analysis(const BipartiteState& s, const Tolerances& tol = {});

// `product` defaults to |00>. Throws DimensionNotTwoByTwo, and
// InvalidState when `product` has Schmidt rank above one or p < 0.
TwoQubitMixtureResult two_qubit_mixture_test(double p, const PureState& psi);
TwoQubitMixtureResult two_qubit_mixture_test(double p, const PureState& psi, const PureState& product);

struct ProductPlusPure {
    double p;  // weight of the product vector relative to psi
    PureState product;
    PureState psi;
};

// Writes a rank-2 two-qubit state as (p |x><x| + |psi><psi|)/(1+p) with x a
// product vector of its range. Empty for other ranks or dimensions.
std::optional<ProductPlusPure> split_rank_two(const BipartiteState& s, const Tolerances& tol = {});

CriterionReport analyze(const BipartiteState& s, const Tolerances& tol = {});

}  // namespace entrank
