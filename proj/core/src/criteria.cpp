#include "entrank/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrank/error.hpp"

namespace entrank {

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Distillable: return "Distillable";
        case Verdict::Separable: return "Separable";
        case Verdict::SeparableConsistent: return "SeparableConsistent";
        case Verdict::Violated: return "Violated";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

const char* to_string(Overall o) noexcept {
    return o == Overall::Distillable ? "Distillable" : "NotDistillableByTheseTests";
}

std::size_t CriterionReport::distillable_witness_count() const {
    return static_cast<std::size_t>(
        std::count_if(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second == Verdict::Distillable; }));
}

namespace {

// Largest local support on which PPT is equivalent to separability.
constexpr std::size_t kPptDecisiveSupport = 6;
// Spectrum of the filtered state counts as flat below this excess over 1/r.
constexpr double kFlatSpectrumTolerance = 1e-9;
constexpr double kSingularScaling = 1e-14;

struct Spectra {
    ComplexMatrix rho_a;
    ComplexMatrix rho_b;
    EigenDecomposition state;
    EigenDecomposition a;
    EigenDecomposition b;
    std::size_t rank = 0;
    std::size_t rank_a = 0;
    std::size_t rank_b = 0;
};

Spectra spectra_of(const BipartiteState& s, const Tolerances& tol) {
    Spectra sp{s.marginal(Party::A), s.marginal(Party::B), hermitian_eig(s.rho()), {}, {}};
    sp.a = hermitian_eig(sp.rho_a);
    sp.b = hermitian_eig(sp.rho_b);
    sp.rank = numerical_rank(sp.state.values, tol.rank_epsilon);
    sp.rank_a = numerical_rank(sp.a.values, tol.rank_epsilon);
    sp.rank_b = numerical_rank(sp.b.values, tol.rank_epsilon);
    return sp;
}

struct SideOperator {
    EigenDecomposition eig;
    bool negative;
};

// rho^A (x) 1 - rho for side A, 1 (x) rho^B - rho for side B.
SideOperator reduction_operator(const BipartiteState& s, const ComplexMatrix& marginal, Party side, double psd_tol) {
    const Dims d = s.dims();
    const ComplexMatrix lifted = side == Party::A ? tensor(marginal, ComplexMatrix::identity(d.b))
                                                  : tensor(ComplexMatrix::identity(d.a), marginal);
    EigenDecomposition eig = hermitian_eig((lifted - s.rho()).hermitian_part());
    const bool negative = eig.min() < psd_threshold(eig.max(), psd_tol);
    return {std::move(eig), negative};
}

ReductionResult reduction_impl(const BipartiteState& s, const ComplexMatrix& rho_a, const ComplexMatrix& rho_b,
                               const Tolerances& tol) {
    const SideOperator op_a = reduction_operator(s, rho_a, Party::A, tol.psd);
    const SideOperator op_b = reduction_operator(s, rho_b, Party::B, tol.psd);
    ReductionResult r;
    r.min_eigenvalue_a = op_a.eig.min();
    r.min_eigenvalue_b = op_b.eig.min();
    r.violated = op_a.negative || op_b.negative;
    const bool use_a = r.min_eigenvalue_a <= r.min_eigenvalue_b;
    const SideOperator& w = use_a ? op_a : op_b;
    r.witness_side = use_a ? Party::A : Party::B;
    r.witness_value = w.eig.min();
    r.witness_vector = w.eig.vector(w.eig.values.size() - 1);
    r.verdict = r.violated ? Verdict::Distillable : Verdict::SeparableConsistent;
    return r;
}

PptResult ppt_impl(const BipartiteState& s, const Spectra& sp, const Tolerances& tol) {
    const EigenDecomposition pt = hermitian_eig(partial_transpose(s.rho(), s.dims()));
    PptResult r;
    r.min_eigenvalue = pt.min();
    r.ppt = pt.min() >= psd_threshold(pt.max(), tol.psd);
    r.support_a = sp.rank_a;
    r.support_b = sp.rank_b;
    const bool decisive = sp.rank_a * sp.rank_b <= kPptDecisiveSupport;
    if (r.ppt) {
        r.verdict = decisive ? Verdict::Separable : Verdict::SeparableConsistent;
    } else {
        r.verdict = decisive ? Verdict::Distillable : Verdict::Violated;
    }
    return r;
}

FilterOutcome filter_impl(const BipartiteState& s, Party side, const EigenDecomposition& marginal_eig,
                          const Tolerances& tol) {
    const Dims d = s.dims();
    const std::size_t local = d.local(side);
    const std::size_t r = numerical_rank(marginal_eig.values, tol.rank_epsilon);
    const double mu_max = marginal_eig.values.front();
    const double mu_min = marginal_eig.values[r - 1];
    if (mu_min / mu_max < kSingularScaling) {
        std::ostringstream os;
        os << "marginal condition ratio " << mu_min / mu_max << " below " << kSingularScaling;
        throw Error(ErrorKind::SingularScaling, os.str());
    }
    ComplexMatrix k(local);
    for (std::size_t i = 0; i < r; ++i) {
        const double w = std::sqrt(mu_min / marginal_eig.values[i]);
        const CVector v = marginal_eig.vector(i);
        k += w * ComplexMatrix::projector(v);
    }
    const ComplexMatrix kfull =
        side == Party::A ? tensor(k, ComplexMatrix::identity(d.b)) : tensor(ComplexMatrix::identity(d.a), k);
    const ComplexMatrix out = (kfull * s.rho() * kfull.adjoint()).hermitian_part();
    const double p = out.trace().real();
    BipartiteState filtered = BipartiteState::from_unnormalized(d, out, tol.psd);

    const EigenDecomposition fm = hermitian_eig(filtered.marginal(side));
    double flat = 0.0;
    for (std::size_t i = 0; i < fm.values.size(); ++i) {
        const double target = i < r ? 1.0 / static_cast<double>(r) : 0.0;
        flat = std::max(flat, std::abs(fm.values[i] - target));
    }
    return FilterOutcome{std::move(filtered), p, flat, side, r};
}

// Filters `side` and measures the reduction operator on that side.
void filtered_witness(const BipartiteState& s, Party side, const EigenDecomposition& marginal_eig,
                      const Tolerances& tol, RankCriterionResult& out, std::size_t big_r) {
    const FilterOutcome f = filter_impl(s, side, marginal_eig, tol);
    const SideOperator op = reduction_operator(f.filtered_state, f.filtered_state.marginal(side), side, tol.psd);
    const double lmax = hermitian_eig(f.filtered_state.rho()).max();
    out.filtered_side = side;
    out.success_probability = f.success_probability;
    out.filtered_lambda_max = lmax;
    out.witness_value = op.eig.min();
    out.bound = 1.0 / static_cast<double>(big_r) - lmax;
}

RankCriterionResult rank_impl(const BipartiteState& s, const Spectra& sp, const Tolerances& tol) {
    RankCriterionResult out;
    out.rank = sp.rank;
    out.rank_a = sp.rank_a;
    out.rank_b = sp.rank_b;
    const std::size_t big_r = std::max(sp.rank_a, sp.rank_b);
    const Party side = sp.rank_a >= sp.rank_b ? Party::A : Party::B;
    const auto& side_eig = side == Party::A ? sp.a : sp.b;

    if (sp.rank < big_r) {
        out.verdict = Verdict::Distillable;
        try {
            filtered_witness(s, side, side_eig, tol, out, big_r);
            const bool fired = *out.witness_value < -tol.psd;
            out.diagnostic = fired ? "rank below marginal rank; filtered state violates the reduction criterion"
                                   : "rank below marginal rank; filtered reduction witness not resolved numerically";
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularScaling) throw;
            out.diagnostic = std::string("rank below marginal rank; no constructive witness (") + e.what() + ")";
        }
        return out;
    }

    if (sp.rank == big_r) {
        std::vector<Party> sides{side};
        if (sp.rank_a == sp.rank_b) sides.push_back(Party::B);
        bool flat = true;
        for (Party sd : sides) {
            RankCriterionResult attempt = out;
            try {
                filtered_witness(s, sd, sd == Party::A ? sp.a : sp.b, tol, attempt, big_r);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SingularScaling) throw;
                continue;
            }
            const double excess = *attempt.filtered_lambda_max - 1.0 / static_cast<double>(sp.rank);
            if (excess <= kFlatSpectrumTolerance) {
                if (!out.filtered_side) out = attempt;
                continue;
            }
            flat = false;
            if (*attempt.witness_value < -tol.psd) {
                attempt.verdict = Verdict::Distillable;
                attempt.diagnostic = "rank equals marginal rank; filtered state is not flat and violates the reduction criterion";
                return attempt;
            }
            out = attempt;
        }
        out.verdict = Verdict::Inconclusive;
        out.diagnostic = flat ? "rank equals marginal rank and the filtered state is proportional to a projector; no conclusion"
                              : "rank equals marginal rank; filtered reduction test not violated";
        return out;
    }

    out.verdict = Verdict::Inconclusive;
    out.diagnostic = "rank exceeds both marginal ranks";
    return out;
}

double require_alpha(double alpha) {
    if (!(alpha >= 0.0)) throw Error(ErrorKind::NegativeAlpha, "alpha must be non-negative");
    return alpha;
}

bool is_proven_alpha(double alpha) { return alpha == 0.0 || alpha == 1.0 || alpha == 2.0 || std::isinf(alpha); }

EntropyResult entropy_impl(const Spectra& sp, double alpha, const Tolerances& tol) {
    EntropyResult r;
    r.alpha = require_alpha(alpha);
    r.s_state = renyi_entropy(sp.state.values, alpha, tol.rank_epsilon);
    r.s_a = renyi_entropy(sp.a.values, alpha, tol.rank_epsilon);
    r.s_b = renyi_entropy(sp.b.values, alpha, tol.rank_epsilon);
    r.proven_case = is_proven_alpha(alpha);
    r.violated = r.s_state < r.s_a - tol.psd || r.s_state < r.s_b - tol.psd;
    if (!r.violated) {
        r.verdict = Verdict::SeparableConsistent;
    } else {
        r.verdict = alpha == 0.0 ? Verdict::Distillable : Verdict::Violated;
    }
    return r;
}

SupportResult support_impl(const Spectra& sp) {
    SupportResult r{sp.rank, sp.rank_a, sp.rank_b};
    r.confined = sp.rank_a <= sp.rank && sp.rank_b <= sp.rank;
    r.verdict = r.confined ? Verdict::SeparableConsistent : Verdict::Distillable;
    return r;
}

std::string alpha_key(double alpha) {
    if (std::isinf(alpha)) return "entropy_alpha_inf";
    std::ostringstream os;
    os << "entropy_alpha_" << alpha;
    return os.str();
}

// 2x2 unitary taking the unit vector v to |0>.
ComplexMatrix align_to_zero(const CVector& v) {
    return ComplexMatrix{{std::conj(v[0]), std::conj(v[1])}, {-v[1], v[0]}};
}

double det_real(const ComplexMatrix& m) { return determinant(m).real(); }

}  // namespace

PptResult ppt_test(const BipartiteState& s, const Tolerances& tol) { return ppt_impl(s, spectra_of(s, tol), tol); }

ReductionResult reduction_test(const BipartiteState& s, const Tolerances& tol) {
    return reduction_impl(s, s.marginal(Party::A), s.marginal(Party::B), tol);
}

FilterOutcome local_filter(const BipartiteState& s, Party side, const Tolerances& tol) {
    return filter_impl(s, side, hermitian_eig(s.marginal(side)), tol);
}

RankCriterionResult rank_criterion(const BipartiteState& s, const Tolerances& tol) {
    return rank_impl(s, spectra_of(s, tol), tol);
}

double renyi_entropy(std::span<const double> values, double alpha, double rank_epsilon) {
    require_alpha(alpha);
    if (alpha == 0.0) return std::log2(static_cast<double>(numerical_rank(values, rank_epsilon)));
    // Eigenvalues under the rank cutoff are rounding noise; alpha < 1 would amplify them.
    const std::span<const double> range = values.first(numerical_rank(values, rank_epsilon));
    if (alpha == 1.0) return shannon_bits(range);
    if (std::isinf(alpha)) return -std::log2(values.front());
    double acc = 0.0;
    for (double x : range) acc += std::pow(x, alpha);
    return std::log2(acc) / (1.0 - alpha);
}

double renyi_entropy(const ComplexMatrix& rho, double alpha, double rank_epsilon) {
    require_alpha(alpha);
    return renyi_entropy(hermitian_eig(rho).values, alpha, rank_epsilon);
}

double renyi_entropy(const BipartiteState& s, double alpha, double rank_epsilon) {
    return renyi_entropy(s.rho(), alpha, rank_epsilon);
}

EntropyResult entropy_inequality_test(const BipartiteState& s, double alpha, const Tolerances& tol) {
    require_alpha(alpha);
    return entropy_impl(spectra_of(s, tol), alpha, tol);
}

double participation_ratio(const BipartiteState& s) {
    double purity = 0.0;
    for (const auto& z : s.rho().data()) purity += std::norm(z);
    return 1.0 / purity;
}

SupportResult support_analysis(const BipartiteState& s, const Tolerances& tol) {
    return support_impl(spectra_of(s, tol));
}

TwoQubitMixtureResult two_qubit_mixture_test(double p, const PureState& psi) {
    return two_qubit_mixture_test(p, psi, PureState::basis(Dims{2, 2}, 0, 0));
}

TwoQubitMixtureResult two_qubit_mixture_test(double p, const PureState& psi, const PureState& product) {
    const Dims two{2, 2};
    if (psi.dims() != two || product.dims() != two)
        throw Error(ErrorKind::DimensionNotTwoByTwo, "mixture test needs two-qubit states");
    if (!(p >= 0.0)) throw Error(ErrorKind::InvalidState, "mixing weight p must be non-negative");
    const SchmidtData prod = schmidt_decompose(product);
    if (prod.rank() != 1) throw Error(ErrorKind::InvalidState, "product component is entangled");

    TwoQubitMixtureResult r;
    r.p = p;
    r.rotation_a = align_to_zero(prod.left[0]);
    r.rotation_b = align_to_zero(prod.right[0]);
    const CVector aligned = tensor(r.rotation_a, r.rotation_b) * std::span<const cplx>(psi.amplitudes());
    r.a = aligned[0];
    r.b = aligned[1];
    r.c = aligned[2];
    r.d = aligned[3];

    const ComplexMatrix pure = ComplexMatrix::projector(aligned);
    ComplexMatrix mixture = pure;
    mixture(0, 0) += p;
    const ComplexMatrix pt = partial_transpose(mixture, two);
    ComplexMatrix minor(3);
    for (std::size_t i = 1; i < 4; ++i)
        for (std::size_t j = 1; j < 4; ++j) minor(i - 1, j - 1) = pt(i, j);

    r.det_pt = det_real(pt);
    r.det_minor = det_real(minor);
    r.det_pt_pure = det_real(partial_transpose(pure, two));
    const cplx concurrence_amp = r.a * r.d - r.b * r.c;
    r.closed_form_term = -p * std::norm(r.d) * std::norm(concurrence_amp);
    r.decomposition_residual = std::abs(r.det_pt - (p * r.det_minor + r.det_pt_pure));
    r.psi_entangled = std::abs(concurrence_amp) > 1e-12;

    const EigenDecomposition eig = hermitian_eig((pt * (1.0 / (1.0 + p))).hermitian_part());
    r.min_eigenvalue = eig.min();
    r.direct_npt = eig.min() < psd_threshold(eig.max());

    r.closed_form_used = std::abs(r.closed_form_term) >= 1e-12;
    r.closed_form_npt = r.closed_form_used ? (r.closed_form_term + r.det_pt_pure < 0.0) : r.direct_npt;
    r.agree = r.closed_form_npt == r.direct_npt;
    r.verdict = (r.psi_entangled || r.direct_npt) ? Verdict::Distillable : Verdict::Separable;
    return r;
}

std::optional<ProductPlusPure> split_rank_two(const BipartiteState& s, const Tolerances& tol) {
    const Dims two{2, 2};
    if (s.dims() != two) return std::nullopt;
    const EigenDecomposition eig = hermitian_eig(s.rho());
    if (numerical_rank(eig.values, tol.rank_epsilon) != 2) return std::nullopt;

    const CVector u = eig.vector(0);
    const CVector w = eig.vector(1);
    auto cross = [](const CVector& x, const CVector& y) { return x[0] * y[3] - x[1] * y[2]; };
    const cplx qa = cross(w, w);
    const cplx qb = cross(u, w) + cross(w, u);
    const cplx qc = cross(u, u);

    // Range vectors u + t w with det(reshape) = qa t^2 + qb t + qc = 0.
    CVector x;
    if (std::abs(qc) <= 1e-14) {
        x = u;
    } else if (std::abs(qa) <= 1e-14) {
        if (std::abs(qb) <= 1e-14) {
            x = w;
        } else {
            const cplx t = -qc / qb;
            x = u;
            for (std::size_t i = 0; i < 4; ++i) x[i] += t * w[i];
        }
    } else {
        const cplx disc = std::sqrt(qb * qb - 4.0 * qa * qc);
        const cplx t = (-qb + disc) / (2.0 * qa);
        x = u;
        for (std::size_t i = 0; i < 4; ++i) x[i] += t * w[i];
    }
    const double nx = norm(x);
    for (auto& z : x) z /= nx;

    double inv = 0.0;
    for (std::size_t i = 0; i < 2; ++i) inv += std::norm(inner(eig.vector(i), x)) / eig.values[i];
    const double weight = 1.0 / inv;
    const ComplexMatrix rest = (s.rho() - weight * ComplexMatrix::projector(x)).hermitian_part();
    const EigenDecomposition rest_eig = hermitian_eig(rest);
    const double q = rest_eig.max();
    if (q <= 1e-12) return std::nullopt;

    const SchmidtData xs = schmidt_decompose(PureState::normalized(two, x));
    const PureState product = PureState::product(xs.left[0], xs.right[0]);
    return ProductPlusPure{weight / q, product, PureState::normalized(two, rest_eig.vector(0))};
}

CriterionReport analyze(const BipartiteState& s, const Tolerances& tol) {
    const Spectra sp = spectra_of(s, tol);
    CriterionReport rep;
    rep.dims = s.dims();
    rep.tolerances = tol;

    rep.ppt = ppt_impl(s, sp, tol);
    rep.verdicts["ppt"] = rep.ppt.verdict;
    rep.witnesses["ppt"] = {{"min_eigenvalue", rep.ppt.min_eigenvalue},
                            {"support_a", static_cast<double>(rep.ppt.support_a)},
                            {"support_b", static_cast<double>(rep.ppt.support_b)}};

    rep.reduction = reduction_impl(s, sp.rho_a, sp.rho_b, tol);
    rep.verdicts["reduction"] = rep.reduction.verdict;
    rep.witnesses["reduction"] = {{"min_eigenvalue_a", rep.reduction.min_eigenvalue_a},
                                  {"min_eigenvalue_b", rep.reduction.min_eigenvalue_b},
                                  {"witness_value", rep.reduction.witness_value}};

    rep.rank = rank_impl(s, sp, tol);
    rep.verdicts["rank_marginal"] = rep.rank.verdict;
    auto& rw = rep.witnesses["rank_marginal"];
    rw = {{"rank", static_cast<double>(rep.rank.rank)},
          {"rank_a", static_cast<double>(rep.rank.rank_a)},
          {"rank_b", static_cast<double>(rep.rank.rank_b)}};
    if (rep.rank.witness_value) rw["filtered_reduction_min_eigenvalue"] = *rep.rank.witness_value;
    if (rep.rank.bound) rw["bound_one_over_R_minus_lambda_max"] = *rep.rank.bound;
    if (rep.rank.success_probability) rw["filter_success_probability"] = *rep.rank.success_probability;
    if (rep.rank.filtered_lambda_max) rw["filtered_lambda_max"] = *rep.rank.filtered_lambda_max;

    for (double alpha : {0.0, 1.0, 2.0, kAlphaInfinity}) {
        const EntropyResult e = entropy_impl(sp, alpha, tol);
        const std::string key = alpha_key(alpha);
        rep.verdicts[key] = e.verdict;
        rep.witnesses[key] = {{"s_state", e.s_state}, {"s_a", e.s_a}, {"s_b", e.s_b}};
        rep.entropy.push_back(e);
    }

    rep.participation_ratio = participation_ratio(s);
    rep.witnesses["participation_ratio"] = {{"value", rep.participation_ratio}};

    rep.support = support_impl(sp);
    rep.verdicts["support"] = rep.support.verdict;
    rep.witnesses["support"] = {{"rank", static_cast<double>(rep.support.rank)},
                                {"rank_a", static_cast<double>(rep.support.rank_a)},
                                {"rank_b", static_cast<double>(rep.support.rank_b)}};
    {
        std::ostringstream os;
        os << "support " << sp.rank_a << "x" << sp.rank_b << " for rank " << sp.rank;
        os << (rep.support.confined ? ": fits inside a rank x rank subspace, consistent with non-distillability"
                                    : ": exceeds a rank x rank subspace, distillable");
        rep.notes.push_back(os.str());
    }

    if (auto split = split_rank_two(s, tol)) {
        rep.two_qubit = two_qubit_mixture_test(split->p, split->psi, split->product);
        rep.verdicts["two_qubit_mixture"] = rep.two_qubit->verdict;
        rep.witnesses["two_qubit_mixture"] = {{"p", rep.two_qubit->p},
                                              {"det_pt", rep.two_qubit->det_pt},
                                              {"closed_form_term", rep.two_qubit->closed_form_term},
                                              {"det_pt_pure", rep.two_qubit->det_pt_pure},
                                              {"min_eigenvalue", rep.two_qubit->min_eigenvalue}};
        if (!rep.two_qubit->agree) rep.notes.push_back("two-qubit mixture: closed form and direct test disagree");
    }

    rep.overall = rep.distillable_witness_count() > 0 ? Overall::Distillable : Overall::NotDistillableByTheseTests;

    if (rep.overall == Overall::NotDistillableByTheseTests && rep.ppt.ppt && rep.ppt.verdict != Verdict::Separable) {
        rep.notes.push_back("PPT: entanglement not certified by this toolkit");
    }
    if (rep.overall == Overall::NotDistillableByTheseTests && sp.rank == sp.rank_a && sp.rank == sp.rank_b &&
        sp.rank_a == s.dims().a && sp.rank_b == s.dims().b && rep.ppt.verdict != Verdict::Separable) {
        rep.notes.push_back("rank equals both marginal ranks on an irreducible support; "
                            "whether such a state can be bound entangled is unresolved");
    }
    return rep;
}

}  // namespace entrank
