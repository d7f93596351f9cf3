#include "entrank/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "entrank/error.hpp"
#include "entrank/random.hpp"

namespace entrank {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

PureState::PureState(Dims dims, CVector amplitudes) : dims_(dims), amplitudes_(std::move(amplitudes)) {
    if (dims_.total() == 0) throw Error(ErrorKind::DimensionZero, "pure state with zero local dimension");
    if (amplitudes_.size() != dims_.total()) {
        throw Error(ErrorKind::DimensionMismatch, "amplitude vector length " + std::to_string(amplitudes_.size()) +
                                                      " != " + std::to_string(dims_.total()));
    }
    const double n = norm(amplitudes_);
    if (std::abs(n - 1.0) > 1e-12) throw Error(ErrorKind::NotNormalized, "norm is " + fmt(n));
}

PureState PureState::normalized(Dims dims, CVector amplitudes) {
    const double n = norm(amplitudes);
    if (n == 0.0) throw Error(ErrorKind::NotNormalized, "zero vector");
    for (auto& z : amplitudes) z /= n;
    return PureState(dims, std::move(amplitudes));
}

PureState PureState::basis(Dims dims, std::size_t i, std::size_t j) {
    CVector v(dims.total());
    v.at(dims.index(i, j)) = 1.0;
    return PureState(dims, std::move(v));
}

PureState PureState::product(std::span<const cplx> a, std::span<const cplx> b) {
    return normalized(Dims{a.size(), b.size()}, tensor(a, b));
}

BipartiteState::BipartiteState(Dims dims, ComplexMatrix rho, double psd_tol) : dims_(dims), rho_(std::move(rho)) {
    if (dims_.total() == 0) throw Error(ErrorKind::DimensionZero, "state with zero local dimension");
    if (!rho_.is_square() || rho_.rows() != dims_.total()) {
        throw Error(ErrorKind::DimensionMismatch, "density matrix does not match dimensions " +
                                                      std::to_string(dims_.a) + "x" + std::to_string(dims_.b));
    }
    if (!rho_.is_hermitian(1e-12)) throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
    const cplx tr = rho_.trace();
    if (std::abs(tr - 1.0) > 1e-12) throw Error(ErrorKind::InvalidState, "trace is " + fmt(tr.real()));
    const double lmin = min_eigenvalue(rho_);
    if (lmin < -psd_tol) throw Error(ErrorKind::InvalidState, "minimum eigenvalue " + fmt(lmin) + " is negative");
}

BipartiteState BipartiteState::from_unnormalized(Dims dims, const ComplexMatrix& m, double psd_tol) {
    ComplexMatrix h = m.hermitian_part();
    const double tr = h.trace().real();
    if (!(tr > 0.0)) throw Error(ErrorKind::InvalidState, "non-positive trace");
    h *= 1.0 / tr;
    return BipartiteState(dims, std::move(h), psd_tol);
}

BipartiteState BipartiteState::pure(const PureState& psi) { return BipartiteState(psi.dims(), psi.projector()); }

SchmidtData schmidt_decompose(const PureState& psi) {
    const Dims d = psi.dims();
    const auto& amp = psi.amplitudes();
    ComplexMatrix rho_a(d.a);
    for (std::size_t i = 0; i < d.a; ++i)
        for (std::size_t k = 0; k < d.a; ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < d.b; ++j) acc += amp[d.index(i, j)] * std::conj(amp[d.index(k, j)]);
            rho_a(i, k) = acc;
        }
    const EigenDecomposition eig = hermitian_eig(rho_a.hermitian_part());

    struct Term {
        double c;
        CVector l;
        CVector r;
    };
    std::vector<Term> terms;
    for (std::size_t n = 0; n < d.a; ++n) {
        if (eig.values[n] <= 0.0) continue;
        CVector l = eig.vector(n);
        CVector r(d.b);
        for (std::size_t j = 0; j < d.b; ++j)
            for (std::size_t i = 0; i < d.a; ++i) r[j] += std::conj(l[i]) * amp[d.index(i, j)];
        const double c = norm(r);
        if (c <= 1e-10) continue;
        for (auto& z : r) z /= c;
        terms.push_back({c, std::move(l), std::move(r)});
    }
    std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.c > y.c; });

    SchmidtData out;
    ComplexMatrix right(d.b, terms.size());
    for (std::size_t n = 0; n < terms.size(); ++n) right.set_column(n, terms[n].r);
    orthonormalize_columns(right);
    for (std::size_t n = 0; n < terms.size(); ++n) {
        out.coefficients.push_back(terms[n].c);
        out.left.push_back(std::move(terms[n].l));
        out.right.push_back(right.column(n));
    }
    return out;
}

double shannon_bits(std::span<const double> p) noexcept {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

double pure_entanglement(const PureState& psi) {
    const SchmidtData s = schmidt_decompose(psi);
    std::vector<double> mu;
    for (double c : s.coefficients) mu.push_back(c * c);
    return shannon_bits(mu);
}

double von_neumann_entropy(const ComplexMatrix& rho) { return shannon_bits(hermitian_eig(rho).values); }

BipartiteState mix(std::span<const WeightedPure> components) {
    if (components.empty()) throw Error(ErrorKind::WeightSumInvalid, "empty mixture");
    const Dims dims = components.front().psi.dims();
    double total = 0.0;
    ComplexMatrix rho(dims.total());
    for (const auto& c : components) {
        if (c.psi.dims() != dims) throw Error(ErrorKind::DimensionMismatch, "mixture components differ in dimensions");
        if (!(c.weight >= 0.0)) throw Error(ErrorKind::WeightSumInvalid, "negative weight " + fmt(c.weight));
        total += c.weight;
        rho += c.weight * c.psi.projector();
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::WeightSumInvalid, "weights sum to " + fmt(total));
    return BipartiteState(dims, rho.hermitian_part());
}

BipartiteState random_state(Dims dims, std::size_t rank, std::uint64_t seed) {
    const std::size_t n = dims.total();
    if (rank < 1 || rank > n) {
        throw Error(ErrorKind::RankOutOfRange,
                    "rank " + std::to_string(rank) + " outside [1, " + std::to_string(n) + "]");
    }
    Random rng(seed);
    ComplexMatrix g(n, rank);
    for (auto& z : g.data()) z = rng.complex_normal();
    return BipartiteState::from_unnormalized(dims, g * g.adjoint());
}

BipartiteState random_separable(Dims dims, std::size_t terms, std::uint64_t seed) {
    if (terms < 1) throw Error(ErrorKind::RankOutOfRange, "at least one product term required");
    Random rng(seed);
    std::vector<double> w(terms);
    for (auto& x : w) x = rng.exponential();
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    ComplexMatrix rho(dims.total());
    for (std::size_t t = 0; t < terms; ++t) {
        const CVector a = rng.unit_vector(dims.a);
        const CVector b = rng.unit_vector(dims.b);
        rho += (w[t] / total) * ComplexMatrix::projector(tensor(a, b));
    }
    return BipartiteState::from_unnormalized(dims, rho);
}

PureState random_pure(Dims dims, std::uint64_t seed) {
    Random rng(seed);
    return PureState::normalized(dims, rng.gaussian_vector(dims.total()));
}

PureState random_product_pure(Dims dims, std::uint64_t seed) {
    Random rng(seed);
    const CVector a = rng.unit_vector(dims.a);
    const CVector b = rng.unit_vector(dims.b);
    return PureState::product(a, b);
}

PureState maximally_entangled(std::size_t d) {
    const Dims dims{d, d};
    CVector v(dims.total());
    for (std::size_t i = 0; i < d; ++i) v[dims.index(i, i)] = 1.0;
    return PureState::normalized(dims, std::move(v));
}

std::vector<PureState> tiles_vectors() {
    const double h = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / std::sqrt(3.0);
    const CVector k0{1, 0, 0}, k2{0, 0, 1};
    const CVector m01{h, -h, 0}, m12{0, h, -h};
    const CVector uni{t, t, t};
    return {
        PureState::product(k0, m01),
        PureState::product(k2, m12),
        PureState::product(m01, k2),
        PureState::product(m12, k0),
        PureState::product(uni, uni),
    };
}

BipartiteState tiles_fixture() {
    const Dims dims{3, 3};
    const auto vecs = tiles_vectors();
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = i + 1; j < vecs.size(); ++j)
            if (std::abs(inner(vecs[i].amplitudes(), vecs[j].amplitudes())) > 1e-14)
                throw Error(ErrorKind::FixtureInvalid, "Tiles vectors are not orthogonal");

    ComplexMatrix rho = ComplexMatrix::identity(dims.total());
    for (const auto& v : vecs) rho -= v.projector();
    rho *= 0.25;
    BipartiteState s(dims, rho.hermitian_part());

    if (numerical_rank(s.rho()) != 4) throw Error(ErrorKind::FixtureInvalid, "Tiles state rank is not 4");
    if (numerical_rank(s.marginal(Party::A)) != 3 || numerical_rank(s.marginal(Party::B)) != 3)
        throw Error(ErrorKind::FixtureInvalid, "Tiles marginals are not full rank");
    if (!is_psd(hermitian_eig(partial_transpose(s.rho(), dims))))
        throw Error(ErrorKind::FixtureInvalid, "Tiles state is not PPT");
    return s;
}

BipartiteState locally_rotated(const BipartiteState& s, const ComplexMatrix& ua, const ComplexMatrix& ub) {
    const ComplexMatrix u = tensor(ua, ub);
    return BipartiteState::from_unnormalized(s.dims(), u * s.rho() * u.adjoint());
}

}  // namespace entrank
