#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "entrank/linalg.hpp"
#include "entrank/matrix.hpp"

namespace entrank {

// Normalized pure vector on C^a (x) C^b, A-major.
class PureState {
public:
    // Throws NotNormalized if | ||amplitudes|| - 1 | > 1e-12, DimensionMismatch
    // on a length mismatch.
    PureState(Dims dims, CVector amplitudes);

    static PureState normalized(Dims dims, CVector amplitudes);
    static PureState basis(Dims dims, std::size_t i, std::size_t j);
    static PureState product(std::span<const cplx> a, std::span<const cplx> b);

    Dims dims() const noexcept { return dims_; }
    const CVector& amplitudes() const noexcept { return amplitudes_; }
    ComplexMatrix projector() const { return ComplexMatrix::projector(amplitudes_); }

private:
    Dims dims_;
    CVector amplitudes_;
};

// Density matrix on C^a (x) C^b. Construction validates Hermiticity
// (1e-12 relative), unit trace (1e-12) and positivity (min eigenvalue
// >= -psd_tol); failures throw InvalidState with the offending quantity.
class BipartiteState {
public:
    BipartiteState(Dims dims, ComplexMatrix rho, double psd_tol = kDefaultPsdTolerance);

    // Hermitian part of m divided by its trace, then validated.
    static BipartiteState from_unnormalized(Dims dims, const ComplexMatrix& m,
                                            double psd_tol = kDefaultPsdTolerance);
    static BipartiteState pure(const PureState& psi);

    Dims dims() const noexcept { return dims_; }
    const ComplexMatrix& rho() const noexcept { return rho_; }
    // Reduced state of party p (the other party traced out).
    ComplexMatrix marginal(Party p) const { return partial_trace(rho_, dims_, other(p)); }

private:
    Dims dims_;
    ComplexMatrix rho_;
};

struct SchmidtData {
    std::vector<double> coefficients;  // nonincreasing, all > 1e-10
    std::vector<CVector> left;
    std::vector<CVector> right;

    std::size_t rank() const noexcept { return coefficients.size(); }
};

SchmidtData schmidt_decompose(const PureState& psi);

// Entropy of the reduced state, in bits.
double pure_entanglement(const PureState& psi);

// -sum p log2 p over the positive entries.
double shannon_bits(std::span<const double> probabilities) noexcept;
double von_neumann_entropy(const ComplexMatrix& rho);

struct WeightedPure {
    double weight;
    PureState psi;
};

BipartiteState mix(std::span<const WeightedPure> components);

// rho = G G^dagger / Tr(G G^dagger), G of shape (a*b) x rank with standard
// complex Gaussian entries drawn row-major from SplitMix64(seed).
BipartiteState random_state(Dims dims, std::size_t rank, std::uint64_t seed);

// Dirichlet(1,...,1)-weighted mixture of `terms` random product vectors.
BipartiteState random_separable(Dims dims, std::size_t terms, std::uint64_t seed);

PureState random_pure(Dims dims, std::uint64_t seed);
PureState random_product_pure(Dims dims, std::uint64_t seed);

// (|00> + |11> + ... )/sqrt(d) in d x d.
PureState maximally_entangled(std::size_t d);

// The five Tiles product vectors (3 x 3).
std::vector<PureState> tiles_vectors();
// (1 - sum of Tiles projectors)/4. Self-checked on construction; throws
// FixtureInvalid if any property fails.
BipartiteState tiles_fixture();

// (U_A (x) U_B) rho (U_A (x) U_B)^dagger.
BipartiteState locally_rotated(const BipartiteState& s, const ComplexMatrix& ua, const ComplexMatrix& ub);

}  // namespace entrank
