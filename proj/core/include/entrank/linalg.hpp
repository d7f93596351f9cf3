#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "entrank/matrix.hpp"

namespace entrank {

enum class Party { A, B };

constexpr Party other(Party p) noexcept { return p == Party::A ? Party::B : Party::A; }
const char* to_string(Party p) noexcept;

// Local dimensions of a bipartite system. Composite index (i, j) maps to
// i * b + j (A-major) everywhere in the toolkit.
struct Dims {
    std::size_t a = 0;
    std::size_t b = 0;

    constexpr std::size_t total() const noexcept { return a * b; }
    constexpr std::size_t local(Party p) const noexcept { return p == Party::A ? a : b; }
    constexpr std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * b + j; }
    bool operator==(const Dims&) const = default;
};

inline constexpr double kDefaultRankEpsilon = 1e-10;
inline constexpr double kDefaultPsdTolerance = 1e-9;

struct EigenDecomposition {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // column i pairs with values[i]

    CVector vector(std::size_t i) const { return vectors.column(i); }
    double max() const { return values.front(); }
    double min() const { return values.back(); }
};

// Cyclic complex Jacobi. Eigenvectors are phase-fixed (first entry above
// 1e-12 in modulus is real positive) and degenerate clusters are ordered
// lexicographically, so the output is deterministic.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
CVector tensor(std::span<const cplx> a, std::span<const cplx> b);

// Traces out `traced`; the result lives on the other party.
ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Party traced);

// Transposes the B indices: out[(i,j)][(k,l)] = m[(i,l)][(k,j)].
ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims);

// Number of eigenvalues above epsilon * max(lambda_max, 1e-300).
std::size_t numerical_rank(const ComplexMatrix& m, double epsilon = kDefaultRankEpsilon);
std::size_t numerical_rank(std::span<const double> descending_values, double epsilon = kDefaultRankEpsilon);

double min_eigenvalue(const ComplexMatrix& m);

// Threshold below which a minimum eigenvalue counts as negative:
// -tol * max(1, lambda_max).
double psd_threshold(double lambda_max, double tol = kDefaultPsdTolerance) noexcept;
bool is_psd(const EigenDecomposition& eig, double tol = kDefaultPsdTolerance) noexcept;

// LU with partial pivoting.
cplx determinant(const ComplexMatrix& m);

// V f(diag) V^dagger for a Hermitian input.
ComplexMatrix apply_spectral(const EigenDecomposition& eig, const std::function<double(double)>& f);

}  // namespace entrank
