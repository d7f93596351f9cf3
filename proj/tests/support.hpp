#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "entrank/linalg.hpp"
#include "entrank/random.hpp"
#include "entrank/states.hpp"

// Reference computations for the tests. Eigen is used only here, as an
// oracle independent of the Jacobi solver.
namespace entrank::testing {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

// Descending.
inline std::vector<double> oracle_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.rbegin(), v.rend());
    return v;
}

inline double oracle_min_eigenvalue(const ComplexMatrix& m) { return oracle_eigenvalues(m).back(); }

inline cplx oracle_determinant(const ComplexMatrix& m) { return to_eigen(m).determinant(); }

// Partial transpose on B written with explicit four-index loops.
inline ComplexMatrix oracle_partial_transpose(const ComplexMatrix& m, std::size_t da, std::size_t db) {
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t k = 0; k < da; ++k)
                for (std::size_t l = 0; l < db; ++l) out(i * db + j, k * db + l) = m(i * db + l, k * db + j);
    return out;
}

// Traces B out.
inline ComplexMatrix oracle_trace_b(const ComplexMatrix& m, std::size_t da, std::size_t db) {
    ComplexMatrix out(da);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < da; ++k)
            for (std::size_t j = 0; j < db; ++j) out(i, k) += m(i * db + j, k * db + j);
    return out;
}

inline ComplexMatrix oracle_trace_a(const ComplexMatrix& m, std::size_t da, std::size_t db) {
    ComplexMatrix out(db);
    for (std::size_t j = 0; j < db; ++j)
        for (std::size_t l = 0; l < db; ++l)
            for (std::size_t i = 0; i < da; ++i) out(j, l) += m(i * db + j, i * db + l);
    return out;
}

inline double binary_entropy(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// Entropy in bits from the oracle spectrum.
inline double oracle_entropy(const ComplexMatrix& rho) {
    double s = 0;
    for (double x : oracle_eigenvalues(rho))
        if (x > 1e-15) s -= x * std::log2(x);
    return s;
}

// Spectrum restricted to eigenvalues above 1e-10 of the largest, as for ranks.
inline double oracle_renyi(const ComplexMatrix& rho, double alpha) {
    auto ev = oracle_eigenvalues(rho);
    const double cut = 1e-10 * ev.front();
    ev.erase(std::remove_if(ev.begin(), ev.end(), [&](double x) { return x <= cut; }), ev.end());
    if (alpha == 0) return std::log2(static_cast<double>(ev.size()));
    if (std::isinf(alpha)) return -std::log2(ev.front());
    if (alpha == 1) {
        double s = 0;
        for (double x : ev) s -= x * std::log2(x);
        return s;
    }
    double s = 0;
    for (double x : ev) s += std::pow(x, alpha);
    return std::log2(s) / (1 - alpha);
}

// Wootters formula from the Hermitian form sqrt(rho) rho_tilde sqrt(rho), via Eigen.
inline double oracle_concurrence(const ComplexMatrix& rho) {
    const Eigen::Matrix4cd r = to_eigen(rho);
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1;
    yy(1, 2) = 1;
    yy(2, 1) = 1;
    yy(3, 0) = -1;
    const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> root(r);
    const Eigen::Vector4d mu = root.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd sq = root.eigenvectors() * mu.cast<cplx>().asDiagonal() * root.eigenvectors().adjoint();
    const Eigen::Matrix4cd h = sq * tilde * sq;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    std::vector<double> l;
    for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    std::sort(l.rbegin(), l.rend());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double oracle_ef_2q(const ComplexMatrix& rho) {
    const double c = oracle_concurrence(rho);
    const double x = (1 + std::sqrt(std::max(0.0, 1 - c * c))) / 2;
    if (x >= 1.0) return 0.0;
    return binary_entropy(x);
}

inline Dims dims_from(std::uint64_t seed, std::size_t max_local = 4) {
    SplitMix64 g(seed);
    return Dims{2 + g() % (max_local - 1), 2 + g() % (max_local - 1)};
}

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    Random rng(seed);
    ComplexMatrix m(n);
    for (auto& z : m.data()) z = rng.complex_normal();
    return m.hermitian_part();
}

// Gaussian-integer entries in [-3, 3]; products of these are exact in double.
inline ComplexMatrix integer_matrix(std::size_t n, std::uint64_t seed) {
    SplitMix64 g(seed);
    ComplexMatrix m(n);
    for (auto& z : m.data()) z = cplx(static_cast<double>(g() % 7) - 3, static_cast<double>(g() % 7) - 3);
    return m;
}

inline PureState bell() { return maximally_entangled(2); }

inline PureState two_qubit(cplx a, cplx b, cplx c, cplx d) { return PureState::normalized(Dims{2, 2}, {a, b, c, d}); }

}  // namespace entrank::testing
