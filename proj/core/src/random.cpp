#include "entrank/random.hpp"

#include <cmath>
#include <numbers>

namespace entrank {

double Random::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

cplx Random::complex_normal() noexcept {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

double Random::exponential() noexcept { return -std::log(uniform()); }

CVector Random::gaussian_vector(std::size_t n) {
    CVector v(n);
    for (auto& z : v) z = complex_normal();
    return v;
}

CVector Random::unit_vector(std::size_t n) {
    CVector v = gaussian_vector(n);
    const double nv = norm(v);
    for (auto& z : v) z /= nv;
    return v;
}

ComplexMatrix Random::isometry(std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (auto& z : m.data()) z = complex_normal();
    orthonormalize_columns(m);
    return m;
}

void orthonormalize_columns(ComplexMatrix& m) {
    const std::size_t rows = m.rows();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        CVector v = m.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < rows; ++i) proj += std::conj(m(i, k)) * v[i];
                for (std::size_t i = 0; i < rows; ++i) v[i] -= proj * m(i, k);
            }
        }
        const double nv = norm(v);
        for (auto& z : v) z = nv > 1e-14 ? z / nv : cplx{};
        m.set_column(j, v);
    }
}

}  // namespace entrank
