#include "entrank/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entrank/error.hpp"

namespace entrank {

const char* to_string(Party p) noexcept { return p == Party::A ? "A" : "B"; }

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm2(const ComplexMatrix& a) {
    double s = 0.0;
    const std::size_t n = a.rows();
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return 2.0 * s;
}

// One complex Jacobi rotation annihilating a(p, q); accumulates into v.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const cplx e = apq / mag;
    const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const std::size_t n = a.rows();

    // A <- A J, columns p and q.
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = c * akp - s * std::conj(e) * akq;
        a(k, q) = s * e * akp + c * akq;
    }
    // A <- J^dagger A, rows p and q.
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = c * apk - s * e * aqk;
        a(q, k) = s * std::conj(e) * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = c * vkp - s * std::conj(e) * vkq;
        v(k, q) = s * e * vkp + c * vkq;
    }
}

void phase_fix(CVector& vec) {
    for (auto& z : vec) {
        const double mag = std::abs(z);
        if (mag > 1e-12) {
            const cplx phase = std::conj(z) / mag;
            for (auto& w : vec) w *= phase;
            z = mag;  // exactly real
            return;
        }
    }
}

bool lex_before(const CVector& x, const CVector& y) {
    constexpr double tol = 1e-12;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i].real() - y[i].real()) > tol) return x[i].real() > y[i].real();
        if (std::abs(x[i].imag() - y[i].imag()) > tol) return x[i].imag() > y[i].imag();
    }
    return false;
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) throw Error(ErrorKind::DimensionZero, "empty matrix");
    if (!m.is_hermitian(1e-12)) throw Error(ErrorKind::NonHermitianInput, "eigendecomposition input");

    const std::size_t n = m.dim();
    ComplexMatrix a = m.hermitian_part();
    ComplexMatrix v = ComplexMatrix::identity(n);

    double fro2 = 0.0;
    for (const auto& z : a.data()) fro2 += std::norm(z);
    const double stop = std::max(fro2 * 1e-32, 1e-300);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm2(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    std::vector<double> values(n);
    std::vector<CVector> vecs(n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = a(order[k], order[k]).real();
        vecs[k] = v.column(order[k]);
        phase_fix(vecs[k]);
    }

    const double scale = std::max(1.0, std::max(std::abs(values.front()), std::abs(values.back())));
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && values[end - 1] - values[end] <= 1e-12 * scale) ++end;
        if (end - start > 1) {
            std::vector<std::size_t> idx(end - start);
            std::iota(idx.begin(), idx.end(), start);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t i, std::size_t j) { return lex_before(vecs[i], vecs[j]); });
            std::vector<CVector> sorted;
            sorted.reserve(idx.size());
            for (auto i : idx) sorted.push_back(vecs[i]);
            for (std::size_t k = 0; k < idx.size(); ++k) vecs[start + k] = std::move(sorted[k]);
        }
        start = end;
    }

    EigenDecomposition out{std::move(values), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) out.vectors.set_column(k, vecs[k]);
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < b.rows(); ++j)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + j, k * b.cols() + l) = aik * b(j, l);
        }
    return out;
}

CVector tensor(std::span<const cplx> a, std::span<const cplx> b) {
    CVector out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    return out;
}

namespace {

void require_dims(const ComplexMatrix& m, Dims dims) {
    if (!m.is_square() || dims.total() != m.rows() || dims.a == 0 || dims.b == 0) {
        throw Error(ErrorKind::DimensionMismatch, "matrix of size " + std::to_string(m.rows()) +
                                                      " does not factor as " + std::to_string(dims.a) + "x" +
                                                      std::to_string(dims.b));
    }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Party traced) {
    require_dims(m, dims);
    if (traced == Party::B) {
        ComplexMatrix out(dims.a);
        for (std::size_t i = 0; i < dims.a; ++i)
            for (std::size_t k = 0; k < dims.a; ++k) {
                cplx acc = 0.0;
                for (std::size_t j = 0; j < dims.b; ++j) acc += m(dims.index(i, j), dims.index(k, j));
                out(i, k) = acc;
            }
        return out;
    }
    ComplexMatrix out(dims.b);
    for (std::size_t j = 0; j < dims.b; ++j)
        for (std::size_t l = 0; l < dims.b; ++l) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < dims.a; ++i) acc += m(dims.index(i, j), dims.index(i, l));
            out(j, l) = acc;
        }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims) {
    require_dims(m, dims);
    ComplexMatrix out(dims.total());
    for (std::size_t i = 0; i < dims.a; ++i)
        for (std::size_t j = 0; j < dims.b; ++j)
            for (std::size_t k = 0; k < dims.a; ++k)
                for (std::size_t l = 0; l < dims.b; ++l)
                    out(dims.index(i, j), dims.index(k, l)) = m(dims.index(i, l), dims.index(k, j));
    return out;
}

std::size_t numerical_rank(std::span<const double> values, double epsilon) {
    if (values.empty()) return 0;
    const double cut = epsilon * std::max(values.front(), 1e-300);
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double x) { return x > cut; }));
}

std::size_t numerical_rank(const ComplexMatrix& m, double epsilon) {
    return numerical_rank(hermitian_eig(m).values, epsilon);
}

double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eig(m).min(); }

double psd_threshold(double lambda_max, double tol) noexcept { return -tol * std::max(1.0, lambda_max); }

bool is_psd(const EigenDecomposition& eig, double tol) noexcept {
    return eig.min() >= psd_threshold(eig.max(), tol);
}

cplx determinant(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    ComplexMatrix lu = m;
    cplx det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == cplx{}) return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(col, c));
            det = -det;
        }
        det *= lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const cplx f = lu(r, col) / lu(col, col);
            for (std::size_t c = col; c < n; ++c) lu(r, c) -= f * lu(col, c);
        }
    }
    return det;
}

ComplexMatrix apply_spectral(const EigenDecomposition& eig, const std::function<double(double)>& f) {
    const std::size_t n = eig.values.size();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(eig.values[k]);
        if (fk == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = fk * eig.vectors(i, k);
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(eig.vectors(j, k));
        }
    }
    return out.hermitian_part();
}

}  // namespace entrank
