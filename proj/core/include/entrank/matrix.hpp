#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace entrank {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Dense row-major complex matrix. Most of the toolkit works with square
// matrices (states, operators); rectangular shapes appear only for
// isometries and vector blocks.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    explicit ComplexMatrix(std::size_t dim) : ComplexMatrix(dim, dim) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

    // Square matrix from nested rows; throws DimensionMismatch on ragged input.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra);
    static ComplexMatrix projector(std::span<const cplx> v) { return outer(v, v); }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    // Side length of a square matrix; throws DimensionMismatch otherwise.
    std::size_t dim() const;
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }
    std::span<const cplx> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    CVector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const cplx> v);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    cplx trace() const;
    double max_abs() const noexcept;
    // (M + M^dagger)/2; removes rounding asymmetry from products.
    ComplexMatrix hermitian_part() const;
    bool is_hermitian(double rel_tol = 1e-12) const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s) noexcept;

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend CVector operator*(const ComplexMatrix& a, std::span<const cplx> v);

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

cplx inner(std::span<const cplx> a, std::span<const cplx> b) noexcept;  // <a|b>
double norm(std::span<const cplx> v) noexcept;
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace entrank
