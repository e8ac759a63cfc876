#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stbclab/common.hpp"

namespace stbclab {

// Dense complex matrix, row-major. Sized for code blocks and channel
// matrices (a few up to ~16 per side), not for general linear algebra.
class CMat {
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

    static CMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    cplx& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    std::span<const cplx> entries() const { return e_; }
    std::span<cplx> entries() { return e_; }

    CMat hermitian() const;
    double frob_norm() const;
    bool all_finite() const;

    friend CMat operator+(const CMat& a, const CMat& b);
    friend CMat operator-(const CMat& a, const CMat& b);
    friend CMat operator*(const CMat& a, const CMat& b);
    friend CMat operator*(cplx s, const CMat& a);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> e_;
};

// Dense real matrix, row-major.
class RMat {
public:
    RMat() = default;
    RMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

    static RMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    std::span<const double> entries() const { return e_; }

    RMat transpose() const;
    double frob_norm() const;
    bool all_finite() const;

    friend RMat operator+(const RMat& a, const RMat& b);
    friend RMat operator-(const RMat& a, const RMat& b);
    friend RMat operator*(const RMat& a, const RMat& b);
    friend RMat operator*(double s, const RMat& a);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> e_;
};

std::vector<double> matvec(const RMat& a, std::span<const double> x);

// I_t (x) a, the only Kronecker form the real-equivalent channel needs.
RMat kron_identity(std::size_t t, const RMat& a);

// Realification: every entry a+jb becomes the 2x2 block [[a,-b],[b,a]].
RMat check_realify(const CMat& x);

// Interleaves real and imaginary parts: [x1I, x1Q, x2I, x2Q, ...].
std::vector<double> vec_realify(std::span<const cplx> x);

// Column-major vectorization.
std::vector<cplx> vec_col_major(const CMat& x);

// Determinant by LU with partial pivoting; a singular matrix returns 0.
cplx det_c(CMat a);
double det_real(RMat a);

// Eigenvalues of x x^H (the squared singular values of x), descending.
// Tiny negatives from roundoff are clamped to zero.
std::vector<double> gram_eigvals(const CMat& x);

// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps, descending.
std::vector<double> hermitian_eigvals(CMat a);

// Real symmetric case, same algorithm.
std::vector<double> symmetric_eigvals(const RMat& a);

struct QrResult {
    RMat q;  // rows x cols, orthonormal columns
    RMat r;  // cols x cols, upper triangular, nonnegative diagonal
};

// Thin Householder QR. Requires rows >= cols and full column rank;
// throws RankDeficientError otherwise.
QrResult qr_real(const RMat& a);

}  // namespace stbclab
