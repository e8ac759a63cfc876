#include "stbclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "stbclab/constants.hpp"

namespace stbclab {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

CMat CMat::identity(std::size_t n) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::hermitian() const {
    CMat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

double CMat::frob_norm() const {
    double s = 0;
    for (const cplx& v : e_) s += std::norm(v);
    return std::sqrt(s);
}

bool CMat::all_finite() const {
    for (const cplx& v : e_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

CMat operator+(const CMat& a, const CMat& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sum: dimension mismatch");
    CMat m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] = a.e_[i] + b.e_[i];
    return m;
}

CMat operator-(const CMat& a, const CMat& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix difference: dimension mismatch");
    CMat m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] = a.e_[i] - b.e_[i];
    return m;
}

CMat operator*(const CMat& a, const CMat& b) {
    require(a.cols_ == b.rows_, "matrix product: dimension mismatch");
    CMat m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            cplx aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

CMat operator*(cplx s, const CMat& a) {
    CMat m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = s * a.e_[i];
    return m;
}

RMat RMat::identity(std::size_t n) {
    RMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RMat RMat::transpose() const {
    RMat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

double RMat::frob_norm() const {
    double s = 0;
    for (double v : e_) s += v * v;
    return std::sqrt(s);
}

bool RMat::all_finite() const {
    for (double v : e_)
        if (!std::isfinite(v)) return false;
    return true;
}

RMat operator+(const RMat& a, const RMat& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sum: dimension mismatch");
    RMat m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] = a.e_[i] + b.e_[i];
    return m;
}

RMat operator-(const RMat& a, const RMat& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix difference: dimension mismatch");
    RMat m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] = a.e_[i] - b.e_[i];
    return m;
}

RMat operator*(const RMat& a, const RMat& b) {
    require(a.cols_ == b.rows_, "matrix product: dimension mismatch");
    RMat m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

RMat operator*(double s, const RMat& a) {
    RMat m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = s * a.e_[i];
    return m;
}

std::vector<double> matvec(const RMat& a, std::span<const double> x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

RMat kron_identity(std::size_t t, const RMat& a) {
    RMat m(t * a.rows(), t * a.cols());
    for (std::size_t b = 0; b < t; ++b)
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                m(b * a.rows() + i, b * a.cols() + j) = a(i, j);
    return m;
}

RMat check_realify(const CMat& x) {
    RMat m(2 * x.rows(), 2 * x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double re = x(i, j).real(), im = x(i, j).imag();
            m(2 * i, 2 * j) = re;
            m(2 * i, 2 * j + 1) = -im;
            m(2 * i + 1, 2 * j) = im;
            m(2 * i + 1, 2 * j + 1) = re;
        }
    return m;
}

std::vector<double> vec_realify(std::span<const cplx> x) {
    std::vector<double> v(2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        v[2 * i] = x[i].real();
        v[2 * i + 1] = x[i].imag();
    }
    return v;
}

std::vector<cplx> vec_col_major(const CMat& x) {
    std::vector<cplx> v;
    v.reserve(x.rows() * x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) v.push_back(x(i, j));
    return v;
}

cplx det_c(CMat a) {
    require(a.rows() == a.cols(), "det: matrix must be square");
    const std::size_t n = a.rows();
    cplx det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                p = i;
            }
        if (best == 0.0) return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

double det_real(RMat a) {
    require(a.rows() == a.cols(), "det: matrix must be square");
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                p = i;
            }
        if (best == 0.0) return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

// Cyclic Jacobi with two-sided unitary rotations. Each rotation zeroes one
// off-diagonal pair; convergence is quadratic once sweeps settle.
std::vector<double> hermitian_eigvals(CMat a) {
    require(a.rows() == a.cols(), "eigvals: matrix must be square");
    const std::size_t n = a.rows();
    if (n == 0) return {};
    const double fro = std::max(a.frob_norm(), 1e-300);
    const double stop = 1e-14 * fro;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2 * off) <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= 1e-300) continue;
                const cplx phase = a(p, q) / r;  // e^{i arg(a_pq)}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double phi = 0.5 * std::atan2(2 * r, app - aqq);
                const double c = std::cos(phi), s = std::sin(phi);

                // Columns of the rotation: u = [c; s e^{-i th}], v = [-s e^{i th}; c].
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * c + aiq * s * std::conj(phase);
                    a(i, q) = -aip * s * phase + aiq * c;
                    a(p, i) = std::conj(a(i, p));
                    a(q, i) = std::conj(a(i, q));
                }
                a(p, p) = c * c * app + 2 * c * s * r + s * s * aqq;
                a(q, q) = s * s * app - 2 * c * s * r + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

std::vector<double> symmetric_eigvals(const RMat& a) {
    CMat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    return hermitian_eigvals(std::move(c));
}

std::vector<double> gram_eigvals(const CMat& x) {
    CMat g = x * x.hermitian();
    std::vector<double> ev = hermitian_eigvals(std::move(g));
    const double lmax = ev.empty() ? 0.0 : std::max(ev.front(), 0.0);
    const double clamp = tol::gram_clamp * std::max(1.0, lmax);
    for (double& v : ev) {
        if (v < 0.0) {
            if (v < -clamp)
                throw NumericalError("gram_eigvals: eigenvalue significantly negative");
            v = 0.0;
        }
    }
    return ev;
}

QrResult qr_real(const RMat& a) {
    const std::size_t m = a.rows(), n = a.cols();
    require(m >= n, "qr: need rows >= cols");
    require(n > 0, "qr: empty matrix");

    RMat r = a;
    std::vector<std::vector<double>> reflectors;
    reflectors.reserve(n);

    double colscale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        colscale = std::max(colscale, std::sqrt(s));
    }
    if (colscale == 0.0) throw RankDeficientError("qr: zero matrix has no full-rank factorization");

    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0;
        for (std::size_t i = k; i < m; ++i) norm += r(i, k) * r(i, k);
        norm = std::sqrt(norm);
        if (norm <= tol::rank_threshold * colscale)
            throw RankDeficientError("qr: rank-deficient matrix (column " + std::to_string(k) +
                                     " is dependent)");
        std::vector<double> v(m - k);
        double alpha = r(k, k) >= 0 ? -norm : norm;
        v[0] = r(k, k) - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i - k] = r(i, k);
        double vnorm2 = 0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 > 0) {
            for (std::size_t j = k; j < n; ++j) {
                double dot = 0;
                for (std::size_t i = k; i < m; ++i) dot += v[i - k] * r(i, j);
                double f = 2 * dot / vnorm2;
                for (std::size_t i = k; i < m; ++i) r(i, j) -= f * v[i - k];
            }
        }
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0;
        reflectors.push_back(std::move(v));
    }

    // Q = H_0 ... H_{n-1} applied to the first n columns of I_m.
    RMat q(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t k = n; k-- > 0;) {
        const std::vector<double>& v = reflectors[k];
        double vnorm2 = 0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * q(i, j);
            double f = 2 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) q(i, j) -= f * v[i - k];
        }
    }

    // Fix signs so the diagonal of R is nonnegative.
    RMat rr(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rr(i, j) = r(i, j);
    for (std::size_t k = 0; k < n; ++k) {
        if (rr(k, k) < 0) {
            for (std::size_t j = 0; j < n; ++j) rr(k, j) = -rr(k, j);
            for (std::size_t i = 0; i < m; ++i) q(i, k) = -q(i, k);
        }
    }
    return {std::move(q), std::move(rr)};
}

}  // namespace stbclab
