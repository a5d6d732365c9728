#pragma once
//
// structmap/kernels.hpp : dense decomposition kernels.
//
// Rank-aware Moore-Penrose pseudoinverse, Takagi factorizations of complex
// symmetric and skew-symmetric matrices, PSD square roots and the
// Davis-Kahan-Weinberger norm-preserving dilation.
//

#include "structmap/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace structmap {

/// Full SVD A = U diag(s) V^H with the numerical rank under a relative
/// threshold on the largest singular value.
struct SvdResult {
    Matrix U;
    RealVector singular_values;
    Matrix V;
    Index rank = 0;
};

inline SvdResult svd(const Matrix& A, double rank_rtol = 0.0) {
    Eigen::JacobiSVD<Matrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult out;
    out.U = dec.matrixU();
    out.V = dec.matrixV();
    out.singular_values = dec.singularValues();
    const double rtol = rank_rtol > 0.0
                            ? rank_rtol
                            : ToleranceProfile{}.effective_rank_rtol(A.rows(), A.cols());
    const double s0 = out.singular_values.size() > 0 ? out.singular_values(0) : 0.0;
    out.rank = 0;
    for (Index i = 0; i < out.singular_values.size(); ++i)
        if (out.singular_values(i) > rtol * s0) ++out.rank;
    if (s0 == 0.0) out.rank = 0;
    return out;
}

inline double spectral_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> dec(A);
    return dec.singularValues().size() > 0 ? dec.singularValues()(0) : 0.0;
}

/// Moore-Penrose pseudoinverse with rank truncation relative to sigma_1.
template <typename MatT>
MatT pinv_of(const MatT& A, double rank_rtol = 0.0, Index* rank_out = nullptr) {
    Eigen::JacobiSVD<MatT> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = dec.singularValues();
    const double rtol =
        rank_rtol > 0.0 ? rank_rtol : ToleranceProfile{}.effective_rank_rtol(A.rows(), A.cols());
    const double s0 = s.size() > 0 ? s(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    Index rank = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > rtol * s0 && s(i) > 0.0) {
            inv(i) = 1.0 / s(i);
            ++rank;
        }
    if (rank_out) *rank_out = rank;
    return dec.matrixV() * inv.asDiagonal() * dec.matrixU().adjoint();
}

inline Matrix pinv(const Matrix& A, double rank_rtol = 0.0, Index* rank_out = nullptr) {
    return pinv_of<Matrix>(A, rank_rtol, rank_out);
}

/// Takagi factorization A = U * middle * U^T of a complex symmetric
/// (middle = diag(values), values >= 0 descending) or skew-symmetric matrix
/// (middle = blockdiag([[0,s_j],[-s_j,0]]), |s_j| descending, one trailing
/// zero row/column when n is odd).
struct TakagiResult {
    Matrix U;
    RealVector values;
    bool skew = false;

    Matrix middle() const {
        const Index n = U.rows();
        Matrix D = Matrix::Zero(n, n);
        if (!skew) {
            for (Index i = 0; i < values.size(); ++i) D(i, i) = values(i);
        } else {
            for (Index j = 0; j < values.size(); ++j) {
                D(2 * j, 2 * j + 1) = values(j);
                D(2 * j + 1, 2 * j) = -values(j);
            }
        }
        return D;
    }

    /// Magnitudes expanded to all n singular values, descending.
    RealVector singular_values() const {
        const Index n = U.rows();
        RealVector s = RealVector::Zero(n);
        if (!skew) {
            s = values;
        } else {
            for (Index j = 0; j < values.size(); ++j) {
                s(2 * j) = values(j);
                s(2 * j + 1) = values(j);
            }
        }
        std::sort(s.data(), s.data() + s.size(), std::greater<double>());
        return s;
    }
};

namespace detail {

// Unitary complement: columns 2..k of a unitary whose first column spans c.
inline Matrix householder_complement(const Matrix& cols) {
    const Index k = cols.rows();
    const Index m = cols.cols();
    Eigen::HouseholderQR<Matrix> qr(cols);
    Matrix Q = qr.householderQ();
    return Q.rightCols(k - m);
}

}  // namespace detail

/// Takagi factorization of a complex symmetric matrix by repeated deflation:
/// each step extracts a con-eigenvector c with A conj(c) = sigma c from the
/// leading singular pair and restricts A to the unitary complement.
inline TakagiResult takagi_sym(const Matrix& A, double tol = 1e-10) {
    const Index n = A.rows();
    if (A.cols() != n) throw Error(Errc::shape_mismatch, "takagi_sym: matrix must be square");
    const double scale = std::max(1.0, A.norm());
    if ((A - A.transpose()).norm() > tol * scale)
        throw Error(Errc::bad_argument, "takagi_sym: matrix is not complex symmetric");

    TakagiResult out;
    out.skew = false;
    out.U = Matrix::Zero(n, n);
    out.values = RealVector::Zero(n);
    Matrix G = Matrix::Identity(n, n);  // embeds deflated coordinates
    Matrix Ak = 0.5 * (A + A.transpose());
    for (Index j = 0; j < n; ++j) {
        const Index k = Ak.rows();
        Eigen::JacobiSVD<Matrix> dec(Ak, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double sigma = dec.singularValues()(0);
        const Vector v = dec.matrixV().col(0);
        const Vector u = dec.matrixU().col(0);
        Vector c;
        if (sigma <= 1e-14 * scale) {
            c = v.conjugate();
        } else {
            const Complex t = v.transpose() * u;
            const double theta = std::abs(t) > 1e-12 ? std::arg(t) : 0.0;
            c = std::polar(1.0, theta / 2) * v.conjugate() + std::polar(1.0, -theta / 2) * u;
            c.normalize();
        }
        out.values(j) = sigma;
        out.U.col(j) = G * c;
        if (k == 1) break;
        const Matrix P = detail::householder_complement(c);
        Ak = P.adjoint() * Ak * P.conjugate();
        Ak = 0.5 * (Ak + Ak.transpose());
        G = G * P;
    }
    // deflation returns magnitudes in descending order up to roundoff;
    // enforce it exactly by permuting columns together with values
    std::vector<Index> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), Index(0));
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Index a, Index b) { return out.values(a) > out.values(b); });
    Matrix U = out.U;
    RealVector vals = out.values;
    for (Index i = 0; i < n; ++i) {
        out.U.col(i) = U.col(perm[static_cast<size_t>(i)]);
        out.values(i) = vals(perm[static_cast<size_t>(i)]);
    }
    return out;
}

/// Takagi factorization of a complex skew-symmetric matrix: deflates one
/// canonical 2x2 block per step using the pair (conj(v), -Av/|Av|) built from
/// the leading right singular vector v.
inline TakagiResult takagi_skew(const Matrix& A, double tol = 1e-10) {
    const Index n = A.rows();
    if (A.cols() != n) throw Error(Errc::shape_mismatch, "takagi_skew: matrix must be square");
    const double scale = std::max(1.0, A.norm());
    if ((A + A.transpose()).norm() > tol * scale)
        throw Error(Errc::bad_argument, "takagi_skew: matrix is not skew-symmetric");

    TakagiResult out;
    out.skew = true;
    out.U = Matrix::Zero(n, n);
    out.values = RealVector::Zero(n / 2);
    Matrix G = Matrix::Identity(n, n);
    Matrix Ak = 0.5 * (A - A.transpose());
    Index col = 0;
    Index block = 0;
    while (Ak.rows() > 0) {
        const Index k = Ak.rows();
        double sigma = 0.0;
        Vector v;
        if (k > 1) {
            Eigen::JacobiSVD<Matrix> dec(Ak, Eigen::ComputeThinV);
            sigma = dec.singularValues()(0);
            v = dec.matrixV().col(0);
        }
        if (k == 1 || sigma <= 1e-14 * scale) {
            // remainder is numerically zero: any orthonormal completion works
            out.U.block(0, col, n, k) = G;
            break;
        }
        Vector u = Ak * v;
        const double s = u.norm();
        u /= s;
        Matrix pair(k, 2);
        pair.col(0) = v.conjugate();
        pair.col(1) = -u;
        out.U.col(col) = G * pair.col(0);
        out.U.col(col + 1) = G * pair.col(1);
        out.values(block) = s;
        col += 2;
        ++block;
        if (k == 2) break;
        const Matrix P = detail::householder_complement(pair);
        Ak = P.adjoint() * Ak * P.conjugate();
        Ak = 0.5 * (Ak - Ak.transpose());
        G = G * P;
    }
    return out;
}

/// Hermitian PSD square root.  Eigenvalues in [-10*eps*|A|_2, 0] are clamped
/// to zero; anything below that window is rejected as indefinite input.
inline Matrix psd_sqrt(const Matrix& A, double tol = 1e-10) {
    const Index n = A.rows();
    if (A.cols() != n) throw Error(Errc::shape_mismatch, "psd_sqrt: matrix must be square");
    if ((A - A.adjoint()).norm() > tol * std::max(1.0, A.norm()))
        throw Error(Errc::bad_argument, "psd_sqrt: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (A + A.adjoint()));
    RealVector w = eig.eigenvalues();
    const double top = w.size() > 0 ? std::max(0.0, w(w.size() - 1)) : 0.0;
    const double clamp_window = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, top);
    for (Index i = 0; i < w.size(); ++i) {
        if (w(i) < -clamp_window * 1e4)
            throw Error(Errc::bad_argument,
                        "psd_sqrt: matrix has a negative eigenvalue " + std::to_string(w(i)));
        w(i) = std::sqrt(std::max(0.0, w(i)));
    }
    Matrix S = eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().adjoint();
    return 0.5 * (S + S.adjoint());
}

namespace detail {

// H^{-1/2} of a Hermitian PSD matrix, eigenvalues at or below trunc_abs
// replaced by 0 (Moore-Penrose branch).
inline Matrix psd_inv_sqrt(const Matrix& H, double trunc_abs) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (H + H.adjoint()));
    RealVector w = eig.eigenvalues();
    for (Index i = 0; i < w.size(); ++i)
        w(i) = w(i) > trunc_abs ? 1.0 / std::sqrt(w(i)) : 0.0;
    return eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().adjoint();
}

// Clamped PSD sqrt for the dilation factors (no Hermitian-ness check; the
// argument is Hermitian by construction up to roundoff).
inline Matrix psd_sqrt_clamped(const Matrix& H) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (H + H.adjoint()));
    RealVector w = eig.eigenvalues();
    for (Index i = 0; i < w.size(); ++i) w(i) = std::sqrt(std::max(0.0, w(i)));
    return eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace detail

/// Davis-Kahan-Weinberger completion: given the three blocks of
/// T = [[A, C], [B, D]] and mu >= max(|[A;B]|_2, |[A C]|_2), returns
///   D = -K A^H L + mu (I - K K^H)^{1/2} Z (I - L^H L)^{1/2},
///   K^H = (mu^2 I - A^H A)^{-1/2} B^H,  L = (mu^2 I - A A^H)^{-1/2} C,
/// so that |T|_2 <= mu for any contraction Z.  Singular middle factors take
/// the Moore-Penrose branch (truncation at mu^2 * 1e-12).
inline Matrix dkw_complete(const Matrix& A, const Matrix& B, const Matrix& C, double mu,
                           const Matrix& Z, double tol = 1e-10) {
    const Index p = A.rows(), q = A.cols();
    if (B.cols() != q) throw Error(Errc::shape_mismatch, "dkw_complete: B must share A's columns");
    if (C.rows() != p) throw Error(Errc::shape_mismatch, "dkw_complete: C must share A's rows");
    const Index r = B.rows(), s = C.cols();
    if (Z.rows() != r || Z.cols() != s)
        throw Error(Errc::shape_mismatch, "dkw_complete: Z must have B.rows() x C.cols()");
    Matrix col(p + r, q), row(p, q + s);
    col << A, B;
    row << A, C;
    const double col_norm = spectral_norm(col);
    const double row_norm = spectral_norm(row);
    const double bound = std::max(col_norm, row_norm);
    if (mu < bound * (1.0 - tol))
        throw Error(Errc::bad_argument,
                    "dkw_complete: mu = " + std::to_string(mu) + " is below the dilation bound " +
                        std::to_string(bound) + " (column block " + std::to_string(col_norm) +
                        ", row block " + std::to_string(row_norm) + ")");
    if (spectral_norm(Z) > 1.0 + tol)
        throw Error(Errc::bad_argument, "dkw_complete: Z is not a contraction");
    const double trunc = mu * mu * 1e-12;
    const Matrix K =
        B * detail::psd_inv_sqrt(mu * mu * Matrix::Identity(q, q) - A.adjoint() * A, trunc);
    const Matrix L =
        detail::psd_inv_sqrt(mu * mu * Matrix::Identity(p, p) - A * A.adjoint(), trunc) * C;
    const Matrix left = detail::psd_sqrt_clamped(Matrix::Identity(r, r) - K * K.adjoint());
    const Matrix right = detail::psd_sqrt_clamped(Matrix::Identity(s, s) - L.adjoint() * L);
    return -K * A.adjoint() * L + mu * left * Z * right;
}

}  // namespace structmap
