#pragma once
//
// structmap/mapping.hpp : the structured mapping problem.
//
// Given X, B in K^{n x p} and a Jordan/Lie algebra S of an orthosymmetric
// scalar product, decides whether {A in S : AX = B} is nonempty, parametrizes
// the whole solution set, and produces the minimal-norm solutions: a unique
// Frobenius-optimal one and an infinite spectral-optimal family reached
// through a norm-preserving dilation.
//
// Everything reduces to the four prototype classes: A solves the problem in S
// iff M*A solves (X, M*B) as a (skew-)symmetric/(skew-)Hermitian matrix.
//

#include "structmap/kernels.hpp"
#include "structmap/structure.hpp"
#include "structmap/types.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace structmap {

enum class Star { transpose, conj_transpose };
enum class FMapBranch { automatic, symmetric, skew, plain };
enum class NormKind { frobenius, spectral };

inline const char* norm_name(NormKind k) {
    return k == NormKind::frobenius ? "frobenius" : "spectral";
}

struct MappingProblem {
    Matrix X;
    Matrix B;
    StructureSpec spec;
    ToleranceProfile tol;
};

inline MappingProblem make_mapping_problem(Matrix X, Matrix B, StructureSpec spec,
                                           ToleranceProfile tol = {}) {
    tol.validate();
    if (X.rows() != B.rows() || X.cols() != B.cols())
        throw Error(Errc::shape_mismatch, "X and B must have the same shape");
    if (X.rows() != spec.n)
        throw Error(Errc::shape_mismatch, "X has " + std::to_string(X.rows()) +
                                              " rows but the structure has dimension " +
                                              std::to_string(spec.n));
    return {std::move(X), std::move(B), std::move(spec), tol};
}

/// Outcome of the two existence conditions: (a) B X^dag X = B (range) and
/// (b) the (skew-)symmetry of X* M B demanded by the prototype class.
struct ExistenceReport {
    bool exists = false;
    bool range_ok = false;
    bool symmetry_ok = false;
    double defect_range = 0.0;
    double defect_symmetry = 0.0;
};

class NotSolvableError : public Error {
public:
    NotSolvableError(const ExistenceReport& report, const std::string& what)
        : Error(Errc::not_solvable, what), report_(report) {}
    const ExistenceReport& report() const noexcept { return report_; }

private:
    ExistenceReport report_;
};

struct OptimalSolution {
    Matrix A;
    NormKind norm_kind = NormKind::frobenius;
    double norm_value = 0.0;
    double sigma = 0.0;  // the optimal value sigma^S(X, B)
    bool unique = false;
};

namespace detail {

template <typename MatT>
MatT star_of(const MatT& A, bool conj) {
    if constexpr (Eigen::NumTraits<typename MatT::Scalar>::IsComplex) {
        return conj ? MatT(A.adjoint()) : MatT(A.transpose());
    } else {
        (void)conj;
        return MatT(A.transpose());
    }
}

// F(X,B) = B X^dag + s (B X^dag)* - (X^dag)* (X* B) X^dag for s = +/-1, or
// the plain candidate B X^dag.  Maps X to B whenever B X^dag X = B, and lands
// in the prototype class matching the (skew-)symmetry of X* B.
template <typename MatT>
MatT f_map_impl(const MatT& X, const MatT& B, bool conj_star, int branch_sign,
                double rank_rtol) {
    const MatT Xd = pinv_of<MatT>(X, rank_rtol);
    const MatT G = B * Xd;
    if (branch_sign == 0) return G;
    const MatT W = star_of(X, conj_star) * B;
    const MatT Xds = star_of(Xd, conj_star);
    return G + double(branch_sign) * star_of(G, conj_star) - Xds * W * Xd;
}

inline int auto_branch_sign(const Matrix& X, const Matrix& B, bool conj_star,
                            double residual_rtol) {
    const Matrix W = star_of(X, conj_star) * B;
    const Matrix Ws = star_of(W, conj_star);
    const double scale = std::max(1.0, W.norm());
    if ((Ws - W).norm() <= residual_rtol * scale) return +1;
    if ((Ws + W).norm() <= residual_rtol * scale) return -1;
    return 0;
}

inline int branch_sign_for(PrototypeClass cls) {
    return (cls == PrototypeClass::sym || cls == PrototypeClass::herm) ? +1 : -1;
}

inline bool real_valued(const Matrix& A) { return A.imag().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace detail

/// The candidate-solution map F_T / F_H.  With FMapBranch::automatic the
/// branch follows the measured (skew-)symmetry of X* B, falling back to the
/// plain candidate B X^dag when neither holds.
inline Matrix f_map(const Matrix& X, const Matrix& B, Star star,
                    FMapBranch branch = FMapBranch::automatic, double rank_rtol = 0.0,
                    double residual_rtol = 1e-10) {
    if (X.rows() != B.rows() || X.cols() != B.cols())
        throw Error(Errc::shape_mismatch, "f_map: X and B must have the same shape");
    const bool conj = star == Star::conj_transpose;
    int sign = 0;
    switch (branch) {
        case FMapBranch::automatic: sign = detail::auto_branch_sign(X, B, conj, residual_rtol); break;
        case FMapBranch::symmetric: sign = +1; break;
        case FMapBranch::skew: sign = -1; break;
        case FMapBranch::plain: sign = 0; break;
    }
    if (!conj && detail::real_valued(X) && detail::real_valued(B)) {
        const RealMatrix F =
            detail::f_map_impl<RealMatrix>(X.real(), B.real(), false, sign, rank_rtol);
        return F.cast<Complex>();
    }
    return detail::f_map_impl<Matrix>(X, B, conj, sign, rank_rtol);
}

namespace detail {

struct Prepared {
    SvdResult xsvd;
    Matrix Xd;        // X^dag
    Matrix PX;        // X X^dag (Hermitian projector onto range X)
    Matrix Bp;        // M B
    bool full_column_rank = false;
    double rank_rtol = 0.0;
};

inline Prepared prepare(const MappingProblem& prob) {
    Prepared w;
    w.rank_rtol = prob.tol.effective_rank_rtol(prob.X.rows(), prob.X.cols());
    w.xsvd = svd(prob.X, w.rank_rtol);
    const Index n = prob.X.rows();
    const Index r = w.xsvd.rank;
    RealVector inv = RealVector::Zero(w.xsvd.singular_values.size());
    for (Index i = 0; i < r; ++i) inv(i) = 1.0 / w.xsvd.singular_values(i);
    Matrix Vthin = w.xsvd.V.leftCols(w.xsvd.singular_values.size());
    Matrix Uthin = w.xsvd.U.leftCols(w.xsvd.singular_values.size());
    w.Xd = Vthin * inv.asDiagonal() * Uthin.adjoint();
    w.PX = w.xsvd.U.leftCols(r) * w.xsvd.U.leftCols(r).adjoint();
    w.Bp = prob.spec.m_is_identity ? prob.B : Matrix(prob.spec.M * prob.B);
    w.full_column_rank = (r == prob.X.cols());
    return w;
}

inline ExistenceReport existence_of(const MappingProblem& prob, const Prepared& w) {
    ExistenceReport rep;
    rep.defect_range = (prob.B * w.Xd * prob.X - prob.B).norm();
    rep.range_ok =
        w.full_column_rank || rep.defect_range <= prob.tol.residual_rtol * prob.B.norm();
    const bool conj = prob.spec.form == Form::sesquilinear;
    const Matrix W = star_of(prob.X, conj) * w.Bp;
    const double sign = branch_sign_for(prob.spec.prototype);
    rep.defect_symmetry = (star_of(W, conj) - sign * W).norm();
    rep.symmetry_ok = rep.defect_symmetry <= prob.tol.residual_rtol * std::max(1.0, W.norm());
    rep.exists = rep.range_ok && rep.symmetry_ok;
    return rep;
}

inline void require_solvable(const MappingProblem& prob, const Prepared& w) {
    const ExistenceReport rep = existence_of(prob, w);
    if (!rep.exists)
        throw NotSolvableError(
            rep, "no structured solution of AX = B (range defect " +
                     std::to_string(rep.defect_range) + ", symmetry defect " +
                     std::to_string(rep.defect_symmetry) + ")");
}

// Unique Frobenius-optimal prototype solution M*A via F_*, staying in real
// arithmetic for real bilinear data.
inline Matrix frobenius_prototype(const MappingProblem& prob, const Prepared& w) {
    const bool conj = prob.spec.form == Form::sesquilinear;
    const int sign = branch_sign_for(prob.spec.prototype);
    if (!conj && real_valued(prob.X) && real_valued(w.Bp)) {
        const RealMatrix F =
            f_map_impl<RealMatrix>(RealMatrix(prob.X.real()), RealMatrix(w.Bp.real()), false,
                                   sign, w.rank_rtol);
        return F.cast<Complex>();
    }
    return f_map_impl<Matrix>(prob.X, w.Bp, conj, sign, w.rank_rtol);
}

inline double sigma_frobenius_closed_form(const MappingProblem& prob, const Prepared& w) {
    const Matrix G = w.Bp * w.Xd;  // M B X^dag
    const Matrix GGh = G * G.adjoint();
    // Tr(M1 M2) = sum_ij M1(i,j) M2(j,i)
    Complex t;
    if (prob.spec.form == Form::bilinear)
        t = (GGh.cwiseProduct(w.PX)).sum();  // Tr(G G^H (XX^dag)^T)
    else
        t = (GGh.cwiseProduct(w.PX.transpose())).sum();  // Tr(G G^H XX^dag)
    const double val = 2.0 * G.squaredNorm() - t.real();
    return std::sqrt(std::max(0.0, val));
}

// Spectral-optimal prototype solution for cls in {sym, skew, herm}; the
// skew-Hermitian class is reached by the caller through S = -i H with H the
// Hermitian solution of H X = i M B.
inline Matrix spectral_prototype(const Matrix& X, const Matrix& Bp, PrototypeClass cls,
                                 const Matrix& Z, double rank_rtol) {
    const Index n = X.rows();
    const SvdResult xs = svd(X, rank_rtol);
    const Index r = xs.rank;
    const Matrix U1 = xs.U.leftCols(r);
    const Matrix U2 = xs.U.rightCols(n - r);
    RealVector inv = RealVector::Zero(xs.singular_values.size());
    for (Index i = 0; i < r; ++i) inv(i) = 1.0 / xs.singular_values(i);
    const Matrix Xd = xs.V.leftCols(xs.singular_values.size()) * inv.asDiagonal() *
                      xs.U.leftCols(xs.singular_values.size()).adjoint();
    const Matrix C = Bp * Xd;
    const double mu = spectral_norm(C);
    const Matrix P = Matrix::Identity(n, n) - X * Xd;
    const double trunc = mu * mu * 1e-12;
    const Matrix I_r = Matrix::Identity(r, r);
    const Matrix I_m = Matrix::Identity(n - r, n - r);

    if (cls == PrototypeClass::sym || cls == PrototypeClass::skew_sym) {
        const int sign = branch_sign_for(cls);
        const Matrix F = f_map_impl<Matrix>(X, Bp, false, sign, rank_rtol);
        const Matrix M0 = U1.adjoint() * C.conjugate() * C * U1;
        const Matrix K =
            C * U1 * psd_inv_sqrt(mu * mu * I_r - double(sign) * M0, trunc);
        const Matrix mid = P.transpose() * K * (U1.adjoint() * (C * U1).conjugate()) *
                           K.transpose() * P;
        const Matrix S1 = psd_sqrt_clamped(I_m - U2.transpose() * K * K.adjoint() * U2.conjugate());
        const Matrix S2 = psd_sqrt_clamped(I_m - U2.adjoint() * K.conjugate() * K.transpose() * U2);
        return F - mid + mu * U2.conjugate() * S1 * Z * S2 * U2.adjoint();
    }
    // Hermitian
    const Matrix F = f_map_impl<Matrix>(X, Bp, true, +1, rank_rtol);
    const Matrix M0 = U1.adjoint() * C * C * U1;
    const Matrix K = C * U1 * psd_inv_sqrt(mu * mu * I_r - M0, trunc);
    const Matrix mid = P * K * (U1.adjoint() * C * U1) * K.adjoint() * P;
    const Matrix S1 = psd_sqrt_clamped(I_m - U2.adjoint() * K * K.adjoint() * U2);
    return F - mid + mu * U2 * S1 * Z * S1 * U2.adjoint();
}

inline void validate_free_parameter(const Matrix& Z, Index m, PrototypeClass cls, double tol) {
    if (Z.rows() != m || Z.cols() != m)
        throw Error(Errc::bad_argument, "free parameter Z must be " + std::to_string(m) + " x " +
                                            std::to_string(m));
    if (m == 0) return;
    if (spectral_norm(Z) > 1.0 + tol)
        throw Error(Errc::bad_argument, "free parameter Z must be a contraction");
    const double scale = std::max(1.0, Z.norm());
    double defect = 0.0;
    switch (cls) {
        case PrototypeClass::sym: defect = (Z - Z.transpose()).norm(); break;
        case PrototypeClass::skew_sym: defect = (Z + Z.transpose()).norm(); break;
        // the skew-Hermitian family is parametrized by Hermitian contractions
        // through the -i reduction
        case PrototypeClass::herm:
        case PrototypeClass::skew_herm: defect = (Z - Z.adjoint()).norm(); break;
    }
    if (defect > tol * scale)
        throw Error(Errc::bad_argument,
                    "free parameter Z does not have the required (skew-)symmetry");
}

}  // namespace detail

inline ExistenceReport check_existence(const MappingProblem& prob) {
    return detail::existence_of(prob, detail::prepare(prob));
}

/// Unique Frobenius-optimal structured solution A_o = M^{-1} F_*(X, M B).
inline OptimalSolution solve_frobenius(const MappingProblem& prob) {
    const detail::Prepared w = detail::prepare(prob);
    detail::require_solvable(prob, w);
    const Matrix S = detail::frobenius_prototype(prob, w);
    OptimalSolution sol;
    sol.A = prob.spec.m_is_identity ? S : Matrix(prob.spec.M.adjoint() * S);
    sol.norm_kind = NormKind::frobenius;
    sol.norm_value = sol.A.norm();
    sol.sigma = detail::sigma_frobenius_closed_form(prob, w);
    sol.unique = true;
    return sol;
}

/// A spectral-optimal structured solution with |A|_2 = |B X^dag|_2.  The
/// optional contraction Z ((n-r) x (n-r), symmetric / skew-symmetric /
/// Hermitian as dictated by the prototype class, Hermitian for the
/// skew-Hermitian class) sweeps the infinite optimal family; Z = 0 by
/// default.
inline OptimalSolution solve_spectral(const MappingProblem& prob,
                                      const std::optional<Matrix>& Z = std::nullopt) {
    const detail::Prepared w = detail::prepare(prob);
    detail::require_solvable(prob, w);
    const Index m = prob.X.rows() - w.xsvd.rank;
    Matrix Zc = Z.value_or(Matrix::Zero(m, m));
    detail::validate_free_parameter(Zc, m, prob.spec.prototype, prob.tol.residual_rtol);
    Matrix S;
    if (prob.spec.prototype == PrototypeClass::skew_herm) {
        const Matrix H = detail::spectral_prototype(prob.X, Complex(0, 1) * w.Bp,
                                                    PrototypeClass::herm, Zc, w.rank_rtol);
        S = Complex(0, -1) * H;
    } else {
        S = detail::spectral_prototype(prob.X, w.Bp, prob.spec.prototype, Zc, w.rank_rtol);
    }
    OptimalSolution sol;
    sol.A = prob.spec.m_is_identity ? S : Matrix(prob.spec.M.adjoint() * S);
    sol.norm_kind = NormKind::spectral;
    sol.norm_value = spectral_norm(sol.A);
    sol.sigma = spectral_norm(prob.B * w.Xd);
    sol.unique = false;
    return sol;
}

/// All structured solutions: A = base + M^{-1} Pl Z Pr over Z in the
/// prototype class of M*S, with base the Frobenius-optimal solution,
/// Pl = (I - XX^dag)^T (bilinear) or I - XX^dag (sesquilinear) and
/// Pr = I - XX^dag.
struct SolutionFamily {
    Matrix base;
    Matrix projector_left;
    Matrix projector_right;
    PrototypeClass prototype = PrototypeClass::herm;
    Matrix M;
};

inline SolutionFamily solution_family(const MappingProblem& prob) {
    const detail::Prepared w = detail::prepare(prob);
    detail::require_solvable(prob, w);
    const Matrix S = detail::frobenius_prototype(prob, w);
    SolutionFamily fam;
    fam.base = prob.spec.m_is_identity ? S : Matrix(prob.spec.M.adjoint() * S);
    const Matrix P = Matrix::Identity(prob.spec.n, prob.spec.n) - w.PX;
    fam.projector_left = prob.spec.form == Form::bilinear ? Matrix(P.transpose()) : P;
    fam.projector_right = P;
    fam.prototype = prob.spec.prototype;
    fam.M = prob.spec.M;
    return fam;
}

/// Family member for an arbitrary Z (projected into the prototype class).
inline Matrix family_member(const SolutionFamily& fam, const Matrix& Z) {
    if (Z.rows() != fam.base.rows() || Z.cols() != fam.base.cols())
        throw Error(Errc::shape_mismatch, "family parameter must be n x n");
    const Matrix Zp = project_to_prototype(Z, fam.prototype);
    return fam.base + fam.M.adjoint() * (fam.projector_left * Zp * fam.projector_right);
}

/// Parameter recovering a known structured solution: family_member(fam,
/// recover_parameter(fam, A)) == A for every A in the solution set.
inline Matrix recover_parameter(const SolutionFamily& fam, const Matrix& A) {
    return fam.M * (A - fam.base);
}

struct SigmaValues {
    double frobenius = 0.0;
    double spectral = 0.0;
    double unstructured = 0.0;
};

/// Frobenius-optimal value through the full-column-rank closed form
/// (X^dag replaced by (X^H X)^{-1/2} factors).  Requires rank(X) = p.
inline double sigma_frobenius_full_rank(const MappingProblem& prob) {
    const detail::Prepared w = detail::prepare(prob);
    if (!w.full_column_rank)
        throw Error(Errc::bad_argument, "sigma_frobenius_full_rank: X is rank deficient");
    const Matrix XhX = prob.X.adjoint() * prob.X;
    const Matrix Sr = detail::psd_inv_sqrt(XhX, 0.0);
    double first = (prob.B * Sr).squaredNorm();
    double second;
    if (prob.spec.form == Form::bilinear) {
        const Matrix Sl = detail::psd_inv_sqrt(XhX.conjugate(), 0.0);  // (X^T conj(X))^{-1/2}
        second = (Sl * prob.X.transpose() * w.Bp * Sr).squaredNorm();
    } else {
        second = (Sr * prob.X.adjoint() * w.Bp * Sr).squaredNorm();
    }
    return std::sqrt(std::max(0.0, 2.0 * first - second));
}

/// sigma^S for both norms plus the unstructured value, which the spectral
/// optimum always matches.  The pseudoinverse closed form is cross-checked
/// against the full-column-rank factorized form whenever rank(X) = p.
inline SigmaValues sigma_values(const MappingProblem& prob) {
    const detail::Prepared w = detail::prepare(prob);
    detail::require_solvable(prob, w);
    SigmaValues out;
    out.frobenius = detail::sigma_frobenius_closed_form(prob, w);
    out.spectral = spectral_norm(prob.B * w.Xd);
    out.unstructured = out.spectral;
    if (w.full_column_rank) {
        const double alt = sigma_frobenius_full_rank(prob);
        if (std::abs(alt - out.frobenius) > 1e-6 * (1.0 + out.frobenius))
            throw std::logic_error("sigma_values: full-rank and pseudoinverse paths disagree");
    }
    return out;
}

}  // namespace structmap
