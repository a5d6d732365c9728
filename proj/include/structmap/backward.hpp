#pragma once
//
// structmap/backward.hpp : structured backward errors and inverse problems.
//
// All four problems reduce to structured mapping problems:
//   * inverse invariant pair:       A X = X D            -> (X, X D)
//   * invariant-pair backward error (A + dA) X = X D     -> (X, X D - A X)
//   * eigenpair backward error      (A + dA) x = lambda x -> (x, lambda x - A x)
//   * invariant subspace            (A + dA) U = U D      -> (U, U D - A U)
// with closed forms for the eigenpair and subspace cases.
//

#include "structmap/mapping.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace structmap {

struct BackwardErrorReport {
    enum class Status { ok, not_solvable, conditionally_unsolvable };

    double value_spectral = std::numeric_limits<double>::infinity();
    double value_frobenius = std::numeric_limits<double>::infinity();
    Matrix perturbation_spectral;   // one optimal perturbation (spectral norm)
    Matrix perturbation_frobenius;  // the unique optimal perturbation (Frobenius)
    bool solvable = false;
    Status status = Status::not_solvable;
    ExistenceReport existence;
};

struct InversePairSolution {
    OptimalSolution frobenius;
    OptimalSolution spectral;
};

/// Smallest structured A with prescribed invariant pair A X = X D
/// (tau^S(X, D) = sigma^S(X, X D) for both norms).  X must have full column
/// rank.
inline InversePairSolution inverse_invariant_pair(const Matrix& X, const Matrix& D,
                                                  const StructureSpec& spec,
                                                  ToleranceProfile tol = {}) {
    if (D.rows() != D.cols() || D.rows() != X.cols())
        throw Error(Errc::shape_mismatch, "inverse_invariant_pair: D must be p x p");
    const MappingProblem prob = make_mapping_problem(X, X * D, spec, tol);
    const detail::Prepared w = detail::prepare(prob);
    if (!w.full_column_rank)
        throw Error(Errc::shape_mismatch, "inverse_invariant_pair: X must have full column rank");
    return {solve_frobenius(prob), solve_spectral(prob)};
}

namespace detail {

inline BackwardErrorReport report_from_mapping(const MappingProblem& prob) {
    BackwardErrorReport rep;
    rep.existence = check_existence(prob);
    if (!rep.existence.exists) {
        rep.solvable = false;
        rep.status = BackwardErrorReport::Status::not_solvable;
        return rep;
    }
    const OptimalSolution frob = solve_frobenius(prob);
    const OptimalSolution spectral_sol = solve_spectral(prob);
    rep.solvable = true;
    rep.status = BackwardErrorReport::Status::ok;
    rep.value_frobenius = frob.sigma;
    rep.value_spectral = spectral_sol.sigma;
    rep.perturbation_frobenius = frob.A;
    rep.perturbation_spectral = spectral_sol.A;
    return rep;
}

}  // namespace detail

/// eta^S(A, X, D): smallest structured dA with (A + dA) X = X D, both norms,
/// with the optimal perturbations.  Not solvable cases carry the existence
/// defects and infinite values.
inline BackwardErrorReport invariant_pair_backward_error(const Matrix& A, const Matrix& X,
                                                         const Matrix& D,
                                                         const StructureSpec& spec,
                                                         ToleranceProfile tol = {}) {
    if (A.rows() != spec.n || A.cols() != spec.n)
        throw Error(Errc::shape_mismatch, "invariant_pair_backward_error: A must be n x n");
    if (D.rows() != D.cols() || D.rows() != X.cols())
        throw Error(Errc::shape_mismatch, "invariant_pair_backward_error: D must be p x p");
    return detail::report_from_mapping(make_mapping_problem(X, X * D - A * X, spec, tol));
}

/// eta^S(A, x, lambda) with the closed-form optimal perturbations:
///   eta_2 = |r|_2 / |x|_2,   eta_F = sqrt(2 |r|^2 - |<r, x>_M|^2)
/// on the normalized eigenvector, r = lambda x - A x.  The Frobenius
/// perturbation E is the rank-two (plus scalar) closed form of the matching
/// prototype class; the spectral one subtracts the rank-one correction unless
/// |r| and the scalar-product component coincide.
inline BackwardErrorReport eigenpair_backward_error(const Matrix& A, const Vector& x,
                                                    Complex lambda, const StructureSpec& spec,
                                                    ToleranceProfile tol = {}) {
    if (A.rows() != spec.n || A.cols() != spec.n)
        throw Error(Errc::shape_mismatch, "eigenpair_backward_error: A must be n x n");
    if (x.size() != spec.n)
        throw Error(Errc::shape_mismatch, "eigenpair_backward_error: x must have length n");
    const double xnorm = x.norm();
    if (xnorm == 0.0) throw Error(Errc::bad_argument, "eigenpair_backward_error: x must be nonzero");
    const Vector xn = x / xnorm;
    const Vector r_raw = lambda * x - A * x;
    const Vector r = lambda * xn - A * xn;

    BackwardErrorReport rep;
    {
        const MappingProblem prob =
            make_mapping_problem(Matrix(xn), Matrix(r), spec, tol);
        rep.existence = check_existence(prob);
        if (!rep.existence.exists) {
            rep.solvable = false;
            rep.status = BackwardErrorReport::Status::not_solvable;
            return rep;
        }
    }
    const Index n = spec.n;
    const Matrix I = Matrix::Identity(n, n);
    const bool sesq = spec.form == Form::sesquilinear;
    const Vector Mr = spec.m_is_identity ? r : Vector(spec.M * r);
    // reduce to the prototype problem for b := M r (b := i M r for the
    // skew-Hermitian class, folded back by -i at the end)
    const bool via_i = spec.prototype == PrototypeClass::skew_herm;
    const Vector b = via_i ? Vector(Complex(0, 1) * Mr) : Mr;
    const Matrix Px = xn * xn.adjoint();
    Matrix E_proto, dA_proto;
    if (spec.prototype == PrototypeClass::herm || via_i) {
        const Complex num = xn.dot(b);  // x^H b
        E_proto = num * Px + xn * b.adjoint() * (I - Px) + (I - Px) * b * xn.adjoint();
        const double den = b.squaredNorm() - std::norm(num);
        if (den > 1e-12 * b.squaredNorm()) {
            dA_proto = E_proto - std::conj(num) * ((I - Px) * b) * (b.adjoint() * (I - Px)) / den;
        } else {
            dA_proto = E_proto;
        }
    } else if (spec.prototype == PrototypeClass::sym) {
        const Vector xc = xn.conjugate();
        const Complex num = xc.dot(b);  // x^T b
        E_proto = num * xc * xc.transpose() + xc * b.transpose() * (I - Px) +
                  (I - xc * xn.transpose()) * b * xn.adjoint();
        const double den = b.squaredNorm() - std::norm(num);
        if (den > 1e-12 * b.squaredNorm()) {
            dA_proto = E_proto -
                       std::conj(num) * ((I - Px).transpose() * b) * (b.transpose() * (I - Px)) / den;
        } else {
            dA_proto = E_proto;
        }
    } else {  // skew-symmetric
        const Vector xc = xn.conjugate();
        E_proto = (I - xc * xn.transpose()) * b * xn.adjoint() - xc * b.transpose() * (I - Px);
        dA_proto = E_proto;
    }
    if (via_i) {
        E_proto *= Complex(0, -1);
        dA_proto *= Complex(0, -1);
    }
    rep.solvable = true;
    rep.status = BackwardErrorReport::Status::ok;
    rep.perturbation_frobenius = spec.m_is_identity ? E_proto : Matrix(spec.M.adjoint() * E_proto);
    rep.perturbation_spectral = spec.m_is_identity ? dA_proto : Matrix(spec.M.adjoint() * dA_proto);
    rep.value_spectral = r_raw.norm() / xnorm;
    const Complex inner = sesq ? xn.dot(Mr) : xn.conjugate().dot(Mr);
    rep.value_frobenius = std::sqrt(std::max(0.0, 2.0 * r.squaredNorm() - std::norm(inner)));
    return rep;
}

/// Norm-minimizing block D = U^H A U for |A U - U D| (both norms), with the
/// minimum value |(I - P) A P|.  U must be an isometry.
inline Matrix optimal_block(const Matrix& A, const Matrix& U, double tol = 1e-10) {
    if (U.rows() != A.rows())
        throw Error(Errc::shape_mismatch, "optimal_block: U must have n rows");
    const Index p = U.cols();
    if ((U.adjoint() * U - Matrix::Identity(p, p)).norm() > tol * std::max<double>(1.0, double(p)))
        throw Error(Errc::bad_argument, "optimal_block: U is not an isometry");
    return U.adjoint() * A * U;
}

struct SubspaceResult {
    BackwardErrorReport report;
    Matrix E_o;  // nearest structured matrix with invariant span(U)
};

/// omega^S(A, span(U)): distance from A to the structured matrices leaving
/// span(U) invariant, realized by E_o = A + M^{-1} F_*(U, M(U D - A U)) with
/// D = U^H A U.
///
/// The delegated mapping problem is solvable whenever its symmetry condition
/// on U* M (U D - A U) holds; that is automatic for M = I (any U for
/// sesquilinear forms, real U for bilinear ones) and for M-neutral U, but not
/// for every (M, U).  Infeasible combinations are reported as conditionally
/// unsolvable together with the symmetry defect rather than as a hard error.
inline SubspaceResult subspace_backward_error(const Matrix& A, const Matrix& U,
                                              const StructureSpec& spec,
                                              ToleranceProfile tol = {}) {
    if (A.rows() != spec.n || A.cols() != spec.n)
        throw Error(Errc::shape_mismatch, "subspace_backward_error: A must be n x n");
    const Matrix D = optimal_block(A, U, tol.membership_rtol);  // isometry checked here
    const Index n = spec.n;
    const Matrix P = U * U.adjoint();
    const Matrix I = Matrix::Identity(n, n);
    const Matrix offdiag = (I - P) * A * P;

    const MappingProblem prob = make_mapping_problem(U, U * D - A * U, spec, tol);
    SubspaceResult out;
    out.report.existence = check_existence(prob);
    if (!out.report.existence.exists) {
        out.report.solvable = false;
        out.report.status = BackwardErrorReport::Status::conditionally_unsolvable;
        return out;
    }

    Matrix dA_frob;
    if (spec.m_is_identity && spec.form == Form::sesquilinear) {
        // prototype shortcut: E_o = P A P + (I-P) A (I-P)
        out.E_o = P * A * P + (I - P) * A * (I - P);
        dA_frob = out.E_o - A;
    } else {
        dA_frob = solve_frobenius(prob).A;
        out.E_o = A + dA_frob;
    }
    const OptimalSolution spectral = solve_spectral(prob);

    out.report.solvable = true;
    out.report.status = BackwardErrorReport::Status::ok;
    out.report.value_spectral = spectral_norm(offdiag);
    const Matrix PM = spec.m_is_identity ? Matrix(P * offdiag) : Matrix(P * spec.M * offdiag);
    out.report.value_frobenius =
        std::sqrt(std::max(0.0, 2.0 * offdiag.squaredNorm() - PM.squaredNorm()));
    out.report.perturbation_frobenius = dA_frob;
    out.report.perturbation_spectral = spectral.A;

    // the delegated route must reproduce the closed forms
    const SigmaValues sv = sigma_values(prob);
    if (std::abs(sv.frobenius - out.report.value_frobenius) >
            1e-6 * (1.0 + out.report.value_frobenius) ||
        std::abs(sv.spectral - out.report.value_spectral) >
            1e-6 * (1.0 + out.report.value_spectral))
        throw std::logic_error("subspace_backward_error: closed forms disagree with the solver");
    return out;
}

}  // namespace structmap
