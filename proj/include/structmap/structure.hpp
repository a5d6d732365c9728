#pragma once
//
// structmap/structure.hpp : orthosymmetric scalar products and the Jordan/Lie
// algebras of matrices that are self-/skew-adjoint with respect to them.
//
// A scalar product on K^n is <x,y>_M = y^T M x (bilinear) or y^H M x
// (sesquilinear) for a unitary M that is (skew-)symmetric resp.
// (skew-)Hermitian.  The adjoint of A is A* = M^{-1} A^T M or M^{-1} A^H M,
// and the Jordan algebra {A* = A} / Lie algebra {A* = -A} generalise the four
// prototype classes sym / skew-sym / Herm / skew-Herm: A lies in the algebra
// exactly when M*A lies in the matching prototype class.
//

#include "structmap/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace structmap {

enum class Form { bilinear, sesquilinear };
enum class Algebra { jordan, lie };
enum class PrototypeClass { sym, skew_sym, herm, skew_herm };

inline const char* form_name(Form f) {
    return f == Form::bilinear ? "bilinear" : "sesquilinear";
}
inline const char* algebra_name(Algebra a) { return a == Algebra::jordan ? "jordan" : "lie"; }
inline const char* prototype_name(PrototypeClass c) {
    switch (c) {
        case PrototypeClass::sym: return "symmetric";
        case PrototypeClass::skew_sym: return "skew-symmetric";
        case PrototypeClass::herm: return "hermitian";
        case PrototypeClass::skew_herm: return "skew-hermitian";
    }
    return "";
}

/// Prototype class of M*S for the algebra S selected by (form, msign, algebra),
/// where msign = +1 if M* = M and -1 if M* = -M.
inline PrototypeClass prototype_class(Form form, int msign, Algebra algebra) {
    const int s = (algebra == Algebra::jordan) ? +1 : -1;
    const bool plus = msign * s > 0;
    if (form == Form::bilinear) return plus ? PrototypeClass::sym : PrototypeClass::skew_sym;
    return plus ? PrototypeClass::herm : PrototypeClass::skew_herm;
}

/// The scalar-product datum (M, form, algebra) defining a structured class.
///
/// Immutable after construction; build through make_structure_spec or preset
/// so the invariants (M unitary, M* = +/-M) are checked once.
struct StructureSpec {
    Index n = 0;
    Matrix M;
    Form form = Form::sesquilinear;
    Algebra algebra = Algebra::jordan;
    int msign = +1;
    PrototypeClass prototype = PrototypeClass::herm;
    bool m_is_identity = true;
};

inline PrototypeClass prototype_class(const StructureSpec& spec) { return spec.prototype; }

inline StructureSpec make_structure_spec(Matrix M, Form form, Algebra algebra,
                                         double tol = 1e-10) {
    const Index n = M.rows();
    if (n == 0 || M.cols() != n)
        throw Error(Errc::bad_structure_spec, "scalar-product matrix must be square and nonempty");
    const double unitary_defect = (M.adjoint() * M - Matrix::Identity(n, n)).norm();
    if (unitary_defect > tol * static_cast<double>(n))
        throw Error(Errc::bad_structure_spec,
                    "scalar-product matrix is not unitary (defect " +
                        std::to_string(unitary_defect) + ")");
    const Matrix Ms = (form == Form::bilinear) ? Matrix(M.transpose()) : Matrix(M.adjoint());
    const double plus_defect = (Ms - M).norm();
    const double minus_defect = (Ms + M).norm();
    const double scale = tol * M.norm();
    int msign = 0;
    if (plus_defect <= scale && minus_defect > scale) msign = +1;
    else if (minus_defect <= scale && plus_defect > scale) msign = -1;
    else if (plus_defect <= scale && minus_defect <= scale)
        throw Error(Errc::bad_structure_spec, "scalar-product matrix is numerically zero");
    else
        throw Error(Errc::bad_structure_spec,
                    "scalar-product matrix is neither symmetric nor skew under the chosen form");
    StructureSpec spec;
    spec.n = n;
    spec.M = std::move(M);
    spec.form = form;
    spec.algebra = algebra;
    spec.msign = msign;
    spec.prototype = prototype_class(form, msign, algebra);
    spec.m_is_identity = (spec.M - Matrix::Identity(n, n)).norm() == 0.0;
    return spec;
}

/// Adjoint A* = M^{-1} A^T M (bilinear) or M^{-1} A^H M (sesquilinear).
/// M is unitary, so M^{-1} is evaluated as M^H.
inline Matrix adjoint(const Matrix& A, const StructureSpec& spec) {
    if (A.rows() != spec.n || A.cols() != spec.n)
        throw Error(Errc::shape_mismatch, "adjoint: matrix dimension does not match the spec");
    Matrix At = (spec.form == Form::bilinear) ? Matrix(A.transpose()) : Matrix(A.adjoint());
    if (spec.m_is_identity) return At;
    return spec.M.adjoint() * At * spec.M;
}

struct MembershipResult {
    bool member = false;
    double defect = 0.0;
};

/// Tests A* = A (Jordan) or A* = -A (Lie); the defect is the Frobenius norm of
/// the violated identity.
inline MembershipResult is_member(const Matrix& A, const StructureSpec& spec,
                                  const ToleranceProfile& tol = {}) {
    const double s = (spec.algebra == Algebra::jordan) ? 1.0 : -1.0;
    const double defect = (adjoint(A, spec) - s * A).norm();
    const bool ok = defect <= tol.membership_rtol * std::max(1.0, A.norm());
    return {ok, defect};
}

/// Orthogonal projection of Z onto a prototype class, (Z +/- Z^T)/2 or
/// (Z +/- Z^H)/2.  Idempotent and Frobenius-nonexpansive.
inline Matrix project_to_prototype(const Matrix& Z, PrototypeClass cls) {
    switch (cls) {
        case PrototypeClass::sym: return 0.5 * (Z + Z.transpose());
        case PrototypeClass::skew_sym: return 0.5 * (Z - Z.transpose());
        case PrototypeClass::herm: return 0.5 * (Z + Z.adjoint());
        case PrototypeClass::skew_herm: return 0.5 * (Z - Z.adjoint());
    }
    return Z;
}

namespace detail {

/// Matrix of independent standard complex Gaussian entries, deterministic in
/// the seed.
inline Matrix complex_gaussian(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
    Matrix Z(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = dist(gen);
            const double im = dist(gen);
            Z(i, j) = Complex(re, im);
        }
    return Z;
}

}  // namespace detail

/// Random element of the algebra: M^{-1} * (projection of a Gaussian matrix
/// onto the prototype class of M*S).  Deterministic in the seed.
inline Matrix random_member(const StructureSpec& spec, std::uint64_t seed) {
    Matrix Z = project_to_prototype(detail::complex_gaussian(spec.n, spec.n, seed),
                                    spec.prototype);
    if (spec.m_is_identity) return Z;
    return spec.M.adjoint() * Z;
}

namespace detail {

inline Matrix identity_m(Index n) { return Matrix::Identity(n, n); }

inline Matrix flip_m(Index n) {
    Matrix R = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) R(i, n - 1 - i) = 1.0;
    return R;
}

inline Matrix symplectic_m(Index half) {
    Matrix J = Matrix::Zero(2 * half, 2 * half);
    J.topRightCorner(half, half) = Matrix::Identity(half, half);
    J.bottomLeftCorner(half, half) = -Matrix::Identity(half, half);
    return J;
}

inline Matrix signature_m(Index n, Index p) {
    Matrix S = Matrix::Identity(n, n);
    for (Index i = p; i < n; ++i) S(i, i) = -1.0;
    return S;
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
    return {"symmetric",        "skew-symmetric", "hermitian",
            "skew-hermitian",   "hamiltonian",    "hamiltonian-bilinear",
            "hamiltonian-sesquilinear", "skew-hamiltonian", "persymmetric",
            "pseudo-hermitian", "pseudo-symmetric"};
}

/// Named structure presets.
///
/// `dim` is the matrix dimension, except for the Hamiltonian family where it
/// is the half-dimension (M is the 2*dim x 2*dim symplectic form).  The
/// pseudo presets take the signature split p (q = dim - p); the default is
/// p = ceil(dim/2), the convention Sigma = diag(I_p, -I_q).
inline StructureSpec preset(const std::string& name, Index dim, Index signature_p = -1) {
    if (dim <= 0) throw Error(Errc::bad_argument, "preset dimension must be positive");
    using detail::flip_m;
    using detail::identity_m;
    using detail::signature_m;
    using detail::symplectic_m;
    if (name == "symmetric")
        return make_structure_spec(identity_m(dim), Form::bilinear, Algebra::jordan);
    if (name == "skew-symmetric")
        return make_structure_spec(identity_m(dim), Form::bilinear, Algebra::lie);
    if (name == "hermitian")
        return make_structure_spec(identity_m(dim), Form::sesquilinear, Algebra::jordan);
    if (name == "skew-hermitian")
        return make_structure_spec(identity_m(dim), Form::sesquilinear, Algebra::lie);
    if (name == "hamiltonian" || name == "hamiltonian-bilinear")
        return make_structure_spec(symplectic_m(dim), Form::bilinear, Algebra::lie);
    if (name == "hamiltonian-sesquilinear")
        return make_structure_spec(symplectic_m(dim), Form::sesquilinear, Algebra::lie);
    if (name == "skew-hamiltonian")
        return make_structure_spec(symplectic_m(dim), Form::bilinear, Algebra::jordan);
    if (name == "persymmetric")
        return make_structure_spec(flip_m(dim), Form::bilinear, Algebra::jordan);
    if (name == "pseudo-hermitian" || name == "pseudo-symmetric") {
        Index p = signature_p >= 0 ? signature_p : (dim + 1) / 2;
        if (p > dim) throw Error(Errc::bad_argument, "signature split exceeds dimension");
        const Form form = (name == "pseudo-hermitian") ? Form::sesquilinear : Form::bilinear;
        return make_structure_spec(signature_m(dim, p), form, Algebra::jordan);
    }
    throw Error(Errc::unknown_preset, "unknown preset '" + name + "'");
}

inline bool preset_takes_half_dim(const std::string& name) {
    return name == "hamiltonian" || name == "hamiltonian-bilinear" ||
           name == "hamiltonian-sesquilinear" || name == "skew-hamiltonian";
}

/// Preset sized for matrices of dimension n (converts to half-dimension for
/// the Hamiltonian family, rejecting odd n).
inline StructureSpec preset_for_dim(const std::string& name, Index n, Index signature_p = -1) {
    if (preset_takes_half_dim(name)) {
        if (n % 2 != 0)
            throw Error(Errc::bad_argument,
                        "preset '" + name + "' requires even dimension, got " + std::to_string(n));
        return preset(name, n / 2, signature_p);
    }
    return preset(name, n, signature_p);
}

}  // namespace structmap
