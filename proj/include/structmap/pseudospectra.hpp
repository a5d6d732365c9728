#pragma once
//
// structmap/pseudospectra.hpp : structured eigenvalue backward error
// eta^S(lambda, A) and structured pseudospectra on rectangular grids.
//
// For several structures the structured and unstructured backward errors
// coincide and a minimal structured perturbation is constructed explicitly:
//   * bilinear, M^T =  M, Jordan algebra      : all lambda (symmetric Takagi)
//   * bilinear, M^T = -M, both algebras       : all lambda (skew Takagi /
//                                               unit-norm symmetric mapping)
//   * sesquilinear, Jordan, lambda real       : Hermitian spectral decomposition
//   * sesquilinear, Lie, lambda imaginary     : skew-Hermitian analog
// Outside those cases eta^S is a hard nonconvex optimization; a documented
// heuristic minimizer produces upper bounds (never reported as exact), or
// +infinity when no admissible eigenvector direction exists at all.
//

#include "structmap/backward.hpp"
#include "structmap/kernels.hpp"
#include "structmap/mapping.hpp"
#include "structmap/structure.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace structmap {

/// Unstructured backward error sigma_min(A - lambda I).
inline double eta_unstructured(const Matrix& A, Complex lambda) {
    if (A.rows() != A.cols()) throw Error(Errc::shape_mismatch, "eta_unstructured: A must be square");
    const Matrix shifted = A - lambda * Matrix::Identity(A.rows(), A.cols());
    Eigen::JacobiSVD<Matrix> dec(shifted);
    const auto& s = dec.singularValues();
    return s.size() > 0 ? s(s.size() - 1) : 0.0;
}

struct EtaResult {
    Complex lambda;
    double eta = std::numeric_limits<double>::infinity();
    double eta_unstructured = 0.0;
    bool equality = false;    // value provably equals the unstructured error
    bool infeasible = false;  // no admissible perturbation direction exists/was found
    std::optional<Matrix> certificate;  // structured dA with lambda in Lambda(A + dA)
};

struct EtaOptions {
    int random_restarts = 16;
    std::uint64_t seed = 0;
};

namespace detail {

inline bool on_real_axis(Complex lambda) {
    return std::abs(lambda.imag()) <= 1e-12 * std::max(1.0, std::abs(lambda));
}
inline bool on_imaginary_axis(Complex lambda) {
    return std::abs(lambda.real()) <= 1e-12 * std::max(1.0, std::abs(lambda));
}

// Certificate from the normal-matrix recipe: N = M(A - lambda I) is Hermitian
// or skew-Hermitian; remove its smallest eigenvalue by a rank-one update.
inline EtaResult eta_normal_recipe(const Matrix& A, Complex lambda, const StructureSpec& spec,
                                   const Matrix& N) {
    const Index n = spec.n;
    const bool herm = (N - N.adjoint()).norm() <= (N + N.adjoint()).norm();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(
        herm ? Matrix(0.5 * (N + N.adjoint()))
             : Matrix(Complex(0, -0.5) * (N - N.adjoint())));
    const RealVector& w = eig.eigenvalues();
    Index best = 0;
    for (Index i = 1; i < n; ++i)
        if (std::abs(w(i)) < std::abs(w(best))) best = i;
    const Vector u = eig.eigenvectors().col(best);
    const Complex theta = herm ? Complex(w(best), 0) : Complex(0, w(best));
    EtaResult out;
    out.lambda = lambda;
    out.eta = std::abs(theta);
    out.equality = true;
    out.certificate = Matrix(-theta * (spec.M.adjoint() * u) * u.adjoint());
    return out;
}

struct HeuristicContext {
    // sesquilinear: admissibility is the real quadric x^H H x = 0
    bool have_quadric = false;
    Matrix H;
    RealVector H_eigenvalues;
    Matrix H_eigenvectors;
    // bilinear skew prototype with M^T = M: x^T M x = 0, handled through the
    // Takagi factor of M (isotropic directions)
    bool have_isotropic = false;
    Matrix UM;  // M = UM UM^T
    bool feasible = true;
};

inline HeuristicContext heuristic_context(const Matrix& A, Complex lambda,
                                          const StructureSpec& spec) {
    HeuristicContext ctx;
    const Index n = spec.n;
    if (spec.form == Form::sesquilinear) {
        const Matrix Q = lambda * spec.M - spec.M * A;
        ctx.have_quadric = true;
        ctx.H = (spec.prototype == PrototypeClass::herm)
                    ? Matrix(Complex(0, -0.5) * (Q - Q.adjoint()))
                    : Matrix(0.5 * (Q + Q.adjoint()));
        Eigen::SelfAdjointEigenSolver<Matrix> eig(ctx.H);
        ctx.H_eigenvalues = eig.eigenvalues();
        ctx.H_eigenvectors = eig.eigenvectors();
        const double scale = std::max(1.0, ctx.H_eigenvalues.cwiseAbs().maxCoeff());
        const double lo = ctx.H_eigenvalues(0), hi = ctx.H_eigenvalues(n - 1);
        ctx.feasible = lo <= 1e-12 * scale && hi >= -1e-12 * scale;
    } else {
        // skew prototype, M^T = M: condition x^T M r = lambda x^T M x = 0
        if (std::abs(lambda) <= 1e-14 * std::max(1.0, spectral_norm(A))) {
            ctx.feasible = true;  // every x is admissible at lambda = 0
        } else if (n < 2) {
            ctx.feasible = false;  // no isotropic direction in dimension one
        } else {
            ctx.have_isotropic = true;
            const TakagiResult t = takagi_sym(spec.M);
            ctx.UM = t.U;
        }
    }
    return ctx;
}

// Move a candidate direction onto the admissible set (best effort).
inline std::optional<Vector> repair_candidate(const Vector& y, const HeuristicContext& ctx) {
    const Index n = y.size();
    if (ctx.have_quadric) {
        const double scale = std::max(1.0, ctx.H_eigenvalues.cwiseAbs().maxCoeff());
        const double q = std::real(y.dot(ctx.H * y));
        if (std::abs(q) <= 1e-13 * scale) return y.normalized();
        const Index pick = q > 0 ? 0 : n - 1;  // eigenvalue of the opposite sign
        const double dv = ctx.H_eigenvalues(pick);
        if (q * dv > 0) return std::nullopt;  // definite form, nothing to mix with
        const Vector wv = ctx.H_eigenvectors.col(pick);
        const double beta = std::real(y.dot(ctx.H * wv));
        if (std::abs(dv) <= 1e-14 * scale) {
            if (std::abs(beta) <= 1e-14 * scale) return wv;  // neutral eigenvector
            return Vector((y - (q / (2.0 * beta)) * wv).normalized());
        }
        const double disc = std::max(0.0, beta * beta - q * dv);
        const double s = std::sqrt(disc);
        const double t1 = (-beta + s) / dv;
        const double t2 = (-beta - s) / dv;
        const double t = std::abs(t1) <= std::abs(t2) ? t1 : t2;
        return Vector((y + t * wv).normalized());
    }
    if (ctx.have_isotropic) {
        if (n < 2) return std::nullopt;
        const Vector z0 = ctx.UM.transpose() * y;
        Eigen::MatrixXd ab(n, 2);
        ab.col(0) = z0.real();
        ab.col(1) = z0.imag();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(ab);
        const Eigen::MatrixXd Q = qr.householderQ();
        Vector z(n);
        for (Index i = 0; i < n; ++i) z(i) = Complex(Q(i, 0), Q(i, 1)) / std::sqrt(2.0);
        return Vector(ctx.UM.conjugate() * z);
    }
    return y.normalized();
}

}  // namespace detail

/// Structured backward error of lambda as an approximate eigenvalue of A,
/// with a minimal-perturbation certificate in the theorem-covered cases.
inline EtaResult eta_structured(const Matrix& A, Complex lambda, const StructureSpec& spec,
                                const ToleranceProfile& tol = {}, const EtaOptions& opts = {}) {
    const MembershipResult mem = is_member(A, spec, tol);
    if (!mem.member)
        throw Error(Errc::not_structured, "eta_structured: A is not in the structured class "
                                          "(defect " +
                                              std::to_string(mem.defect) + ")");
    const Index n = spec.n;
    const Matrix shifted = A - lambda * Matrix::Identity(n, n);
    const double sigma_min = eta_unstructured(A, lambda);

    EtaResult out;
    out.lambda = lambda;
    out.eta_unstructured = sigma_min;

    const bool bilinear = spec.form == Form::bilinear;
    if (bilinear && spec.msign == +1 && spec.algebra == Algebra::jordan) {
        // M(A - lambda I) complex symmetric: symmetric Takagi
        const TakagiResult t = takagi_sym(spec.M * shifted, 1e-8);
        const Vector u = t.U.col(n - 1);
        out.eta = t.values(n - 1);
        out.equality = true;
        out.certificate = Matrix(-out.eta * (spec.M.adjoint() * u) * u.transpose());
        return out;
    }
    if (bilinear && spec.msign == -1 && spec.prototype == PrototypeClass::skew_sym) {
        // M(A - lambda I) skew-symmetric: skew Takagi, remove the last block
        const TakagiResult t = takagi_skew(spec.M * shifted, 1e-8);
        const Index m = t.values.size();
        out.equality = true;
        if (m == 0 || 2 * m < n || t.values(m - 1) <= 0.0) {
            // smallest singular value is an (unpaired) zero: lambda is
            // already an eigenvalue
            out.eta = 0.0;
            out.certificate = Matrix(Matrix::Zero(n, n));
            return out;
        }
        const double s = t.values(m - 1);
        out.eta = s;
        const Matrix u = t.U.middleCols(2 * m - 2, 2);
        Matrix d(2, 2);
        d << 0, s, -s, 0;
        out.certificate = Matrix(-(spec.M.adjoint() * u) * d * u.transpose());
        return out;
    }
    if (bilinear && spec.msign == -1 && spec.prototype == PrototypeClass::sym) {
        // M(A - lambda I) symmetric while the perturbation must keep M dA
        // symmetric: use a unit-norm symmetric E mapping the right singular
        // vector to the left one
        const Matrix N = spec.M * shifted;
        const SvdResult dec = svd(N);
        out.eta = dec.singular_values(n - 1);
        out.equality = true;
        if (out.eta <= 1e-14 * std::max(1.0, N.norm())) {
            out.certificate = Matrix(Matrix::Zero(n, n));
            return out;
        }
        const Vector u = dec.U.col(n - 1);
        const Vector v = dec.V.col(n - 1);
        const StructureSpec sym_spec =
            make_structure_spec(Matrix::Identity(n, n), Form::bilinear, Algebra::jordan);
        const MappingProblem one_col = make_mapping_problem(Matrix(v), Matrix(u), sym_spec, tol);
        const Matrix E = solve_spectral(one_col).A;  // symmetric, Ev = u, |E|_2 = 1
        out.certificate = Matrix(-out.eta * (spec.M.adjoint() * E));
        return out;
    }
    if (!bilinear) {
        const bool covered = (spec.algebra == Algebra::jordan && detail::on_real_axis(lambda)) ||
                             (spec.algebra == Algebra::lie && detail::on_imaginary_axis(lambda));
        if (covered) {
            EtaResult res = detail::eta_normal_recipe(A, lambda, spec, spec.M * shifted);
            res.eta_unstructured = sigma_min;
            return res;
        }
    }

    // Uncovered: heuristic upper bound over admissible eigenvector directions.
    const detail::HeuristicContext ctx = detail::heuristic_context(A, lambda, spec);
    if (!ctx.feasible) {
        out.infeasible = true;
        return out;
    }
    const SvdResult dec = svd(shifted);
    std::vector<Vector> candidates;
    for (Index i = n; i-- > 0;) candidates.push_back(dec.V.col(i));  // ascending sigma
    for (int k = 0; k < opts.random_restarts; ++k) {
        Vector y = detail::complex_gaussian(n, 1, opts.seed + 0x9e3779b97f4a7c15ull * (k + 1));
        candidates.push_back(y.normalized());
    }
    double best = std::numeric_limits<double>::infinity();
    Vector best_x;
    for (const Vector& y : candidates) {
        const auto x = detail::repair_candidate(y, ctx);
        if (!x) continue;
        const double val = (lambda * (*x) - A * (*x)).norm();
        if (val < best) {
            best = val;
            best_x = *x;
        }
    }
    if (!best_x.size()) {
        out.infeasible = true;
        return out;
    }
    const BackwardErrorReport rep = eigenpair_backward_error(A, best_x, lambda, spec, tol);
    if (!rep.solvable) {
        out.infeasible = true;
        return out;
    }
    out.eta = rep.value_spectral;
    out.equality = bilinear && std::abs(lambda) <= 1e-14 * std::max(1.0, spectral_norm(A)) &&
                   spec.prototype == PrototypeClass::skew_sym;
    out.certificate = rep.perturbation_spectral;
    return out;
}

struct GridRegion {
    double re_lo = -1, re_hi = 1;
    double im_lo = -1, im_hi = 1;
};

/// Rectangular evaluation of eta^S.  values is row-major over (re, im):
/// values[i * ny + j] belongs to node re_i + i im_j.
struct PseudospectrumGrid {
    GridRegion region;
    int nx = 0, ny = 0;
    std::vector<double> values;
    std::optional<double> epsilon;

    double re(int i) const {
        return nx > 1 ? region.re_lo + (region.re_hi - region.re_lo) * i / (nx - 1) : region.re_lo;
    }
    double im(int j) const {
        return ny > 1 ? region.im_lo + (region.im_hi - region.im_lo) * j / (ny - 1) : region.im_lo;
    }
    Complex node(int i, int j) const { return {re(i), im(j)}; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * ny + j]; }
};

inline PseudospectrumGrid grid(const Matrix& A, const StructureSpec& spec, GridRegion region,
                               int nx, int ny, std::optional<double> epsilon = std::nullopt,
                               const ToleranceProfile& tol = {}, const EtaOptions& opts = {}) {
    if (nx < 2 || ny < 2) throw Error(Errc::bad_argument, "grid: resolution must be at least 2x2");
    if (region.re_lo > region.re_hi || region.im_lo > region.im_hi)
        throw Error(Errc::bad_argument, "grid: empty region");
    PseudospectrumGrid g;
    g.region = region;
    g.nx = nx;
    g.ny = ny;
    g.epsilon = epsilon;
    g.values.resize(static_cast<size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const EtaResult r = eta_structured(A, g.node(i, j), spec, tol, opts);
            g.values[static_cast<size_t>(i) * ny + j] = r.eta;
        }
    return g;
}

}  // namespace structmap
