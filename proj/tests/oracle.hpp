#pragma once
//
// Independent oracles for the mapping tests.
//
// The structured class is expressed through a real-orthonormal basis of its
// prototype class; the least-norm structured solution of AX = B then becomes
// a real linear least-squares problem in the basis coefficients, solved by a
// rank-revealing decomposition.  Nothing here shares code with the production
// solution map.
//

#include "structmap/structmap.hpp"

#include <vector>

namespace oracle {

namespace sm = structmap;

/// Real-orthonormal (in Re<.,.>_F) basis of a prototype class.
inline std::vector<sm::Matrix> prototype_basis(sm::PrototypeClass cls, sm::Index n) {
    std::vector<sm::Matrix> basis;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto unit = [n](sm::Index i, sm::Index j) {
        sm::Matrix E = sm::Matrix::Zero(n, n);
        E(i, j) = 1.0;
        return E;
    };
    for (sm::Index i = 0; i < n; ++i) {
        for (sm::Index j = i; j < n; ++j) {
            switch (cls) {
                case sm::PrototypeClass::sym: {
                    sm::Matrix E = i == j ? unit(i, i) : sm::Matrix((unit(i, j) + unit(j, i)) * inv_sqrt2);
                    basis.push_back(E);
                    basis.push_back(sm::Complex(0, 1) * E);
                    break;
                }
                case sm::PrototypeClass::skew_sym: {
                    if (i == j) break;
                    sm::Matrix E = (unit(i, j) - unit(j, i)) * inv_sqrt2;
                    basis.push_back(E);
                    basis.push_back(sm::Complex(0, 1) * E);
                    break;
                }
                case sm::PrototypeClass::herm: {
                    if (i == j) {
                        basis.push_back(unit(i, i));
                    } else {
                        basis.push_back((unit(i, j) + unit(j, i)) * inv_sqrt2);
                        basis.push_back(sm::Complex(0, 1) * (unit(i, j) - unit(j, i)) * inv_sqrt2);
                    }
                    break;
                }
                case sm::PrototypeClass::skew_herm: {
                    if (i == j) {
                        basis.push_back(sm::Complex(0, 1) * unit(i, i));
                    } else {
                        basis.push_back((unit(i, j) - unit(j, i)) * inv_sqrt2);
                        basis.push_back(sm::Complex(0, 1) * (unit(i, j) + unit(j, i)) * inv_sqrt2);
                    }
                    break;
                }
            }
        }
    }
    return basis;
}

struct ConstraintSystem {
    std::vector<sm::Matrix> basis;
    Eigen::MatrixXd C;  // real 2np x K constraint matrix, C theta = d
    Eigen::VectorXd d;
};

inline ConstraintSystem constraint_system(const sm::MappingProblem& prob) {
    ConstraintSystem sys;
    sys.basis = prototype_basis(prob.spec.prototype, prob.spec.n);
    const sm::Matrix Bp = prob.spec.M * prob.B;
    const sm::Index rows = 2 * prob.X.rows() * prob.X.cols();
    sys.C.resize(rows, static_cast<sm::Index>(sys.basis.size()));
    for (size_t k = 0; k < sys.basis.size(); ++k) {
        const sm::Matrix SX = sys.basis[k] * prob.X;
        sm::Index r = 0;
        for (sm::Index j = 0; j < SX.cols(); ++j)
            for (sm::Index i = 0; i < SX.rows(); ++i) {
                sys.C(r, static_cast<sm::Index>(k)) = SX(i, j).real();
                sys.C(r + rows / 2, static_cast<sm::Index>(k)) = SX(i, j).imag();
                ++r;
            }
    }
    sys.d.resize(rows);
    sm::Index r = 0;
    for (sm::Index j = 0; j < Bp.cols(); ++j)
        for (sm::Index i = 0; i < Bp.rows(); ++i) {
            sys.d(r) = Bp(i, j).real();
            sys.d(r + rows / 2) = Bp(i, j).imag();
            ++r;
        }
    return sys;
}

inline sm::Matrix assemble(const ConstraintSystem& sys, const Eigen::VectorXd& theta,
                           const sm::Matrix& M) {
    sm::Matrix S = sm::Matrix::Zero(M.rows(), M.cols());
    for (size_t k = 0; k < sys.basis.size(); ++k) S += theta(static_cast<sm::Index>(k)) * sys.basis[k];
    return M.adjoint() * S;
}

/// Least-Frobenius-norm structured solution of AX = B via the basis
/// parametrization (the basis is Frobenius-orthonormal, so the least caefficient
/// norm is the least matrix norm).  residual_out reports the constraint
/// residual so callers can assert solvability independently.
inline sm::Matrix min_frobenius_solution(const sm::MappingProblem& prob,
                                         double* residual_out = nullptr) {
    const ConstraintSystem sys = constraint_system(prob);
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(sys.C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    dec.setThreshold(1e-12);
    const Eigen::VectorXd theta = dec.solve(sys.d);
    if (residual_out) *residual_out = (sys.C * theta - sys.d).norm();
    return assemble(sys, theta, prob.spec.M);
}

/// A structured (generally non-optimal) solution sampled independently of the
/// family parametrization: particular solution plus a random combination of
/// the constraint null space.
inline sm::Matrix random_solution(const sm::MappingProblem& prob, std::uint64_t seed) {
    const ConstraintSystem sys = constraint_system(prob);
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(sys.C, Eigen::ComputeThinU | Eigen::ComputeFullV);
    dec.setThreshold(1e-12);
    Eigen::VectorXd theta = dec.solve(sys.d);
    const auto rank = dec.rank();
    const Eigen::MatrixXd null_basis = dec.matrixV().rightCols(sys.C.cols() - rank);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXd w(null_basis.cols());
    for (sm::Index i = 0; i < w.size(); ++i) w(i) = dist(gen);
    theta += null_basis * w;
    return assemble(sys, theta, prob.spec.M);
}

}  // namespace oracle
