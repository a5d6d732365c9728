#pragma once
//
// Shared generators for the test suites: random unitary scalar-product
// matrices of every flavor, random solvable mapping instances, and the list
// of (form, M-sign, algebra) combinations.
//

#include "structmap/structmap.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sm = structmap;

namespace testsupport {

inline sm::Matrix gaussian(sm::Index rows, sm::Index cols, std::uint64_t seed) {
    return sm::detail::complex_gaussian(rows, cols, seed);
}

inline sm::Matrix random_unitary(sm::Index n, std::uint64_t seed) {
    Eigen::HouseholderQR<sm::Matrix> qr(gaussian(n, n, seed));
    sm::Matrix Q = qr.householderQ();
    return Q;
}

// Random unitary M of each symmetry flavor.
inline sm::Matrix random_symmetric_unitary(sm::Index n, std::uint64_t seed) {
    const sm::Matrix Q = random_unitary(n, seed);
    return Q * Q.transpose();
}

inline sm::Matrix random_skew_unitary(sm::Index n, std::uint64_t seed) {
    // n must be even
    sm::Matrix J = sm::Matrix::Zero(n, n);
    J.topRightCorner(n / 2, n / 2) = sm::Matrix::Identity(n / 2, n / 2);
    J.bottomLeftCorner(n / 2, n / 2) = -sm::Matrix::Identity(n / 2, n / 2);
    const sm::Matrix Q = random_unitary(n, seed);
    return Q * J * Q.transpose();
}

inline sm::Matrix random_hermitian_unitary(sm::Index n, std::uint64_t seed) {
    const sm::Matrix Q = random_unitary(n, seed);
    sm::RealVector signs(n);
    std::mt19937_64 gen(seed ^ 0xabcdef12345ull);
    for (sm::Index i = 0; i < n; ++i) signs(i) = (gen() & 1) ? 1.0 : -1.0;
    return Q * signs.asDiagonal() * Q.adjoint();
}

inline sm::Matrix random_skew_hermitian_unitary(sm::Index n, std::uint64_t seed) {
    return sm::Complex(0, 1) * random_hermitian_unitary(n, seed);
}

struct Combo {
    sm::Form form;
    int msign;
    sm::Algebra algebra;
    const char* name;
};

inline const std::vector<Combo>& all_combos() {
    static const std::vector<Combo> combos = {
        {sm::Form::bilinear, +1, sm::Algebra::jordan, "T+J"},
        {sm::Form::bilinear, +1, sm::Algebra::lie, "T+L"},
        {sm::Form::bilinear, -1, sm::Algebra::jordan, "T-J"},
        {sm::Form::bilinear, -1, sm::Algebra::lie, "T-L"},
        {sm::Form::sesquilinear, +1, sm::Algebra::jordan, "H+J"},
        {sm::Form::sesquilinear, +1, sm::Algebra::lie, "H+L"},
        {sm::Form::sesquilinear, -1, sm::Algebra::jordan, "H-J"},
        {sm::Form::sesquilinear, -1, sm::Algebra::lie, "H-L"},
    };
    return combos;
}

/// Random spec for a combo; n is rounded up to even when M must be skew.
inline sm::StructureSpec random_spec(const Combo& c, sm::Index n, std::uint64_t seed) {
    if (c.msign < 0 && n % 2 != 0) ++n;
    sm::Matrix M;
    if (c.form == sm::Form::bilinear)
        M = c.msign > 0 ? random_symmetric_unitary(n, seed) : random_skew_unitary(n, seed);
    else
        M = c.msign > 0 ? random_hermitian_unitary(n, seed) : random_skew_hermitian_unitary(n, seed);
    return sm::make_structure_spec(M, c.form, c.algebra);
}

/// Solvable instance: B = A0 X for a random structured A0; X optionally rank
/// deficient (duplicated column).
inline sm::MappingProblem random_solvable(const sm::StructureSpec& spec, sm::Index p,
                                          std::uint64_t seed, bool deficient = false) {
    const sm::Matrix A0 = sm::random_member(spec, seed * 3 + 1);
    sm::Matrix X = gaussian(spec.n, p, seed * 3 + 2);
    if (deficient && p >= 2) X.col(p - 1) = 2.0 * X.col(0);
    return sm::make_mapping_problem(X, A0 * X, spec);
}

}  // namespace testsupport
