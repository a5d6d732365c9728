#pragma once
//
// structmap/types.hpp : shared scalar/matrix aliases, tolerances and errors
//

#include <Eigen/Core>

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace structmap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Errc {
    not_solvable,
    shape_mismatch,
    bad_structure_spec,
    not_structured,
    bad_argument,
    unknown_preset,
    io_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::not_solvable: return "NotSolvable";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::bad_structure_spec: return "BadStructureSpec";
        case Errc::not_structured: return "NotStructured";
        case Errc::bad_argument: return "BadArgument";
        case Errc::unknown_preset: return "UnknownPreset";
        case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

/// Library error carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Relative tolerances used across the solvers.
///
/// rank_rtol == 0 selects the default eps * max(rows, cols), scaled by the
/// largest singular value at the point of use.
struct ToleranceProfile {
    double membership_rtol = 1e-10;
    double rank_rtol = 0.0;
    double residual_rtol = 1e-10;

    double effective_rank_rtol(Index rows, Index cols) const {
        if (rank_rtol > 0.0) return rank_rtol;
        return std::numeric_limits<double>::epsilon() *
               static_cast<double>(std::max<Index>({rows, cols, 1}));
    }

    void validate() const {
        if (!(membership_rtol > 0.0) || !(residual_rtol > 0.0) || rank_rtol < 0.0)
            throw Error(Errc::bad_argument, "tolerances must be positive");
    }
};

inline double frobenius_norm(const Matrix& A) { return A.norm(); }

}  // namespace structmap
