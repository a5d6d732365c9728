#pragma once
//
// structmap/io.hpp : file formats.
//
// Matrices travel as Matrix Market "array" files (complex entries as "re im"
// pairs, column-major, 17 significant digits so values round-trip exactly).
// Structure specs serialize to JSON with M inline or as a file reference;
// pseudospectrum grids to CSV (re, im, eta) or JSON.
//

#include "structmap/pseudospectra.hpp"
#include "structmap/structure.hpp"
#include "structmap/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace structmap {

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

[[noreturn]] inline void io_fail(const std::string& where, Index line, const std::string& what) {
    throw Error(Errc::io_error, where + ":" + std::to_string(line) + ": " + what);
}

}  // namespace detail

inline void write_matrix_market(std::ostream& os, const Matrix& A,
                                const std::string& comment = "written by structmap") {
    os << "%%MatrixMarket matrix array complex general\n";
    os << "% " << comment << "\n";
    os << A.rows() << " " << A.cols() << "\n";
    os << std::setprecision(17);
    for (Index j = 0; j < A.cols(); ++j)
        for (Index i = 0; i < A.rows(); ++i)
            os << A(i, j).real() << " " << A(i, j).imag() << "\n";
}

inline void write_matrix_market(const std::string& path, const Matrix& A,
                                const std::string& comment = "written by structmap") {
    std::ofstream os(path);
    if (!os) throw Error(Errc::io_error, "cannot open '" + path + "' for writing");
    write_matrix_market(os, A, comment);
    if (!os) throw Error(Errc::io_error, "write to '" + path + "' failed");
}

/// Reads a Matrix Market array file (real, integer or complex; general
/// storage).  Errors report the file name, line and offending token.
inline Matrix read_matrix_market(std::istream& is, const std::string& name = "<stream>") {
    std::string line;
    Index lineno = 0;
    if (!std::getline(is, line)) detail::io_fail(name, 1, "empty file");
    ++lineno;
    std::istringstream banner(line);
    std::string mm, object, format, field, symmetry;
    banner >> mm >> object >> format >> field >> symmetry;
    if (mm != "%%MatrixMarket" || object != "matrix")
        detail::io_fail(name, lineno, "missing %%MatrixMarket banner");
    if (format != "array")
        detail::io_fail(name, lineno, "unsupported format '" + format + "' (expected array)");
    if (field != "complex" && field != "real" && field != "integer")
        detail::io_fail(name, lineno, "unsupported field '" + field + "'");
    if (symmetry != "general")
        detail::io_fail(name, lineno, "unsupported symmetry '" + symmetry + "' (expected general)");
    const bool complex_field = field == "complex";

    // skip comments
    do {
        if (!std::getline(is, line)) detail::io_fail(name, lineno + 1, "missing size line");
        ++lineno;
    } while (!line.empty() && line[0] == '%');
    std::istringstream size(line);
    Index rows = -1, cols = -1;
    if (!(size >> rows >> cols) || rows < 0 || cols < 0)
        detail::io_fail(name, lineno, "malformed size line '" + line + "'");

    Matrix A(rows, cols);
    Index i = 0, j = 0;
    for (Index count = 0; count < rows * cols;) {
        if (!std::getline(is, line))
            detail::io_fail(name, lineno + 1,
                            "unexpected end of file: expected " + std::to_string(rows * cols) +
                                " entries, got " + std::to_string(count));
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream entries(line);
        double re, im = 0.0;
        int column = 0;
        while (entries >> re) {
            ++column;
            if (complex_field) {
                if (!(entries >> im))
                    detail::io_fail(name, lineno,
                                    "entry " + std::to_string(count + 1) + " (column " +
                                        std::to_string(column) + "): missing imaginary part");
                ++column;
            } else {
                im = 0.0;
            }
            if (count >= rows * cols) detail::io_fail(name, lineno, "too many entries");
            A(i, j) = Complex(re, im);
            if (++i == rows) {
                i = 0;
                ++j;
            }
            ++count;
        }
        if (!entries.eof()) {
            std::string tok;
            entries.clear();
            entries >> tok;
            detail::io_fail(name, lineno, "malformed number '" + tok + "' at column " +
                                              std::to_string(column + 1));
        }
    }
    return A;
}

inline Matrix read_matrix_market(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(Errc::io_error, "cannot open '" + path + "'");
    return read_matrix_market(is, path);
}

// ---------------------------------------------------------------------------
// structure spec <-> JSON
// ---------------------------------------------------------------------------

inline nlohmann::json matrix_to_json(const Matrix& A) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < A.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < A.cols(); ++j)
            row.push_back({A(i, j).real(), A(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw Error(Errc::io_error, "matrix JSON must be a nonempty array of rows");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j[0].size());
    Matrix A(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (static_cast<Index>(j[i].size()) != cols)
            throw Error(Errc::io_error, "matrix JSON has ragged rows");
        for (Index c = 0; c < cols; ++c) {
            const auto& e = j[i][c];
            if (e.is_number())
                A(i, c) = Complex(e.get<double>(), 0.0);
            else if (e.is_array() && e.size() == 2)
                A(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
            else
                throw Error(Errc::io_error, "matrix JSON entries must be numbers or [re, im]");
        }
    }
    return A;
}

inline nlohmann::json spec_to_json(const StructureSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n;
    j["form"] = form_name(spec.form);
    j["algebra"] = algebra_name(spec.algebra);
    j["M"] = matrix_to_json(spec.M);
    return j;
}

/// Parses {n, form, algebra, M} where M is either an inline matrix or a path
/// to a Matrix Market file (resolved relative to base_dir).
inline StructureSpec spec_from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = ".") {
    for (const char* key : {"n", "form", "algebra", "M"})
        if (!j.contains(key))
            throw Error(Errc::io_error, std::string("structure spec JSON lacks '") + key + "'");
    const std::string form_s = j["form"].get<std::string>();
    const std::string algebra_s = j["algebra"].get<std::string>();
    Form form;
    if (form_s == "bilinear") form = Form::bilinear;
    else if (form_s == "sesquilinear") form = Form::sesquilinear;
    else throw Error(Errc::io_error, "unknown form '" + form_s + "'");
    Algebra algebra;
    if (algebra_s == "jordan") algebra = Algebra::jordan;
    else if (algebra_s == "lie") algebra = Algebra::lie;
    else throw Error(Errc::io_error, "unknown algebra '" + algebra_s + "'");
    Matrix M;
    if (j["M"].is_string()) {
        const std::filesystem::path ref = j["M"].get<std::string>();
        M = read_matrix_market((ref.is_absolute() ? ref : base_dir / ref).string());
    } else {
        M = matrix_from_json(j["M"]);
    }
    const Index n = j["n"].get<Index>();
    if (M.rows() != n)
        throw Error(Errc::io_error, "structure spec JSON: M does not match the declared n");
    return make_structure_spec(std::move(M), form, algebra);
}

// ---------------------------------------------------------------------------
// pseudospectrum grid
// ---------------------------------------------------------------------------

/// CSV rows "re,im,eta", row-major over (re, im), no header.
inline std::string grid_to_csv(const PseudospectrumGrid& g) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            os << g.re(i) << "," << g.im(j) << "," << g.at(i, j) << "\n";
    return os.str();
}

inline nlohmann::json grid_to_json(const PseudospectrumGrid& g) {
    nlohmann::json j;
    j["re_range"] = {g.region.re_lo, g.region.re_hi};
    j["im_range"] = {g.region.im_lo, g.region.im_hi};
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    if (g.epsilon) j["epsilon"] = *g.epsilon;
    nlohmann::json vals = nlohmann::json::array();
    for (double v : g.values) {
        if (std::isinf(v))
            vals.push_back("inf");
        else
            vals.push_back(v);
    }
    j["values"] = vals;
    return j;
}

}  // namespace structmap
