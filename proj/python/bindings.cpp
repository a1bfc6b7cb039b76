#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <vector>

#include "ctp/report.hpp"

namespace py = pybind11;
using namespace ctp;

namespace {

Curve2T curve_from(const std::array<long, 3>& e) {
    return new_curve(Int(e[0]), Int(e[1]), Int(e[2]));
}

Place place_from(const std::string& s) {
    if (s == "real") return Place::real();
    return Place::finite(Int(s, 10));
}

}  // namespace

PYBIND11_MODULE(_ctpair, m) {
    m.doc() =
        "two-descent and Cassels-Tate pairing for y^2 = (x-e1)(x-e2)(x-e3)";

    py::register_exception<InvalidInput>(m, "InvalidInput");
    py::register_exception<IndeterminatePrecision>(m, "IndeterminatePrecision");

    m.def(
        "hilbert_symbol",
        [](long a, long b, const std::string& place) {
            return hilbert_symbol(Rat(Int(a)), Rat(Int(b)), place_from(place));
        },
        py::arg("a"), py::arg("b"), py::arg("place"),
        "quadratic Hilbert symbol (a,b)_v; place is 'real' or a prime string");

    m.def(
        "selmer_basis",
        [](const std::array<long, 3>& roots, unsigned seed) {
            SelmerGroup S = selmer2(curve_from(roots), 0, seed);
            std::vector<std::array<std::string, 3>> out;
            for (const auto& a : S.basis)
                out.push_back({a.c[0].str(), a.c[1].str(), a.c[2].str()});
            return out;
        },
        py::arg("roots"), py::arg("seed") = 0,
        "basis of the 2-Selmer group as squarefree triples");

    m.def(
        "pairing_matrix_rows",
        [](const std::array<long, 3>& roots, unsigned seed) {
            Curve2T E = curve_from(roots);
            SelmerGroup S = selmer2(E, 0, seed);
            PairingMatrix M = pairing_matrix(E, S, 0, seed);
            std::vector<std::string> rows;
            for (const auto& r : M.entries) {
                std::string s;
                for (int x : r) s += char('0' + x);
                rows.push_back(s);
            }
            return rows;
        },
        py::arg("roots"), py::arg("seed") = 0,
        "Cassels-Tate pairing matrix over the Selmer basis, rows of 0/1");

    m.def(
        "descent_report_json",
        [](const std::array<long, 3>& roots, long height_bound,
           unsigned seed) {
            ReportOptions opt;
            opt.height_bound = Int(height_bound);
            opt.seed = seed;
            opt.want_json = true;
            return report_json(run_descent(curve_from(roots), opt));
        },
        py::arg("roots"), py::arg("height_bound") = 10000,
        py::arg("seed") = 0, "full descent report as a JSON string");
}
