#pragma once

#include <string>
#include <vector>

#include "ctp/pairing.hpp"

namespace ctp {

struct ReportOptions {
    Int height_bound = 10000;
    long precision = 0;   // 0 = documented defaults
    unsigned seed = 0;
    bool want_json = false;
    bool emit_second_coverings = true;
};

struct DescentReport {
    Curve2T E;
    SelmerGroup selmer;
    std::vector<CurvePoint> points;               // found rational points
    std::vector<AlgebraClass> point_images;       // delta of the points
    PairingMatrix matrix;
    int matrix_rank = 0;
    int rank_upper_bound = 0;
    int sha2_lower_bound = 0;
    std::vector<Place> places_used;
    std::vector<std::string> certificates;        // human-readable summaries
    std::vector<std::vector<std::string>> second_coverings;
};

// Full pipeline: Selmer group, point search, pairing matrix, bounds.
DescentReport run_descent(const Curve2T& E, const ReportOptions& opt);

std::string report_text(const DescentReport& r);
std::string report_json(const DescentReport& r);  // stable field order

}  // namespace ctp
