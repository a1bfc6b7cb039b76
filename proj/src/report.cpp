#include "ctp/report.hpp"

#include <climits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ctp {

namespace {

std::string val_str(long v) {
    if (v >= LONG_MAX / 4) return "exact";
    return std::to_string(v);
}

// one line per certified local point of one covering
std::string cert_line(const AlgebraClass& d, const Place& v,
                      const LocalPoint& P, const AlgebraClass& fval) {
    std::ostringstream os;
    os << "d=" << d.str() << " place=" << v.str();
    if (v.is_real()) {
        os << " x_sample=" << P.real_x.get_str();
    } else {
        os << " z=(";
        for (int i = 0; i < 4; ++i)
            os << (i ? "," : "") << P.cert.z[i].get_str();
        os << ") level=" << P.cert.level
           << " value_val=" << val_str(P.cert.value_val) << " minor=("
           << P.cert.minor_i << "," << P.cert.minor_j << ")@"
           << P.cert.minor_val;
    }
    os << " f_class=" << fval.str();
    return os.str();
}

}  // namespace

DescentReport run_descent(const Curve2T& E, const ReportOptions& opt) {
    DescentReport r;
    r.E = E;
    r.selmer = selmer2(E, opt.precision, opt.seed);
    r.points = point_search(E, opt.height_bound);
    for (const CurvePoint& P : r.points) {
        AlgebraClass im = descent_map(E, P);
        if (!r.selmer.contains(im))
            throw InvariantViolation(
                "rational point image escapes the Selmer group");
        r.point_images.push_back(im);
    }
    std::vector<PairingContext> ctxs;
    r.matrix = pairing_matrix(E, r.selmer, ctxs, opt.precision, opt.seed);
    r.matrix_rank = r.matrix.rank();
    r.rank_upper_bound = int(r.selmer.dimension()) - 2 - r.matrix_rank;
    if (r.rank_upper_bound < 0)
        throw InvariantViolation("rank bound fell below zero");
    r.sha2_lower_bound = r.matrix_rank;
    std::set<Place> used;
    for (const auto& row : r.matrix.values)
        for (const auto& pv : row)
            for (const auto& [pl, t] : pv.local_terms) {
                (void)t;
                used.insert(pl);
            }
    r.places_used.assign(used.begin(), used.end());
    for (size_t i = 0; i < ctxs.size(); ++i)
        for (const auto& [pl, pr] : ctxs[i].points)
            r.certificates.push_back(
                cert_line(r.selmer.basis[i], pl, pr.first, pr.second));
    if (opt.emit_second_coverings)
        for (size_t i = 0; i < ctxs.size(); ++i)
            r.second_coverings.push_back(second_covering(ctxs[i].C, ctxs[i].f));
    return r;
}

std::string report_text(const DescentReport& r) {
    std::ostringstream os;
    os << "curve: " << r.E.str() << "\n";
    os << "discriminant: " << r.E.disc.get_str() << "\n";
    os << "selmer_dimension: " << r.selmer.dimension() << "\n";
    os << "selmer_basis:";
    for (const auto& a : r.selmer.basis) os << " " << a.str();
    os << "\n";
    os << "points: " << r.points.size() << " found\n";
    for (size_t i = 0; i < r.points.size(); ++i)
        os << "  " << r.points[i].str() << " -> " << r.point_images[i].str()
           << "\n";
    os << "pairing_matrix:\n";
    for (const auto& row : r.matrix.entries) {
        os << "  ";
        for (int e : row) os << e;
        os << "\n";
    }
    os << "matrix_rank: " << r.matrix_rank << "\n";
    os << "rank_upper_bound: " << r.rank_upper_bound << "\n";
    os << "sha2_lower_bound: " << r.sha2_lower_bound << "\n";
    os << "places_used:";
    for (const auto& v : r.places_used) os << " " << v.str();
    os << "\n";
    os << "certificates: " << r.certificates.size() << "\n";
    for (const auto& c : r.certificates) os << "  " << c << "\n";
    for (size_t i = 0; i < r.second_coverings.size(); ++i) {
        os << "second_covering[" << r.selmer.basis[i].str() << "]:\n";
        for (const auto& eq : r.second_coverings[i]) os << "  " << eq << "\n";
    }
    return os.str();
}

std::string report_json(const DescentReport& r) {
    using json = nlohmann::ordered_json;
    json j;
    j["curve"] = {{"roots", json::array({r.E.e[0].get_str(), r.E.e[1].get_str(),
                                         r.E.e[2].get_str()})},
                  {"a2", r.E.a2.get_str()},
                  {"a4", r.E.a4.get_str()},
                  {"a6", r.E.a6.get_str()}};
    j["discriminant"] = r.E.disc.get_str();
    json basis = json::array();
    for (const auto& a : r.selmer.basis)
        basis.push_back(json::array({a.c[0].value().get_str(),
                                     a.c[1].value().get_str(),
                                     a.c[2].value().get_str()}));
    j["selmer_basis"] = basis;
    j["selmer_dimension"] = r.selmer.dimension();
    json imgs = json::array();
    for (size_t i = 0; i < r.points.size(); ++i) {
        json item;
        item["point"] = {{"x", r.points[i].x.get_str()},
                         {"y", r.points[i].y.get_str()}};
        item["image"] =
            json::array({r.point_images[i].c[0].value().get_str(),
                         r.point_images[i].c[1].value().get_str(),
                         r.point_images[i].c[2].value().get_str()});
        imgs.push_back(item);
    }
    j["point_images"] = imgs;
    json rows = json::array();
    for (const auto& row : r.matrix.entries) {
        std::string s;
        for (int e : row) s += char('0' + e);
        rows.push_back(s);
    }
    j["pairing_matrix"] = rows;
    j["matrix_rank"] = r.matrix_rank;
    j["rank_upper_bound"] = r.rank_upper_bound;
    j["sha2_lower_bound"] = r.sha2_lower_bound;
    json places = json::array();
    for (const auto& v : r.places_used) places.push_back(v.str());
    j["places_used"] = places;
    j["certificates"] = r.certificates;
    json pts = json::array();
    for (const auto& P : r.points)
        pts.push_back({{"x", P.x.get_str()}, {"y", P.y.get_str()}});
    j["points"] = pts;
    j["second_coverings"] = r.second_coverings;
    return j.dump(2) + "\n";
}

}  // namespace ctp
