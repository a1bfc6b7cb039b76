// ctpair: two-descent and Cassels-Tate pairing calculator for elliptic
// curves y^2 = (x-e1)(x-e2)(x-e3) with integer roots.
//
//   ctpair run    --roots -6,0,6 [--json] [--height-bound N] [--seed S]
//   ctpair verify [--roots e1,e2,e3]
//
// Exit codes: 0 ok, 1 invalid input, 2 precision exhausted, 3 failed
// invariant in verify, 4 internal error.

#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctp/report.hpp"

using namespace ctp;

namespace {

std::vector<Int> parse_csv_ints(const std::string& s, size_t want,
                                const char* what) {
    std::vector<Int> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty())
            throw InvalidInput(std::string(what) + ": empty entry");
        try {
            out.emplace_back(tok, 10);
        } catch (const std::invalid_argument&) {
            throw InvalidInput(std::string(what) + ": not an integer: " + tok);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.size() != want)
        throw InvalidInput(std::string(what) + ": expected " +
                           std::to_string(want) + " comma-separated integers");
    return out;
}

std::optional<Curve2T> curve_from_flags(const std::string& roots_csv,
                                        const std::string& ab_csv) {
    if (!roots_csv.empty() && !ab_csv.empty())
        throw InvalidInput("--roots and --ab are mutually exclusive");
    if (!roots_csv.empty()) {
        auto e = parse_csv_ints(roots_csv, 3, "--roots");
        return new_curve(e[0], e[1], e[2]);
    }
    if (!ab_csv.empty()) {
        auto ab = parse_csv_ints(ab_csv, 2, "--ab");
        return new_curve(-ab[1], 0, ab[0]);
    }
    return std::nullopt;
}

int do_run(const std::optional<Curve2T>& curve, const ReportOptions& opt) {
    if (!curve) throw InvalidInput("run requires --roots or --ab");
    DescentReport r = run_descent(*curve, opt);
    std::cout << (opt.want_json ? report_json(r) : report_text(r));
    return 0;
}

bool check_reciprocity(unsigned seed) {
    std::mt19937 rng(seed * 7919u + 1);
    std::uniform_int_distribution<long> dist(-120, 120);
    auto nz = [&](long fallback) {
        long v = dist(rng);
        return v == 0 ? fallback : v;
    };
    for (int i = 0; i < 60; ++i)
        if (!reciprocity_check(Rat(nz(3)), Rat(nz(-5)))) return false;
    for (int i = 0; i < 20; ++i) {
        Rat a = Rat(nz(3)) / Rat(nz(7));
        Rat b = Rat(nz(-11)) / Rat(nz(2));
        if (!reciprocity_check(a, b)) return false;
    }
    return true;
}

bool check_oracle_equivalence(unsigned seed) {
    std::mt19937 rng(seed * 7919u + 2);
    std::uniform_int_distribution<long> dist(-50, 50);
    std::vector<Place> places{Place::real()};
    for (long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47})
        places.push_back(Place::finite(p));
    auto nz = [&](long fallback) {
        long v = dist(rng);
        return v == 0 ? fallback : v;
    };
    for (int i = 0; i < 12; ++i) {
        Rat a(nz(6)), b(nz(-10));
        for (const Place& v : places) {
            bool solvable = solvability_oracle(a, b, v);
            if ((hilbert_symbol(a, b, v) == 1) != solvable) return false;
        }
    }
    return true;
}

struct CurveData {
    Curve2T E;
    SelmerGroup S;
    std::vector<PairingContext> ctxs;
    PairingMatrix M;
};

int do_verify(const std::optional<Curve2T>& curve, long precision,
              unsigned seed, bool inject_fault) {
    g_inject_symbol_fault = inject_fault;
    std::vector<Curve2T> curves;
    if (curve)
        curves.push_back(*curve);
    else {
        curves.push_back(new_curve(-1, 0, 1));
        curves.push_back(new_curve(-6, 0, 6));
    }

    bool all_ok = true;
    auto emit = [&](const char* name, bool ok,
                    const std::vector<std::string>& detail = {}) {
        std::cout << name << ": " << (ok ? "pass" : "fail") << "\n";
        for (const auto& line : detail) std::cout << line << "\n";
        all_ok = all_ok && ok;
    };

    emit("reciprocity", check_reciprocity(seed));
    emit("oracle equivalence", check_oracle_equivalence(seed));

    std::vector<CurveData> data;
    for (const Curve2T& E : curves) {
        CurveData cd;
        cd.E = E;
        cd.S = selmer2(E, precision, seed);
        cd.M = pairing_matrix(E, cd.S, cd.ctxs, precision, seed);
        data.push_back(std::move(cd));
    }

    bool ok_alt = true;
    for (const CurveData& cd : data) {
        size_t n = cd.S.basis.size();
        for (size_t i = 0; i < n; ++i) {
            if (cd.M.entries[i][i] != 0) ok_alt = false;
            for (size_t j = 0; j < i; ++j)
                if (cd.M.entries[i][j] != cd.M.entries[j][i]) ok_alt = false;
        }
    }
    emit("alternating", ok_alt);

    bool ok_bil = true;
    {
        std::mt19937 rng(seed * 7919u + 3);
        for (CurveData& cd : data) {
            auto els = cd.S.elements();
            if (els.size() < 2) continue;
            std::uniform_int_distribution<size_t> pick(0, els.size() - 1);
            size_t n = cd.S.basis.size();
            for (size_t i = 0; i < n && ok_bil; ++i)
                for (int t = 0; t < 3 && ok_bil; ++t) {
                    const AlgebraClass& b = els[pick(rng)];
                    const AlgebraClass& c = els[pick(rng)];
                    int vb = cassels_pairing(cd.E, cd.ctxs[i], b, precision,
                                             seed)
                                 .value;
                    int vc = cassels_pairing(cd.E, cd.ctxs[i], c, precision,
                                             seed)
                                 .value;
                    int vbc = cassels_pairing(cd.E, cd.ctxs[i], b * c,
                                              precision, seed)
                                  .value;
                    ok_bil = vbc == vb * vc;
                }
        }
    }
    emit("bilinear", ok_bil);

    bool ok_ind = true;
    for (CurveData& cd : data) {
        size_t n = cd.S.basis.size();
        if (n == 0) continue;
        std::vector<std::pair<size_t, size_t>> pairs{{0, n - 1}, {n / 2, 0}};
        for (int ch = 1; ch <= 2 && ok_ind; ++ch)
            for (auto [i, j] : pairs) {
                int v0 = cd.M.entries[i][j] ? -1 : 1;
                int vch = cassels_pairing(cd.E, cd.ctxs[i], cd.S.basis[j],
                                          precision, seed, ch)
                              .value;
                if (v0 != vch) {
                    ok_ind = false;
                    break;
                }
            }
    }
    emit("local-point independence", ok_ind);

    bool ok_delta = true;
    std::vector<std::string> delta_detail;
    {
        AlgebraClass one;
        int tested = 0;
        for (const CurveData& cd : data) {
            CoveringModel C1 = make_covering(cd.E, one);
            FTriple f1 = construct_f(C1);
            for (const CurvePoint& P : point_search(cd.E, 10000)) {
                std::array<Int, 4> z = theta_lift(cd.E, P);
                AlgebraClass lhs;
                try {
                    lhs = evaluate_f_exact(f1, z);
                } catch (const InvalidInput&) {
                    continue;  // point on a divisor of f
                }
                AlgebraClass rhs = descent_map(cd.E, P);
                bool agree = lhs == rhs;
                ok_delta = ok_delta && agree;
                ++tested;
                delta_detail.push_back("  delta=f at " + P.str() +
                                       (agree ? ": agree" : ": disagree"));
            }
        }
        if (tested == 0)
            delta_detail.push_back(
                "  no off-divisor rational points found (vacuous)");
    }
    emit("delta-f consistency", ok_delta, delta_detail);

    bool ok_ker = true;
    for (const CurveData& cd : data) {
        std::set<std::string> done;
        for (const CurvePoint& P : point_search(cd.E, 2000)) {
            AlgebraClass img = descent_map(cd.E, P);
            if (img.is_one() || !done.insert(img.str()).second) continue;
            PairingContext ctx = make_context(cd.E, img);
            for (const AlgebraClass& b : cd.S.basis)
                if (cassels_pairing(cd.E, ctx, b, precision, seed).value != 1)
                    ok_ker = false;
        }
    }
    emit("kernel soundness", ok_ker);

    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Two-descent with Cassels-Tate pairing for y^2 = "
        "(x-e1)(x-e2)(x-e3)"};
    app.require_subcommand(1);

    std::string roots_csv, ab_csv;
    long long height_bound = 10000;
    long precision = 0;
    unsigned seed = 0;
    bool want_json = false;
    bool inject_fault = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--roots", roots_csv,
                      "three distinct integer roots e1,e2,e3");
        c->add_option("--ab", ab_csv, "pair a,b meaning roots -b,0,a");
        c->add_option("--height-bound", height_bound,
                      "numerator bound for the rational point search");
        c->add_option("--precision", precision,
                      "override of the p-adic working precision");
        c->add_option("--seed", seed, "seed driving all randomized orders");
        c->add_flag("--json", want_json, "emit the report as JSON");
    };
    CLI::App* run_cmd = app.add_subcommand("run", "full descent report");
    add_common(run_cmd);
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "invariant self-checks");
    add_common(verify_cmd);
    verify_cmd->add_flag("--inject-symbol-fault", inject_fault)->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        std::optional<Curve2T> curve = curve_from_flags(roots_csv, ab_csv);
        if (app.got_subcommand(run_cmd)) {
            ReportOptions opt;
            opt.height_bound = Int(static_cast<long>(height_bound));
            opt.precision = precision;
            opt.seed = seed;
            opt.want_json = want_json;
            return do_run(curve, opt);
        }
        return do_verify(curve, precision, seed, inject_fault);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IndeterminatePrecision& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
