// Acceptance gate: eight end-to-end checks, one PASS/FAIL line each,
// nonzero exit if any fails.  Runtime budgets are enforced in code; a
// criterion that exceeds its budget fails even if its checks pass.
//
// The shared corpus is every curve y^2 = (x-e1)(x-e2)(x-e3) with distinct
// integer roots in [-10, 10], deduplicated by translation: canonical forms
// (0, a, b) with 0 < a < b <= 20, 190 curves in all.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctp/report.hpp"

using namespace ctp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool g_all_ok = true;
std::array<std::string, 9> g_lines;

void line(int k, const char* label, bool ok, double secs, double budget,
          const std::string& detail) {
    std::string tail;
    if (budget > 0)
        tail = " [" + std::to_string(secs).substr(0, 5) + "s of " +
               std::to_string((int)budget) + "s]";
    else
        tail = " [" + std::to_string(secs).substr(0, 5) + "s]";
    g_lines[k] = "criterion " + std::to_string(k) + " (" + label +
                 "): " + (ok ? "PASS" : "FAIL") + tail +
                 (detail.empty() ? "" : " " + detail);
    g_all_ok = g_all_ok && ok;
}

struct CurveData {
    Curve2T E;
    SelmerGroup S;
    std::vector<CurvePoint> pts;        // affine, y >= 0, height <= 1e4
    std::vector<AlgebraClass> images;   // descent images of pts
    std::vector<PairingContext> ctxs;
    PairingMatrix M;
};

std::vector<CurveData> g_corpus;

Rat random_rat(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-10000, 10000);
    std::uniform_int_distribution<long> den(1, 10000);
    long n = num(rng);
    if (n == 0) n = 3;
    return Rat(n) / Rat(den(rng));
}

// ---- criterion 1: product formula for the quadratic symbol ----
void criterion1() {
    auto t0 = Clock::now();
    std::mt19937 rng(1);
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i)
        ok = reciprocity_check(random_rat(rng), random_rat(rng));
    double secs = seconds_since(t0);
    line(1, "product formula over all places", ok && secs < 5.0, secs, 5,
         ok ? "200 pairs" : "product formula violated");
}

// ---- criterion 2: closed form vs certified search, all p <= 50 ----
void criterion2() {
    auto t0 = Clock::now();
    std::vector<Place> places{Place::real()};
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L,
                   41L, 43L, 47L})
        places.push_back(Place::finite(p));
    std::mt19937 rng(2);
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        Rat a = random_rat(rng), b = random_rat(rng);
        for (const Place& v : places)
            if ((hilbert_symbol(a, b, v) == 1) != solvability_oracle(a, b, v)) {
                ok = false;
                break;
            }
    }
    double secs = seconds_since(t0);
    line(2, "symbol equals the search oracle", ok && secs < 60.0, secs, 60,
         ok ? "100 pairs x 16 places" : "disagreement found");
}

// ---- criterion 3: corpus scan; images inside the selmer group ----
void criterion3() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    for (long a = 1; a <= 20 && ok; ++a)
        for (long b = a + 1; b <= 20 && ok; ++b) {
            CurveData cd;
            cd.E = new_curve(0, a, b);
            cd.S = selmer2(cd.E);
            cd.pts = point_search(cd.E, 10000);
            for (const CurvePoint& P : cd.pts) {
                AlgebraClass img = descent_map(cd.E, P);
                cd.images.push_back(img);
                if (!cd.S.contains(img)) {
                    ok = false;
                    why = "image escapes the selmer group on " + cd.E.str();
                }
            }
            // homomorphism on all pairs drawn from the found points
            std::vector<CurvePoint> all{CurvePoint()};
            for (const CurvePoint& P : cd.pts) {
                all.push_back(P);
                all.push_back(cd.E.neg(P));
            }
            for (size_t i = 0; i < all.size() && ok; ++i)
                for (size_t j = i; j < all.size() && ok; ++j)
                    if (!(descent_map(cd.E, cd.E.add(all[i], all[j])) ==
                          descent_map(cd.E, all[i]) *
                              descent_map(cd.E, all[j]))) {
                        ok = false;
                        why = "descent map not multiplicative on " +
                              cd.E.str();
                    }
            g_corpus.push_back(std::move(cd));
        }
    double secs = seconds_since(t0);
    if (ok && g_corpus.size() != 190) {
        ok = false;
        why = "corpus size " + std::to_string(g_corpus.size());
    }
    line(3, "descent images over the 190-curve corpus",
         ok && secs < 600.0, secs, 600, ok ? "" : why);
}

// ---- criterion 5: matrix properties on every corpus curve ----
// (runs before 4 and 7, which reuse the matrices computed here)
void criterion5() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    std::mt19937 rng(5);
    for (CurveData& cd : g_corpus) {
        cd.M = pairing_matrix(cd.E, cd.S, cd.ctxs, 0, 0);
        size_t n = cd.S.basis.size();
        for (size_t i = 0; i < n; ++i) {
            if (cd.M.entries[i][i] != 0) ok = false;
            for (size_t j = 0; j < n; ++j)
                if (cd.M.entries[i][j] != cd.M.entries[j][i]) ok = false;
        }
        if (cd.M.rank() % 2 != 0) ok = false;
        if (!ok) {
            why = "shape violated on " + cd.E.str();
            break;
        }
        // bilinearity on sampled triples
        if (n >= 2) {
            std::vector<AlgebraClass> els = cd.S.elements();
            std::uniform_int_distribution<size_t> pick(0, els.size() - 1);
            std::uniform_int_distribution<size_t> row(0, n - 1);
            for (int t = 0; t < 3; ++t) {
                size_t i = row(rng);
                const AlgebraClass& b = els[pick(rng)];
                const AlgebraClass& c = els[pick(rng)];
                int vb = cassels_pairing(cd.E, cd.ctxs[i], b).value;
                int vc = cassels_pairing(cd.E, cd.ctxs[i], c).value;
                if (cassels_pairing(cd.E, cd.ctxs[i], b * c).value != vb * vc) {
                    ok = false;
                    why = "bilinearity violated on " + cd.E.str();
                }
            }
        }
        // annihilates every distinct point image
        std::set<std::string> done;
        for (const AlgebraClass& img : cd.images) {
            if (img.is_one() || !done.insert(img.str()).second) continue;
            PairingContext ctx = make_context(cd.E, img);
            for (const AlgebraClass& bas : cd.S.basis)
                if (cassels_pairing(cd.E, ctx, bas).value != 1) {
                    ok = false;
                    why = "a point image pairs nontrivially on " + cd.E.str();
                }
        }
        if (!ok) break;
    }
    double secs = seconds_since(t0);
    line(5, "pairing matrices alternating, even rank, kill point images", ok,
         secs, 0, why);
}

// ---- criterion 4: independence of every evaluation choice ----
void criterion4() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    int used = 0;
    for (CurveData& cd : g_corpus) {
        if (cd.S.dimension() < 3 || used >= 10) continue;
        ++used;
        size_t n = cd.S.basis.size();
        // three alternative local-point choices for every entry
        for (int choice = 1; choice <= 3 && ok; ++choice)
            for (size_t i = 0; i < n && ok; ++i)
                for (size_t j = 0; j < n && ok; ++j)
                    if (cassels_pairing(cd.E, cd.ctxs[i], cd.S.basis[j], 0, 0,
                                        choice)
                            .value != cd.M.values[i][j].value) {
                        ok = false;
                        why = "local-point choice changed an entry on " +
                              cd.E.str();
                    }
        // rescaled function triples: by constants and by a square
        for (size_t i = 0; i < n && ok; ++i) {
            PairingContext cs = make_context(cd.E, cd.S.basis[i]);
            cs.f = rescale_constant(cs.f, 0, Rat(5));
            cs.f = rescale_constant(cs.f, 1, Rat(-7) / Rat(3));
            cs.f = rescale_constant(cs.f, 2, Rat(30));
            PairingContext sq = make_context(cd.E, cd.S.basis[i]);
            sq.f = rescale_square(sq.f, 0, Poly4::var(0) + Poly4::var(2),
                                  Poly4::var(0));
            for (size_t j = 0; j < n && ok; ++j) {
                int want = cd.M.values[i][j].value;
                if (cassels_pairing(cd.E, cs, cd.S.basis[j]).value != want ||
                    cassels_pairing(cd.E, sq, cd.S.basis[j]).value != want) {
                    ok = false;
                    why = "rescaling f changed an entry on " + cd.E.str();
                }
            }
        }
        if (!ok) break;
    }
    if (ok && used < 10) {
        ok = false;
        why = "only " + std::to_string(used) + " curves of dimension >= 3";
    }
    double secs = seconds_since(t0);
    line(4, "pairing independent of points and normalization", ok, secs, 0,
         ok ? "10 curves, full matrices" : why);
}

// ---- criterion 6: the function triple realizes the descent map ----
void criterion6() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    int min_checked = 1 << 20;
    for (const CurveData& cd : g_corpus) {
        // the full inventory of known points: search hits, inverses, sums
        std::vector<CurvePoint> all{CurvePoint()};
        std::set<std::string> seen{all[0].str()};
        for (const CurvePoint& P : cd.pts)
            for (const CurvePoint& Q : {P, cd.E.neg(P)})
                if (seen.insert(Q.str()).second) all.push_back(Q);
        size_t base = all.size();
        for (size_t i = 0; i < base && all.size() < 16; ++i)
            for (size_t j = i; j < base && all.size() < 16; ++j) {
                CurvePoint S = cd.E.add(all[i], all[j]);
                if (seen.insert(S.str()).second) all.push_back(S);
            }
        CoveringModel C1 = make_covering(cd.E, AlgebraClass());
        std::vector<std::array<Int, 4>> avoid;
        for (size_t i = 0; i < all.size() && avoid.size() < 8; ++i)
            avoid.push_back(theta_lift(cd.E, all[i]));
        FTriple f = construct_f(C1, avoid);
        int checked = 0;
        for (const CurvePoint& P : all) {
            AlgebraClass lhs;
            try {
                lhs = evaluate_f_exact(f, theta_lift(cd.E, P));
            } catch (const InvalidInput&) {
                continue;  // still on a divisor; does not count
            }
            ++checked;
            if (!(lhs == descent_map(cd.E, P))) {
                ok = false;
                why = "triple disagrees with the descent map on " +
                      cd.E.str() + " at " + P.str();
            }
        }
        // a curve whose group has fewer than 5 elements is checked at all
        // of them; everything else must reach 5
        int target = (int)std::min<size_t>(5, all.size());
        if (checked < target) {
            ok = false;
            why = "only " + std::to_string(checked) + " of " +
                  std::to_string(target) + " evaluations on " + cd.E.str();
        }
        min_checked = std::min(min_checked, checked);
        if (!ok) break;
    }
    double secs = seconds_since(t0);
    line(6, "function triple realizes the descent map", ok, secs, 0,
         ok ? "min " + std::to_string(min_checked) + " points per curve" : why);
}

// ---- criterion 7: a corpus witness for a genuinely finer bound ----
void criterion7() {
    auto t0 = Clock::now();
    bool ok = false;
    std::string detail;
    int max_rank = 0;
    const CurveData* witness = nullptr;
    for (const CurveData& cd : g_corpus) {
        max_rank = std::max(max_rank, cd.M.rank());
        if (!witness && cd.M.rank() >= 2) witness = &cd;
    }
    if (witness) {
        const CurveData& cd = *witness;
        int plain = cd.S.dimension() - 2;
        int refined = plain - cd.M.rank();
        // corroborate: no points beyond the refined bound up to height 1e6,
        // and matching parity of the independent points found
        std::vector<CurvePoint> deep = point_search(cd.E, 1000000);
        int free_pts = 0;
        for (const CurvePoint& P : deep)
            if (P.y != 0) ++free_pts;
        std::set<std::string> imgs;
        for (const CurvePoint& P : deep)
            imgs.insert(descent_map(cd.E, P).str());
        int found_rank_floor = free_pts > 0 ? 1 : 0;  // crude but exact
        ok = refined < plain && found_rank_floor <= refined &&
             (refined - found_rank_floor) % 2 == 0;
        detail = cd.E.str() + ": refined " + std::to_string(refined) +
                 " vs plain " + std::to_string(plain);
    } else {
        detail = "largest matrix rank over the corpus is " +
                 std::to_string(max_rank) +
                 "; no curve with roots inside [-10,10] exercises a rank-2 "
                 "matrix (smallest known witness: y^2 = x(x-17)(x+17))";
    }
    double secs = seconds_since(t0);
    line(7, "a corpus curve where the refined bound bites", ok && secs < 1800,
         secs, 1800, detail);
}

// ---- criterion 8: anchors through the command line ----
struct CliOut {
    int code = -1;
    std::string out;
};

CliOut run_cli(const std::string& args) {
    CliOut r;
    const char* bin = std::getenv("CTPAIR_BIN");
    if (!bin) return r;
    std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void criterion8() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;

    auto t1 = Clock::now();
    CliOut a = run_cli("run --roots -1,0,1 --json");
    double s1 = seconds_since(t1);
    if (a.code != 0) {
        ok = false;
        why = "first anchor run failed";
    } else {
        auto j = nlohmann::json::parse(a.out, nullptr, false);
        if (j.is_discarded() || j["selmer_dimension"] != 2 ||
            j["matrix_rank"] != 0 || j["rank_upper_bound"] != 0 || s1 >= 10) {
            ok = false;
            why = "first anchor values off";
        }
    }

    auto t2 = Clock::now();
    CliOut b = run_cli("run --roots -6,0,6 --json");
    double s2 = seconds_since(t2);
    if (ok) {
        if (b.code != 0) {
            ok = false;
            why = "second anchor run failed";
        } else {
            auto j = nlohmann::json::parse(b.out, nullptr, false);
            bool found = false;
            if (!j.is_discarded())
                for (const auto& pi : j["point_images"])
                    if (pi["point"]["x"] == "-3" && pi["point"]["y"] == "9")
                        found = true;
            if (j.is_discarded() || j["selmer_dimension"] != 3 ||
                j["matrix_rank"] != 0 || j["rank_upper_bound"] != 1 ||
                !found || s2 >= 10) {
                ok = false;
                why = "second anchor values off";
            }
        }
    }
    double secs = seconds_since(t0);
    line(8, "known curve anchors through the cli", ok, secs, 20, why);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion5();  // computes the matrices criteria 4 and 7 reuse
    criterion4();
    criterion6();
    criterion7();
    criterion8();
    for (int k = 1; k <= 8; ++k) std::printf("%s\n", g_lines[k].c_str());
    return g_all_ok ? 0 : 1;
}
