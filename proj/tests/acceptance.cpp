// Acceptance run: one line per criterion with its measured value, the pinned
// tolerance and the runtime against its budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "anosov/catalog.hpp"
#include "anosov/numeric.hpp"
#include "anosov/surgery.hpp"
#include "anosov/traintrack.hpp"
#include "oracles.hpp"

using namespace anosov;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = dt < budget_s;
    bool ok = o.pass && in_time;
    failures += !ok;
    std::printf("[%s] criterion %2d  %-38s %7.3fs / %4.0fs  %s%s\n", ok ? "PASS" : "FAIL", id, title, dt, budget_s,
                o.detail.c_str(), in_time ? "" : "  (over budget)");
    std::fflush(stdout);
}

std::string num(double v, const char* f = "%.9g") {
    char b[64];
    std::snprintf(b, sizeof b, f, v);
    return b;
}

}  // namespace

int main() {
    criterion(1, "DA leaf counts", 1, [] {
        bool ok = true;
        std::string d;
        for (auto dir : {DADirection::Attracting, DADirection::Repelling})
            for (auto mul : {Multipliers::Positive, Multipliers::Negative}) {
                Plug p = catalog_anosov_base("M");
                Plug q = da_bifurcation(p, {{"M.X", "O"}, dir, mul});
                const auto& lam = q.torus("M.N(O)").lamination;
                std::size_t want = mul == Multipliers::Positive ? 2 : 1;
                bool coherent = lam.sign_word().coherent();
                bool good = lam.n_compact() == want && coherent && lam.is_filling();
                ok = ok && good;
                d += std::string(to_string(dir)).substr(0, 3) + "/" + to_string(mul) + "=" +
                     std::to_string(lam.n_compact()) + (good ? "" : "!") + " ";
            }
        return Outcome{ok, d};
    });

    criterion(2, "M0X0 -> M1 entrance bookkeeping", 1, [] {
        bool ok = true;
        std::string d;
        for (int n = 1; n <= 4; ++n) {
            Plug m = build_m1(n);
            const auto& lam = m.torus("V.in").lamination;
            bool good = int(lam.n_compact()) == 2 * n + 3 && lam.minority_count() == 1;
            ok = ok && good;
            d += "n=" + std::to_string(n) + ":" + std::to_string(lam.n_compact()) + "/" +
                 std::to_string(lam.minority_count()) + " ";
        }
        return Outcome{ok, d + "(leaves/incoherent)"};
    });

    criterion(3, "n-flows distinguishability", 1, [] {
        bool ok = true;
        std::string d;
        for (int n = 1; n <= 5; ++n) {
            auto ms = build_n_flows(n);
            std::set<std::pair<std::int64_t, std::int64_t>> seen;
            ok = ok && int(ms.size()) == n;
            for (std::size_t k = 0; k < ms.size(); ++k) {
                auto v = nonequivalence_invariant(ms[k]);
                std::int64_t kk = std::int64_t(k) + 1;
                ok = ok && ms[k].transitive && seen.insert(v).second && v.first == kk && v.second == 2 * n + 2 - kk;
            }
            d += "n=" + std::to_string(n) + ":" + std::to_string(seen.size()) + " ";
        }
        return Outcome{ok, d + "distinct transitive models"};
    });

    criterion(4, "both-flows pair", 1, [] {
        auto [a, b] = build_both_flows();
        bool ok = !a.transitive && b.transitive && a.closed && b.closed && a.status != AnosovStatus::NotCertified &&
                  b.status != AnosovStatus::NotCertified && a.descriptor() == b.descriptor();
        return Outcome{ok, std::string("transitive=(") + (a.transitive ? "true" : "false") + "," +
                               (b.transitive ? "true" : "false") +
                               ") descriptors " + (a.descriptor() == b.descriptor() ? "equal" : "differ")};
    });

    criterion(5, "transitivity vs reachability oracle", 5, [] {
        std::mt19937_64 rng(20240501);
        int agree = 0, yes = 0;
        for (int i = 0; i < 1000; ++i) {
            auto g = oracle::random_graph(rng, 12);
            bool a = is_combinatorially_transitive(g.graph());
            bool b = oracle::transitive(g.n, g.edges);
            agree += a == b;
            yes += b;
        }
        return Outcome{agree == 1000, std::to_string(agree) + "/1000 agree (" + std::to_string(yes) + " transitive)"};
    });

    criterion(6, "combinatorial types vs re-enumeration", 10, [] {
        std::size_t pairs = 0, agree = 0;
        for (std::size_t n = 1; n <= 6; ++n) {
            auto words = oracle::all_words(n);
            for (const auto& a : words)
                for (const auto& b : words) {
                    ++pairs;
                    agree += types_equivalent(a, b) == oracle::types_equivalent(a, b);
                }
        }
        return Outcome{agree == pairs, std::to_string(agree) + "/" + std::to_string(pairs) + " pairs agree"};
    });

    criterion(7, "attractor realization", 5, [] {
        int ok = 0, total = 0;
        for (std::size_t n = 1; n <= 4; ++n)
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                std::vector<Sign> v(n);
                for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? Sign::Minus : Sign::Plus;
                // a sequence and its negative describe the same word
                Sign first = v[0];
                for (auto& s : v) s = s * first;
                SignWord sigma(v);
                ++total;
                Plug a = realize_attractor(sigma);
                ok += a.is_attracting() && a.entrance.size() == 1 &&
                      oracle::types_equivalent(a.entrance[0].lamination.sign_word(), sigma);
            }
        return Outcome{ok == 30 && total == 30, std::to_string(ok) + "/" + std::to_string(total) + " realized"};
    });

    criterion(8, "DA local model numerics", 10, [] {
        numeric::LocalDAField f;
        f.lambda = -1;
        f.mu = 1;
        f.eta = 0.5;
        f.active = true;
        numeric::Planar pl = [&](const Eigen::Vector2d& x) { return f.transverse(x); };
        auto e = numeric::equilibrium_multipliers(pl, {0, 0});
        double err_origin = std::max(std::fabs(e[0].real() - f.lambda), std::fabs(e[1].real() + f.mu));
        double u = numeric::da_saddle_ordinate(f);
        double delta = std::sqrt(1 - std::pow(2.0, -0.5));
        double err_saddle = std::fabs(u - delta);
        double order = numeric::rk4_empirical_order(f, {0.5, 0.01, 0}, 2.0, 0.1);
        bool ok = err_origin <= 1e-6 && err_saddle <= 1e-6 && order >= 3.8 && order <= 4.2;
        return Outcome{ok, "origin err " + num(err_origin, "%.1e") + " (tol 1e-6), saddle " + num(u, "%.7f") +
                               " err " + num(err_saddle, "%.1e") + " (tol 1e-6), RK4 order " + num(order, "%.3f") +
                               " in [3.8,4.2]"};
    });

    criterion(9, "section-8 numerics", 60, [] {
        numeric::Section8Field f;
        std::string d;
        bool ok = true;
        std::vector<int> ref;
        for (double T : {100.0, 200.0, 400.0}) {
            numeric::NumericConfig cfg;
            cfg.t_max = T;
            auto m = numeric::measure_entrance_lamination(f, 256, cfg);
            ok = ok && m.arcs.size() == 4 && m.gaps_consistent;
            if (ref.empty()) ref = m.gap_to_exit;
            ok = ok && m.gap_to_exit == ref;
            d += "T" + num(T, "%.0f") + ":" + std::to_string(m.arcs.size()) + " ";
        }
        Plug u = catalog_u_section8("U");
        std::vector<int> cat(4, -1);
        for (const auto& g : u.gaps) cat[g.entrance_band] = int(g.exit_band);
        auto sorted = ref;
        std::sort(sorted.begin(), sorted.end());
        bool bij = sorted == std::vector<int>{0, 1, 2, 3} && ref == cat;
        d += bij ? "gaps 4<->4 " : "gaps mismatch ";
        auto samples = numeric::expansion_samples(f, 4, 1e-5, 1e-1);
        auto dl = numeric::cone_expansion_profile(samples, {2, 4, 8});
        bool prof = dl[0] >= dl[1] && dl[1] >= dl[2] && dl[2] > 0;
        d += "d(2,4,8)=" + num(dl[0], "%.3g") + "," + num(dl[1], "%.3g") + "," + num(dl[2], "%.3g") + " ";
        bool inter = true;
        for (int q = 1; q <= 10; ++q)
            for (int q2 = 1; q2 <= 10; ++q2) inter = inter && torus_intersection(q, q2) == std::abs(q - q2);
        d += inter ? "intersections ok" : "intersections wrong";
        return Outcome{ok && bij && prof && inter, d};
    });

    criterion(10, "train tracks", 10, [] {
        auto t = companion_chart_track();
        Measure m;
        for (int w : {1, 1, 2, 1, 1}) m.weights.push_back(Rational(w));  // a b e c d
        bool companion = satisfies_switch_conditions(t, m) && m.positive();
        std::vector<TrainTrack> corpus = oracle::exhaustive_tracks(3, 3);
        for (auto& x : oracle::exhaustive_tracks(2, 4))
            if (x.switches.size() == 2 && x.branches.size() == 4) corpus.push_back(x);
        std::mt19937_64 rng(7);
        for (int i = 0; i < 3000; ++i) corpus.push_back(oracle::random_track(rng, 12));
        std::size_t agree = 0, rec = 0;
        for (const auto& x : corpus) {
            auto pm = positive_measure(x);
            bool r = is_recurrent(x);
            bool o = oracle::recurrent(x);
            bool valid = !pm || (satisfies_switch_conditions(x, *pm) && pm->positive());
            agree += (pm.has_value() == r) && (r == o) && valid;
            rec += o;
        }
        return Outcome{companion && agree == corpus.size(),
                       std::string("companion weights ") + (companion ? "accepted" : "rejected") + ", " +
                           std::to_string(agree) + "/" + std::to_string(corpus.size()) + " tracks agree (" +
                           std::to_string(rec) + " recurrent)"};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
