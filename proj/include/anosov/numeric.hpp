#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "anosov/errors.hpp"
#include "anosov/normal_form.hpp"
#include "anosov/rational.hpp"

namespace anosov::numeric {

// Tolerances shared by all numeric routines.
struct NumericConfig {
    double event_tol = 1e-10;
    double fd_step = 1e-5;
    double equilibrium_tol = 1e-9;
    double t_max = 200.0;
    double h = 1e-3;
    double disc_radius = 0.15;
    double bisection_tol = 1e-12;
};

using State = std::array<double, 3>;
using Field = std::function<State(const State&)>;

inline State axpy(const State& x, double a, const State& k) {
    return {x[0] + a * k[0], x[1] + a * k[1], x[2] + a * k[2]};
}

inline State rk4_step(const Field& f, const State& x, double h) {
    State k1 = f(x);
    State k2 = f(axpy(x, h / 2, k1));
    State k3 = f(axpy(x, h / 2, k2));
    State k4 = f(axpy(x, h, k3));
    State r;
    for (int i = 0; i < 3; ++i) r[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return r;
}

class EscapeError : public ModelError {
public:
    EscapeError(const std::string& what, State last) : ModelError(what), last_(last) {}
    const State& last() const { return last_; }

private:
    State last_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    bool event = false;
    double event_time = 0;
    State event_state{};
    bool timed_out = false;
};

struct IntegrateOptions {
    std::function<double(const State&)> event;      // crossing zero from above stops
    std::function<bool(const State&)> in_domain;    // leaving it without an event throws
    bool keep_states = true;
    std::function<void(const State&)> observe;      // called on every accepted step
};

inline Trajectory integrate(const Field& f, const State& x0, double T, double h, const IntegrateOptions& opt = {},
                            const NumericConfig& cfg = {}) {
    if (!(h > 0)) throw PreconditionViolation("step must be positive");
    Trajectory tr;
    State x = x0;
    double t = 0;
    if (opt.keep_states) {
        tr.times.push_back(t);
        tr.states.push_back(x);
    }
    double g = opt.event ? opt.event(x) : 1.0;
    while (t < T - 1e-15) {
        double step = std::min(h, T - t);
        State y = rk4_step(f, x, step);
        if (opt.event) {
            double gy = opt.event(y);
            if (g > 0 && gy <= 0) {
                double lo = 0, hi = step;
                State ylo = x, yhi = y;
                while (hi - lo > cfg.event_tol) {
                    double m = (lo + hi) / 2;
                    State ym = rk4_step(f, x, m);
                    if (opt.event(ym) > 0) {
                        lo = m;
                        ylo = ym;
                    } else {
                        hi = m;
                        yhi = ym;
                    }
                }
                tr.event = true;
                tr.event_time = t + hi;
                tr.event_state = yhi;
                if (opt.keep_states) {
                    tr.times.push_back(tr.event_time);
                    tr.states.push_back(yhi);
                }
                (void)ylo;
                return tr;
            }
            g = gy;
        }
        if (opt.in_domain && !opt.in_domain(y)) throw EscapeError("trajectory left the chart without an event", y);
        x = y;
        t += step;
        if (opt.observe) opt.observe(x);
        if (opt.keep_states) {
            tr.times.push_back(t);
            tr.states.push_back(x);
        }
    }
    tr.timed_out = true;
    tr.event_state = x;
    tr.event_time = t;
    return tr;
}

using Planar = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

// Eigenvalues of the central-difference Jacobian at an equilibrium.
inline std::array<std::complex<double>, 2> equilibrium_multipliers(const Planar& f, const Eigen::Vector2d& p,
                                                                     const NumericConfig& cfg = {}) {
    if (f(p).norm() >= cfg.equilibrium_tol) throw PreconditionViolation("point is not an equilibrium");
    Eigen::Matrix2d j;
    for (int c = 0; c < 2; ++c) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e[c] = cfg.fd_step;
        j.col(c) = (f(p + e) - f(p - e)) / (2 * cfg.fd_step);
    }
    Eigen::EigenSolver<Eigen::Matrix2d> es(j);
    auto ev = es.eigenvalues();
    std::array<std::complex<double>, 2> out{ev[0], ev[1]};
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.real() < b.real(); });
    return out;
}

inline double bump(double t) {
    if (t <= -1 || t >= 1) return 0.0;
    double s = 1 - t * t;
    return s * s;
}

// Linear saddle times the circle, plus the DA perturbation when active.
struct LocalDAField {
    double lambda = -1;
    double mu = 1;
    double eta = 0.5;
    bool active = false;

    void check() const {
        if (!(lambda < 0 && mu > 0)) throw PreconditionViolation("need lambda < 0 < mu");
        if (!(eta > 0 && eta < 1)) throw PreconditionViolation("need eta in (0,1)");
    }

    Eigen::Vector2d transverse(const Eigen::Vector2d& p) const {
        double dy = mu * p.y();
        if (active) dy -= 2 * mu * p.y() * bump(p.x() / eta) * bump(p.y() / eta);
        return {lambda * p.x(), dy};
    }

    State operator()(const State& s) const {
        auto v = transverse({s[0], s[1]});
        return {v.x(), v.y(), 1.0};
    }

    bool in_domain(const State& s) const { return std::fabs(s[0]) <= 1 && std::fabs(s[1]) <= 1; }
};

inline double da_delta() { return std::sqrt(1 - 1 / std::sqrt(2.0)); }

// Positive saddle ordinate of the active model on the axis x = 0, divided
// by eta.
inline double da_saddle_ordinate(const LocalDAField& f) {
    f.check();
    if (!f.active) throw PreconditionViolation("the unperturbed model has no saddle off the origin");
    // transverse field on the axis x = 0, in units of eta
    auto g = [&](double u) { return f.transverse({0.0, f.eta * u}).y() / (f.mu * f.eta); };
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, 0.01, 0.99, boost::math::tools::eps_tolerance<double>(50), iters);
    return (r.first + r.second) / 2;
}

// Closed form of the unperturbed model.
inline State da_linear_solution(const LocalDAField& f, const State& x0, double t) {
    return {x0[0] * std::exp(f.lambda * t), x0[1] * std::exp(f.mu * t), x0[2] + t};
}

// log2 of the error ratio under step halving at time T.
inline double rk4_empirical_order(const LocalDAField& f, const State& x0, double T, double h) {
    LocalDAField lin = f;
    lin.active = false;
    Field fld = [&](const State& s) { return lin(s); };
    auto err = [&](double step) {
        IntegrateOptions o;
        o.keep_states = false;
        auto tr = integrate(fld, x0, T, step, o);
        State ex = da_linear_solution(lin, x0, T);
        double e = 0;
        for (int i = 0; i < 3; ++i) e = std::max(e, std::fabs(tr.event_state[i] - ex[i]));
        return e;
    };
    return std::log2(err(h) / err(h / 2));
}

// Torus field with a source, two saddles and a sink, times a vertical drift
// supported near the saddles.
struct Section8Field {
    double radius = 0.15;        // discs around the source and the sink
    double drift_radius = 0.15;  // support of the vertical drift
    bool printed_formula = false;  // the degenerate sin(2 pi y) d/dx variant

    Eigen::Vector2d base(const Eigen::Vector2d& p) const {
        double tp = 2 * kPi;
        double fx = printed_formula ? std::sin(tp * p.y()) : std::sin(tp * p.x());
        return {fx, std::sin(tp * p.y())};
    }

    static double torus_dist(const Eigen::Vector2d& p, const Eigen::Vector2d& c) {
        double dx = frac(p.x() - c.x() + 0.5) - 0.5, dy = frac(p.y() - c.y() + 0.5) - 0.5;
        return std::hypot(dx, dy);
    }

    double drift(const Eigen::Vector2d& p) const {
        return bump(torus_dist(p, {0.5, 0}) / drift_radius) - bump(torus_dist(p, {0, 0.5}) / drift_radius);
    }

    State operator()(const State& s) const {
        Eigen::Vector2d p(s[0], s[1]);
        auto v = base(p);
        return {v.x(), v.y(), drift(p)};
    }

    static Eigen::Vector2d alpha() { return {0, 0}; }
    static Eigen::Vector2d sigma1() { return {0.5, 0}; }
    static Eigen::Vector2d sigma2() { return {0, 0.5}; }
    static Eigen::Vector2d omega() { return {0.5, 0.5}; }
};

// Point of the entrance circle at parameter x in [0,1), counterclockwise;
// quarter turns use exact values.
inline Eigen::Vector2d entrance_point(const Section8Field& f, double x) {
    double c, s;
    double q = x * 4;
    if (q == std::floor(q)) {
        static const double cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        int k = int(q) % 4;
        c = cs[k][0];
        s = cs[k][1];
    } else {
        c = std::cos(2 * kPi * x);
        s = std::sin(2 * kPi * x);
    }
    return {f.radius * c, f.radius * s};
}

struct CrossingResult {
    bool timeout = false;
    double exit_param = 0;      // clockwise parameter on the exit circle
    int exit_gap = -1;          // band of the exit lamination containing it
    double transit_time = 0;
    double vertical_shift = 0;  // integral of the drift
    double d1 = 0, d2 = 0;      // distances of closest approach to the saddles
    Eigen::Vector2d exit_point{0, 0};
};

inline CrossingResult crossing_map(const Section8Field& f, double x, const NumericConfig& cfg = {}) {
    Eigen::Vector2d p0 = entrance_point(f, x);
    Field fld = [&](const State& s) { return f(s); };
    CrossingResult r;
    r.d1 = r.d2 = INFINITY;
    IntegrateOptions o;
    o.keep_states = false;
    // nearest sink lift
    o.event = [&](const State& s) {
        return Section8Field::torus_dist({s[0], s[1]}, Section8Field::omega()) - f.radius;
    };
    o.observe = [&](const State& s) {
        r.d1 = std::min(r.d1, Section8Field::torus_dist({s[0], s[1]}, Section8Field::sigma1()));
        r.d2 = std::min(r.d2, Section8Field::torus_dist({s[0], s[1]}, Section8Field::sigma2()));
    };
    auto tr = integrate(fld, {p0.x(), p0.y(), 0.0}, cfg.t_max, cfg.h, o, cfg);
    r.transit_time = tr.event_time;
    r.vertical_shift = tr.event_state[2];
    if (!tr.event) {
        r.timeout = true;
        return r;
    }
    double dx = frac(tr.event_state[0] - 0.5 + 0.5) - 0.5, dy = frac(tr.event_state[1] - 0.5 + 0.5) - 0.5;
    r.exit_point = {dx, dy};
    double theta = std::atan2(dy, dx);
    r.exit_param = frac(-theta / (2 * kPi));
    r.exit_gap = int(std::floor(r.exit_param * 4)) % 4;
    return r;
}

// Expansion of the unit tangent of the entrance circle under the 3D
// crossing map, measured in arclength on both tori.
inline double expansion_factor(const Section8Field& f, double x, double dx, const NumericConfig& cfg = {}) {
    auto a = crossing_map(f, x - dx, cfg), b = crossing_map(f, x + dx, cfg);
    if (a.timeout || b.timeout || a.exit_gap != b.exit_gap) return INFINITY;
    double ds = 2 * kPi * f.radius * 2 * dx;
    double dexit = 2 * kPi * f.radius * (b.exit_param - a.exit_param);
    double dz = b.vertical_shift - a.vertical_shift;
    return std::hypot(dexit, dz) / ds;
}

struct LaminationArc {
    double lo = 0, hi = 0;  // entrance parameters
    std::string owner;      // saddle the orbit approaches
    bool timeout = false;   // an exact sample timed out
};

struct MeasuredLamination {
    std::vector<LaminationArc> arcs;
    std::vector<int> gap_to_exit;  // entrance gap i (between arc i and arc i+1) -> exit gap
    bool gaps_consistent = true;   // every sample of one gap lands in one exit gap
};

inline MeasuredLamination measure_entrance_lamination(const Section8Field& f, int samples, const NumericConfig& cfg = {}) {
    std::vector<CrossingResult> res(samples);
    for (int j = 0; j < samples; ++j) res[j] = crossing_map(f, double(j) / samples, cfg);
    auto label = [](const CrossingResult& c) { return c.timeout ? -1 : c.exit_gap; };
    auto owner_of = [](const CrossingResult& c) { return c.d1 < c.d2 ? std::string("s1") : std::string("s2"); };
    MeasuredLamination m;
    // Walk the circle from the first sample; arcs are timeout runs or
    // bisected label changes.
    for (int j = 0; j < samples; ++j) {
        const auto& a = res[j];
        const auto& b = res[(j + 1) % samples];
        double x0 = double(j) / samples, x1 = double(j + 1) / samples;
        if (a.timeout) {
            if (!m.arcs.empty() && m.arcs.back().timeout && std::fabs(m.arcs.back().hi - x0) < 1e-15) {
                m.arcs.back().hi = x0;
            } else {
                m.arcs.push_back({x0, x0, owner_of(a), true});
            }
            continue;
        }
        if (b.timeout || label(a) == label(b)) continue;
        double lo = x0, hi = x1;
        CrossingResult clo = a, chi = b;
        while (hi - lo > cfg.bisection_tol) {
            double mid = (lo + hi) / 2;
            auto c = crossing_map(f, mid, cfg);
            if (c.timeout) {
                lo = hi = mid;
                clo = chi = c;
                break;
            }
            if (label(c) == label(a)) {
                lo = mid;
                clo = c;
            } else {
                hi = mid;
                chi = c;
            }
        }
        double dlo = std::min(clo.d1, clo.d2), dhi = std::min(chi.d1, chi.d2);
        m.arcs.push_back({lo, hi, owner_of(dlo < dhi ? clo : chi), false});
    }
    // merge a wrap-around timeout run
    if (m.arcs.size() > 1 && m.arcs.front().timeout && m.arcs.back().timeout && m.arcs.front().lo == 0 &&
        std::fabs(m.arcs.back().hi - (1.0 - 1.0 / samples)) < 1e-15 && res[samples - 1].timeout) {
        m.arcs.front().lo = m.arcs.back().lo - 1.0;
        m.arcs.pop_back();
    }
    std::size_t k = m.arcs.size();
    m.gap_to_exit.assign(k, -1);
    for (int j = 0; j < samples; ++j) {
        if (res[j].timeout) continue;
        double x = double(j) / samples;
        // gap i lies after arc i
        std::size_t gap = k - 1;
        for (std::size_t i = 0; i < k; ++i)
            if (x > m.arcs[i].hi) gap = i;
        if (x < m.arcs[0].lo) gap = k - 1;
        if (m.gap_to_exit[gap] < 0)
            m.gap_to_exit[gap] = res[j].exit_gap;
        else if (m.gap_to_exit[gap] != res[j].exit_gap)
            m.gaps_consistent = false;
    }
    return m;
}

// Samples at parameter distance d from the lamination point x = 0, d on a
// geometric grid. d(lambda) is the largest d with every closer sample
// expanding by at least lambda.
struct ExpansionSample {
    double distance;
    double factor;
};

inline std::vector<ExpansionSample> expansion_samples(const Section8Field& f, int per_decade, double d_min,
                                                      double d_max, const NumericConfig& cfg = {}) {
    std::vector<ExpansionSample> out;
    int total = int(std::round(std::log10(d_max / d_min) * per_decade));
    for (int i = 0; i <= total; ++i) {
        double d = d_min * std::pow(10.0, double(i) / per_decade);
        double x = d;
        double fd = std::min(1e-7, x * 1e-3);
        out.push_back({d, expansion_factor(f, x, fd, cfg)});
    }
    return out;
}

inline std::vector<double> cone_expansion_profile(const std::vector<ExpansionSample>& samples,
                                                  const std::vector<double>& lambdas) {
    std::vector<double> out;
    for (double lam : lambdas) {
        double best = 0;
        for (const auto& s : samples) {
            if (s.factor < lam) break;
            best = s.distance;
        }
        out.push_back(best);
    }
    return out;
}

// Cones on the exit torus in (arclength, vertical) coordinates. The stable
// cone is centred on the vertical leaf direction.
struct ConeSample {
    double x;
    Eigen::Vector2d unstable;  // measured image of the entrance tangent
    double half_angle;         // opening of both cones
    bool excludes_stable;      // unstable cone misses the stable cone
};

inline std::vector<ConeSample> cone_field(const Section8Field& f, const std::vector<double>& xs,
                                          const NumericConfig& cfg = {}) {
    std::vector<ConeSample> out;
    for (double x : xs) {
        double dx = 1e-7;
        auto a = crossing_map(f, x - dx, cfg), b = crossing_map(f, x + dx, cfg);
        if (a.timeout || b.timeout) continue;
        Eigen::Vector2d u(2 * kPi * f.radius * (b.exit_param - a.exit_param), b.vertical_shift - a.vertical_shift);
        u.normalize();
        double to_vertical = std::acos(std::min(1.0, std::fabs(u.y())));
        double half = to_vertical / 3;
        out.push_back({x, u, half, to_vertical > 2 * half});
    }
    return out;
}

// PL curve of class c_x + q c_y: up along x = 3/4, right along y = 1/4, with
// the two corners cut diagonally.
struct TransverseCurve {
    std::vector<Eigen::Vector2d> pts;  // one period, closes up after (1, q)
    std::array<std::int64_t, 2> winding{0, 0};
    double margin = 0;     // min of sin(angle from tangent to field)
    double disc_gap = 0;   // min distance to the four disc centres minus radius
};

inline TransverseCurve transverse_curve_cq(std::int64_t q, const Section8Field& f = {}, double corner = 0.05) {
    if (q < 1) throw PreconditionViolation("q must be at least 1");
    for (int attempt = 0; attempt < 4; ++attempt, corner /= 2) {
        TransverseCurve c;
        double x0 = 0.75, y0 = 0.25;
        c.pts = {{x0, y0 + corner},
                 {x0, y0 + double(q) - corner},
                 {x0 + corner, y0 + double(q)},
                 {x0 + 1 - corner, y0 + double(q)}};
        Eigen::Vector2d period(1.0, double(q));
        Eigen::Vector2d total(0, 0);
        c.margin = INFINITY;
        c.disc_gap = INFINITY;
        std::size_t n = c.pts.size();
        for (std::size_t k = 0; k < n; ++k) {
            Eigen::Vector2d a = c.pts[k], b = k + 1 < n ? c.pts[k + 1] : c.pts[0] + period;
            Eigen::Vector2d t = b - a;
            total += t;
            int steps = std::max(8, int(t.norm() * 400));
            for (int s = 0; s <= steps; ++s) {
                Eigen::Vector2d p = a + t * (double(s) / steps);
                Eigen::Vector2d v = f.base(p);
                double m = (t.x() * v.y() - t.y() * v.x()) / (t.norm() * v.norm());
                c.margin = std::min(c.margin, m);
                for (auto ctr : {Section8Field::alpha(), Section8Field::sigma1(), Section8Field::sigma2(),
                                 Section8Field::omega()})
                    c.disc_gap = std::min(c.disc_gap, Section8Field::torus_dist(p, ctr) - f.radius);
            }
        }
        c.winding = {std::llround(total.x()), std::llround(total.y())};
        if (c.margin > 0 && c.disc_gap > 0) return c;
    }
    throw ModelError("could not build a transverse curve");
}

// Homological intersection of the curve of class (1, q) with the torus over
// the curve of class (1, q2).
inline std::int64_t curve_torus_intersection(const TransverseCurve& c, std::int64_t q2) {
    std::int64_t v = c.winding[0] * q2 - c.winding[1] * 1;
    return v < 0 ? -v : v;
}

}  // namespace anosov::numeric
