#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "density.hpp"
#include "errors.hpp"
#include "measures.hpp"
#include "oracle.hpp"
#include "scenario.hpp"

namespace udw {

// Sweepable parameters. All lengths and times are ratios to sigma; lambda
// and eta set both detectors at once, the lambda_a/lambda_b axes address
// one detector (the single-detector configurations sweep lambda_b alone).
enum class Axis {
    Lambda,
    LambdaA,
    LambdaB,
    Alpha,
    LOverSigma,
    DtauOverSigma,
    EtaOverSigma,
    ThetaPhase,
};

inline const char* axis_name(Axis a) {
    switch (a) {
        case Axis::Lambda: return "lambda";
        case Axis::LambdaA: return "lambda_a";
        case Axis::LambdaB: return "lambda_b";
        case Axis::Alpha: return "alpha";
        case Axis::LOverSigma: return "L_over_sigma";
        case Axis::DtauOverSigma: return "dtau_over_sigma";
        case Axis::EtaOverSigma: return "eta_over_sigma";
        case Axis::ThetaPhase: return "theta_phase";
    }
    throw validation_error("unknown axis");
}

inline Axis axis_from_name(const std::string& name) {
    for (Axis a : {Axis::Lambda, Axis::LambdaA, Axis::LambdaB, Axis::Alpha,
                   Axis::LOverSigma, Axis::DtauOverSigma, Axis::EtaOverSigma,
                   Axis::ThetaPhase})
        if (name == axis_name(a)) return a;
    throw validation_error("unknown sweep axis: " + name);
}

// Either an even grid of `steps` points over [start, stop] or an explicit
// value list (used by presets that trace a handful of curves).
struct AxisSpec {
    Axis axis = Axis::Lambda;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
    std::vector<double> values;

    std::vector<double> grid() const {
        if (!values.empty()) return values;
        std::vector<double> g(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i)
            g[static_cast<std::size_t>(i)] =
                start + (stop - start) * static_cast<double>(i) /
                            static_cast<double>(steps - 1);
        return g;
    }
};

// Fixed parameters of a sweep; axes overwrite their field per grid point.
struct SweepParams {
    InitialFamily family = InitialFamily::GroundGround;
    double alpha = 1.0;
    double theta = 0.0;
    double omega_gap = 0.0;
    double lambda_a = 0.0;
    double lambda_b = 0.0;
    double eta = 1.0;
    double separation = 0.0;
    double delay = 0.0;
};

struct SweepSpec {
    SweepParams fixed;
    std::vector<AxisSpec> axes; // 1 or 2; first axis is the outer (row-major)
    std::string output_path;    // empty: caller streams to stdout
    std::string preset;         // name this spec was derived from, if any
};

struct ResultRow {
    std::string family;
    double alpha, theta, omega_gap, lambda_a, lambda_b, eta, L, dtau;
    double f_a, f_b, theta_comm, omega_anti;
    double r11, r22, r33, r44, abs_r14, abs_r23;
    double concurrence, entropy_a, entropy_b, entropy_joint, mutual_information;
};

inline constexpr const char* csv_header =
    "family,alpha,theta,omega_gap,lambda_a,lambda_b,eta,L,dtau,"
    "f_a,f_b,theta_comm,omega_anti,"
    "r11,r22,r33,r44,abs_r14,abs_r23,"
    "concurrence,entropy_a,entropy_b,entropy_joint,mutual_information";

namespace detail {

inline void apply_axis(SweepParams& p, Axis a, double v) {
    switch (a) {
        case Axis::Lambda: p.lambda_a = p.lambda_b = v; return;
        case Axis::LambdaA: p.lambda_a = v; return;
        case Axis::LambdaB: p.lambda_b = v; return;
        case Axis::Alpha: p.alpha = v; return;
        case Axis::LOverSigma: p.separation = v; return;
        case Axis::DtauOverSigma: p.delay = v; return;
        case Axis::EtaOverSigma: p.eta = v; return;
        case Axis::ThetaPhase: p.theta = v; return;
    }
}

inline Scenario to_scenario(const SweepParams& p) {
    return make_scenario(p.alpha, p.theta, p.family, p.omega_gap, p.lambda_a,
                         p.lambda_b, p.eta, p.separation, p.delay);
}

} // namespace detail

inline void validate_spec(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2)
        throw validation_error("a sweep needs one or two axes");
    for (const AxisSpec& ax : spec.axes) {
        if (ax.values.empty()) {
            if (ax.steps < 2)
                throw validation_error("axis step count must be at least 2");
            if (!(std::isfinite(ax.start) && std::isfinite(ax.stop)))
                throw validation_error("axis range must be finite");
        }
        // Every grid value must survive scenario validation; probing the
        // endpoints is not enough for list axes, so probe all values on the
        // fixed base (cross-axis interaction is re-validated per point).
        for (double v : ax.grid()) {
            SweepParams p = spec.fixed;
            detail::apply_axis(p, ax.axis, v);
            if (spec.axes.size() == 2) {
                const AxisSpec& other =
                    &ax == &spec.axes[0] ? spec.axes[1] : spec.axes[0];
                detail::apply_axis(p, other.axis, other.grid().front());
            }
            try {
                detail::to_scenario(p);
            } catch (const std::exception& e) {
                throw validation_error(std::string("axis ") + axis_name(ax.axis) +
                                       " leaves the valid domain: " + e.what());
            }
        }
    }
}

inline ResultRow evaluate_point(const SweepParams& p) {
    const Scenario s = detail::to_scenario(p);
    const KernelValues k = kernel_values(s);
    const TwoQubitXState x = assemble_xstate(s, k);
    const CorrelationReport r = correlation_report(x, s, k);
    ResultRow row;
    row.family = p.family == InitialFamily::GroundGround ? "gg" : "ge";
    row.alpha = p.alpha;
    row.theta = p.theta;
    row.omega_gap = p.omega_gap;
    row.lambda_a = p.lambda_a;
    row.lambda_b = p.lambda_b;
    row.eta = p.eta;
    row.L = p.separation;
    row.dtau = p.delay;
    row.f_a = k.f_a;
    row.f_b = k.f_b;
    row.theta_comm = k.theta_comm;
    row.omega_anti = k.omega_anti;
    row.r11 = x.r11;
    row.r22 = x.r22;
    row.r33 = x.r33;
    row.r44 = x.r44;
    row.abs_r14 = std::abs(x.r14);
    row.abs_r23 = std::abs(x.r23);
    row.concurrence = r.concurrence;
    row.entropy_a = r.entropy_a;
    row.entropy_b = r.entropy_b;
    row.entropy_joint = r.entropy_joint;
    row.mutual_information = r.mutual_information;
    return row;
}

// Row-major over (outer axis, inner axis). Workers pull grid indices from
// a shared counter and write into preassigned slots, so the row order (and
// the bytes later written from it) cannot depend on scheduling.
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec, int workers = 1) {
    validate_spec(spec);
    if (workers < 1) throw validation_error("worker count must be >= 1");

    const std::vector<double> outer = spec.axes[0].grid();
    const std::vector<double> inner =
        spec.axes.size() == 2 ? spec.axes[1].grid() : std::vector<double>{0.0};
    const std::size_t n_inner = inner.size();
    const std::size_t total = outer.size() * n_inner;

    std::vector<ResultRow> rows(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string first_error;

    const auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total || failed.load()) return;
            SweepParams p = spec.fixed;
            detail::apply_axis(p, spec.axes[0].axis, outer[i / n_inner]);
            if (spec.axes.size() == 2)
                detail::apply_axis(p, spec.axes[1].axis, inner[i % n_inner]);
            try {
                rows[i] = evaluate_point(p);
            } catch (const std::exception& e) {
                std::scoped_lock lock(error_mutex);
                if (!failed.exchange(true))
                    first_error = "grid point " + std::to_string(i) + " (" +
                                  std::string(axis_name(spec.axes[0].axis)) + "=" +
                                  std::to_string(outer[i / n_inner]) +
                                  (spec.axes.size() == 2
                                       ? ", " + std::string(axis_name(spec.axes[1].axis)) +
                                             "=" + std::to_string(inner[i % n_inner])
                                       : "") +
                                  "): " + e.what();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw validation_error(first_error);
    return rows;
}

namespace detail {

// 17 significant digits through to_chars: round-trip exact, locale-free,
// and byte-identical across runs and worker counts.
inline void append_number(std::string& out, double v) {
    char buf[48];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

} // namespace detail

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    std::string line;
    os << csv_header << '\n';
    for (const ResultRow& r : rows) {
        line.clear();
        line += r.family;
        for (double v :
             {r.alpha, r.theta, r.omega_gap, r.lambda_a, r.lambda_b, r.eta, r.L,
              r.dtau, r.f_a, r.f_b, r.theta_comm, r.omega_anti, r.r11, r.r22,
              r.r33, r.r44, r.abs_r14, r.abs_r23, r.concurrence, r.entropy_a,
              r.entropy_b, r.entropy_joint, r.mutual_information}) {
            line += ',';
            detail::append_number(line, v);
        }
        line += '\n';
        os << line;
    }
}

// Named configurations mirroring the datasets behind the published plots.
// Resolutions are a choice (200 points for curves, 120x120 for maps).
inline SweepSpec preset_spec(const std::string& name) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    SweepSpec s;
    s.preset = name;
    SweepParams& p = s.fixed;
    p.theta = 0.0;
    p.omega_gap = 1.0;
    p.eta = 1.0;
    if (name == "fig1") {
        // single-detector trade-off: only B couples; the gap never enters
        // because every surviving term is phase-free
        p.alpha = 1.0 / 3.0;
        p.lambda_a = 0.0;
        p.separation = 10.0;
        p.delay = 0.0;
        s.axes = {AxisSpec{Axis::LambdaB, 0.0, 10.0, 200, {}}};
        return s;
    }
    if (name == "fig2" || name == "fig4" || name == "fig5") {
        // spacetime maps; fig4 reads the mutual_information column of the
        // same grid, fig5 starts from the separable alpha = 0 state
        p.alpha = name == "fig5" ? 0.0 : inv_sqrt2;
        p.lambda_a = p.lambda_b = 1.0;
        s.axes = {AxisSpec{Axis::LOverSigma, 0.1, 12.0, 120, {}},
                  AxisSpec{Axis::DtauOverSigma, 0.0, 12.0, 120, {}}};
        return s;
    }
    if (name == "fig3a" || name == "fig3b" || name == "fig3c" || name == "fig3d") {
        // coupling sweeps; a/c on the spacelike configuration, b/d on the
        // lightlike one (a/b plot concurrence, c/d mutual information)
        p.alpha = inv_sqrt2;
        const bool lightlike = name == "fig3b" || name == "fig3d";
        p.separation = lightlike ? 1.0 : 10.0;
        p.delay = lightlike ? 1.0 : 0.0;
        s.axes = {AxisSpec{Axis::Lambda, 0.0, 5.0, 200, {}}};
        return s;
    }
    if (name == "fig6") {
        // near-separable states keep harvesting mutual information
        p.separation = 10.0;
        p.delay = 0.0;
        s.axes = {AxisSpec{Axis::Alpha, 0.0, 0.0, 0, {0.0, 1.0 / 5000.0, 1.0 / 2000.0}},
                  AxisSpec{Axis::Lambda, 0.0, 3.0, 200, {}}};
        return s;
    }
    throw validation_error("unknown preset: " + name);
}

inline const std::array<const char*, 9>& preset_names() {
    static const std::array<const char*, 9> names = {
        "fig1", "fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig5", "fig6"};
    return names;
}

// One verification check: worst deviation and where it happened.
struct CheckResult {
    std::string name;
    double max_error = 0.0;   // relative where defined, absolute for tiny values
    double tolerance = 0.0;
    std::string worst_point;
    bool pass = true;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool pass = true;
};

// Closed forms against the quadrature oracle, and the two assembly paths
// against each other, over the acceptance grid (dense: every axis 4x
// finer). fault is a test hook that perturbs the closed-form f_B
// multiplicatively; the default 0 exercises the honest pipeline.
inline VerifyReport run_verification(bool dense = false, double fault = 0.0) {
    std::vector<double> ls, ts, couplings;
    if (!dense) {
        ls = {0.5, 1.0, 2.0, 5.0, 10.0};
        ts = {0.0, 1.0, 3.0, 10.0};
        couplings = {0.5, 1.0, 2.0};
    } else {
        for (int i = 0; i < 20; ++i) ls.push_back(0.5 + (10.0 - 0.5) * i / 19.0);
        for (int i = 0; i < 16; ++i) ts.push_back(10.0 * i / 15.0);
        for (int i = 0; i < 12; ++i) couplings.push_back(0.5 + 1.5 * i / 11.0);
    }

    QuadratureSettings q;
    CheckResult cf{"f vs quadrature", 0.0, 1e-9, "", true};
    CheckResult ct{"Theta vs quadrature", 0.0, 1e-6, "", true};
    CheckResult cw{"omega vs quadrature", 0.0, 1e-6, "", true};
    CheckResult cp{"assembly path agreement", 0.0, 1e-12, "", true};
    CheckResult ce{"X-state eigenvalues vs dense solver", 0.0, 1e-10, "", true};

    const auto note_abs = [](CheckResult& c, double err, const std::string& at) {
        if (err > c.max_error) {
            c.max_error = err;
            c.worst_point = at;
        }
    };

    for (double lam : couplings) {
        const DetectorParams da{lam, lam, 1.0, 0.0};
        // eta tracks the coupling on the acceptance grid (lambda = eta/sigma)
        const double f_closed = f_kernel(da, 1.0) * (1.0 + fault);
        const double f_quad = std::exp(-f_exponent_quadrature(da, 1.0, q));
        note_abs(cf, std::abs(f_closed - f_quad) / f_quad,
                 "lambda=eta=" + std::to_string(lam));
        for (double l : ls)
            for (double t : ts) {
                const DetectorParams db{lam, lam, 1.0, t};
                const Geometry g{l, t, 1.0};
                const std::string at = "lambda=eta=" + std::to_string(lam) +
                                       " L=" + std::to_string(l) +
                                       " dtau=" + std::to_string(t);
                const double th_c = theta_kernel(da, db, g) * (1.0 + fault);
                const double th_q = theta_quadrature(da, db, g, q);
                const double om_c = omega_kernel(da, db, g) * (1.0 + fault);
                const double om_q = omega_quadrature(da, db, g, q);
                // absolute error below 1e-8 (scaled so 1e-10 absolute maps
                // onto the 1e-6 tolerance), relative error above
                const auto err = [](double c, double r) {
                    return std::abs(r) < 1e-8 ? std::abs(c - r) * 1e4
                                              : std::abs(c - r) / std::abs(r);
                };
                note_abs(ct, err(th_c, th_q), at);
                note_abs(cw, err(om_c, om_q), at);
            }
    }

    for (InitialFamily fam : {InitialFamily::GroundGround, InitialFamily::GroundExcited})
        for (double alpha : {1.0 / 3.0, 1.0 / std::numbers::sqrt2})
            for (double l : ls)
                for (double t : ts) {
                    const Scenario s = make_scenario(alpha, 0.7, fam, 1.0, 1.0,
                                                     1.0, 1.0, l, t);
                    KernelValues k = kernel_values(s);
                    k.f_b *= 1.0 + fault;
                    const std::string at =
                        std::string(fam == InitialFamily::GroundGround ? "gg" : "ge") +
                        " alpha=" + std::to_string(alpha) + " L=" + std::to_string(l) +
                        " dtau=" + std::to_string(t);
                    TwoQubitXState x, y;
                    try {
                        x = assemble_xstate(s, k);
                        y = assemble_xstate_operator_product(s, k);
                    } catch (const std::exception& e) {
                        note_abs(cp, 1.0, at + " (" + e.what() + ")");
                        continue;
                    }
                    double d = 0.0;
                    d = std::max(d, std::abs(x.r11 - y.r11));
                    d = std::max(d, std::abs(x.r22 - y.r22));
                    d = std::max(d, std::abs(x.r33 - y.r33));
                    d = std::max(d, std::abs(x.r44 - y.r44));
                    d = std::max(d, std::abs(x.r14 - y.r14));
                    d = std::max(d, std::abs(x.r23 - y.r23));
                    note_abs(cp, d, at);

                    const std::array<double, 4> closed = xstate_eigenvalues(x);
                    std::array<double, 4> sorted = closed;
                    std::sort(sorted.begin(), sorted.end(), std::greater<>());
                    const std::array<double, 4> dense_eigs =
                        eig_hermitian_4(materialize(x));
                    for (int i = 0; i < 4; ++i)
                        note_abs(ce, std::abs(sorted[static_cast<std::size_t>(i)] -
                                              dense_eigs[static_cast<std::size_t>(i)]),
                                 at);
                }

    VerifyReport report;
    for (CheckResult c : {cf, ct, cw, cp, ce}) {
        c.pass = c.max_error <= c.tolerance;
        report.pass = report.pass && c.pass;
        report.checks.push_back(std::move(c));
    }
    return report;
}

} // namespace udw
