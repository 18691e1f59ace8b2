#ifndef HIDDENEP_QUENCH_HPP
#define HIDDENEP_QUENCH_HPP

// Quench from the empty state: N_P(t) = <Psi(t)| a+a |Psi(t)>, its time
// average over [0, T] and the mu-derivative D_mu of that average.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hiddenep/dicke.hpp"
#include "hiddenep/errors.hpp"
#include "hiddenep/parallel.hpp"
#include "hiddenep/propagate.hpp"
#include "hiddenep/tridiagonal_eigen.hpp"

namespace hiddenep {

enum class QuenchModel { exact_dicke, effective };

inline const char* to_string(QuenchModel m) { return m == QuenchModel::exact_dicke ? "exact" : "effective"; }

inline QuenchModel parse_quench_model(const std::string& s) {
    if (s == "exact" || s == "exact_dicke" || s == "dicke")
        return QuenchModel::exact_dicke;
    if (s == "effective" || s == "eff")
        return QuenchModel::effective;
    throw domain_error("unknown quench model '" + s + "'");
}

struct QuenchOptions {
    double dt = 0.0;          // 0 selects 0.02 / mu
    int initial_cutoff = 0;   // 0 selects params.n_ph
    int cutoff_cap = 1024;
    double tolerance = 0.01;  // relative sup-norm change between doublings
    bool auto_cutoff = true;
    Eigen::Index dense_cap = 512; // exact model: dense eigen path up to this sector size
};

struct CutoffStep {
    int cutoff = 0;
    Eigen::Index dimension = 0;
    double sup_rel_change = std::numeric_limits<double>::quiet_NaN(); // against the previous cutoff
    double max_trailing_weight = 0.0;
};

struct CutoffReport {
    std::vector<CutoffStep> history;
    std::vector<double> trailing_weight; // per sample, at the final cutoff
    int final_cutoff = 0;
    bool converged = false;

    double max_trailing_weight() const {
        return trailing_weight.empty() ? 0.0 : *std::max_element(trailing_weight.begin(), trailing_weight.end());
    }
};

struct QuenchSeries {
    std::vector<double> times;
    std::vector<double> n_p;
    DickeParams params;
    QuenchModel model = QuenchModel::exact_dicke;
    double dt = 0.0;
    CutoffReport cutoff_report;

    bool bounded() const { return cutoff_report.converged; }

    // (1/T) int_0^T N_P dt by the trapezoid rule; T must be a sample time.
    double time_average(std::optional<double> horizon = std::nullopt) const {
        const double t_end = horizon.value_or(times.back());
        if (!(t_end > 0.0))
            throw domain_error("time average needs T > 0");
        double acc = 0.0;
        std::size_t i = 1;
        for (; i < times.size() && times[i] <= t_end * (1.0 + 1e-12); ++i)
            acc += 0.5 * (n_p[i] + n_p[i - 1]) * (times[i] - times[i - 1]);
        if (std::abs(times[i - 1] - t_end) > 1e-9 * std::max(1.0, t_end))
            throw domain_error("averaging horizon is not on the sample grid");
        return acc / t_end;
    }
};

// Uniform grid 0, dt, ..., T with dt adjusted so that T is hit exactly.
inline std::vector<double> time_grid(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0) || !std::isfinite(horizon) || !std::isfinite(dt))
        throw domain_error("time grid needs T > 0 and dt > 0");
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(horizon / dt)));
    std::vector<double> t(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
    return t;
}

inline double default_dt(double mu) { return 0.02 / mu; }

// Largest dt not above `dt` for which every horizon is a whole number of steps.
inline double horizon_aligned_dt(const std::vector<double>& horizons, double dt) {
    const double t_max = *std::max_element(horizons.begin(), horizons.end());
    auto steps = static_cast<long>(std::max(1.0, std::ceil(t_max / dt - 1e-9)));
    for (long tries = 0; tries < 100000; ++tries, ++steps) {
        const double d = t_max / static_cast<double>(steps);
        bool ok = true;
        for (double hz : horizons)
            ok = ok && std::abs(std::round(hz / d) * d - hz) <= 1e-9 * hz;
        if (ok)
            return d;
    }
    throw domain_error("averaging horizons are not commensurate with the time step");
}

// One propagation at a fixed cutoff.
struct FixedCutoffRun {
    std::vector<double> n_p;
    std::vector<double> trailing;
    Eigen::Index dimension = 0;
};

// Exact Dicke model on the even sector containing |0>_p |down>.
inline FixedCutoffRun run_exact_dicke(const DickeParams& p, const std::vector<double>& times,
                                      const QuenchOptions& opts = {}) {
    const DickeSector s = build_dicke_sector(p, 0);
    FixedCutoffRun r;
    r.dimension = s.dimension();
    r.n_p.resize(times.size());
    r.trailing.resize(times.size());
    CVector psi0 = CVector::Zero(s.dimension());
    psi0(s.index_of(p.n_atom, 0, 0)) = 1.0;
    auto observe = [&](std::size_t i, const CVector& psi) {
        double np = 0.0, top = 0.0;
        for (Eigen::Index j = 0; j < psi.size(); ++j) {
            const double w = std::norm(psi(j));
            const int n = s.photon[static_cast<std::size_t>(j)];
            np += w * n;
            if (n == p.n_ph)
                top += w;
        }
        r.n_p[i] = np;
        r.trailing[i] = top;
    };
    if (s.dimension() <= opts.dense_cap)
        propagate_dense(Eigen::MatrixXd(s.h).cast<cplx>(), psi0, times, observe);
    else
        propagate_chebyshev(s.h, psi0, times, observe);
    return r;
}

namespace detail {

// <n_rho(t)> and top-shell weight of one d_rho block started in |0>, using the
// even-occupation tridiagonal form of H_rho.
inline void branch_occupation(double mu, double delta, Branch rho, int cutoff, const std::vector<double>& times,
                              std::vector<double>& n, std::vector<double>& top) {
    const int pairs = cutoff / 2 + 1;
    const double a = mu + sign_of(rho) * delta;
    const double b = sign_of(rho) * delta;
    std::vector<double> d(static_cast<std::size_t>(pairs)), e(static_cast<std::size_t>(pairs), 0.0);
    for (int j = 0; j < pairs; ++j) {
        d[static_cast<std::size_t>(j)] = 2.0 * j * a + 0.5 * b;
        if (j + 1 < pairs)
            e[static_cast<std::size_t>(j)] = 0.5 * b * std::sqrt((2.0 * j + 1.0) * (2.0 * j + 2.0));
    }
    std::vector<double> vals;
    Eigen::MatrixXd vecs;
    symmetric_tridiagonal_eigensystem(d, e, vals, vecs);
    const Eigen::VectorXd c0 = vecs.row(0).transpose();
    Eigen::VectorXd occ(pairs);
    for (int j = 0; j < pairs; ++j)
        occ(j) = 2.0 * j;
    n.assign(times.size(), 0.0);
    top.assign(times.size(), 0.0);
    CVector phase(pairs);
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (int k = 0; k < pairs; ++k)
            phase(k) = std::exp(-I * (vals[static_cast<std::size_t>(k)] * times[i])) * c0(k);
        const CVector psi = vecs * phase;
        const Eigen::VectorXd prob = psi.cwiseAbs2();
        n[i] = prob.dot(occ);
        top[i] = prob(pairs - 1);
    }
}

} // namespace detail

// Effective model through d_+- = (a +- b)/sqrt2: the state stays a product of
// even-occupation d_+ and d_- states, so N_P = (n_+ + n_-)/2. `cutoff` bounds
// each d mode.
inline FixedCutoffRun run_effective_modes(const DickeParams& p, int cutoff, const std::vector<double>& times) {
    FixedCutoffRun r;
    r.dimension = 2 * (cutoff / 2 + 1);
    std::vector<double> np, tp, nm, tm;
    detail::branch_occupation(p.mu, p.delta, Branch::plus, cutoff, times, np, tp);
    detail::branch_occupation(p.mu, p.delta, Branch::minus, cutoff, times, nm, tm);
    r.n_p.resize(times.size());
    r.trailing.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        r.n_p[i] = 0.5 * (np[i] + nm[i]);
        r.trailing[i] = std::max(tp[i], tm[i]);
    }
    return r;
}

// Effective model on the explicit (a, b) truncation; reference for the mode route.
inline FixedCutoffRun run_effective_two_mode(const DickeParams& p, const std::vector<double>& times) {
    const SparseR h = build_effective_sparse(p);
    FixedCutoffRun r;
    r.dimension = h.rows();
    r.n_p.resize(times.size());
    r.trailing.resize(times.size());
    CVector psi0 = CVector::Zero(h.rows());
    psi0(0) = 1.0;
    propagate_chebyshev(h, psi0, times, [&](std::size_t i, const CVector& psi) {
        double np = 0.0, top = 0.0;
        for (int na = 0; na <= p.n_ph; ++na)
            for (int nb = 0; nb <= p.n_b; ++nb) {
                const double w = std::norm(psi(effective_index(p, na, nb)));
                np += w * na;
                if (na == p.n_ph || nb == p.n_b)
                    top += w;
            }
        r.n_p[i] = np;
        r.trailing[i] = top;
    });
    return r;
}

// Closed form for the effective model from |0,0>:
// N_P = (1/2) sum_rho Delta^2 sin^2(w_rho t) / w_rho^2, w_rho^2 = mu^2 + 2 rho Delta mu.
inline double effective_np_closed_form(double mu, double delta, double t) {
    double acc = 0.0;
    for (Branch r : {Branch::plus, Branch::minus}) {
        const double w2 = mode_frequency_squared(mu, delta, r);
        double s;
        if (w2 > 0.0)
            s = std::sin(std::sqrt(w2) * t) / std::sqrt(w2);
        else if (w2 < 0.0)
            s = std::sinh(std::sqrt(-w2) * t) / std::sqrt(-w2);
        else
            s = t;
        acc += delta * delta * s * s;
    }
    return 0.5 * acc;
}

inline double sup_relative_change(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(a[i]));
    }
    if (diff == 0.0)
        return 0.0;
    return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

// N_P(t) on [0, T] with cutoff doubling until the trajectory changes by less
// than `tolerance` (sup norm). Hitting the cap unconverged is a result: the
// series is then marked unbounded and holds the capped trajectory.
inline QuenchSeries quench_np(const DickeParams& p, QuenchModel model, double horizon,
                              const QuenchOptions& opts = {}) {
    p.validate();
    QuenchSeries out;
    out.model = model;
    out.dt = opts.dt > 0.0 ? opts.dt : default_dt(p.mu);
    out.times = time_grid(horizon, out.dt);
    out.dt = out.times[1] - out.times[0];

    int cutoff = opts.initial_cutoff > 0 ? opts.initial_cutoff : p.n_ph;
    if (cutoff < 4)
        throw size_error("quench cutoff must be >= 4");
    if (opts.auto_cutoff && cutoff > opts.cutoff_cap)
        throw size_error("initial cutoff exceeds the cutoff cap");

    std::optional<FixedCutoffRun> prev;
    DickeParams q = p;
    for (;;) {
        q.n_ph = cutoff;
        FixedCutoffRun run = model == QuenchModel::exact_dicke ? run_exact_dicke(q, out.times, opts)
                                                               : run_effective_modes(q, cutoff, out.times);
        CutoffStep step;
        step.cutoff = cutoff;
        step.dimension = run.dimension;
        step.max_trailing_weight = *std::max_element(run.trailing.begin(), run.trailing.end());
        if (prev)
            step.sup_rel_change = sup_relative_change(run.n_p, prev->n_p);
        out.cutoff_report.history.push_back(step);
        const bool done = prev && step.sup_rel_change < opts.tolerance;
        prev = std::move(run);
        if (!opts.auto_cutoff || done) {
            out.cutoff_report.converged = done;
            break;
        }
        if (cutoff * 2 > opts.cutoff_cap)
            break;
        cutoff *= 2;
    }
    out.params = q;
    out.n_p = std::move(prev->n_p);
    out.cutoff_report.trailing_weight = std::move(prev->trailing);
    out.cutoff_report.final_cutoff = cutoff;
    return out;
}

struct ConvergenceDiagnostics {
    std::vector<double> times;
    std::vector<double> trailing_weight;
    std::vector<CutoffStep> history;
    std::vector<double> sup_deltas;
    bool converged = false;
    int final_cutoff = 0;

    std::string summary() const {
        std::ostringstream os;
        os << (converged ? "converged" : "unbounded") << " at cutoff " << final_cutoff;
        for (const auto& s : history) {
            os << "; cutoff " << s.cutoff << " dim " << s.dimension << " trailing " << s.max_trailing_weight;
            if (!std::isnan(s.sup_rel_change))
                os << " delta " << s.sup_rel_change;
        }
        return os.str();
    }
};

inline ConvergenceDiagnostics convergence_report(const QuenchSeries& s) {
    ConvergenceDiagnostics d;
    d.times = s.times;
    d.trailing_weight = s.cutoff_report.trailing_weight;
    d.history = s.cutoff_report.history;
    for (const auto& h : d.history)
        if (!std::isnan(h.sup_rel_change))
            d.sup_deltas.push_back(h.sup_rel_change);
    d.converged = s.cutoff_report.converged;
    d.final_cutoff = s.cutoff_report.final_cutoff;
    return d;
}

// ---------------------------------------------------------------------------
// D_mu scan

struct SweepResult {
    std::vector<double> mu_grid;
    std::vector<double> avg_np;
    std::vector<double> d_mu;
    std::vector<bool> bounded;   // every simulation feeding the row converged
    std::vector<bool> one_sided; // end rows use one-sided differences
    double T = 0.0;
    double h = 0.0;

    std::size_t argmin() const {
        return static_cast<std::size_t>(std::min_element(d_mu.begin(), d_mu.end()) - d_mu.begin());
    }
    double argmin_mu() const { return mu_grid[argmin()]; }
    double valley_depth() const { return -d_mu[argmin()]; }
};

struct DmuScanOptions {
    QuenchOptions quench;
    double h = 0.0; // 0 selects half the smallest grid spacing
    unsigned workers = 1;
};

namespace detail {

inline double derivative_step(const std::vector<double>& grid, double h) {
    if (h > 0.0)
        return h;
    if (grid.size() < 2)
        throw size_error("a single-point grid needs an explicit derivative step");
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < grid.size(); ++i)
        spacing = std::min(spacing, grid[i] - grid[i - 1]);
    return 0.5 * spacing;
}

inline void check_grid(const std::vector<double>& grid) {
    if (grid.empty())
        throw size_error("empty mu grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !(grid[i] > 0.0))
            throw domain_error("mu grid values must be finite and positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw domain_error("mu grid must be strictly ascending");
    }
}

} // namespace detail

// D_mu for several horizons from one set of trajectories run to max(Ts).
// Interior rows use the central difference at mu +- h; the end rows are
// one-sided against the grid value and flagged. With h equal to half the
// spacing neighbouring stencils share their midpoint simulation.
inline std::vector<SweepResult> dmu_scan_multi(const DickeParams& p_template, const std::vector<double>& mu_grid,
                                               QuenchModel model, const std::vector<double>& horizons,
                                               const DmuScanOptions& opts = {}) {
    detail::check_grid(mu_grid);
    if (horizons.empty())
        throw size_error("no averaging horizon given");
    const double h = detail::derivative_step(mu_grid, opts.h);
    const double t_max = *std::max_element(horizons.begin(), horizons.end());
    const std::size_t n = mu_grid.size();

    // Evaluation points: every grid value plus interior stencils.
    std::vector<double> points(mu_grid);
    for (std::size_t i = 0; i < n; ++i) {
        if (n > 1 && i > 0 && i + 1 < n) {
            points.push_back(mu_grid[i] - h);
            points.push_back(mu_grid[i] + h);
        } else if (n > 1 && i == 0) {
            points.push_back(mu_grid[i] + h);
        } else if (n > 1) {
            points.push_back(mu_grid[i] - h);
        } else {
            points.push_back(mu_grid[i] + h);
        }
    }
    std::sort(points.begin(), points.end());
    std::vector<double> unique;
    for (double x : points)
        if (unique.empty() || std::abs(x - unique.back()) > 1e-12 * std::max(1.0, x))
            unique.push_back(x);
    for (double x : unique)
        if (!(x > 0.0))
            throw domain_error("derivative stencil reaches mu <= 0; shrink h or shift the grid");

    const QuenchOptions qopts = opts.quench;
    struct Eval {
        std::vector<double> averages;
        bool bounded = false;
    };
    const auto evals = parallel_map(unique.size(), opts.workers, [&](std::size_t k) {
        DickeParams p = p_template;
        p.mu = unique[k];
        QuenchOptions o = qopts;
        if (!(o.dt > 0.0))
            o.dt = default_dt(p.mu);
        o.dt = horizon_aligned_dt(horizons, o.dt);
        const QuenchSeries s = quench_np(p, model, t_max, o);
        Eval e;
        e.bounded = s.bounded();
        for (double hz : horizons)
            e.averages.push_back(s.time_average(hz));
        return e;
    });
    auto lookup = [&](double x) -> const Eval& {
        const auto it = std::lower_bound(unique.begin(), unique.end(), x - 1e-12 * std::max(1.0, x));
        return evals[static_cast<std::size_t>(it - unique.begin())];
    };

    std::vector<SweepResult> out(horizons.size());
    for (std::size_t hz = 0; hz < horizons.size(); ++hz) {
        SweepResult& r = out[hz];
        r.mu_grid = mu_grid;
        r.T = horizons[hz];
        r.h = h;
        for (std::size_t i = 0; i < n; ++i) {
            const Eval& c = lookup(mu_grid[i]);
            r.avg_np.push_back(c.averages[hz]);
            double d;
            bool bounded = c.bounded;
            bool one_sided = false;
            if (n > 1 && i > 0 && i + 1 < n) {
                const Eval& lo = lookup(mu_grid[i] - h);
                const Eval& hi = lookup(mu_grid[i] + h);
                d = (hi.averages[hz] - lo.averages[hz]) / (2.0 * h);
                bounded = bounded && lo.bounded && hi.bounded;
            } else if (i + 1 < n || n == 1) {
                const Eval& hi = lookup(mu_grid[i] + h);
                d = (hi.averages[hz] - c.averages[hz]) / h;
                bounded = bounded && hi.bounded;
                one_sided = true;
            } else {
                const Eval& lo = lookup(mu_grid[i] - h);
                d = (c.averages[hz] - lo.averages[hz]) / h;
                bounded = bounded && lo.bounded;
                one_sided = true;
            }
            r.d_mu.push_back(d);
            r.bounded.push_back(bounded);
            r.one_sided.push_back(one_sided);
        }
    }
    return out;
}

inline SweepResult dmu_scan(const DickeParams& p_template, const std::vector<double>& mu_grid, QuenchModel model,
                            double horizon, const DmuScanOptions& opts = {}) {
    return dmu_scan_multi(p_template, mu_grid, model, {horizon}, opts).front();
}

// Ascending grid from..to with the given step (inclusive of `to` up to rounding).
inline std::vector<double> make_grid(double from, double to, double step) {
    if (!(step > 0.0) || !(to >= from))
        throw domain_error("grid needs step > 0 and to >= from");
    const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = from + step * static_cast<double>(i);
    return g;
}

} // namespace hiddenep

#endif
