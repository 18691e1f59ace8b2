#ifndef HIDDENEP_CLI_COMMANDS_HPP
#define HIDDENEP_CLI_COMMANDS_HPP

// Command bodies behind the `hiddenep` executable. Each command turns a
// validated argument block into CSV payloads; persistence, caching and plot
// scripts are handled by run_command.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "hiddenep/dicke.hpp"
#include "hiddenep/io/csv.hpp"
#include "hiddenep/io/plot.hpp"
#include "hiddenep/io/record.hpp"
#include "hiddenep/localization.hpp"
#include "hiddenep/pair_subspace.hpp"
#include "hiddenep/parallel.hpp"
#include "hiddenep/quadratic_core.hpp"
#include "hiddenep/quench.hpp"
#include "hiddenep/tridiagonal_eigen.hpp"
#include "hiddenep/validate.hpp"

namespace hiddenep::cli {

struct Payload {
    std::string file; // e.g. spectrum.csv
    std::string kind; // plot template
    std::string content;
};

struct CommandOutput {
    std::vector<Payload> payloads;
    std::vector<std::string> lines; // printed to stdout
    int status = 0;
};

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
    double mu = 2.0, delta = 1.0, t = 0.0, k = 0.0;
    std::size_t trunc = 2000;
    std::size_t count = 20;

    io::ParamSet params() const {
        io::ParamSet p;
        p.set("command", "spectrum");
        p.set("mu", mu);
        p.set("delta", delta);
        p.set("t", t);
        p.set("k", k);
        p.set("trunc", trunc);
        p.set("count", count);
        return p;
    }
};

inline CommandOutput run_spectrum(const SpectrumArgs& a) {
    ModelParams p{a.t, a.delta, a.mu, 1};
    p.validate();
    const MomentumSector s = build_sector(p, a.k);
    const auto ev = eigvalsh_tridiagonal(build_pair_hamiltonian(p, s, a.trunc));
    io::CsvTable t("spectrum", {"index", "eigenvalue"});
    for (std::size_t i = 0; i < std::min(a.count, ev.size()); ++i)
        t.row(i, ev[i]);
    CommandOutput out;
    out.payloads.push_back({"spectrum.csv", "spectrum", t.str()});
    out.lines.push_back("lowest eigenvalue " + io::fmt(ev.front()));
    return out;
}

// ---------------------------------------------------------------------------
// vacuum-profile

struct VacuumArgs {
    std::string model = "kitaev"; // kitaev | dicke
    double mu = 2.0, delta = 1.0, t = 0.0, k = 0.0;
    std::size_t shells = 20;
    std::string branch = "both"; // dicke: + | - | both
    int n_atom = 64;

    io::ParamSet params() const {
        io::ParamSet p;
        p.set("command", "vacuum-profile");
        p.set("model", model);
        p.set("mu", mu);
        p.set("delta", delta);
        p.set("shells", shells);
        if (model == "kitaev") {
            p.set("t", t);
            p.set("k", k);
        } else {
            p.set("branch", branch);
        }
        return p;
    }
};

inline CommandOutput run_vacuum_profile(const VacuumArgs& a) {
    CommandOutput out;
    if (a.model == "kitaev") {
        ModelParams p{a.t, a.delta, a.mu, 1};
        const MomentumSector s = build_sector(p, a.k);
        const VacuumState v = vacuum_closed_form(p, s, a.shells);
        const StateVector n = v.state.normalized();
        io::CsvTable t("vacuum", {"l", "n", "re", "im", "prob"});
        for (std::size_t l = 0; l < n.length(); ++l)
            t.row(l, l, n[l].real(), n[l].imag(), std::norm(n[l]));
        out.payloads.push_back({"vacuum.csv", "vacuum", t.str()});
        out.lines.push_back("E_vac " + io::fmt(v.energy) + " IPR " + io::fmt(ipr(n)));
        return out;
    }
    if (a.model != "dicke")
        throw domain_error("vacuum-profile model must be kitaev or dicke");
    DickeParams p;
    p.n_atom = a.n_atom;
    p.mu = a.mu;
    p.delta = a.delta;
    std::vector<Branch> branches;
    if (a.branch == "+" || a.branch == "both" || a.branch == "plus")
        branches.push_back(Branch::plus);
    if (a.branch == "-" || a.branch == "both" || a.branch == "minus")
        branches.push_back(Branch::minus);
    if (branches.empty())
        throw domain_error("branch must be +, - or both");
    io::CsvTable t("vacuum", {"branch", "l", "n", "re", "im", "prob"});
    for (Branch b : branches) {
        const DickeVacuum v = dicke_vacuum_closed_form(p, b, a.shells);
        const StateVector n = v.pair_amplitudes.normalized();
        for (std::size_t l = 0; l < n.length(); ++l)
            t.add({b == Branch::plus ? "+" : "-", io::fmt(l), io::fmt(2 * l), io::fmt(n[l].real()),
                   io::fmt(n[l].imag()), io::fmt(v.profile[l])});
        out.lines.push_back(std::string("branch ") + to_string(b) + " eta " + io::fmt(v.eta) + " IPR " +
                            io::fmt(ipr(n)));
    }
    out.payloads.push_back({"vacuum.csv", "vacuum", t.str()});
    return out;
}

// ---------------------------------------------------------------------------
// mipr-sweep

struct MiprArgs {
    double delta = 1.0, t = 0.0, k = 0.0;
    double mu_from = 0.2, mu_to = 2.0, mu_step = 0.05;
    std::vector<std::size_t> truncs{2000};
    std::size_t m = 400;
    unsigned workers = 1;

    io::ParamSet params() const {
        io::ParamSet p;
        p.set("command", "mipr-sweep");
        p.set("delta", delta);
        p.set("t", t);
        p.set("k", k);
        p.set("mu_from", mu_from);
        p.set("mu_to", mu_to);
        p.set("mu_step", mu_step);
        std::string tr;
        for (auto x : truncs)
            tr += (tr.empty() ? "" : ",") + std::to_string(x);
        p.set("trunc", tr);
        p.set("m", m);
        return p;
    }
};

inline double mipr_point(const ModelParams& p, double k, std::size_t trunc, std::size_t m) {
    const MomentumSector s = build_sector(p, k);
    TridiagonalSolveOptions opts;
    opts.lowest = m;
    return mipr(eigh_tridiagonal(build_pair_hamiltonian(p, s, trunc), opts), m).mipr;
}

inline CommandOutput run_mipr_sweep(const MiprArgs& a) {
    if (a.truncs.empty())
        throw size_error("mipr-sweep needs at least one truncation");
    const auto grid = make_grid(a.mu_from, a.mu_to, a.mu_step);
    struct Point {
        double mu;
        std::size_t trunc;
    };
    std::vector<Point> points;
    for (std::size_t tr : a.truncs)
        for (double mu : grid)
            points.push_back({mu, tr});
    struct Result {
        double value = 0.0;
        std::string error;
    };
    const auto results = parallel_map(points.size(), a.workers, [&](std::size_t i) {
        Result r;
        try {
            ModelParams p{a.t, a.delta, points[i].mu, 1};
            r.value = mipr_point(p, a.k, points[i].trunc, a.m);
        } catch (const hiddenep::error& e) {
            r.value = std::numeric_limits<double>::quiet_NaN();
            r.error = "kind=" + e.kind() + " message=\"" + e.what() + "\"";
        }
        return r;
    });
    io::CsvTable t("mipr", {"mu", "trunc", "m", "mipr"});
    CommandOutput out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        t.row(points[i].mu, points[i].trunc, a.m, results[i].value);
        if (!results[i].error.empty()) {
            out.lines.push_back("error: point mu=" + io::fmt(points[i].mu) + " trunc=" +
                                std::to_string(points[i].trunc) + " " + results[i].error);
            out.status = 3;
        }
    }
    out.payloads.push_back({"mipr.csv", "mipr", t.str()});
    return out;
}

// ---------------------------------------------------------------------------
// dicke-quench

struct QuenchArgs {
    std::vector<double> mus{1.0, 3.0};
    double delta = 1.0;
    int n_atom = 64;
    double horizon = 20.0;
    double dt = 0.0;
    std::string model = "exact";
    int n_ph = 64;
    int cutoff_cap = 1024;
    double tolerance = 0.01;
    unsigned workers = 1;

    io::ParamSet params() const {
        io::ParamSet p;
        p.set("command", "dicke-quench");
        std::string m;
        for (double x : mus)
            m += (m.empty() ? "" : ",") + io::fmt(x);
        p.set("mu", m);
        p.set("delta", delta);
        p.set("n_atom", n_atom);
        p.set("T", horizon);
        p.set("dt", dt);
        p.set("model", to_string(parse_quench_model(model)));
        p.set("n_ph", n_ph);
        p.set("cutoff_cap", cutoff_cap);
        p.set("tolerance", tolerance);
        return p;
    }
};

inline CommandOutput run_dicke_quench(const QuenchArgs& a) {
    const QuenchModel model = parse_quench_model(a.model);
    QuenchOptions o;
    o.dt = a.dt;
    o.cutoff_cap = a.cutoff_cap;
    o.tolerance = a.tolerance;
    for (double mu : a.mus) {
        DickeParams p;
        p.n_atom = a.n_atom;
        p.mu = mu;
        p.delta = a.delta;
        p.n_ph = a.n_ph;
        p.validate();
    }
    const auto series = parallel_map(a.mus.size(), a.workers, [&](std::size_t i) {
        DickeParams p;
        p.n_atom = a.n_atom;
        p.mu = a.mus[i];
        p.delta = a.delta;
        p.n_ph = a.n_ph;
        return quench_np(p, model, a.horizon, o);
    });
    io::CsvTable t("quench", {"mu", "t", "n_p"});
    io::CsvTable r("quench_report", {"mu", "final_cutoff", "converged", "max_trailing_weight", "avg_np"});
    CommandOutput out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const QuenchSeries& s = series[i];
        for (std::size_t j = 0; j < s.times.size(); ++j)
            t.row(a.mus[i], s.times[j], s.n_p[j]);
        r.row(a.mus[i], s.cutoff_report.final_cutoff, s.bounded(), s.cutoff_report.max_trailing_weight(),
              s.time_average());
        out.lines.push_back("mu " + io::fmt(a.mus[i]) + ": " + convergence_report(s).summary());
    }
    out.payloads.push_back({"quench.csv", "quench", t.str()});
    out.payloads.push_back({"quench_report.csv", "", r.str()});
    return out;
}

// ---------------------------------------------------------------------------
// dmu-scan

struct DmuArgs {
    double delta = 1.0;
    int n_atom = 64;
    double horizon = 20.0;
    double mu_from = 1.0, mu_to = 3.0, mu_step = 0.1;
    double h = 0.0;
    double dt = 0.0;
    std::string model = "exact";
    int n_ph = 64;
    int cutoff_cap = 1024;
    double tolerance = 0.01;
    unsigned workers = 1;

    io::ParamSet params() const {
        io::ParamSet p;
        p.set("command", "dmu-scan");
        p.set("delta", delta);
        p.set("n_atom", n_atom);
        p.set("T", horizon);
        p.set("mu_from", mu_from);
        p.set("mu_to", mu_to);
        p.set("mu_step", mu_step);
        p.set("h", h);
        p.set("dt", dt);
        p.set("model", to_string(parse_quench_model(model)));
        p.set("n_ph", n_ph);
        p.set("cutoff_cap", cutoff_cap);
        p.set("tolerance", tolerance);
        return p;
    }
};

inline io::CsvTable dmu_table(const SweepResult& r) {
    io::CsvTable t("dmu", {"mu", "avg_np", "d_mu", "bounded_flag", "one_sided", "argmin"});
    const std::size_t am = r.argmin();
    for (std::size_t i = 0; i < r.mu_grid.size(); ++i)
        t.row(r.mu_grid[i], r.avg_np[i], r.d_mu[i], static_cast<bool>(r.bounded[i]), static_cast<bool>(r.one_sided[i]),
              i == am);
    return t;
}

inline CommandOutput run_dmu_scan(const DmuArgs& a) {
    DickeParams p;
    p.n_atom = a.n_atom;
    p.mu = a.mu_from;
    p.delta = a.delta;
    p.n_ph = a.n_ph;
    p.validate();
    DmuScanOptions o;
    o.h = a.h;
    o.workers = a.workers;
    o.quench.dt = a.dt;
    o.quench.cutoff_cap = a.cutoff_cap;
    o.quench.tolerance = a.tolerance;
    const SweepResult r =
        dmu_scan(p, make_grid(a.mu_from, a.mu_to, a.mu_step), parse_quench_model(a.model), a.horizon, o);
    CommandOutput out;
    out.payloads.push_back({"dmu.csv", "dmu", dmu_table(r).str()});
    out.lines.push_back("argmin mu " + io::fmt(r.argmin_mu()) + " depth " + io::fmt(r.valley_depth()));
    return out;
}

// ---------------------------------------------------------------------------
// validate

inline CommandOutput run_validate(const ValidateOptions& o) {
    CommandOutput out;
    for (const CheckResult& c : run_validation(o)) {
        out.lines.push_back(std::string(c.passed ? "PASS " : "FAIL ") + c.name + " : " + c.detail);
        if (!c.passed)
            out.status = 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// persistence

struct RunContext {
    std::filesystem::path out_dir = ".";
    bool use_cache = true;
    bool plots = true;
};

// Output root: explicit flag, else $HIDDENEP_OUTPUT_ROOT, else the working directory.
inline std::filesystem::path resolve_output_root(const std::string& flag) {
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("HIDDENEP_OUTPUT_ROOT"); env && *env)
        return env;
    return ".";
}

struct RunReport {
    bool cache_hit = false;
    std::string hash;
    std::vector<std::filesystem::path> written;
    CommandOutput output;
};

// Looks the parameter hash up in <out>/.hiddenep-cache, computes on a miss,
// writes payloads (write-then-rename) and their plot scripts.
template <typename Compute>
RunReport run_command(const io::ParamSet& params, const RunContext& ctx, Compute&& compute) {
    RunReport rep;
    rep.hash = params.hash();
    const io::ResultCache cache(ctx.out_dir / ".hiddenep-cache");
    std::optional<io::ResultRecord> hit;
    if (ctx.use_cache)
        hit = cache.lookup(rep.hash);
    if (hit) {
        rep.cache_hit = true;
        for (const auto& name : hit->payloads) {
            Payload pl{name, "", cache.payload(*hit, name)};
            if (name == "spectrum.csv")
                pl.kind = "spectrum";
            else if (name == "vacuum.csv")
                pl.kind = "vacuum";
            else if (name == "mipr.csv")
                pl.kind = "mipr";
            else if (name == "quench.csv")
                pl.kind = "quench";
            else if (name == "dmu.csv")
                pl.kind = "dmu";
            rep.output.payloads.push_back(std::move(pl));
        }
        rep.output.lines.push_back("cache hit " + rep.hash);
    } else {
        rep.output = compute();
        if (rep.output.status == 0 && !rep.output.payloads.empty()) {
            io::ResultRecord r;
            r.hash = rep.hash;
            r.command = params.values().at("command");
            r.created = io::utc_now();
            r.params = params.values();
            std::map<std::string, std::string> files;
            for (const auto& pl : rep.output.payloads) {
                r.payloads.push_back(pl.file);
                files[pl.file] = pl.content;
            }
            cache.store(r, files);
        }
    }
    for (const auto& pl : rep.output.payloads) {
        const auto path = ctx.out_dir / pl.file;
        io::write_atomic(path, pl.content);
        rep.written.push_back(path);
        if (ctx.plots && !pl.kind.empty())
            rep.written.push_back(io::emit_plot_script(path, pl.kind));
    }
    return rep;
}

} // namespace hiddenep::cli

#endif
