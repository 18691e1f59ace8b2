#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "hiddenep/cli/commands.hpp"
#include "hiddenep/io/config.hpp"

namespace {

using namespace hiddenep;

const std::vector<std::string> kCommands = {"spectrum", "vacuum-profile", "mipr-sweep",
                                            "dicke-quench", "dmu-scan", "validate"};

void print_error(const std::string& kind, const std::string& message) {
    std::cerr << "error: kind=" << kind << " message=\"" << message << "\"\n";
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
    const std::string f = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == f || a.rfind(f + "=", 0) == 0; });
}

// Splices `--config FILE` entries into the argument list. Keys already given
// on the command line win; a `command` key supplies a missing subcommand.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty())
        return args;
    const bool has_command = std::any_of(args.begin(), args.end(), [](const std::string& a) {
        return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
    });
    std::vector<std::string> extra;
    for (const auto& [key, value] : io::load_config(path)) {
        if (key == "command") {
            if (!has_command)
                args.insert(args.begin(), value);
            continue;
        }
        if (!has_flag(args, key))
            extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

struct Globals {
    std::string out;
    unsigned workers = default_workers();
    bool no_cache = false;
    bool no_plots = false;
};

int emit(const io::ParamSet& params, const Globals& g, const std::function<cli::CommandOutput()>& compute) {
    cli::RunContext ctx;
    ctx.out_dir = cli::resolve_output_root(g.out);
    ctx.use_cache = !g.no_cache;
    ctx.plots = !g.no_plots;
    const cli::RunReport rep = cli::run_command(params, ctx, compute);
    for (const auto& line : rep.output.lines)
        (line.rfind("error:", 0) == 0 ? std::cerr : std::cout) << line << "\n";
    for (const auto& p : rep.written)
        std::cout << "wrote " << p.string() << "\n";
    return rep.output.status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hidden exceptional points in bosonic quadratic models"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out", g.out, "Output directory (default $HIDDENEP_OUTPUT_ROOT or .)");
    app.add_option("--workers", g.workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_flag("--no-cache", g.no_cache, "Recompute even when a cached result exists");
    app.add_flag("--no-plots", g.no_plots, "Skip plot script generation");
    app.add_option("--config", "Flat key=value file; command-line flags override it");

    cli::SpectrumArgs sp;
    auto* c_sp = app.add_subcommand("spectrum", "Lowest eigenvalues of the pair chain");
    c_sp->add_option("--mu", sp.mu)->required();
    c_sp->add_option("--delta", sp.delta)->required();
    c_sp->add_option("--t", sp.t);
    c_sp->add_option("--k", sp.k);
    c_sp->add_option("--trunc", sp.trunc)->check(CLI::PositiveNumber);
    c_sp->add_option("--count", sp.count)->check(CLI::PositiveNumber);

    cli::VacuumArgs va;
    auto* c_va = app.add_subcommand("vacuum-profile", "Closed-form vacuum amplitudes");
    c_va->add_option("--model", va.model)->check(CLI::IsMember({"kitaev", "dicke"}));
    c_va->add_option("--mu", va.mu)->required();
    c_va->add_option("--delta", va.delta)->required();
    c_va->add_option("--t", va.t);
    c_va->add_option("--k", va.k);
    c_va->add_option("--shells", va.shells)->check(CLI::PositiveNumber);
    c_va->add_option("--branch", va.branch)->check(CLI::IsMember({"+", "-", "plus", "minus", "both"}));

    cli::MiprArgs mi;
    auto* c_mi = app.add_subcommand("mipr-sweep", "Mean inverse participation ratio over a mu grid");
    c_mi->add_option("--delta", mi.delta);
    c_mi->add_option("--t", mi.t);
    c_mi->add_option("--k", mi.k);
    c_mi->add_option("--mu-from", mi.mu_from);
    c_mi->add_option("--mu-to", mi.mu_to);
    c_mi->add_option("--mu-step", mi.mu_step);
    c_mi->add_option("--trunc", mi.truncs)->delimiter(',');
    c_mi->add_option("--m", mi.m)->check(CLI::PositiveNumber);

    cli::QuenchArgs qu;
    auto* c_qu = app.add_subcommand("dicke-quench", "Photon-number dynamics after a quench from the vacuum");
    c_qu->add_option("--mu", qu.mus)->delimiter(',');
    c_qu->add_option("--delta", qu.delta);
    c_qu->add_option("--n-atom", qu.n_atom)->check(CLI::PositiveNumber);
    c_qu->add_option("--T", qu.horizon)->check(CLI::PositiveNumber);
    c_qu->add_option("--dt", qu.dt);
    c_qu->add_option("--model", qu.model)->check(CLI::IsMember({"exact", "effective"}));
    c_qu->add_option("--n-ph", qu.n_ph)->check(CLI::PositiveNumber);
    c_qu->add_option("--cutoff-cap", qu.cutoff_cap)->check(CLI::PositiveNumber);
    c_qu->add_option("--tolerance", qu.tolerance)->check(CLI::PositiveNumber);

    cli::DmuArgs dm;
    auto* c_dm = app.add_subcommand("dmu-scan", "Derivative of the time-averaged photon number over mu");
    c_dm->add_option("--delta", dm.delta);
    c_dm->add_option("--n-atom", dm.n_atom)->check(CLI::PositiveNumber);
    c_dm->add_option("--T", dm.horizon)->check(CLI::PositiveNumber);
    c_dm->add_option("--mu-from", dm.mu_from);
    c_dm->add_option("--mu-to", dm.mu_to);
    c_dm->add_option("--mu-step", dm.mu_step);
    c_dm->set_help_flag("--help", "Print this help message and exit");
    c_dm->add_option("--h", dm.h, "Derivative half-step (default half the grid spacing)");
    c_dm->add_option("--dt", dm.dt);
    c_dm->add_option("--model", dm.model)->check(CLI::IsMember({"exact", "effective"}));
    c_dm->add_option("--n-ph", dm.n_ph)->check(CLI::PositiveNumber);
    c_dm->add_option("--cutoff-cap", dm.cutoff_cap)->check(CLI::PositiveNumber);
    c_dm->add_option("--tolerance", dm.tolerance)->check(CLI::PositiveNumber);

    ValidateOptions vo;
    auto* c_vd = app.add_subcommand("validate", "Run the built-in oracle checks");
    c_vd->add_flag("--inject-diagonal-typo", vo.inject_diagonal_typo, "Mutation test: corrupt the chain diagonal");
    c_vd->add_flag("!--no-dynamics", vo.include_dynamics, "Skip the quench fidelity check");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const hiddenep::error& e) {
        print_error(e.kind(), e.what());
        return 2;
    }

    try {
        mi.workers = qu.workers = dm.workers = g.workers;
        if (*c_sp)
            return emit(sp.params(), g, [&] { return cli::run_spectrum(sp); });
        if (*c_va)
            return emit(va.params(), g, [&] { return cli::run_vacuum_profile(va); });
        if (*c_mi)
            return emit(mi.params(), g, [&] { return cli::run_mipr_sweep(mi); });
        if (*c_qu)
            return emit(qu.params(), g, [&] { return cli::run_dicke_quench(qu); });
        if (*c_dm)
            return emit(dm.params(), g, [&] { return cli::run_dmu_scan(dm); });
        if (*c_vd) {
            const cli::CommandOutput out = cli::run_validate(vo);
            for (const auto& line : out.lines)
                std::cout << line << "\n";
            return out.status;
        }
    } catch (const hiddenep::error& e) {
        print_error(e.kind(), e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 4;
    }
    return 0;
}
