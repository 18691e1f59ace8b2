#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "hiddenep/cli/commands.hpp"
#include "hiddenep/io/config.hpp"

using namespace hiddenep;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hiddenep_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct Shell {
    int status;
    std::string out;
};

Shell run(const std::string& args) {
    const std::string cmd = std::string(HIDDENEP_CLI) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    std::string out;
    char buf[512];
    while (pipe && std::fgets(buf, sizeof buf, pipe))
        out += buf;
    const int st = pipe ? ::pclose(pipe) : -1;
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

} // namespace

TEST(Csv, HeaderAndFormatting) {
    io::CsvTable t("spectrum", {"index", "eigenvalue"});
    t.row(std::size_t{0}, 0.1);
    t.row(std::size_t{1}, true);
    EXPECT_EQ(t.str(), "# hiddenep spectrum v1\nindex,eigenvalue\n0,0.10000000000000001\n1,1\n");
    EXPECT_THROW(t.row(1.0), size_error);
}

TEST(Csv, DoublesRoundTrip) {
    for (double x : {1.0 / 3.0, -2.5e-300, 6.02214076e23})
        EXPECT_EQ(std::stod(io::fmt(x)), x);
}

TEST(Csv, AtomicWriteLeavesNoTemporary) {
    const fs::path d = scratch("atomic");
    io::write_atomic(d / "sub" / "a.csv", "x\n");
    EXPECT_EQ(io::read_file(d / "sub" / "a.csv"), "x\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(d / "sub"))
        ++files;
    EXPECT_EQ(files, 1u);
    fs::remove_all(d);
}

TEST(Record, HashIsStableAndOrderFree) {
    io::ParamSet a, b;
    a.set("mu", 2.0);
    a.set("delta", 1.0);
    b.set("delta", 1.0);
    b.set("mu", 2.0);
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 16u);
    b.set("mu", 2.0000000001);
    EXPECT_NE(a.hash(), b.hash());
}

TEST(Record, CacheRoundTrip) {
    const fs::path d = scratch("cache");
    const io::ResultCache cache(d);
    io::ResultRecord r;
    r.hash = "0123456789abcdef";
    r.command = "spectrum";
    r.created = io::utc_now();
    r.payloads = {"spectrum.csv"};
    r.params = {{"mu", "2"}};
    EXPECT_FALSE(cache.lookup(r.hash));
    cache.store(r, {{"spectrum.csv", "data\n"}});
    const auto hit = cache.lookup(r.hash);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->params.at("mu"), "2");
    EXPECT_EQ(cache.payload(*hit, "spectrum.csv"), "data\n");
    fs::remove(d / r.hash / "spectrum.csv");
    EXPECT_FALSE(cache.lookup(r.hash));
    fs::remove_all(d);
}

TEST(Config, ParsesFlatKeyValues) {
    const auto kv = io::parse_config("# comment\ncommand = spectrum\n--mu=2.5 # trailing\n\ndelta = 1\n");
    ASSERT_EQ(kv.size(), 3u);
    EXPECT_EQ(kv[0], std::make_pair(std::string("command"), std::string("spectrum")));
    EXPECT_EQ(kv[1], std::make_pair(std::string("mu"), std::string("2.5")));
    EXPECT_THROW(io::parse_config("novalue\n"), error);
    EXPECT_THROW(io::parse_config("= 3\n"), error);
}

TEST(Plot, ScriptNamesItsPayload) {
    for (const char* kind : {"spectrum", "vacuum", "mipr", "quench", "dmu"}) {
        const std::string s = io::plot_script(kind, "data.csv");
        EXPECT_NE(s.find("data.csv"), std::string::npos) << kind;
        EXPECT_NE(s.find("savefig"), std::string::npos) << kind;
    }
    EXPECT_THROW(io::emit_plot_script("/nonexistent/x.csv", "spectrum"), error);
}

TEST(Commands, SpectrumPayload) {
    cli::SpectrumArgs a;
    a.trunc = 400;
    a.count = 3;
    const cli::CommandOutput out = cli::run_spectrum(a);
    ASSERT_EQ(out.payloads.size(), 1u);
    const std::string& csv = out.payloads[0].content;
    EXPECT_EQ(csv.rfind("# hiddenep spectrum v1\nindex,eigenvalue\n0,", 0), 0u);
    EXPECT_NEAR(std::stod(csv.substr(csv.find("\n0,") + 3)), 2.0 * std::sqrt(3.0) - 4.0, 1e-8);
}

TEST(Commands, MiprWorkersGiveIdenticalBytes) {
    cli::MiprArgs a;
    a.mu_from = 0.5;
    a.mu_to = 1.5;
    a.mu_step = 0.25;
    a.truncs = {200, 300};
    a.m = 40;
    a.workers = 1;
    const std::string one = cli::run_mipr_sweep(a).payloads[0].content;
    a.workers = 4;
    EXPECT_EQ(one, cli::run_mipr_sweep(a).payloads[0].content);
}

TEST(Commands, MiprPointErrorsBecomeRows) {
    cli::MiprArgs a;
    a.mu_from = 0.5;
    a.mu_to = 1.0;
    a.mu_step = 0.5;
    a.truncs = {50};
    a.m = 60; // more states than the chain holds
    const cli::CommandOutput out = cli::run_mipr_sweep(a);
    EXPECT_NE(out.status, 0);
    EXPECT_EQ(out.lines.size(), 2u);
    EXPECT_NE(out.payloads[0].content.find("nan"), std::string::npos);
}

TEST(Commands, VacuumProfiles) {
    cli::VacuumArgs k;
    k.shells = 5;
    const auto ko = cli::run_vacuum_profile(k);
    EXPECT_NE(ko.payloads[0].content.find("l,n,re,im,prob"), std::string::npos);
    cli::VacuumArgs d;
    d.model = "dicke";
    d.mu = 3.0;
    d.shells = 5;
    const auto dout = cli::run_vacuum_profile(d);
    EXPECT_EQ(dout.lines.size(), 2u);
    d.mu = 1.0;
    EXPECT_THROW(cli::run_vacuum_profile(d), regime_error);
}

TEST(Commands, RunCommandCachesResults) {
    const fs::path d = scratch("run");
    cli::RunContext ctx;
    ctx.out_dir = d;
    cli::SpectrumArgs a;
    a.trunc = 100;
    int calls = 0;
    auto compute = [&] {
        ++calls;
        return cli::run_spectrum(a);
    };
    const auto first = cli::run_command(a.params(), ctx, compute);
    EXPECT_FALSE(first.cache_hit);
    const std::string bytes = io::read_file(d / "spectrum.csv");
    fs::remove(d / "spectrum.csv");
    const auto second = cli::run_command(a.params(), ctx, compute);
    EXPECT_TRUE(second.cache_hit);
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(io::read_file(d / "spectrum.csv"), bytes);
    EXPECT_TRUE(fs::exists(d / "plot_spectrum.py"));
    ctx.use_cache = false;
    cli::run_command(a.params(), ctx, compute);
    EXPECT_EQ(calls, 2);
    fs::remove_all(d);
}

TEST(Executable, SpectrumWritesCsv) {
    const fs::path d = scratch("exe");
    const Shell s = run("--out " + d.string() + " spectrum --mu 2 --delta 1 --trunc 300 --count 4");
    EXPECT_EQ(s.status, 0) << s.out;
    const std::string csv = io::read_file(d / "spectrum.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
    const Shell again = run("--out " + d.string() + " spectrum --mu 2 --delta 1 --trunc 300 --count 4");
    EXPECT_NE(again.out.find("cache hit"), std::string::npos) << again.out;
    fs::remove_all(d);
}

TEST(Executable, ConfigFileAndOverride) {
    const fs::path d = scratch("cfg");
    io::write_atomic(d / "run.cfg", "command = spectrum\nmu = 2\ndelta = 1\ntrunc = 300\ncount = 2\n");
    const Shell s = run("--config " + (d / "run.cfg").string() + " --out " + d.string() + " --no-cache");
    EXPECT_EQ(s.status, 0) << s.out;
    const std::string a = io::read_file(d / "spectrum.csv");
    const Shell o = run("--config " + (d / "run.cfg").string() + " --out " + d.string() + " spectrum --mu 3");
    EXPECT_EQ(o.status, 0) << o.out;
    EXPECT_NE(io::read_file(d / "spectrum.csv"), a);
    fs::remove_all(d);
}

TEST(Executable, OutputRootFromEnvironment) {
    const fs::path d = scratch("env");
    const std::string cmd = "HIDDENEP_OUTPUT_ROOT=" + d.string() + " " + std::string(HIDDENEP_CLI) +
                            " spectrum --mu 2 --delta 1 --trunc 50 --count 1 > /dev/null 2>&1";
    EXPECT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(d / "spectrum.csv"));
    fs::remove_all(d);
}

TEST(Executable, ErrorsAreStructured) {
    const fs::path d = scratch("err");
    const Shell bad = run("--out " + d.string() + " spectrum --mu -1 --delta 1");
    EXPECT_NE(bad.status, 0);
    EXPECT_NE(bad.out.find("error: kind=domain_error message=\""), std::string::npos) << bad.out;
    const Shell usage = run("spectrum --delta 1");
    EXPECT_NE(usage.status, 0);
    EXPECT_NE(usage.out.find("error: kind=usage"), std::string::npos) << usage.out;
    const Shell cfg = run("--config /nonexistent.cfg spectrum --mu 1 --delta 1");
    EXPECT_NE(cfg.out.find("error: kind=io_error"), std::string::npos) << cfg.out;
    fs::remove_all(d);
}

TEST(Executable, ValidateMutationFails) {
    const Shell ok = run("validate --no-dynamics");
    EXPECT_EQ(ok.status, 0) << ok.out;
    const Shell bad = run("validate --no-dynamics --inject-diagonal-typo");
    EXPECT_NE(bad.status, 0);
    EXPECT_NE(bad.out.find("FAIL projection equality"), std::string::npos) << bad.out;
}
