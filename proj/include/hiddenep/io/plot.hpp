#ifndef HIDDENEP_IO_PLOT_HPP
#define HIDDENEP_IO_PLOT_HPP

// matplotlib scripts that read a payload CSV sitting next to them.

#include <filesystem>
#include <string>

#include "hiddenep/errors.hpp"
#include "hiddenep/io/csv.hpp"

namespace hiddenep::io {

namespace detail {

inline const char* kPlotPrelude = R"(import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name), newline="") as f:
        rows = [r for r in csv.reader(f) if r and not r[0].startswith("#")]
    head, body = rows[0], rows[1:]
    return {h: [row[i] for row in body] for i, h in enumerate(head)}


def floats(xs):
    return [float(x) for x in xs]

)";

inline std::string body_for(const std::string& kind, const std::string& csv) {
    const std::string load = "data = load(\"" + csv + "\")\n";
    if (kind == "spectrum")
        return load + R"(fig, ax = plt.subplots()
ax.plot(floats(data["index"]), floats(data["eigenvalue"]), "o", ms=3)
ax.set_xlabel("index")
ax.set_ylabel("eigenvalue")
)";
    if (kind == "vacuum")
        return load + R"(l = floats(data["l"])
fig, ax = plt.subplots()
ax.bar([x - 0.2 for x in l], floats(data["re"]), width=0.4, color="red", label="Re")
ax.bar([x + 0.2 for x in l], floats(data["im"]), width=0.4, color="black", label="Im")
ax.set_xlabel("l")
ax.set_ylabel("amplitude")
ax.legend()
)";
    if (kind == "mipr")
        return load + R"(fig, ax = plt.subplots()
for trunc in sorted(set(data["trunc"]), key=int):
    idx = [i for i, t in enumerate(data["trunc"]) if t == trunc]
    ax.plot([float(data["mu"][i]) for i in idx], [float(data["mipr"][i]) for i in idx], label="L = " + trunc)
ax.set_xlabel("mu")
ax.set_ylabel("MIPR")
ax.legend()
)";
    if (kind == "quench")
        return load + R"(import numpy as np
mu = np.array(floats(data["mu"]))
t = np.array(floats(data["t"]))
n = np.array(floats(data["n_p"]))
mus = sorted(set(mu))
fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4))
if len(mus) > 1:
    # columns may have different dt; resample onto the grid of the first mu
    tg = t[mu == mus[0]]
    grid = np.array([np.interp(tg, t[mu == m], n[mu == m]) for m in mus])
    mesh = ax0.pcolormesh(tg, mus, grid, shading="auto")
    fig.colorbar(mesh, ax=ax0, label="N_P")
    ax0.set_xlabel("t")
    ax0.set_ylabel("mu")
for m in mus:
    ax1.plot(t[mu == m], n[mu == m], label="mu = %g" % m)
ax1.set_xlabel("t")
ax1.set_ylabel("N_P")
ax1.legend(fontsize="small")
)";
    if (kind == "dmu")
        return load + R"(fig, ax = plt.subplots()
ax.plot(floats(data["mu"]), floats(data["d_mu"]), "o-")
ax.axvline(2.0, ls=":", color="grey")
ax.set_xlabel("mu")
ax.set_ylabel("D_mu")
)";
    throw domain_error("no plot template for payload kind '" + kind + "'");
}

} // namespace detail

inline std::string plot_script(const std::string& kind, const std::string& csv_name) {
    return std::string(detail::kPlotPrelude) + detail::body_for(kind, csv_name) +
           "fig.tight_layout()\nout = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, \"" + kind +
           ".png\")\nfig.savefig(out, dpi=150)\n";
}

// Writes plot_<kind>.py next to the payload; the payload must already exist.
inline std::filesystem::path emit_plot_script(const std::filesystem::path& payload, const std::string& kind) {
    if (!std::filesystem::exists(payload))
        throw error("io_error", "payload " + payload.string() + " does not exist");
    const auto script = payload.parent_path() / ("plot_" + kind + ".py");
    write_atomic(script, plot_script(kind, payload.filename().string()));
    return script;
}

} // namespace hiddenep::io

#endif
