"""Runs the axibie command-line driver on small cases and checks its outputs."""

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def expect(cond, what):
    if not cond:
        failures.append(what)
        print("FAILED:", what, file=sys.stderr)


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True, timeout=600)


def read_csv(path, schema):
    lines = path.read_text().splitlines()
    expect(lines and lines[0] == "# schema: " + schema, f"{path.name}: schema line")
    return list(csv.DictReader(lines[1:]))


def main():
    with tempfile.TemporaryDirectory(prefix="axibie_cli_") as tmp:
        checks(Path(tmp))
    if failures:
        print(f"{len(failures)} check(s) failed", file=sys.stderr)
        return 1
    print("all command-line checks passed")
    return 0


def checks(work):
    small = ["--set", "n_panels=4", "--set", "modes=17", "--set", "targets=12"]

    r = run("defaults")
    expect(r.returncode == 0, "defaults exits 0")
    expect("n_panels = 10" in r.stdout and "modes = 100" in r.stdout, "defaults lists keys")

    out = work / "solve"
    r = run("solve", *small, "--out", str(out))
    expect(r.returncode == 0, f"solve exits 0 ({r.stderr.strip()})")
    rows = read_csv(out / "potential.csv", "axibie.potential/1")
    expect(len(rows) == 12, "potential.csv has one row per target")
    expect(set(rows[0]) == {"x", "y", "z", "u_num", "u_exact", "abs_error", "clearance"}, "potential.csv columns")
    summary = json.loads((out / "summary.json").read_text())
    expect(summary["schema"] == "axibie.summary/1", "summary schema")
    expect(set(summary["timings"]) == {"T_setup", "T_mat", "T_inv", "T_fft", "T_apply"}, "five timing fields")
    expect(summary["n_f"] == 8 and summary["modes"] == 17, "N_F from modes")
    expect(summary["relative_linf_error"] < 1e-6, "solve error")
    worst = max(float(row["abs_error"]) for row in rows) / max(abs(float(row["u_exact"])) for row in rows)
    expect(abs(worst - summary["relative_linf_error"]) <= 1e-6 * worst, "summary error matches the table")
    sigma = read_csv(out / "sigma.csv", "axibie.sigma/1")
    expect(len(sigma) == summary["nodes"] * summary["m_theta"], "sigma.csv covers the grid")

    r2 = run("solve", *small, "--out", str(work / "again"))
    again = json.loads((work / "again" / "summary.json").read_text())
    expect(r2.returncode == 0 and again["relative_linf_error"] == summary["relative_linf_error"],
           "repeated solve is bit-identical")

    cfg = work / "exterior.cfg"
    cfg.write_text("# exterior torus\ncurve = torus\nproblem = exterior\nn_panels = 6\nmodes = 41\n"
                   "eps = 1e-8\nwrite_sigma = false\n")
    r = run("solve", "--config", str(cfg), "--out", str(work / "ext"))
    expect(r.returncode == 0, f"exterior solve with eps exits 0 ({r.stderr.strip()})")
    ext = json.loads((work / "ext" / "summary.json").read_text())
    expect(ext["truncation"]["converged"] and ext["truncation"]["tail"] <= 1e-8, "eps selects N_F")
    expect(not (work / "ext" / "sigma.csv").exists(), "write_sigma = false")

    r = run("conditioning", "--set", "n_panels=4", "--set", "modes=9", "--out", str(work / "cond"))
    expect(r.returncode == 0, "conditioning exits 0")
    cond = read_csv(work / "cond" / "conditioning.csv", "axibie.conditioning/1")
    expect([int(row["n"]) for row in cond] == list(range(-4, 5)), "conditioning rows n = -N_F..N_F")

    r = run("convergence", "--set", "convergence_panels=3,6", "--set", "convergence_modes=9,17",
            "--set", "targets=8", "--out", str(work / "conv"))
    expect(r.returncode == 0, "convergence exits 0")
    conv = read_csv(work / "conv" / "convergence.csv", "axibie.convergence/1")
    expect(len(conv) == 2 and list(conv[0]) == ["n_panels", "9", "17"], "convergence table shape")

    r = run("timing", "--set", "timing_panels=3,6", "--set", "timing_panels_modes=9", "--set", "timing_modes=9,17",
            "--set", "timing_modes_panels=3", "--set", "timing_repeats=1", "--set", "targets=4",
            "--out", str(work / "timing"))
    expect(r.returncode == 0, "timing exits 0")
    expect(len(read_csv(work / "timing" / "timing.csv", "axibie.timing/1")) == 4, "timing rows")
    fit = read_csv(work / "timing" / "timing_fit.csv", "axibie.timing_fit/1")
    expect([row["sweep"] for row in fit] == ["panels", "modes"], "timing fit rows")

    r = run("quad-check", "--out", str(work / "quad"))
    expect(r.returncode == 0 and r.stdout.startswith("# schema: axibie.quad_check/1\n"), "quad-check stdout")
    quad = read_csv(work / "quad" / "quad_check.csv", "axibie.quad_check/1")
    expect(all(float(row["relative_error"]) <= 1e-10 for row in quad), "quad-check residuals")

    r = run("solve", "--set", "n_panel=4")
    expect(r.returncode == 2 and "n_panel" in r.stderr, "unknown key exits 2")
    missing = work / "no_such_profile.txt"
    r = run("solve", "--set", f"curve=file:{missing}", "--out", str(work / "x"))
    expect(r.returncode == 2 and str(missing) in r.stderr, "missing curve file names the path")
    bad = work / "bad.cfg"
    bad.write_text("n_panels = 4\nmodes 17\n")
    r = run("solve", "--config", str(bad))
    expect(r.returncode == 2 and f"{bad}:2" in r.stderr, "malformed config names file and line")
    r = run("solve", "--set", "problem=sideways")
    expect(r.returncode == 2, "bad enum exits 2")
    r = run("frobnicate")
    expect(r.returncode == 2, "unknown command exits 2")

    r = run("solve", "--set", "problem=exterior", "--set", "completion=false", "--set", "rcond_threshold=1e-6",
            "--set", "n_panels=6", "--set", "modes=9", "--out", str(work / "singular"))
    expect(r.returncode == 1 and "n = 0" in r.stderr, "singular mode exits 1 and names the mode")


if __name__ == "__main__":
    sys.exit(main())
