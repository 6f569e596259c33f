#!/usr/bin/env python3
"""End-to-end checks of the epival command line over temp JSON files."""

import json
import math
import subprocess
import sys
import tempfile
import os

BIN = sys.argv[1] if len(sys.argv) > 1 else "./tools/epival"


def run(*args, expect=0):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise SystemExit(
            f"epival {' '.join(args)}: exit {proc.returncode} (expected {expect})\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc.stdout


def main():
    tmp = tempfile.mkdtemp(prefix="epival_cli_")

    def path(name):
        return os.path.join(tmp, name)

    # |x|-like max-affine in the plane
    v = {
        "dim": 2,
        "pieces": [
            {"slope": [1.0, 0.2], "intercept": 0.0},
            {"slope": [-1.0, 0.0], "intercept": 0.1},
            {"slope": [0.0, 1.0], "intercept": -0.3},
            {"slope": [0.3, -0.8], "intercept": 0.05},
        ],
    }
    with open(path("v.json"), "w") as f:
        json.dump(v, f)

    zeta = {"dim": 2, "poly": {"0,0": 1.0, "1,0": 0.2}, "rho": 4.0, "k": 2}
    with open(path("zeta.json"), "w") as f:
        json.dump(zeta, f)

    # conjugate twice: the round trip reproduces the (pruned) original values
    run("fn", "conjugate", "--in", path("v.json"), "--out", path("u.json"))
    run("fn", "conjugate", "--in", path("u.json"), "--out", path("v2.json"))
    for x in ["0.0,0.0", "1.0,-0.5", "-2.0,1.0"]:
        a = float(run("fn", "eval", "--in", path("v.json"), "--x", x))
        b = float(run("fn", "eval", "--in", path("v2.json"), "--x", x))
        assert abs(a - b) <= 1e-9 * (1 + abs(a)), f"round trip mismatch at {x}: {a} vs {b}"

    # valuation via CLI equals the dual route on the conjugate
    z_u = float(run("val", "eval", "--zeta", path("zeta.json"), "--fn", path("u.json")))
    z_dual = float(run("val", "dual-eval", "--zeta", path("zeta.json"), "--fn", path("v.json")))
    assert abs(z_u - z_dual) <= 1e-9 * (1 + abs(z_u))

    # body valuation: zeta(y) * V(K)
    k = {"dim": 2, "vertices": [[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]}
    with open(path("k.json"), "w") as f:
        json.dump(k, f)
    got = float(
        run("val", "body", "--zeta", path("zeta.json"), "--y", "0.5,0.5", "--body", path("k.json"))
    )
    want = (1.0 + 0.2 * 0.5) * (1 - 0.5 / 16.0) ** 2 * 2.0
    assert abs(got - want) <= 1e-12 * (1 + abs(want)), f"{got} vs {want}"

    # scale then eval: epigraph scaling identity lambstar u(x) = lam u(x/lam)
    run("fn", "scale", "--in", path("u.json"), "--lambda", "2.0", "--out", path("u2.json"))
    ux = float(run("fn", "eval", "--in", path("u.json"), "--x", "0.1,0.1"))
    u2x = float(run("fn", "eval", "--in", path("u2.json"), "--x", "0.2,0.2"))
    assert abs(u2x - 2.0 * ux) <= 1e-9

    # inf-convolution of a function with itself telescopes to epi-scaling by 2
    run(
        "fn", "infconv", "--in", f"{path('u.json')},{path('u.json')}",
        "--weights", "1,1", "--out", path("uu.json"),
    )
    uux = float(run("fn", "eval", "--in", path("uu.json"), "--x", "0.2,0.2"))
    assert abs(uux - u2x) <= 1e-9

    # sublevel set of the max-affine is a polyhedron containing the minimizer
    run("fn", "sublevel", "--in", path("v.json"), "--t", "1.0", "--out", path("lvl.json"))
    with open(path("lvl.json")) as f:
        lvl = json.load(f)
    assert lvl["dim"] == 2 and len(lvl["vertices"]) >= 3

    # decomposition of c0 + cn * zeta recovers the components
    out = json.loads(
        run(
            "decomp", "run", "--oracle", f"affine:{path('zeta.json')}:1.5:2.0",
            "--fn", path("u.json"), "--n", "2",
        )
    )
    comps = out["components"]
    assert abs(comps[0] - 1.5) <= 1e-8, comps
    assert abs(comps[1]) <= 1e-8, comps
    assert abs(comps[2] - 2.0 * z_u) <= 1e-8 * (1 + abs(z_u)), comps
    assert out["reconstruction_defect"] <= 1e-10 * (1 + abs(out["direct"]))
    assert max(out["homogeneity_defects"]) <= 1e-9

    # hessian measure table and the Monte-Carlo verification
    window = {
        "B": {"dim": 2, "vertices": [[-3.0, -3.0], [3.0, -3.0], [3.0, 3.0], [-3.0, 3.0]]},
        "C": {"dim": 2, "vertices": [[-3.0, -3.0], [3.0, -3.0], [3.0, 3.0], [-3.0, 3.0]]},
    }
    with open(path("w.json"), "w") as f:
        json.dump(window, f)
    table = run("hess", "measure", "--fn", path("u.json"), "--window", path("w.json"))
    rows = [line.split(",") for line in table.strip().splitlines()[1:]]
    assert len(rows) == 3
    run(
        "hess", "verify-ps", "--fn", path("u.json"), "--window", path("w.json"),
        "--s", "0.5,1", "--samples", "200000", "--seed", "5",
    )

    # duality report
    dual = run("hess", "duality", "--fn", path("v.json"), "--window", path("w.json"))
    max_line = [l for l in dual.strip().splitlines() if l.startswith("max_discrepancy")][0]
    assert float(max_line.split(",")[1]) <= 1e-9

    # smooth quadrature of |x|^2/2 with the determinant slot integrates zeta
    grid = {"dim": 2, "lo": [-1.25, -1.25], "hi": [1.25, 1.25], "h": 1.0 / 64, "fn": "half_sq_norm"}
    with open(path("grid.json"), "w") as f:
        json.dump(grid, f)
    narrow = {"dim": 2, "poly": {"0,0": 1.0}, "rho": 1.0, "k": 2}
    with open(path("narrow.json"), "w") as f:
        json.dump(narrow, f)
    got = float(
        run("hess", "smooth", "--grid", path("grid.json"), "--i", "0", "--zeta", path("narrow.json"))
    )
    assert abs(got - math.pi / 3) <= 3e-3 * (math.pi / 3), got

    # polynomial fit via CLI
    sq = {"dim": 2, "cells": [{"poly": {"dim": 2, "vertices": [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]},
                                "piece": {"slope": [0.0, 0.0], "intercept": 0.0}}]}
    with open(path("sq.json"), "w") as f:
        json.dump(sq, f)
    fit = json.loads(
        run(
            "decomp", "fit", "--oracle", f"zeta:{path('zeta.json')}",
            "--fns", f"{path('sq.json')},{path('sq.json')}", "--lambdas", "0.5,1,1.5,2", "--m", "2",
        )
    )
    assert fit["residual"] <= 1e-9

    # suites: pass, and the negative control must fail with exit 0
    run("suite", "valuation", "--cases", "50", "--seed", "3", "--dim", "2",
        "--out", path("report.json"))
    with open(path("report.json")) as f:
        rep = json.load(f)
    assert rep["passed"] and rep["cases"] == 50
    run("suite", "valuation", "--cases", "50", "--seed", "3", "--dim", "2", "--negative-control",
        "--out", path("neg.json"))
    with open(path("neg.json")) as f:
        neg = json.load(f)
    assert not neg["passed"]

    run("suite", "inclexcl", "--m", "3", "--cases", "30", "--seed", "4", "--dim", "2",
        "--out", path("incl.json"))
    run("suite", "continuity", "--out", path("cont.json"))
    run("suite", "coercive")
    run("suite", "growth")

    # reproduction entry point
    out = run("repro", "11")
    assert "PASS" in out

    # unknown flag: validation exit with usage text
    run("fn", "conjugate", "--bogus", "x", expect=3)
    # malformed json: io exit
    with open(path("broken.json"), "w") as f:
        f.write("{not json")
    run("fn", "conjugate", "--in", path("broken.json"), "--out", path("x.json"), expect=2)

    print("cli smoke: all checks passed")


if __name__ == "__main__":
    main()
