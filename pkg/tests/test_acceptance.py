"""Acceptance criteria 1-12 at their stated tolerances.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary (and directly when the file is run as a script).
"""
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from stokes_edge.core import BcType
from stokes_edge.pencil import (
    Region,
    WedgeConfig,
    classify,
    one_in_spectrum_dedicated,
    zero_condition_list,
    zero_eigenvector_dimension,
)
from stokes_edge.verification import (
    ANGLE_GRID,
    CASES,
    boundary_pairs,
    bump_case,
    check_boundary_conditions,
    check_homogeneity,
    check_pde_residual,
    check_pressure_decomposition,
    check_representation,
    check_symmetry,
    crosscheck_spectrum,
    edge_vanishing_checks,
    fit_decay_slope,
    interior_pairs,
    sweep,
    sweep_grid,
)

HALF = (BcType.DIRICHLET, BcType.MIXED_NORMAL, BcType.FREE_SURFACE, BcType.NEUMANN)
RESULTS = []


def record(n, ok, msg):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {msg}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_01_pde_residual_order():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    orders = {int(bc): check_pde_residual(bc, interior_pairs(rng, 20)).observed_order for bc in HALF}
    dt = time.perf_counter() - t0
    ok = min(orders.values()) >= 1.9 and dt < 60
    record(1, ok, f"min observed order {min(orders.values()):.4f} (>= 1.9), {dt:.1f} s")


def test_criterion_02_boundary_conditions():
    rng = np.random.default_rng(2)
    worst_alg = worst_der = 0.0
    for bc in HALF:
        for v in check_boundary_conditions(bc, boundary_pairs(rng, 100)).values():
            if v["kind"] == "algebraic":
                worst_alg = max(worst_alg, v["max"])
            else:
                worst_der = max(worst_der, v["max"])
    ok = worst_alg <= 1e-12 and worst_der <= 1e-6
    record(2, ok, f"algebraic rows {worst_alg:.2e} (<= 1e-12), derivative rows {worst_der:.2e} (<= 1e-6)")


def test_criterion_03_symmetry():
    rng = np.random.default_rng(3)
    errs = {int(bc): check_symmetry(bc, interior_pairs(rng, 100)) for bc in HALF}
    ok = max(errs[1], errs[3]) <= 1e-12 and max(errs[0], errs[2]) <= 1e-8
    record(3, ok, "relative asymmetry " + ", ".join(f"bc{k} {v:.1e}" for k, v in errs.items()))


def test_criterion_04_homogeneity():
    rng = np.random.default_rng(4)
    worst = max(check_homogeneity(bc, interior_pairs(rng, 20), (0.5, 2.0, 10.0)) for bc in HALF)
    record(4, worst <= 1e-12, f"max relative deviation {worst:.2e} (<= 1e-12)")


def test_criterion_05_pressure_decomposition():
    rng = np.random.default_rng(5)
    msgs, ok = [], True
    for bc in (BcType.MIXED_NORMAL, BcType.NEUMANN):
        rep, wall = check_pressure_decomposition(bc, interior_pairs(rng, 20), boundary_pairs(rng, 50))
        ok &= rep.observed_order >= 1.9 and wall == 0.0
        msgs.append(f"bc{int(bc)} order {rep.observed_order:.4f}, max |P3| on wall {wall:g}")
    record(5, ok, "; ".join(msgs))


def test_criterion_06_spectrum_oracles():
    t0 = time.perf_counter()
    worst, unmatched = 0.0, 0
    for case in CASES:
        for th in ANGLE_GRID:
            cc = crosscheck_spectrum(WedgeConfig(th, *case), Region(3.0, 5.0), raise_on_unmatched=False)
            worst = max(worst, cc.max_distance)
            unmatched += len(cc.unmatched_closed_form) + len(cc.unmatched_scan)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and unmatched == 0 and dt < 300
    record(6, ok, f"{len(CASES)}x{len(ANGLE_GRID)} configs, max distance {worst:.1e}, "
                  f"{unmatched} unmatched, {dt:.0f} s")


def test_criterion_07_known_eigenvalues():
    l2pi = classify(WedgeConfig(2 * math.pi, 0, 0)).lambda1
    lpi = classify(WedgeConfig(math.pi, 0, 0)).lambda1
    ok_vals = abs(l2pi - 0.5) <= 1e-10 and abs(lpi - 1) <= 1e-10
    parity_bad, zero_bad = [], []
    for case in CASES:
        for th in ANGLE_GRID:
            cfg = WedgeConfig(th, *case)
            if one_in_spectrum_dedicated(cfg) != cfg.parity_even:
                parity_bad.append((case, round(th, 4)))
            if zero_condition_list(cfg) != (zero_eigenvector_dimension(cfg) > 0):
                zero_bad.append((case, round(th, 4)))
    ok = ok_vals and not parity_bad and not zero_bad
    record(7, ok, f"lambda1(2pi)={l2pi.real:.12f}, lambda1(pi)={lpi.real:.12f}; "
                  f"lambda=1 parity rule violated at {len(parity_bad)} configs {parity_bad[:3]}; "
                  f"lambda=0 list disagrees at {len(zero_bad)} configs {zero_bad[:3]}")


def test_criterion_08_threshold_sweeps():
    t0 = time.perf_counter()
    g = sweep_grid(100)
    lb = {dp: np.array([p.lower_bound for p in sweep(0, dp, g)]) for dp in range(4)}
    m00 = lb[0].min()
    parts, ok = [f"(0,0) min {m00:.8f}"], abs(m00 - 0.5) <= 1e-6
    for dp in (1, 2, 3):
        m, m32 = lb[dp].min(), lb[dp][g < 1.5 * math.pi].min()
        ok &= m >= 0.25 - 1e-6 and m32 > 1 / 3
        parts.append(f"(0,{dp}) min {m:.6f}, below 3pi/2 {m32:.6f}")
    m01 = lb[1][g < math.pi / 2].min()
    ok &= m01 > 1
    parts.append(f"(0,1) below pi/2 {m01:.6f}")
    dt = time.perf_counter() - t0
    ok &= dt < 600
    record(8, ok, "; ".join(parts) + f"; {dt:.0f} s")


def test_criterion_09_edge_vanishing():
    checks = edge_vanishing_checks()
    ok = all(c["passed"] for c in checks)
    record(9, ok, "; ".join(f"{c['name']} slope {c['value']:.4f} sigma {c['details']['sigma']:.2f} "
                            f"({c['details']['sigma_relation']})" for c in checks))


def test_criterion_10_representation():
    t0 = time.perf_counter()
    case = bump_case()
    worst = 0.0
    for bc in ("free-space",) + HALF:
        r = check_representation(bc, case)
        worst = max(worst, r["velocity_rel_error"], r["pressure_rel_error"])
    dt = time.perf_counter() - t0
    record(10, worst <= 1e-3 and dt < 300, f"max relative error {worst:.2e} over 5 probes (<= 1e-3), {dt:.1f} s")


def test_criterion_11_decay_slopes():
    s11 = [fit_decay_slope(bc, 1, 1).slope for bc in HALF]
    s41 = [fit_decay_slope(bc, 4, 1).slope for bc in HALF]
    s44 = fit_decay_slope(BcType.NEUMANN, 4, 4).slope
    ok = (max(abs(s + 1) for s in s11) <= 0.01 and max(abs(s + 2) for s in s41) <= 0.02
          and abs(s44 + 3) <= 0.05)
    record(11, ok, f"(1,1) {[round(s, 6) for s in s11]}, (4,1) {[round(s, 6) for s in s41]}, "
                   f"Neumann (4,4) {s44:.6f}")


def test_criterion_12_determinism(tmp_path):
    outs, codes = [], []
    for k in range(2):
        p = tmp_path / f"v{k}.json"
        r = subprocess.run([sys.executable, "-m", "stokes_edge", "verify", "all", "--seed", "1", "--out", str(p)],
                           capture_output=True, text=True)
        codes.append(r.returncode)
        outs.append(p.read_bytes())
    ok = outs[0] == outs[1] and codes == [0, 0]
    record(12, ok, f"exit codes {codes}, reports byte-identical: {outs[0] == outs[1]}, "
                   f"passed={json.loads(outs[0])['passed']}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
