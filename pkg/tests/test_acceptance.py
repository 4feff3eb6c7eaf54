"""Exit criteria, one test each, at their pinned tolerances.

Every test records a one-line verdict that ``conftest.py`` prints in the
terminal summary. ``python tests/test_acceptance.py`` runs the same
criteria without pytest.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from twoframe.generators import random_frame, small_row_frame, tightness_frame, tightness_roles
from twoframe.io import parse_frame, write_frame
from twoframe.kernels import Mat2, Rotation2, singular_values_2x2, sigma2, sigma2_submultiplicative_check
from twoframe.oracle import best_pair_bruteforce
from twoframe.proofaudit import audit_invariants, build_tensors, case_b_premise, min_offdiag_margin, spectral_summary
from twoframe.selection import select_pair, verify_selection

RESULTS = {}

TIGHT_NS = list(range(4, 65)) + [128, 256, 1024]
N_RANDOM = 10_000
SUITE_SEED = 20260101


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    line = "%s %s: %s" % ("PASS" if ok else "FAIL", key, detail)
    print(line)
    return line


def random_suite():
    """``(n, seed)`` for the random-frame criteria; n uniform on 2..128."""
    rng = np.random.Generator(np.random.PCG64(SUITE_SEED))
    ns = rng.integers(2, 129, size=N_RANDOM)
    return [(int(n), k) for k, n in enumerate(ns)]


_cache = {}


def suite_frames():
    if "frames" not in _cache:
        _cache["frames"] = [random_frame(n, seed) for n, seed in random_suite()]
    return _cache["frames"]


# ---------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    worst = 0.0
    missing = []
    for n in TIGHT_NS:
        table = best_pair_bruteforce(tightness_frame(n))
        bound = 1 / math.sqrt(n)
        worst = max(worst, abs(table.max_sigma2 - bound))
        thr = table.max_sigma2 - 1e-12
        xs, y, z = tightness_roles(n)
        if table.value(y, z) < thr:
            missing.append((n, "YZ"))
        for x in xs:
            if table.value(x, y) < thr or table.value(x, z) < thr:
                missing.append((n, x))
                break
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and not missing and dt < 10
    return ok, "tightness max err %.2e (tol 1e-12), missing maximizers %d, %.1fs (limit 10s)" % (
        worst, len(missing), dt)


def criterion_2():
    t0 = time.perf_counter()
    worst_gap = math.inf
    failures = 0
    for f in suite_frames():
        sel = select_pair(f)
        worst_gap = min(worst_gap, sel.sigma2 - 1 / math.sqrt(f.n))
        if sel.sigma2 < 1 / math.sqrt(f.n) - 1e-10 or not verify_selection(f, sel):
            failures += 1
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 120
    return ok, "%d frames, %d failures, min sigma2 - 1/sqrt(n) = %.3e, %.1fs (limit 120s)" % (
        N_RANDOM, failures, worst_gap, dt)


def criterion_3():
    frames = [f for f in suite_frames() if f.n <= 64][:1000]
    worst = -math.inf
    for f in frames:
        sel = select_pair(f)
        worst = max(worst, sel.sigma2 - best_pair_bruteforce(f).max_sigma2)
    ok = len(frames) == 1000 and worst <= 1e-12
    return ok, "%d frames, max(select - oracle) = %.3e (tol 1e-12)" % (len(frames), worst)


def criterion_4():
    frames = [tightness_frame(n) for n in TIGHT_NS] + suite_frames()
    failed = {}
    worst = {"trace": 0.0, "lambda3": -math.inf, "lambda1_gap": math.inf}
    for f in frames:
        rep = audit_invariants(f)
        for name in rep.failed():
            failed[name] = failed.get(name, 0) + 1
        s = spectral_summary(build_tensors(f))
        worst["trace"] = max(worst["trace"], abs(s.trace_G - 4 / f.n) / f.n)
        worst["lambda3"] = max(worst["lambda3"], s.lambda3)
        worst["lambda1_gap"] = min(worst["lambda1_gap"], s.lambda1 - 2 / f.n)
    ok = not failed
    return ok, "%d frames, failed checks %s; max |trG-4/n|/n %.1e, max lambda3 %.1e, min lambda1-2/n %.1e" % (
        len(frames), failed or "none", worst["trace"], worst["lambda3"], worst["lambda1_gap"])


def criterion_5():
    kept, seed = [], 0
    while len(kept) < 1000:
        f = random_frame(3 + seed % 8, 7_000_000 + seed)
        seed += 1
        if case_b_premise(f):
            kept.append(f)
    worst = max(min_offdiag_margin(f)[0] for f in kept)
    tight = max(abs(min_offdiag_margin(tightness_frame(n))[0]) for n in TIGHT_NS)
    ok = worst <= 1e-12 and tight <= 1e-13
    return ok, "1000 premise frames (%d drawn): max min-margin %.3e (tol 1e-12); tightness |min| %.1e (tol 1e-13)" % (
        seed, worst, tight)


def criterion_6():
    bad = []
    count = 0
    for n in (4, 8, 16):
        for rho in (0.0, 1 / (2 * n), 1 / n):
            for seed in range(10):
                f = small_row_frame(n, rho, seed)
                sel = select_pair(f)
                steps = sel.certificate.steps
                count += 1
                if not steps or steps[0].n_level != n:
                    bad.append((n, rho, seed, "no Case A"))
                    continue
                s = steps[0]
                if s.b_sq > 1 / n + 1e-12 or abs(s.t_sq - 1 / (1 - s.b_sq)) > 1e-13:
                    bad.append((n, rho, seed, "step"))
                if sel.sigma2 < 1 / math.sqrt(n) - 1e-10 or not verify_selection(f, sel):
                    bad.append((n, rho, seed, "bound"))
    return not bad, "%d instances, %d violations" % (count, len(bad))


def criterion_7():
    rng = np.random.Generator(np.random.PCG64(77))
    rot_worst = 0.0
    sub_fail = 0
    for _ in range(10_000):
        y = Mat2(*rng.standard_normal(4))
        z = Mat2(*rng.standard_normal(4))
        if not sigma2_submultiplicative_check(y, z):
            sub_fail += 1
        th = rng.uniform(-math.pi, math.pi)
        p = Rotation2(math.cos(th), math.sin(th)).as_mat2()
        a, b = singular_values_2x2(y), singular_values_2x2(y @ p)
        rot_worst = max(rot_worst, abs(a.sigma1 - b.sigma1), abs(a.sigma2 - b.sigma2))
    ok = sub_fail == 0 and rot_worst <= 1e-13
    return ok, "submultiplicativity failures %d/10000; rotation invariance max err %.1e (tol 1e-13)" % (
        sub_fail, rot_worst)


CLI_RUNS = [
    ["select", "--gen-random", "200", "--seed", "3", "--cert"],
    ["oracle", "--gen-random", "60", "--seed", "4"],
    ["audit", "--n", "9"],
    ["tightness", "--n", "16"],
    ["gen", "--gen-random", "12", "--seed", "5"],
]


def criterion_8():
    diffs = 0
    for argv in CLI_RUNS:
        cmd = [sys.executable, "-m", "twoframe"] + argv
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        diffs += a != b
    rt_fail = 0
    for k in range(1000):
        f = random_frame(2 + k % 127, 900_000 + k)
        rt_fail += parse_frame(write_frame(f)).tobytes() != f.array.tobytes()
    ok = diffs == 0 and rt_fail == 0
    return ok, "%d/%d CLI runs differ; %d/1000 frame round-trips inexact" % (diffs, len(CLI_RUNS), rt_fail)


def criterion_9():
    f = random_frame(20_000, 2026)
    t0 = time.perf_counter()
    sel = select_pair(f)
    t_sel = time.perf_counter() - t0
    t0 = time.perf_counter()
    table = best_pair_bruteforce(f)
    t_orc = time.perf_counter() - t0
    ok = t_sel < 60 and verify_selection(f, sel) and sel.sigma2 <= table.max_sigma2 + 1e-12
    return ok, "n=20000: select %.1fs (limit 60s, %s), oracle %.1fs, select %.6f <= oracle %.6f" % (
        t_sel, sel.terminal, t_orc, sel.sigma2, table.max_sigma2)


CRITERIA = [
    ("AC1 tightness reproduction", criterion_1),
    ("AC2 theorem bound on 10k random frames", criterion_2),
    ("AC3 oracle dominance", criterion_3),
    ("AC4 proof-identity audit", criterion_4),
    ("AC5 case B existence", criterion_5),
    ("AC6 case A exercise", criterion_6),
    ("AC7 kernel properties", criterion_7),
    ("AC8 determinism and round-trip", criterion_8),
    ("AC9 performance envelope", criterion_9),
]


@pytest.mark.parametrize("key,fn", CRITERIA, ids=[k.split()[0] for k, _ in CRITERIA])
def test_criterion(key, fn):
    ok, detail = fn()
    record(key, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    status = 0
    for key, fn in CRITERIA:
        ok, detail = fn()
        record(key, ok, detail)
        status |= not ok
    sys.exit(status)
