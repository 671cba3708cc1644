import time

import numpy as np
import sympy

from conftest import ACCEPTANCE_LINES
from numberwall.autoseq import cantor_series, quadratic_check, thue_morse_series
from numberwall.contfrac import transport_check
from numberwall.escape import (density_scan, escape_many, family_trace, phi_direct,
                               phi_predict)
from numberwall.ffield import parse_polynomial
from numberwall.morph2d import (char_poly_roots, o_density_closed_form, o_density_counted,
                                thue_morse_morphism2d, transition_matrix, verify_profile_equality,
                                verify_thue_morse)
from numberwall.numwall import SequenceView, profile, profile_fast, wall_oracle

TM_CLASSES = (("o",), ("c0", "c1", "c2", "c3"),
              ("a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"), ("d_a", "d_b"))

# thresholds frozen from the reference run
TM_HORIZON = 2048
CANTOR_DENSITY_HORIZON = 600
CANTOR_DENSITY_FLOOR = 0.78
TM_DENSITY_FLOOR = 0.14


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_oracle_agreement():
    start = time.perf_counter()
    rng = np.random.default_rng(20240601)
    bad = []
    for p in (2, 3, 5):
        for i in range(50):
            s = rng.integers(0, p, 96).tolist()
            if profile_fast(SequenceView(s, p), 32, 64) != profile(wall_oracle(s, 32, 64, p)):
                bad.append((p, i))
    elapsed = time.perf_counter() - start
    report(1, not bad and elapsed < 60,
           f"150 random sequences, {len(bad)} mismatches, {elapsed:.1f}s (limit 60s)")


def test_criterion_02_morphism_profile_equality():
    parts, ok = [], True
    for p, k in ((3, 5), (5, 3)):
        start = time.perf_counter()
        r = verify_profile_equality(p, k)
        elapsed = time.perf_counter() - start
        ok &= r.ok and elapsed < 120
        parts.append(f"cantor p={p} k={k}: {'ok' if r.ok else r.detail} {elapsed:.1f}s")
    start = time.perf_counter()
    r = verify_thue_morse(4)
    elapsed = time.perf_counter() - start
    ok &= r.ok and elapsed < 120
    where = "" if r.first_mismatch is None else f" first at {r.first_mismatch}"
    parts.append(f"thue-morse level 4: {'ok' if r.ok else r.detail + where} {elapsed:.1f}s")
    report(2, ok, "; ".join(parts))


def test_criterion_03_period_law():
    start = time.perf_counter()
    theta = cantor_series(3)
    bad = []
    for k in (1, 2, 3):
        want = 2 * 3 ** (k + 1)
        ks = range(3 ** k, 3 ** (k + 1))
        for r in escape_many(theta, ks, 1, 4 * want):
            if r.period != want:
                bad.append((r.k, r.period, want))
    elapsed = time.perf_counter() - start
    report(3, not bad and elapsed < 60,
           f"{len(bad)} diagonals off (j, found, expected): {bad}; {elapsed:.1f}s")


def test_criterion_04_two_over_p_family():
    start = time.perf_counter()
    ok, parts = True, []
    for p, k_max in ((3, 4), (5, 3)):
        trace = family_trace(p, "two_pk", k_max, 2)
        dev = [abs(float(e) - 2 / p) for _, e in trace]
        last = dev[-3:]
        monotone = all(b <= a for a, b in zip(last, last[1:]))
        ok &= dev[-1] <= 0.05 and monotone
        parts.append(f"p={p}: e={[round(float(e), 4) for _, e in trace]}, "
                     f"|e-2/p| at k={k_max} {dev[-1]:.4f}, non-increasing {monotone}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    report(4, ok, "; ".join(parts) + f"; {elapsed:.1f}s")


def test_criterion_05_full_escape_family():
    (_, e), = family_trace(3, "odd_jk_pk", 4, 2, leading=1, k_min=4)
    report(5, e >= 0.95, f"e_(81, 2) = {float(e):.4f} (floor 0.95)")


def test_criterion_06_thue_morse_two_thirds():
    start = time.perf_counter()
    reports = escape_many(thue_morse_series(), range(64, 257), 8, TM_HORIZON, "window")
    es = [float(r.e) for r in reports]
    elapsed = time.perf_counter() - start
    low, high = min(es), 2 / 3 + 0.07
    worst = reports[int(np.argmin(es))].k
    ok = low >= 2 / 3 - 0.07 and any(e <= high for e in es) and elapsed < 120
    report(6, ok, f"window horizon {TM_HORIZON}: min e = {low:.4f} at k={worst} "
                  f"(floor {2 / 3 - 0.07:.4f}), {sum(e <= high for e in es)} diagonals "
                  f"<= {high:.4f}; {elapsed:.1f}s")


def test_criterion_07_phi_recursion():
    # the recursion's case split needs p^(level-1) <= j <= p^level
    bad, outside = [], 0
    for level in (1, 2, 3):
        for j in range(1, min(27, 3 ** level) + 1):
            pred, direct = phi_predict(3, j, level), phi_direct(3, j, level)
            if j < 3 ** (level - 1):
                outside += abs(pred - direct) > 3
            elif abs(pred - direct) > 3:
                bad.append((j, level, pred, direct))
    report(7, not bad, f"{len(bad)} cases off by more than 3 (j, level, predicted, counted): "
                       f"{bad}; {outside} more with j below 3^(level-1)")


def test_criterion_08_quadraticity():
    results = {p: quadratic_check(p, 1000) for p in (3, 5, 7)}
    report(8, all(results.values()), f"identities at 1000 coefficients: {results}")


def test_criterion_09_cf_transport():
    a = transport_check(cantor_series(3), parse_polynomial("t^2+1", 3), 8)
    b = transport_check(thue_morse_series(), parse_polynomial("t^2+t+1", 2), 8)
    report(9, a and b, f"cantor(3) with t^2+1: {a}; thue-morse with t^2+t+1: {b}")


def test_criterion_10_transition_analysis():
    start = time.perf_counter()
    errs = [abs(float(o_density_counted(k)) - o_density_closed_form(k)) for k in range(1, 11)]
    roots = {sympy.nsimplify(r) for r in char_poly_roots(
        transition_matrix(thue_morse_morphism2d(), TM_CLASSES))}
    r5 = sympy.sqrt(5)
    roots_ok = roots == {sympy.Integer(1), sympy.Rational(1, 4), (1 + r5) / 4, (1 - r5) / 4}
    elapsed = time.perf_counter() - start
    ok = max(errs) <= 1e-9 and roots_ok and elapsed < 30
    report(10, ok, f"max |counted - closed form| over k=1..10 = {max(errs):.3g} (limit 1e-9); "
                   f"roots {sorted(map(str, roots))} match: {roots_ok}; {elapsed:.1f}s")


def test_criterion_11_generic_escape_trend():
    theta, tau = cantor_series(3), thue_morse_series()
    c1 = density_scan(theta, 243, 2, 0.2, CANTOR_DENSITY_HORIZON)
    c2 = density_scan(theta, 486, 2, 0.2, CANTOR_DENSITY_HORIZON)
    t1 = density_scan(tau, 256, 4, 0.25, TM_HORIZON)
    t2 = density_scan(tau, 512, 4, 0.25, TM_HORIZON)
    ok = c1 >= CANTOR_DENSITY_FLOOR and t1 >= TM_DENSITY_FLOOR and c2 >= c1 and t2 >= t1
    report(11, ok, f"cantor(3) K=243 {c1:.4f} (floor {CANTOR_DENSITY_FLOOR}), K=486 {c2:.4f}; "
                   f"thue-morse K=256 {t1:.4f} (floor {TM_DENSITY_FLOOR}), K=512 {t2:.4f}")
