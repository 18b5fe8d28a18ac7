"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed.

Run ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py`` for the lines alone.
"""
import time
from fractions import Fraction as F

import numpy as np

from wlpr import datasets, experiments
from wlpr.convergence import (SchemeFamily, asymptotic_profile_rect_d3, certify_family,
                              difference_mask, estimate_r_numeric, general_profile)
from wlpr.engine import (RefinableData, check_monotone_preserved, check_no_overshoot,
                         variance_ratio)
from wlpr.kernels import parse_kernel
from wlpr.masks import SchemeSpec, build_mask, odd_symmetry_defect, verify_reproduction
from wlpr.metrics import (approx_denoise_scores, exp_points, is_dominated_by_any, moment_scores,
                          pareto_front)

NAMED_KERNELS = ["rect", "tria", "epan", "bisq", "tcub", "trwt"]


class Check:
    """Accumulates sub-checks of one criterion."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failures, self.notes = [], []

    def expect(self, ok, what):
        if not ok:
            self.failures.append(what)
        return ok

    def note(self, text):
        self.notes.append(text)

    @property
    def passed(self):
        return not self.failures

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        detail = "; ".join(self.failures if self.failures else self.notes)
        return f"criterion {self.number}: {status} - {self.title}" + (f" ({detail})" if detail else "")


# -- criteria --------------------------------------------------------------------

def criterion_1():
    c = Check(1, "tria d=0 golden masks")
    golden = {
        1.5: [F(1, 2), F(1), F(1, 2)],
        2.5: [F(1, 7), F(1, 2), F(5, 7), F(1, 2), F(1, 7)],
        3.5: [F(1, 12), F(3, 13), F(5, 12), F(7, 13), F(5, 12), F(3, 13), F(1, 12)],
        4.5: [F(1, 21), F(3, 20), F(5, 21), F(7, 20), F(3, 7), F(7, 20), F(5, 21), F(3, 20),
              F(1, 21)],
        5.5: [F(1, 30), F(3, 31), F(1, 6), F(7, 31), F(3, 10), F(11, 31), F(3, 10), F(7, 31),
              F(1, 6), F(3, 31), F(1, 30)],
    }
    start = time.perf_counter()
    for lam, expected in golden.items():
        full, _ = build_mask(SchemeSpec("tria", lam, 0), exact=True).full(exact=True)
        c.expect(full == expected, f"lambda={lam} gives {[str(v) for v in full]}")
    elapsed = time.perf_counter() - start
    c.expect(elapsed < 1.0, f"runtime {elapsed:.2f}s")
    c.note(f"{elapsed * 1e3:.1f} ms")
    return c


def criterion_2():
    c = Check(2, "Deslauriers-Dubuc coincidence for 1 < lambda < 2")
    kernels = NAMED_KERNELS + ["exp:0.5", "exp:10", "pq:4:5", "pq:1.5:0.7"]
    count = 0
    for name in kernels:
        exact = parse_kernel(name).is_rational
        for lam in (1.05, 1.3, 1.5, 1.75, 1.95):
            for d in (0, 1):
                mask = build_mask(SchemeSpec(name, lam, d), exact=exact)
                full, first = mask.full(exact=exact)
                ok = first == -1 and [float(v) for v in full] == [0.5, 1.0, 0.5]
                if exact:
                    ok = ok and full == [F(1, 2), F(1), F(1, 2)]
                c.expect(ok, f"{name} lambda={lam} d={d}")
                count += 1
    c.note(f"{count} schemes")
    return c


def criterion_3():
    c = Check(3, "rect d=3 exact sweep n=2..200")
    start = time.perf_counter()
    family = SchemeFamily("rect", 3)
    norms = {n: difference_mask(family.mask(n, exact=True)).max_norm for n in range(2, 201)}
    elapsed = time.perf_counter() - start
    top = max(norms.values())
    at = [n for n, v in norms.items() if v == top]
    c.expect(top == F(29, 42), f"max norm {top}")
    c.expect(at == [4], f"maximum at n={at}")
    c.expect(all(isinstance(v, F) for v in norms.values()), "not all norms exact")
    c.expect(elapsed < 30, f"runtime {elapsed:.1f}s")
    c.note(f"max {top} at n={at[0]}, {elapsed:.1f}s")
    return c


def criterion_4():
    c = Check(4, "asymptotic tool: ||R||_1 and n0")
    table = {"rect": 0.661895, "tria": 0.602756, "epan": 0.622263, "bisq": 0.606588,
             "trwt": 0.598219}
    for name, ref in table.items():
        got = general_profile(name).R_l1
        c.expect(abs(got - ref) <= 1e-5, f"{name} ||R||_1={got:.7f} vs {ref}")
    got = general_profile("exp:10").R_l1
    c.expect(abs(got - 0.529404) <= 1e-4, f"exp:10 ||R||_1={got:.7f}")
    n0 = asymptotic_profile_rect_d3().n0_for(188)
    c.expect(abs(n0 - 188.506) <= 0.01,
             f"n0(n1=188)={n0:.3f} vs 188.506; 188.506 is n0 for n1=189, see README")
    c.note(f"n0={n0:.3f}")
    return c


def criterion_5():
    c = Check(5, "capability table closed values")
    rows = [("rect", 0, F(1, 3), F(1, 2)), ("rect", 2, F(3, 35), F(9, 8)),
            ("trwt", 2, F(3, 143), F(3780, 2431)), ("epan", 0, F(1, 5), F(3, 5))]
    for name, d, approx, l2sq in rows:
        a, b = approx_denoise_scores(name, d)
        c.expect(abs(a - float(approx)) <= 1e-9, f"{name} d={d} approx {a!r}")
        c.expect(abs(b - float(l2sq)) <= 1e-9, f"{name} d={d} noise {b!r}")
        a2, b2 = moment_scores(name, d)
        c.expect(abs(a2 - a) <= 1e-9 and abs(b2 - b) <= 1e-9, f"{name} d={d} routes disagree")
    return c


def criterion_6():
    c = Check(6, "star curve no-noise errors")
    start = time.perf_counter()
    worst = 0.0
    for row in experiments.star_table():
        ref = experiments.star_reference(row["kernel"], row["lambda"], row["degree"])
        rel = abs(row["error"] - ref) / ref
        worst = max(worst, rel)
        c.expect(rel <= 1e-2, f"{row['kernel']} lambda={row['lambda']} d={row['degree']}: "
                              f"{row['error']:.4e} vs {ref:.4e}")
    elapsed = time.perf_counter() - start
    c.expect(elapsed < 120, f"runtime {elapsed:.1f}s")
    c.note(f"56 rows, worst relative deviation {worst:.2e}, {elapsed:.2f}s")
    return c


def criterion_7():
    c = Check(7, "lambda scaling")
    refs = experiments.LAMBDA_SCALING_REFERENCE
    for k in (1, 2, 3):
        res = experiments.lambda_scaling(k)
        rel = abs(res.error - refs[k - 1]) / refs[k - 1]
        c.expect(rel <= 1e-2, f"k={k}: {res.error:.4e} vs {refs[k - 1]:.4e}")
    floor = experiments.LAMBDA_SCALING_FLOOR
    c.expect(abs(floor - 3.4789e-5) / 3.4789e-5 <= 1e-4, f"floor constant {floor:.5e}")
    k4 = experiments.lambda_scaling(4).error
    c.expect(abs(k4 - floor) / floor <= 0.10, f"k=4 {k4:.4e} vs floor {floor:.4e}")
    c.note(f"k=4 error {k4:.4e}, floor {floor:.4e}; n = 3 + 0.1/h, lambda = 2n - 1/2")
    return c


def criterion_8():
    c = Check(8, "property suites")
    rng = np.random.default_rng(20240601)
    kernels = NAMED_KERNELS + ["exp:1", "exp:10", "pq:4:5", "pq:1.5:0.7"]
    # (a) reproduction on 100 random schemes
    worst = 0.0
    for _ in range(100):
        name = kernels[rng.integers(len(kernels))]
        lam = float(rng.integers(1, 30) + rng.uniform(0.05, 0.95))
        n = int((lam + 1) // 2)
        d = int(min(rng.integers(0, 4), 2 * n - 1))
        check = verify_reproduction(build_mask(SchemeSpec(name, lam, d)), d)
        worst = max(worst, check.residual)
    c.expect(worst < 1e-10, f"(a) reproduction residual {worst:.2e}")
    # (b) odd symmetry and equal difference norms
    defect = 0.0
    for name in kernels:
        for lam in (3.3, 3.7, 4.5, 7.9, 12.5):
            for d in (0, 1, 2, 3):
                mask = build_mask(SchemeSpec(name, lam, d))
                q = difference_mask(mask)
                defect = max(defect, odd_symmetry_defect(mask), abs(q.norms[0] - q.norms[1]))
    c.expect(defect < 1e-12, f"(b) symmetry defect {defect:.2e}")
    # (c) no overshoot on step data for nonnegative d=0,1 masks
    x, f = datasets.sine_step_samples()
    step = RefinableData(f, "constant", h=x[1] - x[0])
    for name in kernels:
        for lam in (1.5, 2.5, 3.7, 4.5, 5.8, 6.5, 9.5):
            for d in (0, 1):
                mask = build_mask(SchemeSpec(name, lam, d))
                c.expect(check_no_overshoot(step, mask, 8), f"(c) overshoot {name} {lam} d={d}")
    # (d) staircase monotonicity for the named kernels
    xs, fs = datasets.staircase()
    stairs = RefinableData(fs, "constant", h=1.0, x0=1.0)
    for name in NAMED_KERNELS:
        for lam in (1.5, 2.5, 3.7, 4.5, 5.8, 6.5):
            for d in (0, 1):
                mask = build_mask(SchemeSpec(name, lam, d))
                c.expect(check_monotone_preserved(stairs, mask, 6),
                         f"(d) monotonicity {name} {lam} d={d}")
    # (e) Monte Carlo variance ratio
    for seed, (name, lam, d) in enumerate([("rect", 4.5, 0), ("trwt", 9.5, 2), ("epan", 5.8, 3)]):
        mask = build_mask(SchemeSpec(name, lam, d))
        res = variance_ratio(mask, trials=10_000, seed=100 + seed)
        for rule, coeffs in (("even", mask.even), ("odd", mask.odd)):
            ratio, se = res[rule]
            c.expect(abs(ratio - float(coeffs @ coeffs)) < 3 * se,
                     f"(e) variance {name} {lam} {rule}: {ratio:.4f}")
    # (f) first-order convergence of the r(t) estimate
    for name in ("rect", "epan", "tria"):
        family = SchemeFamily(name, 3)
        r = general_profile(name).r
        for t in (-0.6, 0.25):
            e1 = abs(estimate_r_numeric(family, t, 160) - float(r(t)))
            e2 = abs(estimate_r_numeric(family, t, 320) - float(r(t)))
            c.expect(1.5 <= e1 / e2 <= 2.5, f"(f) order {name} t={t}: ratio {e1 / e2:.2f}")
    return c


def criterion_9():
    c = Check(9, "Pareto front")
    start = time.perf_counter()
    points = pareto_front(2, (1.0, 20.0), (0.5, 20.0), 60, extra=[(2, 1), (4, 5)])
    labels = {p.label: p for p in points if p.label}
    c.expect(not labels["epan"].dominated, "epan dominated")
    c.expect(not labels["pq:4:5"].dominated, "(4,5) dominated")
    grid = [p for p in points if not p.label]
    free = [e.label for e in exp_points(2) if not is_dominated_by_any(e, grid)]
    c.expect(not free, "not dominated by any box point: " + ", ".join(free)
             + " (needs q < 0.5, see README)")
    elapsed = time.perf_counter() - start
    c.expect(elapsed < 60, f"runtime {elapsed:.1f}s")
    c.note(f"{len(points)} points, {elapsed:.2f}s")
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


def _run(criterion, acceptance_log):
    c = criterion()
    acceptance_log.append(c.line())
    print(c.line())
    assert c.passed, c.line()


def test_criterion_1(acceptance_log):
    _run(criterion_1, acceptance_log)


def test_criterion_2(acceptance_log):
    _run(criterion_2, acceptance_log)


def test_criterion_3(acceptance_log):
    _run(criterion_3, acceptance_log)


def test_criterion_4(acceptance_log):
    _run(criterion_4, acceptance_log)


def test_criterion_5(acceptance_log):
    _run(criterion_5, acceptance_log)


def test_criterion_6(acceptance_log):
    _run(criterion_6, acceptance_log)


def test_criterion_7(acceptance_log):
    _run(criterion_7, acceptance_log)


def test_criterion_8(acceptance_log):
    _run(criterion_8, acceptance_log)


def test_criterion_9(acceptance_log):
    _run(criterion_9, acceptance_log)


if __name__ == "__main__":
    results = [criterion() for criterion in CRITERIA]
    for res in results:
        print(res.line())
    raise SystemExit(0 if all(r.passed for r in results) else 1)
