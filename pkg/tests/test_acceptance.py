"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line (visible with ``pytest -v`` or
``-s``) before asserting.
"""

import itertools
import random
import time
from fractions import Fraction as Fr

import pytest

from gammagerbe.bernoulli import bernoulli_kn
from gammagerbe.cli import report_json
from gammagerbe.lattice import annihilator_pair, cross, dot, fundamental_set, primitive_gamma, primitive_vectors
from gammagerbe.suites import SUITES, run_suite

SEED = 7


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {n:>2}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def _residuals(rep):
    return [r["residual"] for r in rep["records"] if r.get("residual") is not None]


def test_01_shift_law(report):
    t = time.perf_counter()
    rep = run_suite("shift", SEED, 50)
    dt = time.perf_counter() - t
    res = _residuals(rep)
    ok = len(res) == 50 and max(res) < 1e-9 and dt < 10
    report(1, ok, f"shift law: 50 samples, max rel err {max(res):.2e} < 1e-9, {dt:.2f}s < 10s")


def test_02_recovery(report):
    res = _residuals(run_suite("recovery", SEED, 50))
    report(2, len(res) == 50 and max(res) < 1e-9, f"recovery: 50 samples, max rel err {max(res):.2e}")


def test_03_antisymmetry(report):
    rep = run_suite("antisymmetry", SEED, 50)
    res = _residuals(rep)
    vecs = [max(abs(c) for k in ("a", "b") for c in r["inputs"][k]) for r in rep["records"]]
    ok = len(res) == 50 and max(res) < 1e-9 and max(vecs) <= 3
    report(3, ok, f"antisymmetry and trivial pairs: 50 pairs, max err {max(res):.2e}")


def test_04_factorization_oracle(report):
    rep = run_suite("factorization-oracle", SEED)
    f = rep["findings"]
    res = _residuals(rep)
    ok = f["compared"] >= 20 and max(res) < 1e-8
    report(
        4,
        ok,
        f"dual path: {f['compared']} certified points (need 20), max rel err {max(res):.2e}; "
        f"{f['skipped']} uncertified; chart/cone predicates disagree on {f['predicates_disagree']}",
    )


def test_05_homogeneity(report):
    rep = run_suite("homogeneity", SEED, 10)
    worst = {}
    for r in rep["records"]:
        for k, v in r["residual_by_function"].items():
            worst[k] = max(worst.get(k, 0.0), v)
    ok = len(rep["records"]) == 10 and len(worst) == 5 and max(worst.values()) < 1e-9
    report(5, ok, "homogeneity, 10 lambdas each: " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_06_cocycle_suites(report):
    parts, ok, conv = [], True, None
    for suite in ("tetrahedron", "equivariant", "group"):
        rep = run_suite(suite, SEED, 30)
        res = _residuals(rep)
        ok &= len(res) == 30 and max(res) < 1e-6
        conv = conv or rep["sign_convention"]
        assert rep["sign_convention"] == conv
        parts.append(f"{suite} {max(res):.1e}")
    pre = run_suite("preflight", SEED)
    ok &= pre["summary"]["ok"]
    parts.append("preflight exact" if pre["summary"]["ok"] else "preflight FAILED")
    report(6, ok, "; ".join(parts) + f"; signs {conv['phi_abc']},{conv['phi_ab']},{conv['phi_a']}")


def test_07_phase_polynomiality(report):
    rep = run_suite("phase-fit", SEED, 20)
    degs = [r["fits"]["phi_abc"]["degree"] for r in rep["records"]]
    res = [r["fits"]["phi_abc"]["residual"] for r in rep["records"]]
    syn = rep["findings"]["synthetic"]
    ok = len(degs) == 20 and max(degs) <= 3 and max(res) < 1e-6 and syn["coefficient_error"] < 1e-9
    other = rep["findings"]["fitted_degrees"]
    report(
        7,
        ok,
        f"phi_abc degree <= {max(degs)}, held-out residual {max(res):.1e}; synthetic error "
        f"{syn['coefficient_error']:.1e}; phi_ab degrees {other['phi_ab']}, phi_a degrees {other['phi_a']}",
    )


def test_08_hermitian(report):
    rep = run_suite("hermitian", SEED, 50)
    conv = rep["findings"]["convention"]
    res = _residuals(rep)
    ok = len(res) == 50 and max(res) < 1e-6 and rep["summary"]["ok"]
    report(8, ok, f"hermitian: (eps, s) = ({conv['exponent']}, {conv['sign']}), triple+equivariant max {max(res):.1e}")


CLASSICAL = {
    0: lambda z: Fr(1),
    1: lambda z: z - Fr(1, 2),
    2: lambda z: z**2 - z + Fr(1, 6),
    3: lambda z: z**3 - Fr(3, 2) * z**2 + Fr(1, 2) * z,
    4: lambda z: z**4 - 2 * z**3 + z**2 - Fr(1, 30),
    5: lambda z: z**5 - Fr(5, 2) * z**4 + Fr(5, 3) * z**3 - Fr(1, 6) * z,
    6: lambda z: z**6 - 3 * z**5 + Fr(5, 2) * z**4 - Fr(1, 2) * z**2 + Fr(1, 42),
}


def _brute_f_size(a, b, alpha, beta):
    gamma, _ = primitive_gamma(a, b)
    i = next(k for k in range(3) if gamma[k])
    classes = set()
    for d in itertools.product(range(-12, 13), repeat=3):
        if 0 <= dot(d, a) < dot(alpha, a) and 0 <= dot(d, b) < dot(beta, b):
            t = d[i] // gamma[i]
            classes.add(tuple(d[k] - t * gamma[k] for k in range(3)))
    return len(classes)


def test_09_bernoulli_and_f_size(report):
    zs = [Fr(0), Fr(1, 2), Fr(1), Fr(-3, 7)]
    ok1 = all(bernoulli_kn(k, 1, z).value == CLASSICAL[k](z) for k in range(7) for z in zs)
    pairs = [(Fr(1, 3), Fr(1, 2)), (Fr(-2), Fr(5, 7)), (Fr(9, 4), Fr(-3))]
    ok2 = all(bernoulli_kn(1, 2, z, [t]).value == (2 * z - t - 1) / (2 * t) for z, t in pairs)
    rng = random.Random(SEED)
    prims = primitive_vectors(3)
    checked = 0
    ok3 = True
    while checked < 20:
        a, b = rng.choice(prims), rng.choice(prims)
        if not any(cross(a, b)):
            continue
        alpha, beta = annihilator_pair(a, b)
        _, s = primitive_gamma(a, b)
        n = len(fundamental_set(a, b, alpha, beta))
        ok3 &= n * s == dot(alpha, a) * dot(beta, b) and n == _brute_f_size(a, b, alpha, beta)
        checked += 1
    report(9, ok1 and ok2 and ok3, f"B_k,1 classical {ok1}; B_1,2 closed form {ok2}; |F| law on 20 pairs {ok3}")


def test_10_determinism_and_runtime(report):
    t = time.perf_counter()
    mismatched = []
    for suite in SUITES:
        first = report_json(run_suite(suite, SEED))
        if report_json(run_suite(suite, SEED)) != first:
            mismatched.append(f"{suite} (rerun)")
        if report_json(run_suite(suite, SEED, workers=3)) != first:
            mismatched.append(f"{suite} (workers)")
    dt = time.perf_counter() - t
    ok = not mismatched and dt < 300
    report(10, ok, f"{len(SUITES)} suites x (2 runs + 3 workers) byte-identical; {dt:.1f}s < 300s {mismatched or ''}")
