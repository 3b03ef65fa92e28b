"""Exit criteria of the package; each test records one PASS/FAIL line."""
import json
import random
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import _props
from relcone import linalg
from relcone.branch import Branch
from relcone.cli import main
from relcone.cone import LinearCone, cone_membership, cone_pair
from relcone.cyclo import ONE, ZERO, CyclotomicNumber, root_of_unity
from relcone.instances import cusp, two_cusps, random_pair
from relcone.join import PointData, ProjectivePoint, join_report
from relcone.oracle import convergence_sweep, sample, validate
from relcone.series import TruncatedSeries

pytestmark = pytest.mark.acceptance

DATA = Path(__file__).resolve().parent.parent / "data"
SUITE = range(200)
ROUNDING = 1e-12


def test_1_golden_example(criterion):
    t0 = time.perf_counter()
    x, y = two_cusps()
    c = cone_pair(x, y)
    provs = [p.v_i for s in c.subspaces for p in s.provenance]
    ok = len(c.planes()) == 2 and not c.lines()
    ok &= all(any(linalg.rank([v, w]) == 1 for v in provs) for w in [(0, 1, 1), (0, 1, -1)])
    members = [(0, 1, 1), (0, 1, -1), (1, 5, 5), (1, 5, -5)]
    ok &= all(cone_membership(v, c) for v in members)
    ok &= not cone_membership((0, 1, 2), c) and not cone_membership((0, 0, 1), c)
    # union of the two planes is {y^2 = z^2}
    rng = random.Random(0)
    for _ in range(50):
        v = tuple(rng.randint(-5, 5) for _ in range(3))
        ok &= cone_membership(v, c) == (v[1] ** 2 == v[2] ** 2)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1
    assert criterion("1 golden example: two planes y = +-z, exact membership", ok,
                     f"{elapsed:.3f} s")


def test_2_property_suite(criterion):
    t0 = time.perf_counter()
    maps = {n: _props.invertible_maps(20, n, seed=n) for n in (2, 3, 4)}
    failures = []
    for seed in SUITE:
        p = random_pair(seed)
        c = cone_pair(p.x, p.y)
        for bad in (_props.structural(p, c), _props.symmetry(p, c), _props.mu_invariance(p, c),
                    _props.frame_equivariance(p, c, maps[p.x.dim][seed % 20])):
            failures += [f"seed {seed}: {b}" for b in bad]
    for seed in range(100):
        xs, ys = _props.split_instances(seed)
        failures += [f"split {seed}: {b}" for b in _props.distributivity(xs, ys)]
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    criterion("2 property suite: 200 instances, zero failures", ok,
              f"{len(failures)} failures, {elapsed:.1f} s")
    assert ok, failures[:10]


def test_3_coincidence_degeneracies(criterion):
    smooth = Branch.from_coords(["t", "t^2"], label="s")
    c = cone_pair(smooth, smooth)
    ok = c == LinearCone(2, [([(1, 0)], [])])
    b = cusp()
    full = cone_pair(b, b)
    ok &= full == LinearCone(2, [([(1, 0), (0, 1)], [])])
    snd = validate(sample(b, b, 1e-3, 2000, seed=7), full).soundness
    ok &= snd == 0.0
    assert criterion("3 coincidence: smooth self-pair is the tangent line, cusp gives C^2", ok,
                     f"oracle soundness on the full plane {snd:g}")


def test_4_oracle_agreement(criterion):
    t0 = time.perf_counter()
    radii = (1e-2, 1e-3, 1e-4)
    sound, checked, over, increasing = 0, 0, [], []
    for seed in SUITE:
        p = random_pair(seed)
        c = cone_pair(p.x, p.y)
        if len(c.planes()) == 1 and p.x.dim == 2:
            continue  # full plane: soundness is identically 0
        checked += 1
        sweep = convergence_sweep(p.x, p.y, c, radii, 2000, seed=seed)
        if sweep[1] <= 1e-2:
            sound += 1
        else:
            over.append(seed)
        # both curves inside the cone leave only double-precision rounding
        if sweep[-1] > sweep[0] and max(sweep) > ROUNDING:
            increasing.append(seed)
    x, y = two_cusps()
    again = [sample(x, y, 1e-3, 2000, seed=7).directions for _ in range(2)]
    deterministic = np.array_equal(*again)
    elapsed = time.perf_counter() - t0
    ok = sound >= 20 and not increasing and deterministic and elapsed < 120
    criterion("4 oracle agreement: soundness <= 1e-2 at r = 1e-3, sweeps non-increasing", ok,
              f"{sound}/{checked} non-trivial instances sound, above tol: {over}, "
              f"increasing sweeps: {increasing}, {elapsed:.1f} s")
    assert ok


def _unit_series(rng):
    terms = {0: ONE}
    for e in rng.sample(range(1, 13), rng.randint(1, 5)):
        q = Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 4))
        m = rng.choice((1, 2, 3, 4, 6))
        terms[e] = root_of_unity(m, rng.randrange(m)) * q
    return TruncatedSeries(terms)


def test_5_series_kernel(criterion):
    rng = random.Random(5)
    fails = []
    target = TruncatedSeries({1: ONE}, 30)
    for i in range(100):
        u = _unit_series(rng)
        k = rng.randint(2, 6)
        if (u.kth_root(k, trunc=30) ** k).truncate(30) != u.truncate(30):
            fails.append(f"kth_root {i}")
        a1 = root_of_unity(rng.choice((1, 2, 3, 4, 6)), rng.randrange(12)) * rng.choice((1, 2, Fraction(1, 3)))
        s = TruncatedSeries({1: a1}) + (_unit_series(rng) - TruncatedSeries({0: ONE})).shift(1)
        g = s.revert(trunc=30)
        if s.compose(g).truncate(30) != target or g.compose(s).truncate(30) != target:
            fails.append(f"revert {i}")
        v = _unit_series(rng).shift(rng.randint(0, 5))
        w = _unit_series(rng).shift(rng.randint(0, 5))
        if (v * w).ord() != v.ord() + w.ord():
            fails.append(f"ord {i}")
    ok = not fails
    assert criterion("5 series kernel: kth_root/revert round trips through T=30, ord additivity",
                     ok, f"{len(fails)} failures over 100 instances")


def test_6_projective_layer(criterion):
    fails = []
    for seed in range(10):
        fails += [f"seed {seed}: {b}" for b in _props.chart_independence(seed)]
    lines = 0
    quadric_bad = 0
    reports = []
    for seed in range(10):
        P, cx, cy, _ = _props.chart_instance(seed)
        reports.append(join_report([PointData(P, 0, (cx,), (cy,))]))
    x, y = two_cusps()
    P0 = ProjectivePoint(tuple(CyclotomicNumber.from_rational(v) for v in (1, 0, 0, 0)))
    reports.append(join_report([PointData(P0, 0, (x,), (y,))]))
    for rep in reports:
        for _, _, comps in rep.points:
            for comp in comps:
                for p in comp.plucker_sample():
                    lines += 1
                    if p[0] * p[5] - p[1] * p[4] + p[2] * p[3] != ZERO:
                        quadric_bad += 1
    ok = not fails and quadric_bad == 0 and lines > 0
    assert criterion("6 projective layer: chart independence on 10 instances, Plucker quadric",
                     ok, f"{len(fails)} chart mismatches, {quadric_bad}/{lines} lines off the quadric")


def test_7_failure_modes(criterion, tmp_path, capsys):
    code3 = main(["cone", str(DATA / "two_cusps.json"), "--trunc", "3"])
    err3 = json.loads(capsys.readouterr().err)
    doc = {"X": [{"label": "x", "coords": ["2*t^2", "t^3"]}],
           "Y": [{"label": "y", "coords": ["t^2", "t^5"]}]}
    path = tmp_path / "ext.json"
    path.write_text(json.dumps(doc))
    code4 = main(["cone", str(path)])
    err4 = json.loads(capsys.readouterr().err)
    ok = code3 == 3 and "(X, Y)" in err3["message"] and code4 == 4
    ok &= err4["error"] == "FieldExtensionRequired"
    assert criterion("7 failure modes: starved input exits 3 naming the pair, 2t^2 exits 4", ok,
                     f"exit codes {code3}, {code4}")
