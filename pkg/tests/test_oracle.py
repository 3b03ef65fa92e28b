import numpy as np
import pytest

from relcone.branch import Branch
from relcone.cone import LinearCone, cone_pair
from relcone.instances import cusp, two_cusps, random_pair
from relcone.oracle import convergence_sweep, evaluate, sample, validate

FULL_PLANE = LinearCone(2, [([(1, 0), (0, 1)], [])])


def test_sample_is_deterministic():
    x, y = two_cusps()
    a, b = sample(x, y, 1e-3, 500, seed=3), sample(x, y, 1e-3, 500, seed=3)
    assert np.array_equal(a.directions, b.directions) and np.array_equal(a.pairs, b.pairs)
    c = sample(x, y, 1e-3, 500, seed=4)
    assert not np.array_equal(a.directions, c.directions)


def test_directions_are_unit_and_inside_disk():
    x, y = two_cusps()
    s = sample(x, y, 1e-2, 1000, seed=1)
    assert np.allclose(np.linalg.norm(s.directions, axis=1), 1, atol=1e-12)
    assert np.all(np.abs(s.pairs) <= 1e-2 + 1e-15)
    assert s.count + s.discarded == 1000


def test_sample_preconditions():
    x, y = two_cusps()
    with pytest.raises(ValueError):
        sample(x, y, 0.5, 10)
    with pytest.raises(ValueError):
        sample(x, y, 1e-3, 0)


def test_evaluate_matches_polynomial():
    b = Branch.from_coords(["t^2 + 3*t^5", "-t^3"])
    t = np.array([0.1, 0.05j])
    vals = evaluate(b, t)
    assert np.allclose(vals[:, 0], t ** 2 + 3 * t ** 5) and np.allclose(vals[:, 1], -t ** 3)


def test_two_cusps_soundness_and_sweep():
    x, y = two_cusps()
    c = cone_pair(x, y)
    rep = validate(sample(x, y, 1e-3, 2000, seed=7), c)
    assert rep.passed and rep.soundness <= 1e-2
    sweep = convergence_sweep(x, y, c, (1e-2, 1e-3, 1e-4), 2000, seed=7)
    assert sweep[0] > sweep[1] > sweep[2]


def test_wrong_cone_is_rejected():
    # uniform sampling rarely reaches tau ~ -t, so the gap is about 14 r rather than O(1)
    x, y = two_cusps()
    wrong = LinearCone(3, [([(1, 0, 0), (0, 1, 1)], [])])
    s = sample(x, y, 1e-3, 2000, seed=7)
    good, bad = validate(s, cone_pair(x, y)), validate(s, wrong)
    assert not bad.passed
    assert bad.soundness > 10 * good.soundness


def test_swap_negates_directions():
    x, y = two_cusps()
    a = sample(x, y, 1e-3, 300, seed=5)
    b = sample(y, x, 1e-3, 300, seed=5)
    # the swapped run draws (t, tau) in the same order, so it samples the negated secant
    # of the swapped parameter pair; validation is sign-symmetric either way
    c = cone_pair(x, y)
    assert validate(a, c).soundness == pytest.approx(validate(b, c).soundness, rel=1e-9, abs=1e-15)


def test_full_plane_has_zero_soundness():
    b = cusp()
    assert cone_pair(b, b) == FULL_PLANE
    for r in (1e-2, 1e-3, 1e-4):
        assert validate(sample(b, b, r, 1000, seed=2), FULL_PLANE).soundness < 1e-12


def test_smooth_self_pair_converges_to_tangent():
    b = Branch.from_coords(["t", "t^2"])
    sweep = convergence_sweep(b, b, cone_pair(b, b), (1e-2, 1e-3, 1e-4), 1000, seed=1)
    assert sweep[-1] < 1e-3 and sweep[-1] <= sweep[0]


def test_transversal_directions_fill_plane():
    x, y = Branch.from_coords(["t", "0"]), Branch.from_coords(["0", "t"])
    s = sample(x, y, 1e-3, 5000, seed=11)
    rng = np.random.default_rng(0)
    probes = rng.normal(size=(50, 2)) + 1j * rng.normal(size=(50, 2))
    probes /= np.linalg.norm(probes, axis=1)[:, None]
    overlap = np.abs(probes.conj() @ s.directions.T).max(axis=1)
    gaps = np.sqrt(np.clip(1 - overlap ** 2, 0, None))
    assert gaps.max() < 0.1
    rep = validate(s, cone_pair(x, y))
    assert rep.soundness < 1e-12 and rep.coverage[0] > 0


def test_report_json_echo():
    x, y = two_cusps()
    doc = validate(sample(x, y, 1e-3, 100, seed=9), cone_pair(x, y), tol=0.05).to_json()
    assert (doc["seed"], doc["radius"], doc["samples"], doc["tol"]) == (9, 1e-3, 100, 0.05)
    assert len(doc["coverage"]) == 2


@pytest.mark.parametrize("seed", [0, 2, 8])
def test_random_instances_sound(seed):
    p = random_pair(seed)
    c = cone_pair(p.x, p.y)
    sweep = convergence_sweep(p.x, p.y, c, (1e-2, 1e-3, 1e-4), 1000, seed=seed)
    assert sweep[-1] <= sweep[0]
