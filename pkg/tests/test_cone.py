import pytest

import _props
from relcone import linalg
from relcone.branch import Branch
from relcone.cone import LinearCone, Provenance, cone_membership, cone_pair, cone_sets
from relcone.cyclo import root_of_unity
from relcone.errors import FieldExtensionRequired, PrecisionExhausted
from relcone.instances import two_cusps, random_pair
from relcone.series import TruncatedSeries

S = TruncatedSeries.parse


def B(*coords, label=""):
    return Branch.from_coords(list(coords), label=label)


def test_two_cusps_two_planes():
    x, y = two_cusps()
    c = cone_pair(x, y)
    assert len(c.planes()) == 2 and not c.lines()
    expected = LinearCone(3, [([(1, 0, 0), (0, 1, 1)], []), ([(1, 0, 0), (0, 1, -1)], [])])
    assert c == expected
    provs = {str(p.epsilon): p for s in c.subspaces for p in s.provenance}
    assert linalg.rank([provs["-1"].v_i, (0, 1, 1)]) == 1
    assert linalg.rank([provs["1"].v_i, (0, 1, -1)]) == 1
    assert provs["-1"].n_i == provs["1"].n_i == 6


def test_two_cusps_membership():
    c = cone_pair(*two_cusps())
    for v in [(0, 1, 1), (0, 1, -1), (1, 5, 5), (1, 5, -5), (0, 0, 0)]:
        assert cone_membership(v, c)
    for v in [(0, 1, 2), (0, 0, 1), (0, 1, 0)]:
        assert not cone_membership(v, c)


def test_transversal_axes():
    c = cone_pair(B("t", "0", "0"), B("0", "t", "0"))
    assert c == LinearCone(3, [([(1, 0, 0), (0, 1, 0)], [])])
    assert c.subspaces[0].provenance[0].kind == "transversal"


def test_smooth_self_pair_is_tangent_line():
    x = B("t", "t^2")
    c = cone_pair(x, x)
    assert c == LinearCone(2, [([(1, 0)], [])])
    assert c.subspaces[0].provenance[0].kind == "coincident"


def test_cusp_self_pair_is_full_plane():
    x = B("t^2", "t^3")
    c = cone_pair(x, x)
    assert c == LinearCone(2, [([(1, 0), (0, 1)], [])])
    p = c.subspaces[0].provenance[0]
    assert p.epsilon == -1 and p.n_i == 6


def test_cone_sets_example():
    xs = [B("t", "0")]
    ys = [B("0", "t"), B("t", "t^2")]
    c = cone_sets(xs, ys)
    assert c == LinearCone(2, [([(1, 0), (0, 1)], [])])
    assert len(c.subspaces[0].provenance) == 2


def test_cone_sets_singletons_reduce_to_pairs():
    x, y = two_cusps()
    assert cone_sets([x], [y]) == cone_pair(x, y)
    s = B("t", "t^3")
    assert cone_sets([s], [s]) == LinearCone(2, [([(1, 0)], [])])


def test_cone_sets_workers_agree():
    xs = [random_pair(5).x, random_pair(6).x]
    ys = [random_pair(5).y, random_pair(6).y]
    if xs[0].dim == xs[1].dim:
        assert cone_sets(xs, ys, workers=2) == cone_sets(xs, ys)


def test_precision_exhausted_names_pair():
    x = B("t^2", "t^3 + O(t^4)", "O(t^4)", label="X")
    y = B("t^2", "O(t^4)", "t^3 + O(t^4)", label="Y")
    # still decidable: n = 6 is reached with t^3 known
    assert len(cone_pair(x, y).planes()) == 2
    x = B("t^2", "O(t^3)", "O(t^3)", label="X")
    y = B("t^2", "O(t^3)", "O(t^3)", label="Y")
    with pytest.raises(PrecisionExhausted) as info:
        cone_pair(x, y)
    assert "(X, Y)" in str(info.value)


def test_coincident_up_to_precision_for_reparametrized_copies():
    x = B("t", "t^2", label="a")
    y = B("t + t^2", "(t + t^2)^2", label="b")
    c = cone_pair(x, y, max_trunc=40)
    assert c == LinearCone(2, [([(1, 0)], [])])
    kinds = {p.kind for s in c.subspaces for p in s.provenance}
    assert kinds == {"coincident_up_to_precision"}
    assert c.warnings


def test_field_extension_propagates():
    with pytest.raises(FieldExtensionRequired):
        cone_pair(B("2*t^2", "t^3"), B("t^2", "t^5"))


def test_provenance_json_round_trip():
    c = cone_pair(*two_cusps())
    again = LinearCone.from_json(c.to_json())
    assert again == c and again.to_json() == c.to_json()
    p = Provenance("shared_tangent", ("a", "b"), root_of_unity(3), 7, (1, 0), (2, 3))
    assert Provenance.from_json(p.to_json()) == p


def test_absorption_and_dedup():
    c = LinearCone(3, [([(1, 0, 0)], []), ([(1, 0, 0), (0, 1, 0)], []),
                       ([(2, 0, 0), (0, 3, 0)], [])])
    assert len(c) == 1 and c.subspaces[0].dim == 2
    with pytest.raises(AssertionError):
        LinearCone(3, [([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [])])


@pytest.mark.parametrize("seed", range(12))
def test_invariants_on_random_pairs(seed):
    p = random_pair(seed)
    c = cone_pair(p.x, p.y)
    assert _props.structural(p, c) == []
    assert _props.symmetry(p, c) == []


@pytest.mark.parametrize("seed", [1, 3, 9])
def test_mu_invariance_small(seed):
    p = random_pair(seed, max_k=3)
    assert _props.mu_invariance(p, cone_pair(p.x, p.y)) == []


def test_frame_equivariance_small():
    for seed, mat in zip(range(4), _props.invertible_maps(4, 3, seed=1)):
        p = random_pair(seed, dims=(3,))
        assert _props.frame_equivariance(p, cone_pair(p.x, p.y), mat) == []


def test_distributivity_small():
    xs, ys = _props.split_instances(4)
    assert _props.distributivity(xs, ys) == []
