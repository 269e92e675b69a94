from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toripos.errors import IncompleteSupport, NotAFan, NotSmoothCone
from toripos.fan import (
    Fan,
    hirzebruch,
    lex_point,
    product_of_projective_lines,
    projective_space,
    star_subdivide,
    validate_fan,
)
from toripos.geometry import dot, rank


def adjacent_pairs(fan):
    """Brute-force wall count: cone pairs sharing n-1 independent rays."""
    n = fan.rank
    if n == 1:
        return fan.n_cones * (fan.n_cones - 1) // 2
    count = 0
    for i, j in combinations(range(fan.n_cones), 2):
        shared = set(fan.cones[i]) & set(fan.cones[j])
        if shared and rank([fan.rays[k] for k in shared]) == n - 1:
            count += 1
    return count


STANDARD = [
    projective_space(1),
    projective_space(2),
    projective_space(3),
    product_of_projective_lines(2),
    product_of_projective_lines(3),
    hirzebruch(1),
    hirzebruch(3),
]


@pytest.mark.parametrize("fan", STANDARD, ids=repr)
def test_standard_fans_valid_and_complete(fan):
    rep = validate_fan(fan)
    assert rep.valid and rep.complete
    assert "heuristically complete" in rep.notes[0]
    assert fan.is_smooth()


def test_missing_cone_is_incomplete():
    p2 = projective_space(2)
    fan = Fan(p2.rays, p2.cones[:2])
    rep = validate_fan(fan)
    assert rep.valid and not rep.complete
    with pytest.raises(IncompleteSupport):
        validate_fan(fan, raise_on_error=True)


def test_overlapping_cones_rejected():
    fan = Fan([(1, 0), (0, 1), (1, 1), (-1, -1)], [(0, 1), (1, 2), (0, 3), (1, 3)])
    rep = validate_fan(fan, assert_complete=False)
    assert not rep.valid
    with pytest.raises(NotAFan):
        validate_fan(fan, raise_on_error=True)


def test_wall_counts():
    assert len(projective_space(1).walls) == 1
    assert projective_space(1).walls[0].normal == (1,)
    assert len(projective_space(2).walls) == 3
    assert len(product_of_projective_lines(2).walls) == 4
    blown, _ = star_subdivide(projective_space(2), 0)
    assert len(blown.walls) == adjacent_pairs(blown) == 4


@pytest.mark.parametrize("fan", STANDARD, ids=repr)
def test_walls_match_adjacency(fan):
    assert len(fan.walls) == adjacent_pairs(fan)
    for w in fan.walls:
        assert all(dot(w.normal, fan.rays[k]) == 0 for k in w.rays)
        side = [dot(w.normal, fan.rays[k]) for k in fan.cones[w.sigma] if k not in w.rays]
        other = [dot(w.normal, fan.rays[k]) for k in fan.cones[w.sigma_prime] if k not in w.rays]
        assert all(x > 0 for x in side) and all(x < 0 for x in other)
        holders = [i for i, c in enumerate(fan.cones) if set(w.rays) <= set(c)]
        if fan.rank > 1:
            assert sorted(holders) == [w.sigma, w.sigma_prime]


def test_star_subdivide_p2():
    blown, new = star_subdivide(projective_space(2), 0)
    assert blown.rays[new] == (1, 1)
    assert blown.n_cones == 4
    assert validate_fan(blown).complete
    with pytest.raises(NotSmoothCone):
        star_subdivide(Fan([(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)]), 0)


@pytest.mark.parametrize("fan", STANDARD[1:], ids=repr)
def test_star_subdivision_keeps_completeness(fan):
    for i in range(fan.n_cones):
        blown, _ = star_subdivide(fan, i)
        assert validate_fan(blown).complete
        assert len(blown.walls) == adjacent_pairs(blown)


def test_lex_point_construction():
    fan = projective_space(2)
    w = next(w for w in fan.walls if w.rays == (0,))
    p = lex_point(fan, w, "first" if 0 in fan.cones[w.sigma] and 1 in fan.cones[w.sigma] else "second")
    assert p.base == (1, 0)
    assert (1, 1) in p.perturbation
    a, b = p.pair((0, 1)), p.pair((0, 0))
    assert a != b
    first = next(i for i, (x, y) in enumerate(zip(a, b)) if x != y)
    assert first == 2
    assert p.pair((0, 1)) != p.pair((0, 2))


@given(st.sets(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)), min_size=2, max_size=12))
def test_lex_pairing_is_injective(chars):
    fan = projective_space(3)
    for w in fan.walls[:3]:
        for side in ("first", "second"):
            p = lex_point(fan, w, side)
            assert len({p.pair(u) for u in chars}) == len(chars)


def test_lex_point_lies_in_its_chamber():
    fan = product_of_projective_lines(2)
    for w in fan.walls:
        for side, cone in (("first", w.sigma), ("second", w.sigma_prime)):
            p = lex_point(fan, w, side)
            for h in fan.cone(cone).inequalities:
                assert p.pair(h) >= (0,) * len(p.pair(h))
