import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _corpus import P1, P1xP1, P2, P3, O, constructor_corpus, hyperplane
from toripos.errors import InvalidKlyachkoData, MalformedInput, NotARefinement, NotASection, PointOutsideSupport
from toripos.fan import LexPoint, lex_point, star_subdivide
from toripos.geometry import RationalSubspace, dot, span, subspace_sum
from toripos.klyachko import (
    Filtration,
    ToricVectorBundle,
    change_basis,
    decompose_over_cone,
    determinant,
    direct_sum,
    fiber_evaluation,
    frobenius_pullback,
    interpolate,
    line_bundle,
    random_basis_change,
    subdivision_pullback,
    tangent_bundle_of,
    trivial_bundle,
    twist_by_line_bundle,
    validate_bundle,
)
from toripos.positivity import all_splittings
from toripos.sections import h0, isotypical_sections
from toripos.tdivisor import TCartierDivisor, divisor_from_ray_jumps, wall_degree

CORPUS = constructor_corpus()


def degrees(b):
    return [s.degrees() for s in all_splittings(b)]


def check_grading(b, sigma):
    """Direct comparison of every filtration step with the graded pieces."""
    dec = b.decomposition(sigma)
    assert sum(s.dim for _, s in dec.parts) == b.rank
    assert subspace_sum([s for _, s in dec.parts]).is_full()
    for k in b.fan.cones[sigma]:
        v = b.fan.rays[k]
        f = b.filtrations[k]
        values = {dot(u, v) for u, _ in dec.parts} | set(f.thresholds)
        for i in range(min(values) - 1, max(values) + 2):
            graded = subspace_sum([s for u, s in dec.parts if dot(u, v) >= i], b.rank)
            assert graded == f.at(i), (sigma, k, i)


def test_filtration_normalization():
    full = RationalSubspace.full(2)
    line = span([(1, 0)], 2)
    f = Filtration(2, [(3, line), (-1, full), (0, full), (5, RationalSubspace.zero(2))])
    assert f.jumps == ((0, full), (3, line))
    assert f.at(-10) == full and f.at(0) == full and f.at(1) == line and f.at(4).is_zero()
    with pytest.raises(MalformedInput):
        Filtration(2, [(0, line), (1, full)])
    with pytest.raises(MalformedInput):
        Filtration(2, [(0, line)])
    with pytest.raises(MalformedInput):
        Filtration(2, [(Fraction(1, 2), full)])


def test_O1_on_P1_characters():
    d = TCartierDivisor(P1, [(0,), (-1,)])
    b = line_bundle(d)
    assert b.decomposition(0).characters() == [(0,)]
    assert b.decomposition(1).characters() == [(-1,)]


def test_tangent_P2_axis_lines():
    T = tangent_bundle_of(P2)
    sigma = P2.find_cone([(1, 0), (0, 1)])
    dec = T.decomposition(sigma)
    assert sorted(dec.characters()) == [(0, 1), (1, 0)]
    assert dec.part((1, 0)) == span([(1, 0)], 2)
    assert dec.part((0, 1)) == span([(0, 1)], 2)
    check_grading(T, sigma)


def three_lines_on_P3():
    full = RationalSubspace.full(2)
    lines = [span([v], 2) for v in ((1, 0), (0, 1), (1, 1), (1, 2))]
    return [Filtration(2, [(0, full), (1, l)]) for l in lines]


def test_incompatible_data_rejected():
    with pytest.raises(InvalidKlyachkoData):
        ToricVectorBundle(P3, 2, three_lines_on_P3())


def test_distinct_lines_on_P2_are_compatible():
    # any two filtrations of a 2-dim space admit a common adapted basis
    full = RationalSubspace.full(2)
    filts = [Filtration(2, [(0, full), (1, span([v], 2))]) for v in ((1, 0), (1, 1), (0, 1))]
    b = ToricVectorBundle(P2, 2, filts)
    assert degrees(b) == degrees(tangent_bundle_of(P2))


def test_incompatible_jumps_rejected():
    full = RationalSubspace.full(2)
    a, c = span([(1, 0)], 2), span([(0, 1)], 2)
    filts = [
        Filtration(2, [(0, full), (1, a)]),
        Filtration(2, [(0, full), (1, a)]),
        Filtration(2, [(0, full), (1, c)]),
        Filtration(2, [(0, full), (2, span([(1, 1)], 2))]),
    ]
    with pytest.raises(InvalidKlyachkoData):
        ToricVectorBundle(P3, 2, filts)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_constructor_outputs_validate(name):
    b = CORPUS[name]
    validate_bundle(b)
    for sigma in range(b.fan.n_cones):
        check_grading(b, sigma)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_character_multiset_independent_of_linear_extension(name):
    b = CORPUS[name]
    for sigma in range(b.fan.n_cones):
        ref = Counter(b.decomposition(sigma).characters())
        for seed in range(5):
            dec = decompose_over_cone(b, sigma, random.Random(seed))
            assert Counter(dec.characters()) == ref


@pytest.mark.parametrize("name", ["T-P2", "O2+O3-P2", "T+O1-P2", "T-P1xP1"])
def test_character_multiset_independent_of_basis(name):
    b = CORPUS[name]
    rng = random.Random(7)
    for _ in range(3):
        g = random_basis_change(b.rank, rng)
        c = change_basis(b, g)
        for sigma in range(b.fan.n_cones):
            assert Counter(c.decomposition(sigma).characters()) == Counter(b.decomposition(sigma).characters())


def test_interpolate_examples():
    triv = trivial_bundle(P2, 3)
    assert interpolate(triv, (2, -1), 0).is_full()
    assert interpolate(triv, (2, -1), 1).is_zero()
    T = tangent_bundle_of(P2)
    assert interpolate(T, (1, 1), 1).is_full()
    assert interpolate(T, (1, 1), 2).is_zero()
    assert interpolate(T, (1, 0), 1) == span([(1, 0)], 2)


def test_interpolate_outside_support():
    from toripos.fan import Fan

    half = Fan([(1, 0), (0, 1)], [(0, 1)])
    b = trivial_bundle(half, 1)
    with pytest.raises(PointOutsideSupport):
        interpolate(b, (-1, -1), 0)


@pytest.mark.parametrize("name", ["T-P2", "T-P1xP1", "T-F1", "O2+O3-P2", "F2*T-P2", "T-P3"])
def test_interpolate_agrees_across_walls(name):
    b = CORPUS[name]
    fan = b.fan
    rng = random.Random(11)
    for w in fan.walls:
        for _ in range(50):
            coeffs = [rng.randint(0, 3) for _ in w.rays]
            v = tuple(sum(c * fan.rays[k][i] for c, k in zip(coeffs, w.rays)) for i in range(fan.rank))
            t = Fraction(rng.randint(-8, 8), rng.randint(1, 3))
            a = b.decomposition(w.sigma).filtration_at(lambda u: dot(u, v), t)
            c = b.decomposition(w.sigma_prime).filtration_at(lambda u: dot(u, v), t)
            assert a == c


def test_interpolate_lexpoint():
    T = tangent_bundle_of(P2)
    w = P2.walls[0]
    p = lex_point(P2, w, "first")
    assert isinstance(p, LexPoint)
    top = max(p.pair(u) for u in T.decomposition(w.sigma).characters())
    assert interpolate(T, p, top).dim == 1


def test_twists():
    assert degrees(twist_by_line_bundle(O(P1, 2), hyperplane(P1).scaled(3))) == [[5]]
    T = tangent_bundle_of(P2)
    H = hyperplane(P2)
    assert all(d == [0, 1] for d in degrees(twist_by_line_bundle(T, -H)))
    assert twist_by_line_bundle(twist_by_line_bundle(T, H), -H) == T


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_twist_shifts_degrees(name):
    b = CORPUS[name]
    d = divisor_from_ray_jumps(b.fan, [(-1) ** k * (k % 3) for k in range(len(b.fan.rays))])
    tw = twist_by_line_bundle(b, d)
    for s, t in zip(all_splittings(b), all_splittings(tw)):
        shift = wall_degree(d, s.wall)
        assert t.degrees() == [x + shift for x in s.degrees()]


def test_direct_sum_and_determinant():
    b = direct_sum(O(P1, 1), O(P1, -1))
    assert b.rank == 2
    assert degrees(b) == [[-1, 1]]
    assert determinant(b).wall_degrees() == [0]
    T = tangent_bundle_of(P2)
    assert determinant(T).wall_degrees() == [3, 3, 3]
    assert direct_sum(T, O(P2, 4)).rank == 3


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_determinant_degree_is_sum(name):
    b = CORPUS[name]
    det = determinant(b)
    for s in all_splittings(b):
        assert sum(s.degrees()) == wall_degree(det, s.wall)


def test_frobenius():
    T = tangent_bundle_of(P2)
    assert frobenius_pullback(T, 1) == T
    assert frobenius_pullback(O(P1, 1), 2) == O(P1, 2)
    with pytest.raises(ValueError):
        frobenius_pullback(T, 0)


@pytest.mark.parametrize("name", ["T-P2", "O2+O3-P2", "T(-1)-P2", "T-P1xP1", "blowup-T-P2-m1"])
@pytest.mark.parametrize("q", [2, 3])
def test_frobenius_multiplies_degrees(name, q):
    b = CORPUS[name]
    for s, t in zip(all_splittings(b), all_splittings(frobenius_pullback(b, q))):
        assert t.degrees() == [q * x for x in s.degrees()]


def test_subdivision_pullback():
    T = tangent_bundle_of(P2)
    assert subdivision_pullback(T, P2) == T
    blown, new = star_subdivide(P2, 0)
    H = hyperplane(P2)
    pb = subdivision_pullback(line_bundle(H), blown)
    sigma = 0
    v = blown.rays[new]
    assert pb.filtrations[new].thresholds == (dot(H.characters[sigma], v),)
    pt = subdivision_pullback(T, blown)
    validate_bundle(pt)
    assert h0(pt) == h0(T) == 8
    with pytest.raises(NotARefinement):
        subdivision_pullback(T, P1xP1)


def test_tangent_bundles():
    assert degrees(tangent_bundle_of(P1)) == [[2]]
    T = tangent_bundle_of(P2)
    assert h0(T) == 8
    assert all(d == [1, 2] for d in degrees(T))


def test_fiber_evaluation_rank_one():
    H = hyperplane(P2)
    b = line_bundle(H)
    for sigma in range(P2.n_cones):
        u = H.characters[sigma]
        assert fiber_evaluation(b, sigma, u, (1,)) == (1,)
    two = line_bundle(H.scaled(2))
    # (0, -1) is a lattice point of the section polytope but not the vertex of cone 0
    assert isotypical_sections(two, (0, -1)).dim == 1
    assert two.decomposition(0).characters() == [(0, 0)]
    assert fiber_evaluation(two, 0, (0, -1), (1,)) == (0,)


def test_fiber_evaluation_not_a_section():
    H = hyperplane(P2)
    b = line_bundle(H)
    with pytest.raises(NotASection):
        fiber_evaluation(b, 0, (5, 5), (1,))


def test_tangent_fiber_evaluation():
    T = tangent_bundle_of(P2)
    for sigma in range(P2.n_cones):
        # torus-invariant fields vanish at every fixed point
        for s in isotypical_sections(T, (0, 0)).subspace.basis:
            assert not any(fiber_evaluation(T, sigma, (0, 0), s))
        dec = T.decomposition(sigma)
        for u, part in dec.parts:
            space = isotypical_sections(T, u).subspace
            values = [fiber_evaluation(T, sigma, u, s) for s in space.basis]
            assert any(any(v) for v in values)
            assert all(span([v], 2) <= part for v in values if any(v))


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.integers(0, 10**6))
def test_decomposable_bundle_characters(j1, j2, seed):
    d1 = divisor_from_ray_jumps(P2, j1)
    d2 = divisor_from_ray_jumps(P2, j2)
    b = change_basis(direct_sum(line_bundle(d1), line_bundle(d2)), random_basis_change(2, random.Random(seed)))
    for sigma in range(P2.n_cones):
        assert sorted(b.decomposition(sigma).characters()) == sorted([d1.characters[sigma], d2.characters[sigma]])
        check_grading(b, sigma)
