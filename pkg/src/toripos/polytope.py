"""Lattice polytopes in M_R: hulls, lattice points, sums and normal fans.

Polytopes follow the vertex convention used throughout the package: the
polytope of a divisor is the convex hull of its local characters, and the
maximal cone of a vertex ``v`` is ``{w : <v, w> >= <u, w> for all u in P}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import ceil, floor
from typing import Iterable, Sequence

from .errors import EmptyInput, NotFullDimensional, RankMismatch
from .fan import Fan
from .geometry import (
    Vector,
    cone_h_rep,
    dot,
    is_integral,
    neg,
    primitive_vector,
    rank,
    solve_linear,
    sub,
    vec,
)


class LatticePolytope:
    """Convex hull of finitely many lattice points.

    Attributes:
        vertices: extreme points, sorted lexicographically.
        facets: pairs ``(normal, offset)``; the polytope is
            ``{u : <u, normal> <= offset}`` intersected with ``equations``.
        equations: pairs ``(a, b)`` with ``<u, a> = b`` on the affine hull.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise EmptyInput("a polytope needs at least one point")
        self.rank = len(pts[0])
        if any(len(p) != self.rank for p in pts):
            raise RankMismatch("points of mixed rank")
        lifted = [p + (1,) for p in pts]
        eqs, ineqs = cone_h_rep(lifted, self.rank + 1)
        self.equations = tuple((e[:-1], -e[-1]) for e in eqs)
        self.facets = tuple(sorted((neg(h[:-1]), h[-1]) for h in ineqs))
        verts = []
        full = self.rank + 1
        for p, lp in zip(pts, lifted):
            tight = [h for h in ineqs if dot(h, lp) == 0]
            if rank(list(eqs) + tight) == full - 1:
                verts.append(p)
        self.vertices = tuple(verts) if verts else tuple(pts)

    def __repr__(self):
        return f"LatticePolytope({[list(v) for v in self.vertices]})"

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    @property
    def dim(self) -> int:
        return self.rank - len(self.equations)

    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, u: Sequence) -> bool:
        if len(u) != self.rank:
            raise RankMismatch(f"point of length {len(u)} vs polytope in rank {self.rank}")
        return all(dot(a, u) == b for a, b in self.equations) and all(
            dot(a, u) <= b for a, b in self.facets
        )

    def __contains__(self, u) -> bool:
        return self.contains(u)

    @cached_property
    def _points(self) -> tuple[Vector, ...]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.rank)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.rank)]
        return tuple(
            p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if self.contains(p)
        )

    def lattice_points(self) -> list[Vector]:
        return list(self._points)

    def n_lattice_points(self) -> int:
        return len(self._points)

    def support(self, w: Sequence) -> Fraction:
        """``max <u, w>`` over the polytope."""
        return max(dot(v, w) for v in self.vertices)


def hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    points = list(points)
    if not points:
        raise EmptyInput("hull of no points")
    if not all(is_integral(p) for p in points):
        raise ValueError("hull expects lattice points")
    return LatticePolytope(points)


def lattice_points(p: LatticePolytope) -> list[Vector]:
    return p.lattice_points()


def _check_rank(p: LatticePolytope, q: LatticePolytope):
    if p.rank != q.rank:
        raise RankMismatch(f"polytopes in rank {p.rank} and {q.rank}")


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    _check_rank(p, q)
    return LatticePolytope(tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices)


def dilate(p: LatticePolytope, m: int) -> LatticePolytope:
    if m < 1:
        raise ValueError("dilation factor must be positive")
    return LatticePolytope(tuple(m * x for x in v) for v in p.vertices)


def reflect_translate(p: LatticePolytope, w: Sequence[int]) -> LatticePolytope:
    """The polytope ``w - p``."""
    if len(w) != p.rank:
        raise RankMismatch("translation vector has the wrong rank")
    return LatticePolytope(sub(w, v) for v in p.vertices)


def cayley_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    """``conv(p x {0} ∪ q x {1})``."""
    _check_rank(p, q)
    return LatticePolytope([v + (0,) for v in p.vertices] + [v + (1,) for v in q.vertices])


def normal_fan(p: LatticePolytope) -> tuple[Fan, dict[int, Vector]]:
    """Normal fan of a full-dimensional polytope and the cone-to-vertex map.

    Rays are the primitive outer facet normals; the maximal cone of a vertex
    is spanned by the normals of the facets through it.  Cones are listed in
    vertex order.
    """
    if not p.is_full_dimensional():
        raise NotFullDimensional("normal fan needs a full-dimensional polytope")
    rays = [primitive_vector(a) for a, _ in p.facets]
    cones = []
    assignment = {}
    for v in p.vertices:
        idx = [k for k, (a, b) in enumerate(p.facets) if dot(a, v) == b]
        assignment[len(cones)] = v
        cones.append(idx)
    return Fan(rays, cones), assignment


def h_polytope_lattice_points(normals: Sequence[Sequence], offsets: Sequence) -> list[Vector]:
    """Lattice points of ``{u : <u, a_i> <= b_i}``, assumed bounded.

    Vertices are found by brute force over ``n``-subsets of the inequalities
    and give the bounding box that is then scanned.
    """
    n = len(normals[0])
    verts = []
    for subset in combinations(range(len(normals)), n):
        rows = [normals[i] for i in subset]
        if rank(rows) < n:
            continue
        x = solve_linear(rows, [offsets[i] for i in subset])
        if all(dot(a, x) <= b for a, b in zip(normals, offsets)):
            verts.append(x)
    if not verts:
        return []
    lo = [ceil(min(Fraction(v[i]) for v in verts)) for i in range(n)]
    hi = [floor(max(Fraction(v[i]) for v in verts)) for i in range(n)]
    return [
        p
        for p in product(*(range(a, b + 1) for a, b in zip(lo, hi)))
        if all(dot(a, p) <= b for a, b in zip(normals, offsets))
    ]


def h_polytope_vertices(normals, offsets) -> list[Vector]:
    n = len(normals[0])
    verts = set()
    for subset in combinations(range(len(normals)), n):
        rows = [normals[i] for i in subset]
        if rank(rows) < n:
            continue
        x = vec(solve_linear(rows, [offsets[i] for i in subset]))
        if all(dot(a, x) <= b for a, b in zip(normals, offsets)):
            verts.add(x)
    return sorted(verts)
