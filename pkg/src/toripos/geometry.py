"""Exact lattice and linear algebra over the rationals.

Lattice vectors of N and characters of M are plain tuples.  Entries are
``int`` when integral and :class:`fractions.Fraction` otherwise, so that
characters hash and compare naturally.  Nothing in this package touches
floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    Inconsistent,
    NonIntegral,
    RankMismatch,
    RaysNotSpanning,
    ZeroVector,
)

Vector = tuple


def exact(x):
    """Return ``x`` as an ``int`` if it is integral, else as a ``Fraction``."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def vec(xs: Iterable) -> Vector:
    return tuple(exact(x) for x in xs)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise RankMismatch(f"pairing vectors of length {len(u)} and {len(v)}")
    return exact(sum(a * b for a, b in zip(u, v)))


def add(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise RankMismatch(f"adding vectors of length {len(u)} and {len(v)}")
    return vec(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise RankMismatch(f"subtracting vectors of length {len(u)} and {len(v)}")
    return vec(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return vec(c * a for a in v)


def neg(v: Sequence) -> Vector:
    return vec(-a for a in v)


def vsum(vectors: Iterable[Sequence], n: int) -> Vector:
    return reduce(add, vectors, (0,) * n)


def unit(n: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


def primitive_vector(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = reduce(gcd, (abs(int(x)) for x in v), 0)
    if g == 0:
        raise ZeroVector("the zero vector has no primitive generator")
    return tuple(int(x) // g for x in v)


def integer_primitive(v: Sequence) -> Vector:
    """Clear denominators of a rational vector, then make it primitive."""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return primitive_vector([int(Fraction(x) * den) for x in v])


# ---------------------------------------------------------------------------
# Row reduction


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` with the zero rows dropped.  Rows are tuples of
    exact rationals.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return tuple(vec(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : A x = 0}`` (one vector per free column)."""
    if not rows:
        return [unit(ncols, i) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(vec(x))
    return basis


def solve_linear(rows: Sequence[Sequence], rhs: Sequence):
    """One solution of ``A x = b`` or ``None`` if inconsistent."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return vec(x)


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(m: Sequence[Sequence]) -> Fraction:
    rows = [[Fraction(x) for x in r] for r in m]
    den = reduce(lcm, (x.denominator for r in rows for x in r), 1)
    ints = [[int(x * den) for x in r] for r in rows]
    return Fraction(_bareiss_det(ints), den ** len(rows)) if rows else Fraction(1)


def cross(rows: Sequence[Sequence[int]]) -> Vector:
    """Generalized cross product of ``n-1`` integer vectors in ``Z^n``.

    The result is orthogonal to every row and vanishes iff the rows are
    linearly dependent.
    """
    n = len(rows) + 1
    out = []
    for k in range(n):
        minor = [[r[j] for j in range(n) if j != k] for r in rows]
        d = _bareiss_det(minor) if minor else 1
        out.append(d if k % 2 == 0 else -d)
    return tuple(out)


# ---------------------------------------------------------------------------
# Subspaces


class RationalSubspace:
    """A subspace of ``Q^r`` stored by its reduced row echelon basis.

    Two equal subspaces have identical bases, so ``==`` and ``hash`` are
    representation-level.
    """

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = ()):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in Q^{ambient}")
        self.ambient = ambient
        self.basis = rref(vectors, ambient)[0] if vectors else ()

    @classmethod
    def full(cls, ambient: int) -> RationalSubspace:
        return cls(ambient, [unit(ambient, i) for i in range(ambient)])

    @classmethod
    def zero(cls, ambient: int) -> RationalSubspace:
        return cls(ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def is_zero(self) -> bool:
        return self.dim == 0

    def _check(self, other: RationalSubspace):
        if self.ambient != other.ambient:
            raise DimensionMismatch(
                f"subspaces of Q^{self.ambient} and Q^{other.ambient}"
            )

    def __eq__(self, other):
        if not isinstance(other, RationalSubspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in b) + ")" for b in self.basis)
        return f"RationalSubspace({self.ambient}, [{rows}])"

    def __contains__(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise DimensionMismatch(f"vector of length {len(v)} in Q^{self.ambient}")
        if all(x == 0 for x in v):
            return True
        return rank(list(self.basis) + [tuple(v)]) == self.dim

    def __le__(self, other: RationalSubspace) -> bool:
        self._check(other)
        return all(b in other for b in self.basis)

    def __add__(self, other: RationalSubspace) -> RationalSubspace:
        self._check(other)
        return RationalSubspace(self.ambient, self.basis + other.basis)

    def __and__(self, other: RationalSubspace) -> RationalSubspace:
        self._check(other)
        if self.is_full():
            return other
        if other.is_full():
            return self
        if self.is_zero() or other.is_zero():
            return RationalSubspace.zero(self.ambient)
        perp = self.orthogonal().basis + other.orthogonal().basis
        return RationalSubspace(self.ambient, nullspace(perp, self.ambient))

    def orthogonal(self) -> RationalSubspace:
        """Orthogonal complement for the standard pairing."""
        return RationalSubspace(self.ambient, nullspace(self.basis, self.ambient))

    def complement_in(self, sub: RationalSubspace) -> RationalSubspace:
        """A complement of ``self ∩ sub`` inside ``self``.

        Canonical: greedily keeps the basis rows of ``self`` that are
        independent of what has been taken so far.
        """
        self._check(sub)
        inner = self & sub
        taken = list(inner.basis)
        chosen = []
        for b in self.basis:
            if rank(taken + [b]) > len(taken):
                taken.append(b)
                chosen.append(b)
        return RationalSubspace(self.ambient, chosen)

    def image(self, matrix: Sequence[Sequence]) -> RationalSubspace:
        """Image under the linear map ``x -> matrix @ x``."""
        out = [
            vec(sum(Fraction(m) * x for m, x in zip(row, b)) for row in matrix)
            for b in self.basis
        ]
        return RationalSubspace(len(matrix), out)

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of ``v`` in the stored basis."""
        cols = [[b[i] for b in self.basis] for i in range(self.ambient)]
        sol = solve_linear(cols, v) if self.basis else None
        if sol is None:
            raise DimensionMismatch("vector is not in the subspace")
        return sol


def subspace_meet(subspaces: Sequence[RationalSubspace]) -> RationalSubspace:
    if not subspaces:
        raise DimensionMismatch("meet of an empty family has no ambient space")
    return reduce(lambda a, b: a & b, subspaces)


def subspace_sum(subspaces: Sequence[RationalSubspace], ambient: int | None = None):
    if not subspaces:
        if ambient is None:
            raise DimensionMismatch("sum of an empty family has no ambient space")
        return RationalSubspace.zero(ambient)
    return reduce(lambda a, b: a + b, subspaces)


def span(vectors: Iterable[Sequence], ambient: int) -> RationalSubspace:
    return RationalSubspace(ambient, vectors)


# ---------------------------------------------------------------------------
# Characters


def solve_character(rays: Sequence[Sequence[int]], jumps: Sequence[int]) -> Vector:
    """The character ``u`` with ``<u, v_i> = jumps[i]`` for every ray.

    Raises:
        RaysNotSpanning: the rays do not span ``N_Q``.
        Inconsistent: no rational solution exists.
        NonIntegral: the solution is not a lattice point of ``M``.
    """
    if len(rays) != len(jumps):
        raise RankMismatch("one jump per ray is required")
    n = len(rays[0])
    if rank(rays) < n:
        raise RaysNotSpanning(f"rays span less than Q^{n}")
    u = solve_linear(rays, jumps)
    if u is None:
        raise Inconsistent(f"no character pairs to {list(jumps)}")
    if not is_integral(u):
        raise NonIntegral(f"solution {u} is not in M", value=u)
    return u


# ---------------------------------------------------------------------------
# Cones


def cone_h_rep(gens: Sequence[Sequence[int]], n: int):
    """Equations and facet inequalities of ``cone(gens)`` in ``Q^n``.

    Returns ``(equations, inequalities)`` as primitive integer vectors with
    ``cone = {x : <e,x> = 0 for e in equations, <h,x> >= 0 for h in inequalities}``.
    Facets are found by brute force over ``(d-1)``-subsets of generators.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    d = rank(gens) if gens else 0
    equations = [integer_primitive(e) for e in nullspace(gens, n)] if gens else [
        unit(n, i) for i in range(n)
    ]
    if d == 0:
        return tuple(equations), ()
    ineqs = []
    seen = set()
    for subset in combinations(range(len(gens)), d - 1):
        rows = [gens[i] for i in subset] + list(equations)
        h = cross(rows)
        if not any(h):
            continue
        vals = [dot(h, g) for g in gens]
        if all(x >= 0 for x in vals):
            pass
        elif all(x <= 0 for x in vals):
            h = neg(h)
        else:
            continue
        h = primitive_vector(h)
        if h not in seen:
            seen.add(h)
            ineqs.append(h)
    return tuple(equations), tuple(sorted(ineqs))


class Cone:
    """A rational polyhedral cone given by primitive generators.

    Redundant generators (those lying on no extreme ray, and duplicates) are
    dropped at construction; the retained generators keep input order.
    """

    def __init__(self, generators: Sequence[Sequence[int]], ambient: int | None = None):
        gens = []
        for g in generators:
            p = primitive_vector(g)
            if p not in gens:
                gens.append(p)
        if ambient is None:
            if not gens:
                raise RankMismatch("ambient rank is required for the zero cone")
            ambient = len(gens[0])
        for g in gens:
            if len(g) != ambient:
                raise RankMismatch(f"generator {g} not in Z^{ambient}")
        self.ambient = ambient
        eqs, ineqs = cone_h_rep(gens, ambient)
        if ineqs and len(gens) > 1:
            kept = []
            for g in gens:
                tight = [h for h in ineqs if dot(h, g) == 0]
                if rank(list(eqs) + tight) == ambient - 1:
                    kept.append(g)
            if kept:
                gens = kept
        self.generators = tuple(gens)
        self.equations = eqs
        self.inequalities = ineqs

    @property
    def dim(self) -> int:
        return self.ambient - len(self.equations)

    def __repr__(self):
        return f"Cone({list(self.generators)})"

    def __eq__(self, other):
        return isinstance(other, Cone) and set(self.generators) == set(other.generators)

    def __hash__(self):
        return hash(frozenset(self.generators))

    def contains(self, x: Sequence, mode: str = "primal") -> bool:
        if len(x) != self.ambient:
            raise RankMismatch(f"point of length {len(x)} vs cone in rank {self.ambient}")
        if mode == "dual":
            return all(dot(x, g) >= 0 for g in self.generators)
        if any(dot(e, x) != 0 for e in self.equations):
            return False
        if mode == "primal":
            return all(dot(h, x) >= 0 for h in self.inequalities)
        if mode == "relative-interior":
            return all(dot(h, x) > 0 for h in self.inequalities)
        raise ValueError(f"unknown containment mode {mode!r}")

    def is_smooth(self) -> bool:
        """Generators form part of a basis of the lattice."""
        k = len(self.generators)
        if rank(self.generators) != k:
            return False
        if k == self.ambient:
            return abs(det(self.generators)) == 1
        # gcd of maximal minors equals one
        g = 0
        for cols in combinations(range(self.ambient), k):
            g = gcd(g, abs(int(det([[r[c] for c in cols] for r in self.generators]))))
        return g == 1


def cone_contains(c: Cone, x: Sequence, mode: str = "primal") -> bool:
    return c.contains(x, mode)


def h_cone_extreme_rays(equations, inequalities, n: int) -> list[Vector]:
    """Extreme rays of a pointed cone in H-representation (brute force)."""
    equations = [tuple(e) for e in equations]
    inequalities = [tuple(h) for h in inequalities]
    d = n - rank(equations) if equations else n
    rays = set()
    if d <= 0:
        return []
    for subset in combinations(inequalities, d - 1):
        rows = equations + list(subset)
        ns = nullspace(rows, n)
        if len(ns) != 1:
            continue
        r = integer_primitive(ns[0])
        for cand in (r, neg(r)):
            if all(dot(h, cand) >= 0 for h in inequalities):
                rays.add(cand)
    return sorted(rays)
