"""Complete fans, walls, star subdivisions and lexicographic evaluation points."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .errors import IncompleteSupport, NotAFan, NotFullDimensional, NotSmoothCone, RankMismatch
from .geometry import (
    Cone,
    dot,
    h_cone_extreme_rays,
    integer_primitive,
    nullspace,
    primitive_vector,
    rank,
    unit,
    vsum,
)

COMPLETENESS_SAMPLES = 1000
COMPLETENESS_SEED = 20090817


class Fan:
    """A fan given by primitive rays and maximal cones (lists of ray indices).

    Every maximal cone must be full-dimensional.  Construction only checks
    shapes; call :func:`validate_fan` for the fan axioms.
    """

    def __init__(self, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]]):
        rays = [tuple(int(x) for x in r) for r in rays]
        if not rays:
            raise NotAFan("a fan needs at least one ray")
        self.rank = len(rays[0])
        for r in rays:
            if len(r) != self.rank:
                raise RankMismatch(f"ray {r} not in Z^{self.rank}")
            if primitive_vector(r) != r:
                raise NotAFan(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise NotAFan("duplicate rays")
        self.rays = tuple(rays)
        self.cones = tuple(tuple(sorted(set(int(i) for i in c))) for c in cones)
        for c in self.cones:
            if any(i < 0 or i >= len(rays) for i in c):
                raise NotAFan(f"cone {c} references a missing ray")
            if rank([rays[i] for i in c]) != self.rank:
                raise NotFullDimensional(f"maximal cone {list(c)} is not full-dimensional")

    def __repr__(self):
        return f"Fan(rays={list(self.rays)}, cones={[list(c) for c in self.cones]})"

    def __eq__(self, other):
        return isinstance(other, Fan) and self.rays == other.rays and self.cones == other.cones

    def __hash__(self):
        return hash((self.rays, self.cones))

    @property
    def n_cones(self) -> int:
        return len(self.cones)

    def cone_rays(self, i: int) -> list[tuple]:
        return [self.rays[j] for j in self.cones[i]]

    @cached_property
    def cone_objects(self) -> tuple[Cone, ...]:
        return tuple(Cone(self.cone_rays(i), self.rank) for i in range(self.n_cones))

    def cone(self, i: int) -> Cone:
        return self.cone_objects[i]

    def ray_index(self, v: Sequence[int]) -> int | None:
        v = tuple(v)
        return self.rays.index(v) if v in self.rays else None

    def cones_containing(self, v: Sequence, mode: str = "primal") -> list[int]:
        return [i for i, c in enumerate(self.cone_objects) if c.contains(v, mode)]

    def find_cone(self, rays: Sequence[Sequence[int]]) -> int | None:
        """Index of the maximal cone whose rays are exactly ``rays``."""
        idx = set()
        for r in rays:
            j = self.ray_index(r)
            if j is None:
                return None
            idx.add(j)
        key = tuple(sorted(idx))
        return self.cones.index(key) if key in self.cones else None

    def is_smooth(self) -> bool:
        return all(c.is_smooth() and len(c.generators) == self.rank for c in self.cone_objects)

    @cached_property
    def walls(self) -> tuple[Wall, ...]:
        return tuple(walls(self))


@dataclass(frozen=True)
class Wall:
    """Codimension-one cone ``tau`` shared by maximal cones ``sigma < sigma_prime``.

    ``normal`` is the primitive character vanishing on ``tau`` and positive
    on ``sigma``.
    """

    sigma: int
    sigma_prime: int
    rays: tuple[int, ...]
    normal: tuple


@dataclass
class ValidationReport:
    valid: bool
    complete: bool | None = None
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "complete": self.complete,
            "failures": list(self.failures),
            "notes": list(self.notes),
        }


def _intersection_is_face(fan: Fan, i: int, j: int) -> str | None:
    a, b = fan.cone(i), fan.cone(j)
    shared = sorted(set(fan.cones[i]) & set(fan.cones[j]))
    shared_rays = [fan.rays[k] for k in shared]
    for c in (a, b):
        # the shared rays must span a face: some valid inequality is tight on
        # exactly those generators
        tight_all = [h for h in c.inequalities if all(dot(h, r) == 0 for r in shared_rays)]
        on_face = [g for g in c.generators if all(dot(h, g) == 0 for h in tight_all)]
        if set(on_face) != set(shared_rays):
            return f"rays {shared} do not span a common face of cones {i} and {j}"
    rays = h_cone_extreme_rays(
        list(a.equations) + list(b.equations),
        list(a.inequalities) + list(b.inequalities),
        fan.rank,
    )
    if shared_rays:
        face = Cone(shared_rays, fan.rank)
        if any(not face.contains(r) for r in rays):
            return f"cones {i} and {j} overlap beyond their common face"
    elif rays:
        return f"cones {i} and {j} overlap but share no rays"
    return None


def _sample_directions(n: int) -> list[tuple]:
    dirs = []
    for i in range(n):
        dirs.append(unit(n, i))
        dirs.append(tuple(-x for x in unit(n, i)))
    base = list(dirs)
    for a, b in combinations(base, 2):
        s = tuple(x + y for x, y in zip(a, b))
        if any(s):
            dirs.append(s)
    rng = random.Random(COMPLETENESS_SEED)
    while len(dirs) < 2 * n + len(base) * (len(base) - 1) // 2 + COMPLETENESS_SAMPLES:
        d = tuple(rng.randint(-7, 7) for _ in range(n))
        if any(d):
            dirs.append(d)
    return dirs


def validate_fan(fan: Fan, assert_complete: bool = True, raise_on_error: bool = False):
    """Check the fan axioms and, optionally, completeness.

    Completeness is judged by two tests: every facet of every maximal cone is
    shared with exactly one other maximal cone, and a deterministic sample of
    directions (unit vectors, their pairwise sums, and a fixed pseudo-random
    batch) is covered.  The sampling is heuristic; the report says so.
    """
    report = ValidationReport(valid=True)
    for i, j in combinations(range(fan.n_cones), 2):
        msg = _intersection_is_face(fan, i, j)
        if msg:
            report.valid = False
            report.failures.append(msg)
    if raise_on_error and not report.valid:
        raise NotAFan("; ".join(report.failures))
    if not assert_complete:
        return report

    complete = True
    for i, c in enumerate(fan.cone_objects):
        for h in c.inequalities:
            facet = tuple(sorted(k for k in fan.cones[i] if dot(h, fan.rays[k]) == 0))
            others = [
                j
                for j in range(fan.n_cones)
                if j != i and set(facet) <= set(fan.cones[j])
                and rank([fan.rays[k] for k in facet]) == fan.rank - 1
            ]
            if len(others) != 1:
                complete = False
                report.failures.append(
                    f"facet {list(facet)} of cone {i} lies in {len(others) + 1} maximal cones"
                )
    for d in _sample_directions(fan.rank):
        if not any(c.contains(d) for c in fan.cone_objects):
            complete = False
            report.failures.append(f"direction {list(d)} is not covered")
            break
    report.complete = complete
    if complete:
        report.notes.append("heuristically complete (facet pairing and direction sampling)")
    if raise_on_error and not complete:
        raise IncompleteSupport("; ".join(report.failures))
    return report


def walls(fan: Fan) -> list[Wall]:
    """One wall per codimension-one cone shared by two maximal cones.

    Walls are ordered by ``(sigma, sigma_prime)``; the normal is positive on
    the lower-index cone.
    """
    out = []
    for i, j in combinations(range(fan.n_cones), 2):
        shared = tuple(sorted(set(fan.cones[i]) & set(fan.cones[j])))
        shared_rays = [fan.rays[k] for k in shared]
        # on P^1 the wall is the origin and the two cones share no rays
        if (not shared and fan.rank > 1) or rank(shared_rays) != fan.rank - 1:
            continue
        ns = nullspace(shared_rays, fan.rank)
        normal = integer_primitive(ns[0])
        side = next(dot(normal, fan.rays[k]) for k in fan.cones[i] if k not in shared)
        if side < 0:
            normal = tuple(-x for x in normal)
        out.append(Wall(i, j, shared, normal))
    return out


def star_subdivide(fan: Fan, sigma: int) -> tuple[Fan, int]:
    """Star subdivision of a smooth maximal cone at the sum of its generators.

    The cone ``sigma`` is removed; the ``n`` new cones are appended after the
    remaining cones, and the new ray is appended after the old rays.
    """
    gens = fan.cones[sigma]
    c = fan.cone(sigma)
    if len(gens) != fan.rank or not c.is_smooth():
        raise NotSmoothCone(f"cone {sigma} is not smooth of full dimension")
    v0 = vsum(fan.cone_rays(sigma), fan.rank)
    rays = list(fan.rays) + [v0]
    new = len(rays) - 1
    cones = [fan.cones[k] for k in range(fan.n_cones) if k != sigma]
    for j in gens:
        cones.append(tuple(sorted([k for k in gens if k != j] + [new])))
    return Fan(rays, cones), new


@dataclass(frozen=True)
class LexPoint:
    """An infinitesimally perturbed point ``base + e*p1 + e^2*p2 + ...``.

    Pairing a character with it yields a tuple compared lexicographically.
    """

    base: tuple
    perturbation: tuple[tuple, ...]

    def pair(self, u) -> tuple:
        return (dot(u, self.base),) + tuple(dot(u, d) for d in self.perturbation)


def lex_point(fan: Fan, wall: Wall, side: str = "first") -> LexPoint:
    """A point of the chamber adjacent to ``tau`` on the chosen side.

    Base is the sum of the generators of ``tau``; the first perturbations run
    through the generators of ``tau`` (so the base is generic inside ``tau``
    for every hyperplane arrangement), then the sum of the chosen cone's
    generators, then the standard basis to make the pairing injective on M.
    """
    n = fan.rank
    cone = wall.sigma if side == "first" else wall.sigma_prime
    tau_rays = [fan.rays[k] for k in wall.rays]
    base = vsum(tau_rays, n)
    d = vsum(fan.cone_rays(cone), n)
    pert = tuple(tau_rays) + (d,) + tuple(unit(n, i) for i in range(n))
    return LexPoint(base, pert)


# ---------------------------------------------------------------------------
# Standard fans


def projective_space(n: int) -> Fan:
    """Fan of P^n: rays e_1..e_n and -(e_1+...+e_n)."""
    rays = [unit(n, i) for i in range(n)] + [tuple(-1 for _ in range(n))]
    cones = [tuple(k for k in range(n + 1) if k != j) for j in range(n, -1, -1)]
    return Fan(rays, cones)


def product_of_projective_lines(k: int = 2) -> Fan:
    """Fan of (P^1)^k."""
    rays = []
    for i in range(k):
        rays.append(unit(k, i))
        rays.append(tuple(-x for x in unit(k, i)))
    cones = []
    for signs in range(2 ** k):
        cones.append(tuple(2 * i + ((signs >> (k - 1 - i)) & 1) for i in range(k)))
    return Fan(rays, cones)


def hirzebruch(a: int) -> Fan:
    """Fan of the Hirzebruch surface F_a."""
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    cones = [(0, 1), (1, 2), (2, 3), (0, 3)]
    return Fan(rays, cones)
