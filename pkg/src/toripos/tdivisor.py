"""T-Cartier divisors given by one local character per maximal cone.

A divisor ``D`` with local characters ``u_sigma`` restricts to
``div(chi^{u_sigma})`` on ``U_sigma``.  Its polytope of sections is
``{u : <u, v_rho> <= <u_sigma, v_rho>}``; for nef ``D`` this is the convex
hull of the ``u_sigma``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import IncompatibleLocalData, NonIntegral, NotFullDimensional, RankMismatch
from .fan import Fan, ValidationReport, Wall
from .geometry import RationalSubspace, add, dot, exact, is_integral, scale, solve_linear, sub, vec
from .polytope import LatticePolytope, h_polytope_lattice_points, normal_fan


class TCartierDivisor:
    """Local characters ``u_sigma`` (one per maximal cone) on a fan.

    Rational characters are allowed; ``rational`` is set when any entry is
    non-integral.  Wall compatibility is checked eagerly unless
    ``check=False``.
    """

    def __init__(self, fan: Fan, characters: Sequence[Sequence], check: bool = True):
        if len(characters) != fan.n_cones:
            raise IncompatibleLocalData(
                f"{len(characters)} characters for {fan.n_cones} maximal cones"
            )
        chars = tuple(vec(u) for u in characters)
        for u in chars:
            if len(u) != fan.rank:
                raise RankMismatch(f"character {u} not in M of rank {fan.rank}")
        self.fan = fan
        self.characters = chars
        self.rational = not all(is_integral(u) for u in chars)
        if check:
            report = validate_divisor(self)
            if not report.valid:
                raise IncompatibleLocalData("; ".join(report.failures))

    def __repr__(self):
        return f"TCartierDivisor({[list(u) for u in self.characters]})"

    def __eq__(self, other):
        return (
            isinstance(other, TCartierDivisor)
            and self.fan == other.fan
            and self.characters == other.characters
        )

    def __hash__(self):
        return hash((self.fan, self.characters))

    def __add__(self, other: TCartierDivisor) -> TCartierDivisor:
        _same_fan(self, other)
        return TCartierDivisor(
            self.fan, [add(a, b) for a, b in zip(self.characters, other.characters)], check=False
        )

    def __neg__(self) -> TCartierDivisor:
        return self.scaled(-1)

    def __sub__(self, other: TCartierDivisor) -> TCartierDivisor:
        return self + (-other)

    def __rmul__(self, q) -> TCartierDivisor:
        return self.scaled(q)

    def scaled(self, q) -> TCartierDivisor:
        return TCartierDivisor(self.fan, [scale(q, u) for u in self.characters], check=False)

    def ray_jump(self, ray: int):
        """``<u_sigma, v_rho>`` for any maximal cone ``sigma`` containing the ray."""
        for i, c in enumerate(self.fan.cones):
            if ray in c:
                return dot(self.characters[i], self.fan.rays[ray])
        raise IncompatibleLocalData(f"ray {ray} lies in no maximal cone")

    def ray_jumps(self) -> tuple:
        return tuple(self.ray_jump(k) for k in range(len(self.fan.rays)))

    def wall_degree(self, wall: Wall):
        return wall_degree(self, wall)

    def wall_degrees(self) -> list:
        return [wall_degree(self, w) for w in self.fan.walls]

    def is_nef(self) -> bool:
        return all(d >= 0 for d in self.wall_degrees())

    def is_ample(self) -> bool:
        return all(d > 0 for d in self.wall_degrees())


def _same_fan(a: TCartierDivisor, b: TCartierDivisor):
    if a.fan != b.fan:
        raise RankMismatch("divisors live on different fans")


def validate_divisor(d: TCartierDivisor) -> ValidationReport:
    """Check ``u_sigma - u_sigma'`` vanishes on every wall ``sigma ∩ sigma'``."""
    report = ValidationReport(valid=True)
    fan = d.fan
    for w in fan.walls:
        diff = sub(d.characters[w.sigma], d.characters[w.sigma_prime])
        bad = [k for k in w.rays if dot(diff, fan.rays[k]) != 0]
        if bad:
            report.valid = False
            report.failures.append(
                f"wall ({w.sigma},{w.sigma_prime}): characters disagree on rays {bad}"
            )
    return report


def wall_degree(d: TCartierDivisor, wall: Wall):
    """The ``m`` with ``u_sigma - u_sigma' = m * n_tau``."""
    diff = sub(d.characters[wall.sigma], d.characters[wall.sigma_prime])
    k = next(i for i, x in enumerate(wall.normal) if x != 0)
    return exact(Fraction(diff[k]) / wall.normal[k])


def section_data(d: TCartierDivisor) -> tuple[LatticePolytope | None, int]:
    """Polytope of sections and ``h^0``.

    The polytope returned is the convex hull of the lattice points of
    ``{u : <u, v_rho> <= jump_rho}``; it is ``None`` when there are none.
    """
    if d.rational:
        raise NonIntegral("sections need an integral divisor")
    fan = d.fan
    pts = h_polytope_lattice_points(list(fan.rays), list(d.ray_jumps()))
    if not pts:
        return None, 0
    return LatticePolytope(pts), len(pts)


def divisor_from_polytope(p: LatticePolytope) -> tuple[Fan, TCartierDivisor]:
    """Normal fan of ``p`` with the divisor whose local characters are its vertices."""
    if not p.is_full_dimensional():
        raise NotFullDimensional("divisor_from_polytope needs a full-dimensional polytope")
    fan, assignment = normal_fan(p)
    chars = [assignment[i] for i in range(fan.n_cones)]
    return fan, TCartierDivisor(fan, chars)


def divisor_on_fan(fan: Fan, p: LatticePolytope) -> TCartierDivisor:
    """Divisor on ``fan`` whose local character on each cone is the vertex of
    ``p`` maximizing an interior point of that cone.

    Requires the normal fan of ``p`` to be refined by ``fan``.
    """
    chars = []
    for i in range(fan.n_cones):
        w = tuple(sum(col) for col in zip(*fan.cone_rays(i)))
        best = p.support(w)
        winners = [v for v in p.vertices if dot(v, w) == best]
        if len(winners) != 1:
            raise IncompatibleLocalData(f"polytope is not compatible with cone {i}")
        chars.append(winners[0])
    return TCartierDivisor(fan, chars)


def trivial_divisor(fan: Fan) -> TCartierDivisor:
    return TCartierDivisor(fan, [(0,) * fan.rank] * fan.n_cones)


def divisor_from_ray_jumps(fan: Fan, jumps: Sequence) -> TCartierDivisor:
    """Divisor with ``<u_sigma, v_rho> = jumps[rho]`` (i.e. ``sum jumps[rho] D_rho``)."""
    chars = []
    for i in range(fan.n_cones):
        rows = fan.cone_rays(i)
        u = solve_linear(rows, [jumps[k] for k in fan.cones[i]])
        if u is None:
            raise IncompatibleLocalData(f"jumps are not linear on cone {i}")
        chars.append(u)
    return TCartierDivisor(fan, chars)


def line_bundle_to_klyachko(d: TCartierDivisor):
    """Rank-one Klyachko data: full up to the jump ``<u_sigma, v_rho>``, then zero."""
    from .klyachko import Filtration, ToricVectorBundle

    if d.rational:
        raise NonIntegral("only integral divisors define line bundles")
    full = RationalSubspace.full(1)
    filts = [Filtration(1, [(d.ray_jump(k), full)]) for k in range(len(d.fan.rays))]
    return ToricVectorBundle(d.fan, 1, filts)


def divisor_arith(op: str, *args):
    """Characterwise arithmetic: ``scale`` (q, d), ``sum`` (d1, d2), ``negate`` (d)."""
    if op == "scale":
        q, d = args
        return d.scaled(q)
    if op == "sum":
        return args[0] + args[1]
    if op == "negate":
        return -args[0]
    raise ValueError(f"unknown divisor operation {op!r}")
