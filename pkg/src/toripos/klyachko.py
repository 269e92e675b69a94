"""Toric vector bundles as Klyachko filtration data.

A bundle of rank ``r`` is a vector space ``E = Q^r`` with one decreasing
filtration ``E^rho(i)`` per ray.  It is valid when every maximal cone
``sigma`` admits a grading ``E = ⊕_u E_u`` with
``E^rho(i) = ⊕_{<u, v_rho> >= i} E_u`` for the rays of ``sigma``; that
grading is computed (and verified) by :func:`decompose_over_cone`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import (
    InvalidKlyachkoData,
    MalformedInput,
    NonIntegral,
    NotARefinement,
    NotASection,
    PointOutsideSupport,
    RankMismatch,
)
from .fan import Fan, LexPoint
from .geometry import (
    RationalSubspace,
    dot,
    rank,
    solve_character,
    solve_linear,
    span,
    subspace_sum,
    vec,
    vsum,
)
from .tdivisor import TCartierDivisor


class Filtration:
    """Decreasing integer filtration of ``Q^r`` stored by its jumps.

    ``jumps`` is a list of ``(threshold, subspace)``; ``E(i)`` is the
    subspace of the smallest threshold ``>= i`` and zero above the largest.
    The subspace at the smallest threshold must be the whole space.
    """

    __slots__ = ("rank", "jumps")

    def __init__(self, rank: int, jumps: Iterable):
        items = []
        for t, sub in jumps:
            if not isinstance(sub, RationalSubspace):
                sub = RationalSubspace(rank, sub)
            if sub.ambient != rank:
                raise MalformedInput(f"subspace of Q^{sub.ambient} in a rank {rank} filtration")
            if Fraction(t).denominator != 1:
                raise MalformedInput(f"threshold {t} is not an integer")
            items.append((int(t), sub))
        items.sort(key=lambda x: x[0])
        if len({t for t, _ in items}) != len(items):
            raise MalformedInput("repeated threshold in filtration")
        for (_, a), (_, b) in zip(items, items[1:]):
            if not b <= a:
                raise MalformedInput("filtration is not decreasing")
        items = [(t, s) for t, s in items if not s.is_zero()]
        # keep only the last threshold of each run of equal subspaces
        norm = [(t, s) for k, (t, s) in enumerate(items) if k + 1 == len(items) or items[k + 1][1] != s]
        if rank > 0 and (not norm or not norm[0][1].is_full()):
            raise MalformedInput("filtration must start with the whole space")
        self.rank = rank
        self.jumps = tuple(norm)

    def __eq__(self, other):
        return isinstance(other, Filtration) and self.rank == other.rank and self.jumps == other.jumps

    def __hash__(self):
        return hash((self.rank, self.jumps))

    def __repr__(self):
        parts = ", ".join(f"{t}: dim {s.dim}" for t, s in self.jumps)
        return f"Filtration(rank={self.rank}, {{{parts}}})"

    @property
    def thresholds(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.jumps)

    def at(self, i) -> RationalSubspace:
        for t, s in self.jumps:
            if i <= t:
                return s
        return RationalSubspace.zero(self.rank)

    def shifted(self, j: int) -> Filtration:
        return Filtration(self.rank, [(t + j, s) for t, s in self.jumps])

    def scaled(self, q: int) -> Filtration:
        return Filtration(self.rank, [(q * t, s) for t, s in self.jumps])

    def transformed(self, g: Sequence[Sequence]) -> Filtration:
        return Filtration(self.rank, [(t, s.image(g)) for t, s in self.jumps])


@dataclass(frozen=True)
class ConeDecomposition:
    """Grading ``E = ⊕_u L_u`` over one maximal cone; ``parts`` sorted by ``u``."""

    cone: int
    parts: tuple

    def characters(self) -> list[tuple]:
        """The character multiset, each ``u`` repeated ``dim L_u`` times."""
        return [u for u, s in self.parts for _ in range(s.dim)]

    def part(self, u) -> RationalSubspace | None:
        for w, s in self.parts:
            if w == tuple(u):
                return s
        return None

    def filtration_at(self, key, t) -> RationalSubspace:
        """``⊕ L_u`` over the characters with ``key(u) >= t``."""
        subs = [s for u, s in self.parts if key(u) >= t]
        return subspace_sum(subs, self.parts[0][1].ambient)


def _independent_rays(rays: Sequence[tuple], n: int) -> list[int]:
    chosen = []
    for k, r in enumerate(rays):
        if rank([rays[j] for j in chosen] + [r]) > len(chosen):
            chosen.append(k)
        if len(chosen) == n:
            break
    return chosen


def _linear_extension(chars: list, gens: list, rng: random.Random | None) -> list:
    """A linear extension of ``u >= u'  iff  u - u' in sigma^dual``, largest first."""
    weight = vsum(gens, len(gens[0]))
    if rng is None:
        return sorted(chars, key=lambda u: (-dot(u, weight), u))

    def greater(a, b):
        return a != b and all(dot(a, g) >= dot(b, g) for g in gens)

    remaining = list(chars)
    out = []
    while remaining:
        maximal = [u for u in remaining if not any(greater(w, u) for w in remaining)]
        pick = rng.choice(sorted(maximal))
        out.append(pick)
        remaining.remove(pick)
    return out


def decompose_over_cone(bundle: ToricVectorBundle, sigma: int, rng: random.Random | None = None,
                        filtrations: Sequence[Filtration] | None = None) -> ConeDecomposition:
    """Grading of ``E`` adapted to the filtrations of the rays of ``sigma``.

    Candidate characters are solved from the jump thresholds of ``n``
    independent rays and kept when their pairings with the other rays are
    jumps too.  Walking down a linear extension of the cone order, each
    ``L_u`` is a complement of the span accumulated so far inside
    ``E^sigma_u = ⋂ E^rho(<u, v_rho>)``.  The result is verified against
    every filtration of ``sigma``; failure means the data defines no bundle.

    Args:
        rng: when given, a random linear extension is used (the result must
            not depend on it).
    """
    fan = bundle.fan
    filts = bundle.filtrations if filtrations is None else filtrations
    r = bundle.rank
    ray_idx = fan.cones[sigma]
    gens = [fan.rays[k] for k in ray_idx]
    base = _independent_rays(gens, fan.rank)
    others = [k for k in range(len(gens)) if k not in base]
    jumpsets = [set(filts[k].thresholds) for k in ray_idx]

    candidates = set()
    for combo in product(*(sorted(jumpsets[k]) for k in base)):
        try:
            u = solve_character([gens[k] for k in base], combo)
        except NonIntegral:
            continue
        if all(dot(u, gens[k]) in jumpsets[k] for k in others):
            candidates.add(u)

    def e_sigma(u):
        out = RationalSubspace.full(r)
        for k, g in zip(ray_idx, gens):
            out = out & filts[k].at(dot(u, g))
        return out

    acc = RationalSubspace.zero(r)
    parts = []
    for u in _linear_extension(sorted(candidates), gens, rng):
        piece = e_sigma(u).complement_in(acc)
        if piece.dim:
            parts.append((u, piece))
            acc = acc + piece
    if sum(s.dim for _, s in parts) != r or not acc.is_full():
        raise InvalidKlyachkoData(f"filtrations on cone {sigma} admit no adapted grading")
    parts.sort(key=lambda p: p[0])
    decomp = ConeDecomposition(sigma, tuple(parts))

    for k, g in zip(ray_idx, gens):
        checkpoints = set()
        for t in filts[k].thresholds:
            checkpoints.update((t, t + 1))
        for u, _ in parts:
            checkpoints.update((dot(u, g), dot(u, g) + 1))
        for i in checkpoints:
            if decomp.filtration_at(lambda u, g=g: dot(u, g), i) != filts[k].at(i):
                raise InvalidKlyachkoData(
                    f"filtration of ray {k} is not compatible with the grading on cone {sigma}"
                )
    return decomp


class ToricVectorBundle:
    """Klyachko data on a fan, validated at construction."""

    def __init__(self, fan: Fan, rank: int, filtrations: Sequence[Filtration]):
        if len(filtrations) != len(fan.rays):
            raise MalformedInput(f"{len(filtrations)} filtrations for {len(fan.rays)} rays")
        for f in filtrations:
            if f.rank != rank:
                raise RankMismatch(f"filtration of rank {f.rank} in a rank {rank} bundle")
        self.fan = fan
        self.rank = rank
        self.filtrations = tuple(filtrations)
        self._decomps = tuple(
            decompose_over_cone(self, i) for i in range(fan.n_cones)
        )

    def __repr__(self):
        return f"ToricVectorBundle(rank={self.rank}, rays={len(self.fan.rays)})"

    def __eq__(self, other):
        return (
            isinstance(other, ToricVectorBundle)
            and self.fan == other.fan
            and self.rank == other.rank
            and self.filtrations == other.filtrations
        )

    def __hash__(self):
        return hash((self.fan, self.rank, self.filtrations))

    def decomposition(self, sigma: int) -> ConeDecomposition:
        return self._decomps[sigma]

    def e_sigma(self, sigma: int, u) -> RationalSubspace:
        """``E^sigma_u``: isotypical sections over ``U_sigma`` seen in ``E``."""
        out = RationalSubspace.full(self.rank)
        for k in self.fan.cones[sigma]:
            out = out & self.filtrations[k].at(dot(u, self.fan.rays[k]))
        return out


def validate_bundle(bundle: ToricVectorBundle) -> list[ConeDecomposition]:
    """Re-run the per-cone decompositions; raises ``InvalidKlyachkoData``."""
    return [decompose_over_cone(bundle, i) for i in range(bundle.fan.n_cones)]


def _lex_in_cone(fan: Fan, sigma: int, p: LexPoint) -> bool:
    c = fan.cone(sigma)
    return all(p.pair(h) >= (0,) * (1 + len(p.perturbation)) for h in c.inequalities)


def cone_containing(fan: Fan, v) -> int:
    if isinstance(v, LexPoint):
        for i in range(fan.n_cones):
            if fan.cone(i).contains(v.base) and _lex_in_cone(fan, i, v):
                return i
    else:
        found = fan.cones_containing(v)
        if found:
            return found[0]
    raise PointOutsideSupport(f"{v} lies in no maximal cone")


def interpolate(bundle: ToricVectorBundle, v, t) -> RationalSubspace:
    """``E^v(t) = ⊕_{<u, v> >= t} L_u`` from the grading of a cone containing ``v``.

    ``v`` may be a lattice point (then ``t`` is rational) or a
    :class:`LexPoint` (then ``t`` is a lexicographic tuple).
    """
    sigma = cone_containing(bundle.fan, v)
    key = v.pair if isinstance(v, LexPoint) else (lambda u: dot(u, v))
    return bundle.decomposition(sigma).filtration_at(key, t)


def interpolated_filtration(bundle: ToricVectorBundle, v: Sequence[int]) -> Filtration:
    """The integer filtration ``i -> E^v(i)`` for a lattice point ``v``."""
    sigma = cone_containing(bundle.fan, v)
    dec = bundle.decomposition(sigma)
    values = sorted({dot(u, v) for u, _ in dec.parts})
    return Filtration(
        bundle.rank,
        [(t, dec.filtration_at(lambda u: dot(u, v), t)) for t in values],
    )


# ---------------------------------------------------------------------------
# Constructors and operations


def trivial_bundle(fan: Fan, r: int) -> ToricVectorBundle:
    full = RationalSubspace.full(r)
    return ToricVectorBundle(fan, r, [Filtration(r, [(0, full)]) for _ in fan.rays])


def line_bundle(d: TCartierDivisor) -> ToricVectorBundle:
    from .tdivisor import line_bundle_to_klyachko

    return line_bundle_to_klyachko(d)


def twist_by_line_bundle(bundle: ToricVectorBundle, d: TCartierDivisor) -> ToricVectorBundle:
    """``E ⊗ L``: ``(E ⊗ L)^rho(i) = E^rho(i - j_rho)`` with ``j_rho`` the jump of ``L``."""
    if d.fan != bundle.fan:
        raise RankMismatch("divisor and bundle live on different fans")
    if d.rational:
        raise NonIntegral("twisting needs an integral divisor")
    jumps = d.ray_jumps()
    return ToricVectorBundle(
        bundle.fan,
        bundle.rank,
        [f.shifted(j) for f, j in zip(bundle.filtrations, jumps)],
    )


def _embed(sub: RationalSubspace, offset: int, total: int) -> list[tuple]:
    return [(0,) * offset + b + (0,) * (total - offset - sub.ambient) for b in sub.basis]


def direct_sum(b1: ToricVectorBundle, b2: ToricVectorBundle) -> ToricVectorBundle:
    if b1.fan != b2.fan:
        raise RankMismatch("bundles live on different fans")
    r = b1.rank + b2.rank
    filts = []
    for f1, f2 in zip(b1.filtrations, b2.filtrations):
        ts = sorted(set(f1.thresholds) | set(f2.thresholds))
        filts.append(
            Filtration(
                r,
                [(t, span(_embed(f1.at(t), 0, r) + _embed(f2.at(t), b1.rank, r), r)) for t in ts],
            )
        )
    return ToricVectorBundle(b1.fan, r, filts)


def direct_sum_of_line_bundles(divisors: Sequence[TCartierDivisor]) -> ToricVectorBundle:
    out = line_bundle(divisors[0])
    for d in divisors[1:]:
        out = direct_sum(out, line_bundle(d))
    return out


def determinant(bundle: ToricVectorBundle) -> TCartierDivisor:
    """Local character of ``det E`` on each cone is the sum of its grading characters."""
    n = bundle.fan.rank
    chars = [
        vsum(bundle.decomposition(i).characters(), n) for i in range(bundle.fan.n_cones)
    ]
    return TCartierDivisor(bundle.fan, chars)


def frobenius_pullback(bundle: ToricVectorBundle, q: int) -> ToricVectorBundle:
    """Pullback along multiplication by ``q`` on ``N``: thresholds scale by ``q``."""
    if q < 1:
        raise ValueError("Frobenius exponent must be positive")
    return ToricVectorBundle(bundle.fan, bundle.rank, [f.scaled(q) for f in bundle.filtrations])


def change_basis(bundle: ToricVectorBundle, g: Sequence[Sequence]) -> ToricVectorBundle:
    """Apply an invertible matrix to ``E`` (an isomorphic bundle)."""
    if rank(g) != bundle.rank:
        raise ValueError("basis change must be invertible")
    return ToricVectorBundle(bundle.fan, bundle.rank, [f.transformed(g) for f in bundle.filtrations])


def subdivision_pullback(bundle: ToricVectorBundle, refined: Fan) -> ToricVectorBundle:
    """Pullback to a refinement: new rays get the interpolated filtration."""
    old = bundle.fan
    if refined.rank != old.rank:
        raise NotARefinement("fans of different rank")
    for i in range(refined.n_cones):
        rays = refined.cone_rays(i)
        if not any(all(c.contains(r) for r in rays) for c in old.cone_objects):
            raise NotARefinement(f"cone {i} of the refinement lies in no cone of the fan")
    filts = []
    for r in refined.rays:
        k = old.ray_index(r)
        filts.append(bundle.filtrations[k] if k is not None else interpolated_filtration(bundle, r))
    return ToricVectorBundle(refined, bundle.rank, filts)


def tangent_bundle_of(fan: Fan) -> ToricVectorBundle:
    """``E = N_Q``; ``E^rho(i)`` is ``E`` for ``i <= 0``, ``span(v_rho)`` at 1, zero above."""
    n = fan.rank
    full = RationalSubspace.full(n)
    return ToricVectorBundle(
        fan, n, [Filtration(n, [(0, full), (1, span([v], n))]) for v in fan.rays]
    )


def fiber_evaluation(bundle: ToricVectorBundle, sigma: int, u, s: Sequence) -> tuple:
    """Value at ``x_sigma`` of the ``chi^u``-isotypical section with identity value ``s``.

    The value is the component of ``s`` in ``L_u`` along the other summands
    of the grading of ``sigma`` (zero when ``u`` is not a character there).
    """
    u = vec(u)
    s = vec(s)
    if s not in bundle.e_sigma(sigma, u):
        raise NotASection(f"{s} is not in E^sigma_u for cone {sigma}, u={u}")
    dec = bundle.decomposition(sigma)
    cols = []
    owner = []
    for w, sub in dec.parts:
        for b in sub.basis:
            cols.append(b)
            owner.append(w == u)
    coeffs = solve_linear([[c[i] for c in cols] for i in range(bundle.rank)], s)
    out = [Fraction(0)] * bundle.rank
    for a, b, mine in zip(coeffs, cols, owner):
        if mine:
            out = [x + a * y for x, y in zip(out, b)]
    return vec(out)


def random_basis_change(r: int, rng: random.Random) -> list[list[int]]:
    """A random integer matrix of full rank."""
    while True:
        g = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(r)]
        if rank(g) == r:
            return g


__all__ = [
    "ConeDecomposition",
    "Filtration",
    "ToricVectorBundle",
    "change_basis",
    "decompose_over_cone",
    "determinant",
    "direct_sum",
    "direct_sum_of_line_bundles",
    "fiber_evaluation",
    "frobenius_pullback",
    "interpolate",
    "interpolated_filtration",
    "line_bundle",
    "random_basis_change",
    "subdivision_pullback",
    "tangent_bundle_of",
    "trivial_bundle",
    "twist_by_line_bundle",
    "validate_bundle",
]
