"""Splitting of toric bundles on invariant curves and the positivity built on it.

Everything here reduces to the restriction of a bundle to the curve
``V(tau)`` of each wall, which splits as a sum of line bundles
``L_{u,u'}``; the integer ``m`` with ``u - u' = m * n_tau`` is the degree.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InternalInconsistency,
    NotNef,
    NotSmooth,
    NotSmoothCone,
    RankMismatch,
    TheoremViolation,
)
from .fan import Fan, Wall, lex_point, star_subdivide
from .geometry import RationalSubspace, dot, exact, sub
from .klyachko import ToricVectorBundle, subdivision_pullback, twist_by_line_bundle
from .tdivisor import TCartierDivisor, divisor_from_ray_jumps, validate_divisor, wall_degree


def thread_count() -> int:
    """Worker cap from ``TORIPOS_THREADS`` (default 1)."""
    raw = os.environ.get("TORIPOS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class CurveSplitting:
    """Entries ``(u, u', multiplicity, degree)`` sorted by ``(degree, u, u')``."""

    wall: Wall
    entries: tuple

    def degrees(self) -> list:
        """The degree multiset, ascending."""
        return sorted(d for _, _, m, d in self.entries for _ in range(m))

    @property
    def rank(self) -> int:
        return sum(m for _, _, m, _ in self.entries)


def _chain(bundle: ToricVectorBundle, cone: int, key):
    """Parts of the grading of ``cone`` ordered by ``key`` descending, with prefix sums."""
    parts = sorted(bundle.decomposition(cone).parts, key=lambda p: key(p[0]), reverse=True)
    r = bundle.rank
    geq = []
    acc = RationalSubspace.zero(r)
    for _, s in parts:
        acc = acc + s
        geq.append(acc)
    gt = [RationalSubspace.zero(r)] + geq[:-1]
    return [u for u, _ in parts], geq, gt


def restrict_to_wall(bundle: ToricVectorBundle, wall: Wall) -> CurveSplitting:
    """Splitting type of ``E|_{V(tau)}``.

    The gradings of the two adjacent cones give chains ``F`` and ``G``,
    ordered by pairing with points just inside each chamber next to
    ``tau``.  The number of summands ``L_{u,u'}`` is read off by
    inclusion-exclusion on ``dim(F_{>=u} ∩ G_{>=u'})``.
    """
    fan = bundle.fan
    p = lex_point(fan, wall, "first")
    q = lex_point(fan, wall, "second")
    us, f_geq, f_gt = _chain(bundle, wall.sigma, p.pair)
    vs, g_geq, g_gt = _chain(bundle, wall.sigma_prime, q.pair)
    entries = []
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            m = (
                (f_geq[i] & g_geq[j]).dim
                - (f_gt[i] & g_geq[j]).dim
                - (f_geq[i] & g_gt[j]).dim
                + (f_gt[i] & g_gt[j]).dim
            )
            if m < 0:
                raise InternalInconsistency(f"negative multiplicity on wall {wall}")
            if m == 0:
                continue
            diff = sub(u, v)
            if any(dot(diff, fan.rays[k]) != 0 for k in wall.rays):
                raise InternalInconsistency(f"{u} - {v} does not vanish on the wall")
            k = next(i for i, x in enumerate(wall.normal) if x != 0)
            deg = exact(Fraction(diff[k]) / wall.normal[k])
            if tuple(deg * x for x in wall.normal) != diff:
                raise InternalInconsistency(f"{u} - {v} is not a multiple of the wall normal")
            entries.append((u, v, m, deg))
    if sum(e[2] for e in entries) != bundle.rank:
        raise InternalInconsistency(f"splitting on wall {wall} does not have rank {bundle.rank}")
    entries.sort(key=lambda e: (e[3], e[0], e[1]))
    return CurveSplitting(wall, tuple(entries))


def all_splittings(bundle: ToricVectorBundle) -> list[CurveSplitting]:
    return _map(lambda w: restrict_to_wall(bundle, w), bundle.fan.walls)


@dataclass
class PositivityReport:
    """Per-wall degrees and the derived verdicts.

    ``degrees[k]`` is the ascending degree multiset on ``fan.walls[k]``;
    for a Q-twist it includes the shift by the twisting class.
    """

    splittings: list
    degrees: list
    tau_global: object
    tau_at: dict
    nef: bool
    ample: bool
    trivial: bool
    certificate: list | None = None
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {
            "nef": self.nef,
            "ample": self.ample,
            "trivial": self.trivial,
            "tau": self.tau_global,
            "tau_at": {str(k): v for k, v in sorted(self.tau_at.items())},
            "walls": [
                {
                    "cones": [s.wall.sigma, s.wall.sigma_prime],
                    "rays": list(s.wall.rays),
                    "degrees": list(d),
                }
                for s, d in zip(self.splittings, self.degrees)
            ],
        }
        if self.certificate is not None:
            out["certificate"] = [[list(u), list(s)] for u, s in self.certificate]
        return out


def _report(fan: Fan, splittings: list, degrees: list) -> PositivityReport:
    tau_at = {}
    for i in range(fan.n_cones):
        near = [min(d) for w, d in zip(fan.walls, degrees) if i in (w.sigma, w.sigma_prime)]
        tau_at[i] = min(near) if near else None
    flat = [x for d in degrees for x in d]
    tau = min(flat) if flat else None
    return PositivityReport(
        splittings=splittings,
        degrees=degrees,
        tau_global=tau,
        tau_at=tau_at,
        nef=tau is None or tau >= 0,
        ample=tau is None or tau > 0,
        trivial=all(x == 0 for x in flat),
    )


def positivity_report(bundle: ToricVectorBundle, certify: bool = True) -> PositivityReport:
    """Nef, ample, ``tau`` and triviality from the curve splittings.

    A bundle whose splittings are all trivial gets a certificate: ``r``
    global sections whose values at every fixed point form a basis.
    """
    splittings = all_splittings(bundle)
    rep = _report(bundle.fan, splittings, [tuple(s.degrees()) for s in splittings])
    if rep.trivial and certify:
        from .sections import triviality_certificate

        rep.certificate = triviality_certificate(bundle)
    return rep


def is_trivial(bundle: ToricVectorBundle) -> bool:
    return positivity_report(bundle).trivial


def seshadri(bundle: ToricVectorBundle, at: int | None = None):
    """Seshadri constant at the fixed point of cone ``at`` (or globally).

    On a smooth complete variety it equals ``tau``: the minimal splitting
    degree over the invariant curves through the point.
    """
    if not bundle.fan.is_smooth():
        raise NotSmooth("Seshadri constants need a smooth fan")
    rep = positivity_report(bundle, certify=False)
    if not rep.nef:
        raise NotNef(f"bundle is not nef (tau = {rep.tau_global})")
    return rep.tau_global if at is None else rep.tau_at[at]


# ---------------------------------------------------------------------------
# Q-twists and blowups


@dataclass(frozen=True)
class QTwistedBundle:
    """A bundle paired with a rational divisor class ``delta``."""

    bundle: ToricVectorBundle
    delta: TCartierDivisor

    def __post_init__(self):
        if self.delta.fan != self.bundle.fan:
            raise RankMismatch("twisting class lives on another fan")
        report = validate_divisor(self.delta)
        if not report.valid:
            from .errors import IncompatibleLocalData

            raise IncompatibleLocalData("; ".join(report.failures))


def qtwist_positivity(qb: QTwistedBundle) -> PositivityReport:
    """Splitting degrees shifted by the wall degrees of ``delta``."""
    splittings = all_splittings(qb.bundle)
    degrees = []
    for s in splittings:
        shift = wall_degree(qb.delta, s.wall)
        degrees.append(tuple(exact(Fraction(d) + shift) for d in s.degrees()))
    return _report(qb.bundle.fan, splittings, degrees)


def exceptional_divisor(fan: Fan, new_ray: int) -> TCartierDivisor:
    """``F`` on a star subdivision: jump 1 on the new ray, 0 elsewhere."""
    return divisor_from_ray_jumps(fan, [1 if k == new_ray else 0 for k in range(len(fan.rays))])


def blowup(fan: Fan, sigma: int) -> tuple[Fan, int]:
    """Blown-up fan and the index of the exceptional ray."""
    if not fan.cone(sigma).is_smooth() or len(fan.cones[sigma]) != fan.rank:
        raise NotSmoothCone(f"cone {sigma} is not smooth")
    if fan.rank == 1:
        # a point on a smooth curve is already a divisor
        return fan, fan.cones[sigma][0]
    return star_subdivide(fan, sigma)


def blowup_pullback(bundle: ToricVectorBundle, sigma: int, m: int) -> ToricVectorBundle:
    """``p^*E ⊗ O(-mF)`` on the blowup at the fixed point of ``sigma``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    refined, new = blowup(bundle.fan, sigma)
    pulled = subdivision_pullback(bundle, refined)
    if m == 0:
        return pulled
    return twist_by_line_bundle(pulled, exceptional_divisor(refined, new).scaled(-m))


@dataclass
class SeshadriCheck:
    """Exact supremum of ``lambda`` with ``p^*E<-lambda F>`` nef, and the probes run."""

    cone: int
    sup: object
    tau: object
    probes: list

    @property
    def agrees(self) -> bool:
        return self.sup == self.tau


def seshadri_via_blowup(bundle: ToricVectorBundle, sigma: int, probe_offset=Fraction(1, 1000)) -> SeshadriCheck:
    """Cross-check ``tau(E, x_sigma)`` through the blowup.

    Splitting degrees of ``p^*E<-lambda F>`` are affine in ``lambda``, so
    the supremum is the least ratio ``a / c`` over walls where ``-F`` has
    degree ``-c < 0``.  It is then confirmed by evaluating the Q-twist at
    the supremum (nef) and just above it (not nef).
    """
    refined, new = blowup(bundle.fan, sigma)
    pulled = subdivision_pullback(bundle, refined)
    minus_f = exceptional_divisor(refined, new).scaled(-1)
    base = qtwist_positivity(QTwistedBundle(pulled, TCartierDivisor(refined, [(0,) * refined.rank] * refined.n_cones)))
    if not base.nef:
        raise NotNef("pullback is not nef")
    bounds = []
    for s, d in zip(base.splittings, base.degrees):
        c = wall_degree(minus_f, s.wall)
        if c < 0:
            bounds.append(Fraction(min(d)) / -c)
    if not bounds:
        raise TheoremViolation("the exceptional divisor is negative on no curve")
    lam = exact(min(bounds))
    probes = []
    for value in (lam, lam + probe_offset):
        rep = qtwist_positivity(QTwistedBundle(pulled, minus_f.scaled(value)))
        probes.append((value, rep.nef))
    if probes != [(lam, True), (lam + probe_offset, False)]:
        raise InternalInconsistency(f"Q-twist probes disagree with the affine bound {lam}")
    tau = positivity_report(bundle, certify=False).tau_at[sigma]
    return SeshadriCheck(sigma, lam, tau, probes)


def degree_sum_matches_determinant(bundle: ToricVectorBundle) -> bool:
    from .klyachko import determinant

    det = determinant(bundle)
    return all(
        sum(s.degrees()) == wall_degree(det, s.wall) for s in all_splittings(bundle)
    )


__all__ = [
    "CurveSplitting",
    "PositivityReport",
    "QTwistedBundle",
    "SeshadriCheck",
    "all_splittings",
    "blowup",
    "blowup_pullback",
    "degree_sum_matches_determinant",
    "exceptional_divisor",
    "is_trivial",
    "positivity_report",
    "qtwist_positivity",
    "restrict_to_wall",
    "seshadri",
    "seshadri_via_blowup",
    "thread_count",
]
