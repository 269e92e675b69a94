"""Syzygy bundles ``M_L = ker(H^0(L) ⊗ O -> L)`` analysed through polytopes.

``M_L`` is never built as Klyachko data.  Its restriction to invariant
curves, positivity after a twist by ``L'`` and global generation all
reduce to lattice point counts in ``P`` and ``P'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .errors import NotAmple, NotGloballyGeneratedInput, RankMismatch
from .fan import Fan, Wall
from .geometry import add, rank, scale, sub
from .polytope import LatticePolytope, dilate, hull, minkowski_sum, normal_fan
from .tdivisor import TCartierDivisor, divisor_on_fan, wall_degree


@dataclass(frozen=True)
class MLProblem:
    """``F_q^* M_L ⊗ L'`` on ``fan``, with ``L`` ample and ``L'`` nef."""

    fan: Fan
    L: TCartierDivisor
    Lprime: TCartierDivisor
    q: int = 1

    def __post_init__(self):
        if self.L.fan != self.fan or self.Lprime.fan != self.fan:
            raise RankMismatch("divisors must live on the problem fan")
        if self.q < 1:
            raise ValueError("q must be a positive integer")
        if self.L.rational or self.Lprime.rational:
            raise NotGloballyGeneratedInput("L and L' must be integral")

    @classmethod
    def from_polytopes(cls, P: LatticePolytope, Pprime: LatticePolytope, q: int = 1) -> MLProblem:
        """Problem on the normal fan of ``P``; ``P'`` must be compatible with it."""
        fan, _ = normal_fan(P)
        return cls(fan, divisor_on_fan(fan, P), divisor_on_fan(fan, Pprime), q)

    @cached_property
    def P(self) -> LatticePolytope:
        return hull(self.L.characters)

    @cached_property
    def Pprime(self) -> LatticePolytope:
        return hull(self.Lprime.characters)

    def vertex(self, sigma: int) -> tuple:
        return self.L.characters[sigma]

    def h0_L(self) -> int:
        return self.P.n_lattice_points()


def ml_curve_splitting(prob: MLProblem, wall: Wall) -> tuple[int, int]:
    """``(a, b)`` with ``M_L|_C = O^a ⊕ O(-1)^b``; ``b`` is the degree of ``L`` on ``C``."""
    degrees = prob.L.wall_degrees()
    if not all(d > 0 for d in degrees):
        raise NotAmple("L must be ample")
    b = wall_degree(prob.L, wall)
    a = prob.h0_L() - b - 1
    return a, b


@dataclass
class MLPositivity:
    tau_at: dict
    tau_global: int
    nef: bool
    ample: bool
    wall_degrees: list

    def as_dict(self) -> dict:
        return {
            "nef": self.nef,
            "ample": self.ample,
            "tau": self.tau_global,
            "tau_at": {str(k): v for k, v in sorted(self.tau_at.items())},
        }


def ml_positivity(prob: MLProblem) -> MLPositivity:
    """Positivity of ``F_q^* M_L ⊗ L'``.

    On a curve of ``L'``-degree ``d`` it splits as ``O(d)^a ⊕ O(d-q)^b``
    with ``b > 0``, so ``tau = tau(L') - q``.
    """
    fan = prob.fan
    per_wall = []
    for w in fan.walls:
        a, b = ml_curve_splitting(prob, w)
        d = wall_degree(prob.Lprime, w)
        per_wall.append(tuple(sorted([d - prob.q] * b + [d] * a)))
    tau_at = {}
    for i in range(fan.n_cones):
        tau_at[i] = min(min(d) for w, d in zip(fan.walls, per_wall) if i in (w.sigma, w.sigma_prime))
    tau = min(tau_at.values())
    return MLPositivity(tau_at, tau, tau >= 0, tau > 0, per_wall)


@dataclass
class GGResult:
    globally_generated: bool
    witnesses: list
    counts: dict = field(default_factory=dict)

    def labelled_witnesses(self, prob: MLProblem) -> list:
        return [[cone_label(prob.vertex(s)), list(u)] for s, u in self.witnesses]


def cone_label(vertex) -> str:
    return "cone@(" + ",".join(str(x) for x in vertex) + ")"


def _require_gg(prob: MLProblem):
    for name, d in (("L", prob.L), ("L'", prob.Lprime)):
        if not d.is_nef():
            raise NotGloballyGeneratedInput(f"{name} is not globally generated")


def verification_set(prob: MLProblem, sigma: int, u) -> list[tuple]:
    """Lattice points ``x`` of ``P`` with ``u'_sigma + q u - q x`` in ``P'``."""
    P, Pp, q = prob.P, prob.Pprime, prob.q
    target = add(prob.Lprime.characters[sigma], scale(q, u))
    return [x for x in P.lattice_points() if Pp.contains(sub(target, scale(q, x)))]


def ml_globally_generated(prob: MLProblem) -> GGResult:
    """Global generation by the lattice point criterion.

    For every cone ``sigma`` and every ``u`` in ``P ∩ M`` other than
    ``u_sigma``, the set ``P ∩ (1/q)(u'_sigma + q u - P')`` needs a second
    lattice point besides ``u``.  Witnesses are the failing ``(sigma, u)``.
    """
    _require_gg(prob)
    pts = prob.P.lattice_points()
    witnesses = []
    counts = {}
    for sigma in range(prob.fan.n_cones):
        for u in pts:
            if u == prob.vertex(sigma):
                continue
            c = len(verification_set(prob, sigma, u))
            counts[(sigma, u)] = c
            if c < 2:
                witnesses.append((sigma, u))
    return GGResult(not witnesses, witnesses, counts)


def weight_space_oracle(prob: MLProblem) -> GGResult:
    """Global generation from the sections of ``F_q^* M_L ⊗ L'`` directly.

    For each weight ``w`` the sections are ``sum a_x e_x`` over
    ``U_w = {x in P ∩ M : w - q x in P'}`` with ``sum a_x = 0``.  At the
    fixed point of ``sigma`` such a section maps to its ``e_x`` coordinate
    for ``q x = w - u'_sigma``.  The images must span the fibre, which has
    dimension ``h^0(L) - 1``.
    """
    _require_gg(prob)
    P, Pp, q = prob.P, prob.Pprime, prob.q
    pts = P.lattice_points()
    index = {x: i for i, x in enumerate(pts)}
    weights = minkowski_sum(dilate(P, q) if q > 1 else P, Pp).lattice_points()
    supports = {}
    for w in weights:
        support = [x for x in pts if Pp.contains(sub(w, scale(q, x)))]
        if len(support) >= 2:
            supports[w] = [(support[0], x) for x in support[1:]]
    witnesses = []
    for sigma in range(prob.fan.n_cones):
        up = prob.Lprime.characters[sigma]
        images = []
        for w, basis in supports.items():
            for x0, x1 in basis:
                row = [0] * len(pts)
                for x, coef in ((x0, 1), (x1, -1)):
                    if scale(q, x) == sub(w, up):
                        row[index[x]] = coef
                if any(row):
                    images.append(row)
        spanned = rank(images) if images else 0
        if spanned != len(pts) - 1:
            covered = {i for row in images for i, c in enumerate(row) if c}
            witnesses.extend(
                (sigma, x) for x in pts if x != prob.vertex(sigma) and index[x] not in covered
            )
    return GGResult(not witnesses, witnesses)


def multiplication_surjective(P1: LatticePolytope, P2: LatticePolytope) -> tuple[bool, list]:
    """Is ``(P1 ∩ M) + (P2 ∩ M) = (P1 + P2) ∩ M``?  Returns the missed points."""
    if P1.rank != P2.rank:
        raise RankMismatch(f"polytopes in rank {P1.rank} and {P2.rank}")
    sums = {add(a, b) for a, b in product(P1.lattice_points(), P2.lattice_points())}
    missed = [w for w in minkowski_sum(P1, P2).lattice_points() if w not in sums]
    return not missed, sorted(missed)


def normal_generation_bound(P: LatticePolytope) -> int:
    return max(2, P.rank - 1)


def normally_generated(P: LatticePolytope, m_max: int | None = None) -> bool:
    """``mP ∩ M = ((m-1)P ∩ M) + (P ∩ M)`` for ``2 <= m <= m_max``.

    The default bound ``max(2, n - 1)`` suffices because the addition map
    is known to be onto for ``m >= n - 1``.
    """
    if m_max is None:
        m_max = normal_generation_bound(P)
    for m in range(2, m_max + 1):
        ok, _ = multiplication_surjective(dilate(P, m - 1), P)
        if not ok:
            return False
    return True


@dataclass
class SuiteResult:
    checks: list = field(default_factory=list)

    @property
    def violations(self) -> list:
        return [c for c in self.checks if c["applies"] and not c["holds"]]

    @property
    def ok(self) -> bool:
        return not self.violations


def _scaled_problem(prob: MLProblem, j: int, k: int) -> MLProblem:
    return MLProblem(prob.fan, prob.L.scaled(j), prob.L.scaled(k), 1)


def mlgen_theorems_suite(prob: MLProblem, max_power: int = 2) -> SuiteResult:
    """Check the three global generation theorems on the data of ``prob``.

    * ``M_L ⊗ L`` is always globally generated.
    * If ``P`` is normally generated, so is every ``M_{L^j} ⊗ L^k``.
    * On a smooth fan with ``L, L'`` ample and ``(P ∩ M) + (P' ∩ M)`` onto
      ``(P + P') ∩ M``, ``M_{L ⊗ L'} ⊗ L'`` is globally generated.

    Each check records whether its hypotheses hold and whether the
    conclusion does; a violation means a bug.
    """
    out = SuiteResult()
    gg = ml_globally_generated(MLProblem(prob.fan, prob.L, prob.L, 1)).globally_generated
    out.checks.append({"name": "M_L(x)L", "applies": True, "holds": gg})

    normal = normally_generated(prob.P)
    for j, k in product(range(1, max_power + 1), repeat=2):
        holds = ml_globally_generated(_scaled_problem(prob, j, k)).globally_generated
        out.checks.append(
            {"name": f"normal generation j={j} k={k}", "applies": normal, "holds": holds}
        )

    ample = prob.L.is_ample() and prob.Lprime.is_ample()
    surj, _ = multiplication_surjective(prob.P, prob.Pprime)
    applies = prob.fan.is_smooth() and ample and surj
    holds = ml_globally_generated(
        MLProblem(prob.fan, prob.L + prob.Lprime, prob.Lprime, 1)
    ).globally_generated
    out.checks.append({"name": "smooth multiplication", "applies": applies, "holds": holds})
    return out


__all__ = [
    "GGResult",
    "MLPositivity",
    "MLProblem",
    "SuiteResult",
    "cone_label",
    "ml_curve_splitting",
    "ml_globally_generated",
    "ml_positivity",
    "mlgen_theorems_suite",
    "multiplication_surjective",
    "normal_generation_bound",
    "normally_generated",
    "verification_set",
    "weight_space_oracle",
]
