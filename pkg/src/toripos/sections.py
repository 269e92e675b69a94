"""Global sections of toric bundles, read off the Klyachko data.

Evaluating at the identity identifies the ``chi^u``-isotypical global
sections with ``⋂_rho E^rho(<u, v_rho>)``; these are nonzero only for
finitely many ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotAmple, NotNef, NotSmooth, TheoremViolation
from .geometry import RationalSubspace, dot, rank
from .klyachko import ToricVectorBundle, _linear_extension, fiber_evaluation
from .polytope import h_polytope_lattice_points


@dataclass(frozen=True)
class SectionSpace:
    u: tuple
    subspace: RationalSubspace

    @property
    def dim(self) -> int:
        return self.subspace.dim


def isotypical_sections(bundle: ToricVectorBundle, u) -> SectionSpace:
    u = tuple(u)
    out = RationalSubspace.full(bundle.rank)
    for f, v in zip(bundle.filtrations, bundle.fan.rays):
        out = out & f.at(dot(u, v))
        if out.is_zero():
            break
    return SectionSpace(u, out)


def section_characters(bundle: ToricVectorBundle) -> list[tuple]:
    """Lattice points of ``{u : <u, v_rho> <= max jump of rho}``, sorted."""
    tops = [max(f.thresholds) for f in bundle.filtrations]
    return sorted(h_polytope_lattice_points(list(bundle.fan.rays), tops))


def global_sections(bundle: ToricVectorBundle) -> list[SectionSpace]:
    """Nonzero isotypical pieces, in lexicographic order of ``u``."""
    out = []
    for u in section_characters(bundle):
        s = isotypical_sections(bundle, u)
        if s.dim:
            out.append(s)
    return out


def h0(bundle: ToricVectorBundle) -> int:
    return sum(s.dim for s in global_sections(bundle))


def h0_support(bundle: ToricVectorBundle) -> dict[tuple, int]:
    return {s.u: s.dim for s in global_sections(bundle)}


def nonvanishing_section_at(bundle: ToricVectorBundle, sigma: int, check_nef: bool = True):
    """A global section not vanishing at ``x_sigma``, as ``(u, s)``.

    Only the characters of the grading on ``sigma`` can give sections with a
    nonzero value there; they are tried from the top of the cone order.
    Nefness guarantees success.
    """
    if check_nef:
        from .positivity import positivity_report

        if not positivity_report(bundle, certify=False).nef:
            raise NotNef("nonvanishing sections are only guaranteed for nef bundles")
    fan = bundle.fan
    chars = [u for u, _ in bundle.decomposition(sigma).parts]
    for u in _linear_extension(chars, fan.cone_rays(sigma), None):
        space = isotypical_sections(bundle, u).subspace
        for s in space.basis:
            if any(fiber_evaluation(bundle, sigma, u, s)):
                return u, s
    raise TheoremViolation(f"no section of a nef bundle is nonzero at the fixed point of cone {sigma}")


def separating_section(bundle: ToricVectorBundle, x: int, y: int):
    """A section ``(u, s)`` vanishing at ``x_x`` and not at ``x_y``.

    Obtained as a nonvanishing section at ``y`` of ``p^*E ⊗ O(-F)`` on the
    blowup at ``x``, which is nef when ``E`` is ample.
    """
    from .positivity import blowup_pullback, positivity_report

    if x == y:
        raise ValueError("the two fixed points must differ")
    if not bundle.fan.is_smooth():
        raise NotSmooth("separation needs a smooth fan")
    if not positivity_report(bundle, certify=False).ample:
        raise NotAmple("separation of points is only guaranteed for ample bundles")
    blown = blowup_pullback(bundle, x, 1)
    target = blown.fan.find_cone(bundle.fan.cone_rays(y))
    u, s = nonvanishing_section_at(blown, target)
    if s not in isotypical_sections(bundle, u).subspace:
        raise TheoremViolation("pulled back section is not a section of the bundle")
    if any(fiber_evaluation(bundle, x, u, s)) or not any(fiber_evaluation(bundle, y, u, s)):
        raise TheoremViolation(f"section at {u} does not separate cones {x} and {y}")
    return u, s


def evaluation_matrix(bundle: ToricVectorBundle, sigma: int, sections: Sequence) -> list[tuple]:
    """Rows are the values at ``x_sigma`` of the given ``(u, s)`` sections."""
    return [fiber_evaluation(bundle, sigma, u, s) for u, s in sections]


def triviality_certificate(bundle: ToricVectorBundle) -> list:
    """``r`` sections whose values at every fixed point are a basis of the fiber."""
    chosen = []
    for piece in global_sections(bundle):
        chosen.extend((piece.u, s) for s in piece.subspace.basis)
    if len(chosen) != bundle.rank:
        raise TheoremViolation(
            f"a trivial bundle of rank {bundle.rank} has {len(chosen)} independent sections"
        )
    for i in range(bundle.fan.n_cones):
        if rank(evaluation_matrix(bundle, i, chosen)) != bundle.rank:
            raise TheoremViolation(f"sections do not span the fiber at cone {i}")
    return chosen


__all__ = [
    "SectionSpace",
    "evaluation_matrix",
    "global_sections",
    "h0",
    "h0_support",
    "isotypical_sections",
    "nonvanishing_section_at",
    "section_characters",
    "separating_section",
    "triviality_certificate",
]
