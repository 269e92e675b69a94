"""Shared bundle corpus for the test suite."""

from toripos.fan import hirzebruch, product_of_projective_lines, projective_space
from toripos.klyachko import (
    direct_sum,
    frobenius_pullback,
    line_bundle,
    subdivision_pullback,
    tangent_bundle_of,
    trivial_bundle,
    twist_by_line_bundle,
)
from toripos.fan import star_subdivide
from toripos.positivity import blowup_pullback
from toripos.tdivisor import divisor_from_ray_jumps

P1 = projective_space(1)
P2 = projective_space(2)
P3 = projective_space(3)
P1xP1 = product_of_projective_lines(2)
F1 = hirzebruch(1)


def hyperplane(fan):
    """``O(D_last)``; on projective space this is ``O(1)``."""
    return divisor_from_ray_jumps(fan, [0] * (len(fan.rays) - 1) + [1])


def O(fan, d):
    return line_bundle(hyperplane(fan).scaled(d))


def constructor_corpus():
    """Named valid bundles built by every constructor."""
    T2 = tangent_bundle_of(P2)
    H2 = hyperplane(P2)
    blown, _ = star_subdivide(P2, 0)
    out = {
        "trivial-P2-r3": trivial_bundle(P2, 3),
        "O1-P1": O(P1, 1),
        "O1+O-P1": direct_sum(O(P1, 1), O(P1, 0)),
        "O3-P2": O(P2, 3),
        "O2+O3-P2": direct_sum(O(P2, 2), O(P2, 3)),
        "O2+O1-P2": direct_sum(O(P2, 2), O(P2, 1)),
        "T-P1": tangent_bundle_of(P1),
        "T-P2": T2,
        "T-P3": tangent_bundle_of(P3),
        "T-P1xP1": tangent_bundle_of(P1xP1),
        "T-F1": tangent_bundle_of(F1),
        "T(-1)-P2": twist_by_line_bundle(T2, -H2),
        "T(1)-P2": twist_by_line_bundle(T2, H2),
        "F2*T-P2": frobenius_pullback(T2, 2),
        "T+O1-P2": direct_sum(T2, O(P2, 1)),
        "pullback-T-P2": subdivision_pullback(T2, blown),
        "blowup-T-P2-m1": blowup_pullback(T2, 0, 1),
        "blowup-O3-P2-m2": blowup_pullback(O(P2, 3), 0, 2),
    }
    return out


def nef_corpus():
    from toripos.positivity import positivity_report

    return {k: b for k, b in constructor_corpus().items() if positivity_report(b, certify=False).nef}
