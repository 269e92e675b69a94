"""Command line front end.

Every command reads JSON inputs (``-`` means stdin), prints a report and
exits with 0 when verdicts were computed, 1 when the input is invalid and
2 on an internal inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import corpus as corpus_mod
from .errors import MalformedInput, ToriposError
from .fan import validate_fan
from .io import (
    bundle_from_json,
    bundle_to_json,
    divisor_from_json,
    dumps,
    format_rational,
    load_json,
    parse_rational,
    plain,
    polytope_from_json,
)
from .klyachko import line_bundle, validate_bundle
from .mlbundle import (
    MLProblem,
    cone_label,
    ml_curve_splitting,
    ml_globally_generated,
    ml_positivity,
    multiplication_surjective,
    normal_generation_bound,
    normally_generated,
    verification_set,
    weight_space_oracle,
)
from .positivity import (
    QTwistedBundle,
    blowup,
    blowup_pullback,
    exceptional_divisor,
    positivity_report,
    qtwist_positivity,
    restrict_to_wall,
    seshadri,
)
from .sections import h0_support, nonvanishing_section_at


def load_bundle(obj: dict):
    """A bundle document, or a divisor document read as its line bundle."""
    if isinstance(obj, dict) and "u" in obj and "filtrations" not in obj:
        return line_bundle(divisor_from_json(obj))
    return bundle_from_json(obj)


def _wall_index(fan, spec) -> int:
    text = str(spec)
    if "," in text:
        try:
            pair = tuple(sorted(int(x) for x in text.split(",")))
        except ValueError:
            raise MalformedInput(f"bad wall {spec!r}") from None
        for k, w in enumerate(fan.walls):
            if (w.sigma, w.sigma_prime) == pair:
                return k
        raise MalformedInput(f"cones {pair} do not meet in a wall")
    try:
        k = int(text)
    except ValueError:
        raise MalformedInput(f"bad wall {spec!r}") from None
    if not 0 <= k < len(fan.walls):
        raise MalformedInput(f"wall index {k} out of range (0..{len(fan.walls) - 1})")
    return k


def _cone_index(fan, c) -> int:
    try:
        c = int(c)
    except (TypeError, ValueError):
        raise MalformedInput(f"bad cone index {c!r}") from None
    if not 0 <= c < fan.n_cones:
        raise MalformedInput(f"cone index {c} out of range (0..{fan.n_cones - 1})")
    return c


# ---------------------------------------------------------------------------
# commands; each takes decoded JSON and returns a report dict


def cmd_fan_validate(fan_obj: dict, complete: bool = True) -> dict:
    from .io import fan_from_json

    fan = fan_from_json(fan_obj)
    rep = validate_fan(fan, assert_complete=complete)
    out = rep.as_dict()
    out["smooth"] = fan.is_smooth()
    out["walls"] = len(fan.walls)
    return out


def cmd_bundle_validate(bundle_obj: dict) -> dict:
    b = load_bundle(bundle_obj)
    decomps = validate_bundle(b)
    return {
        "valid": True,
        "rank": b.rank,
        "decompositions": {
            str(d.cone): [[list(u), s.dim] for u, s in d.parts] for d in decomps
        },
    }


def _splitting_json(s) -> dict:
    return {
        "cones": [s.wall.sigma, s.wall.sigma_prime],
        "rays": list(s.wall.rays),
        "normal": list(s.wall.normal),
        "degrees": s.degrees(),
        "entries": [
            {"u": list(u), "u_prime": list(v), "multiplicity": m, "degree": d}
            for u, v, m, d in s.entries
        ],
    }


def cmd_restrict(bundle_obj: dict, wall) -> dict:
    b = load_bundle(bundle_obj)
    k = _wall_index(b.fan, wall)
    out = _splitting_json(restrict_to_wall(b, b.fan.walls[k]))
    out["wall"] = k
    return out


def cmd_positivity(bundle_obj: dict, at=None) -> dict:
    b = load_bundle(bundle_obj)
    rep = positivity_report(b)
    out = rep.as_dict()
    if b.fan.is_smooth() and rep.nef:
        out["seshadri"] = seshadri(b) if at is None else seshadri(b, _cone_index(b.fan, at))
    else:
        out["seshadri"] = None
    return out


def cmd_sections(bundle_obj: dict, h0: bool = True, nonvanishing_at=None) -> dict:
    b = load_bundle(bundle_obj)
    out: dict[str, Any] = {}
    if h0:
        support = h0_support(b)
        out["h0"] = sum(support.values())
        out["support"] = [[list(u), d] for u, d in sorted(support.items())]
    if nonvanishing_at is not None:
        c = _cone_index(b.fan, nonvanishing_at)
        u, s = nonvanishing_section_at(b, c)
        out["nonvanishing"] = {"cone": c, "u": list(u), "section": [format_rational(x) for x in s]}
    return out


def cmd_blowup(bundle_obj: dict, cone, m: int) -> dict:
    b = load_bundle(bundle_obj)
    c = _cone_index(b.fan, cone)
    if m < 0:
        raise MalformedInput("--m must be nonnegative")
    out_bundle = blowup_pullback(b, c, m)
    rep = positivity_report(out_bundle, certify=False)
    return {
        "bundle": bundle_to_json(out_bundle),
        "new_ray": len(out_bundle.fan.rays) - 1,
        "nef": rep.nef,
        "ample": rep.ample,
        "tau": rep.tau_global,
    }


def cmd_qtwist(bundle_obj: dict, lam, cone=None, delta_obj: dict | None = None) -> dict:
    """``E<lambda delta>``, or ``p^*E<-lambda F>`` on the blowup at ``cone``."""
    b = load_bundle(bundle_obj)
    lam = Fraction(parse_rational(lam))
    if (cone is None) == (delta_obj is None):
        raise MalformedInput("qtwist needs exactly one of --cone or --delta")
    if cone is not None:
        c = _cone_index(b.fan, cone)
        refined, new = blowup(b.fan, c)
        base = blowup_pullback(b, c, 0)
        delta = exceptional_divisor(refined, new).scaled(-lam)
    else:
        base = b
        delta = divisor_from_json(delta_obj, b.fan).scaled(lam)
    rep = qtwist_positivity(QTwistedBundle(base, delta))
    out = rep.as_dict()
    out["lambda"] = format_rational(lam)
    return out


def _ml_problem(L_obj: dict, Lp_obj: dict, q: int) -> MLProblem:
    if "vertices" in L_obj and "vertices" in Lp_obj:
        return MLProblem.from_polytopes(polytope_from_json(L_obj), polytope_from_json(Lp_obj), q)
    L = divisor_from_json(L_obj)
    Lp = divisor_from_json(Lp_obj, L.fan)
    return MLProblem(L.fan, L, Lp, q)


def cmd_mlgen(L_obj: dict, Lp_obj: dict, q: int = 1) -> dict:
    prob = _ml_problem(L_obj, Lp_obj, q)
    pos = ml_positivity(prob)
    gg = ml_globally_generated(prob)
    oracle = weight_space_oracle(prob)
    out = pos.as_dict()
    out.update(
        {
            "q": q,
            "h0_L": prob.h0_L(),
            "globally_generated": gg.globally_generated,
            "witnesses": gg.labelled_witnesses(prob),
            "witness_sets": [
                [cone_label(prob.vertex(s)), list(u), [list(x) for x in verification_set(prob, s, u)]]
                for s, u in gg.witnesses
            ],
            "oracle_agrees": oracle.globally_generated == gg.globally_generated
            and oracle.witnesses == gg.witnesses,
            "curve_splittings": [
                {"cones": [w.sigma, w.sigma_prime], "a": a, "b": bb}
                for w, (a, bb) in ((w, ml_curve_splitting(prob, w)) for w in prob.fan.walls)
            ],
        }
    )
    return out


def cmd_mult(P1_obj: dict, P2_obj: dict) -> dict:
    ok, missed = multiplication_surjective(polytope_from_json(P1_obj), polytope_from_json(P2_obj))
    return {"surjective": ok, "witnesses": [list(w) for w in missed]}


def cmd_normgen(P_obj: dict, m_max: int | None = None) -> dict:
    P = polytope_from_json(P_obj)
    bound = m_max if m_max is not None else normal_generation_bound(P)
    return {"normally_generated": normally_generated(P, bound), "m_max": bound}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toripos", description="Positivity of toric vector bundles.")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of plain text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fan", help="fan utilities")
    fsub = p.add_subparsers(dest="action", required=True)
    v = fsub.add_parser("validate")
    v.add_argument("input")
    v.add_argument("--no-complete", action="store_true", help="skip the completeness test")

    p = sub.add_parser("bundle", help="bundle utilities")
    bsub = p.add_subparsers(dest="action", required=True)
    bsub.add_parser("validate").add_argument("input")

    p = sub.add_parser("restrict", help="splitting type on an invariant curve")
    p.add_argument("input")
    p.add_argument("--wall", required=True, help="wall index or 'i,j' pair of cones")

    p = sub.add_parser("positivity", help="nef, ample, tau, Seshadri, triviality")
    p.add_argument("input")
    p.add_argument("--at", help="cone index for the local Seshadri constant")

    p = sub.add_parser("sections", help="global sections")
    p.add_argument("input")
    p.add_argument("--h0", action="store_true")
    p.add_argument("--nonvanishing-at", dest="nonvanishing_at")

    p = sub.add_parser("blowup", help="p^*E (x) O(-mF) on the blowup at a fixed point")
    p.add_argument("input")
    p.add_argument("--cone", required=True)
    p.add_argument("--m", type=int, default=0)

    p = sub.add_parser("qtwist", help="positivity of a Q-twist")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", required=True, help="rational 'p/q'")
    p.add_argument("--cone", help="twist p^*E by -lambda F on the blowup at this cone")
    p.add_argument("--delta", help="divisor file; twist E by lambda * delta")

    p = sub.add_parser("mlgen", help="global generation of F_q^* M_L (x) L'")
    p.add_argument("--L", required=True)
    p.add_argument("--Lprime", required=True)
    p.add_argument("--q", type=int, default=1)

    p = sub.add_parser("mult", help="surjectivity of (P1 ∩ M) + (P2 ∩ M) -> (P1 + P2) ∩ M")
    p.add_argument("--P1", required=True)
    p.add_argument("--P2", required=True)

    p = sub.add_parser("normgen", help="normal generation of a lattice polytope")
    p.add_argument("--P", required=True)
    p.add_argument("--m-max", dest="m_max", type=int)

    p = sub.add_parser("corpus", help="bundled worked examples")
    csub = p.add_subparsers(dest="action", required=True)
    csub.add_parser("list")
    r = csub.add_parser("run")
    r.add_argument("name", nargs="?")
    return parser


def dispatch(args: argparse.Namespace) -> tuple[int, dict]:
    c = args.command
    if c == "fan":
        rep = cmd_fan_validate(load_json(args.input), not args.no_complete)
        return (0 if rep["valid"] and rep["complete"] is not False else 1), rep
    if c == "bundle":
        return 0, cmd_bundle_validate(load_json(args.input))
    if c == "restrict":
        return 0, cmd_restrict(load_json(args.input), args.wall)
    if c == "positivity":
        return 0, cmd_positivity(load_json(args.input), args.at)
    if c == "sections":
        h0 = args.h0 or args.nonvanishing_at is None
        return 0, cmd_sections(load_json(args.input), h0, args.nonvanishing_at)
    if c == "blowup":
        return 0, cmd_blowup(load_json(args.input), args.cone, args.m)
    if c == "qtwist":
        delta = load_json(args.delta) if args.delta else None
        return 0, cmd_qtwist(load_json(args.input), args.lam, args.cone, delta)
    if c == "mlgen":
        if args.q < 1:
            raise MalformedInput("--q must be a positive integer")
        return 0, cmd_mlgen(load_json(args.L), load_json(args.Lprime), args.q)
    if c == "mult":
        return 0, cmd_mult(load_json(args.P1), load_json(args.P2))
    if c == "normgen":
        return 0, cmd_normgen(load_json(args.P), args.m_max)
    if c == "corpus":
        if args.action == "list":
            return 0, {"examples": corpus_mod.names()}
        if args.name:
            res = corpus_mod.run_one(args.name)
            return (0 if res["pass"] else 2), res
        res = corpus_mod.run_all()
        return (0 if res["failed"] == 0 else 2), res
    raise MalformedInput(f"unknown command {c!r}")


def render_text(report: Any, indent: str = "") -> str:
    if not isinstance(report, dict):
        return indent + dumps(report)
    lines = []
    for k in sorted(report):
        v = report[k]
        if isinstance(v, dict) and v and len(dumps(v)) > 80:
            lines.append(f"{indent}{k}:")
            lines.append(render_text(v, indent + "  "))
        else:
            lines.append(f"{indent}{k}: {dumps(v)}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None) -> tuple[int, dict, bool]:
    """Parse ``argv`` and run the command; returns ``(exit_code, report, as_json)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, report = dispatch(args)
    except ToriposError as exc:
        code = 2 if exc.internal else 1
        report = {"error": exc.code, "message": str(exc)}
    return code, plain(report), args.json


def main(argv: Sequence[str] | None = None) -> int:
    code, report, as_json = run(argv)
    stream = sys.stderr if "error" in report and not as_json else sys.stdout
    print(dumps(report) if as_json else render_text(report), file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
