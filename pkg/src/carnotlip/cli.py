"""Command line interface: ``carnotlip <command> [options]``.

Point commands print coordinates as comma-separated rationals; experiment
commands print a JSON report and exit 0 exactly when every check passed.
Malformed input exits with status 2 and a JSON diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import cantor, experiments
from .cones import ConeSpec, in_euclidean_cone, in_metric_cone, in_semigroup_closure, semigroup_margins
from .groups import GroupPoint, dilate, get_group, inverse, multiply, rational
from .metric import MetricParams, box_norm, calibrate, dist_to_subgroup, distance
from .report import ExperimentReport, jsonable


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return rational(text.strip())
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _vector(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(part) for part in text.split(","))


def _fraction_list(text: str) -> list[Fraction]:
    return list(_vector(text))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--group", default="f23", choices=["f23", "engel"])
    p.add_argument("--eps2", type=_fraction, default=MetricParams().eps2)
    p.add_argument("--eps3", type=_fraction, default=MetricParams().eps3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the result to this file instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--no-timing", action="store_true", help="omit wall_ms so reports are byte-identical")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="carnotlip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, **kw):
        return sub.add_parser(name, parents=[common], help=help_text, **kw)

    p = add("mul", "product x . y")
    p.add_argument("--x", type=_vector, required=True)
    p.add_argument("--y", type=_vector, required=True)
    p = add("inv", "inverse x^-1")
    p.add_argument("--x", type=_vector, required=True)
    p = add("dilate", "dilation delta_lam(x)")
    p.add_argument("--lam", type=_fraction, required=True)
    p.add_argument("--x", type=_vector, required=True)
    p = add("norm", "box norm of x")
    p.add_argument("--x", type=_vector, required=True)
    p = add("dist", "d(x, y), or the distance from x to N(axis)")
    p.add_argument("--x", type=_vector, required=True)
    p.add_argument("--y", type=_vector)
    p.add_argument("--axis", type=_vector)
    p = add("cone-test", "cone and semigroup predicates for a point")
    p.add_argument("--x", type=_vector, required=True)
    p.add_argument("--axis", type=_vector, default=(Fraction(0), Fraction(1)))
    p.add_argument("--sigma", type=_fraction, default=Fraction(1, 2))
    p.add_argument(
        "--kind", choices=["euclidean", "metric", "semigroup"], default="metric",
        help="which predicate decides the exit status",
    )

    p = add("curve", "build or verify curve iterates")
    curve_sub = p.add_subparsers(dest="curve_command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("build", "interval tree and plateau values"),
        ("verify", "exact invariant checks at one level"),
        ("lipschitz", "intrinsic Lipschitz test on endpoint pairs"),
        ("gap", "certified monotonicity gap for levels up to depth"),
        ("pansu", "Pansu quotients on plateau midpoints"),
    ):
        q = curve_sub.add_parser(name, parents=[common], help=help_text)
        q.add_argument("--depth", type=int, default=8)
        if name == "lipschitz":
            q.add_argument("--sigma", type=_fraction, default=Fraction(1, 7))
        if name == "pansu":
            q.add_argument("--scales", type=int, default=10)

    p = add("reach", "reachability of cone-control flows")
    p.add_argument("--sigma", type=_fraction_list, default=[Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
    p.add_argument("--segments", type=int, default=20)
    p.add_argument("--trials", type=int, default=200)

    p = add("intersect", "exact intersection certificate (or its Monte Carlo companion)")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--monte-carlo", type=int, metavar="TRIALS", default=0)
    p.add_argument("--sigma", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--tol", type=float, default=2.0**-12)

    p = add("transport", "transport the construction to direction e")
    p.add_argument("--e", type=_vector, required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--pairs", type=int, default=100)

    p = add("engel", "Engel group variant")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--trials", type=int, default=200)

    p = add("calibrate", "sampled triangle-inequality check of the box norm")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--scale", type=float, default=1.0)
    return parser


# ---------------------------------------------------------------------------
# output helpers


def _point_text(x: GroupPoint, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([str(c) for c in x.coords])
    return ",".join(str(c) for c in x.coords)


def _report_csv(rep: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "check", "checked", "violations"])
    for name, c in rep.counts.items():
        w.writerow([rep.name, name, c.get("checked", c.get("count", "")), c.get("violations", 0)])
    w.writerow([rep.name, "pass", "", 0 if rep.passed else 1])
    return buf.getvalue().rstrip("\n")


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_report(args, rep: ExperimentReport) -> int:
    if args.format == "csv":
        _emit(args, _report_csv(rep))
    else:
        _emit(args, rep.to_json(timing=not args.no_timing))
    return 0 if rep.passed else 1


def _point(args, coords) -> GroupPoint:
    return GroupPoint(get_group(args.group), coords)


def _params(args) -> MetricParams:
    return MetricParams(eps2=args.eps2, eps3=args.eps3)


def _norm_json(n) -> dict:
    exact = n.exact()
    return {"value": str(exact) if exact is not None else None, "float": float(n), "twelfth_power": str(n.p12)}


# ---------------------------------------------------------------------------
# commands


def _cmd_point(args) -> int:
    fmt = args.format or "csv"
    if args.command == "mul":
        x = multiply(_point(args, args.x), _point(args, args.y))
    elif args.command == "inv":
        x = inverse(_point(args, args.x))
    else:
        x = dilate(args.lam, _point(args, args.x))
    _emit(args, _point_text(x, fmt))
    return 0


def _cmd_norm(args) -> int:
    n = box_norm(_point(args, args.x), _params(args))
    out = {**_norm_json(n), "layer": n.argmax}
    if (args.format or "json") == "csv":
        _emit(args, out["value"] or repr(out["float"]))
    else:
        _emit(args, json.dumps(out, sort_keys=True))
    return 0


def _cmd_dist(args) -> int:
    p = _params(args)
    x = _point(args, args.x)
    if (args.y is None) == (args.axis is None):
        raise UsageError("dist needs exactly one of --y or --axis")
    if args.y is not None:
        n = distance(x, _point(args, args.y), p)
        out = _norm_json(n)
    else:
        d = dist_to_subgroup(x, args.axis, p)
        out = {
            "lower": _norm_json(d.lower),
            "upper": _norm_json(d.upper),
            "exact": d.exact,
            "minimizer": str(d.minimizer),
        }
    if (args.format or "json") == "csv":
        value = out.get("value") if args.y is not None else out["upper"]["value"]
        fl = out["float"] if args.y is not None else out["upper"]["float"]
        _emit(args, value or repr(fl))
    else:
        _emit(args, json.dumps(out, sort_keys=True))
    return 0


def _cmd_cone(args) -> int:
    x = _point(args, args.x)
    cone = ConeSpec(args.axis, args.sigma)
    horizontal = not any(x.coords[2:])
    result = {
        "euclidean": in_euclidean_cone(x.coords[:2], cone) if horizontal else None,
        "metric": in_metric_cone(x, cone, _params(args)),
        "semigroup": in_semigroup_closure(x),
        "semigroup_margins": [str(m) for m in semigroup_margins(x)],
    }
    if args.kind == "euclidean" and not horizontal:
        raise UsageError("the Euclidean cone test needs a horizontal point")
    _emit(args, json.dumps(result, sort_keys=True))
    return 0 if result[args.kind] else 1


def _cmd_curve(args) -> int:
    p = _params(args)
    group = get_group(args.group)
    if args.curve_command == "build":
        levels = cantor.build_levels(args.depth)
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["level", "t"] + [f"x{i + 1}" for i in range(group.dim)])
            for lv in levels:
                curve = cantor.build_curve(lv.k, args.eps3, group)
                for t, x in curve.endpoint_samples():
                    w.writerow([lv.k, str(t)] + [str(c) for c in x.coords])
            _emit(args, buf.getvalue().rstrip("\n"))
            return 0
        data = {
            "depth": args.depth,
            "eps3": str(args.eps3),
            "group": group.name,
            "levels": [
                {"k": lv.k, "length": str(lv.length()), "intervals": [[str(a), str(b)] for a, b in lv.intervals]}
                for lv in levels
            ],
            "omega": [str(w) for w in cantor.omega_table(args.depth, args.eps3)],
        }
        _emit(args, json.dumps(data, indent=2, sort_keys=True))
        return 0
    if args.curve_command == "verify":
        rep = cantor.verify_iterate(args.depth, p, group)
    elif args.curve_command == "lipschitz":
        rep = experiments.lipschitz_experiment(args.depth, args.sigma, p)
    elif args.curve_command == "gap":
        rep = experiments.monotonicity_gap(args.depth, args.eps3)
    else:
        rep = experiments.pansu_experiment(args.depth, args.scales, p)
    return _emit_report(args, rep)


def _cmd_reach(args) -> int:
    return _emit_report(
        args,
        experiments.reachability_experiment(args.sigma, args.trials, args.segments, args.seed, args.group),
    )


def _cmd_intersect(args) -> int:
    if args.monte_carlo:
        rep = experiments.monte_carlo_intersections(
            args.depth, ConeSpec((0, 1), args.sigma), args.monte_carlo, args.seed, args.tol, params=_params(args)
        )
    else:
        rep = experiments.intersection_certificate(args.depth, args.group, _params(args))
    return _emit_report(args, rep)


def _cmd_transport(args) -> int:
    if args.group == "engel":
        from .automorphisms import free_automorphism, orthogonal_frame

        free_automorphism(orthogonal_frame(args.e), "engel")  # raises off the X2 axis
        raise UsageError("transport experiments run in f23; engel only admits e = +-X2")
    rep = experiments.transport_experiment(args.e, args.depth, args.pairs, args.seed, params=_params(args))
    return _emit_report(args, rep)


def _cmd_engel(args) -> int:
    return _emit_report(args, experiments.engel_experiment(args.depth, args.trials, seed=args.seed, params=_params(args)))


def _cmd_calibrate(args) -> int:
    out = calibrate(_params(args), args.trials, args.seed, args.group, args.scale)
    _emit(args, json.dumps(jsonable(out), indent=2, sort_keys=True))
    return 0 if out["violations"] == 0 else 1


_COMMANDS = {
    "mul": _cmd_point,
    "inv": _cmd_point,
    "dilate": _cmd_point,
    "norm": _cmd_norm,
    "dist": _cmd_dist,
    "cone-test": _cmd_cone,
    "curve": _cmd_curve,
    "reach": _cmd_reach,
    "intersect": _cmd_intersect,
    "transport": _cmd_transport,
    "engel": _cmd_engel,
    "calibrate": _cmd_calibrate,
}


def _fail(kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return 2


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", str(exc))
    except (ValueError, ZeroDivisionError, IndexError) as exc:
        return _fail(type(exc).__name__, str(exc))
    except OSError as exc:
        return _fail("io", str(exc))


if __name__ == "__main__":
    sys.exit(main())
