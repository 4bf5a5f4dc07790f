"""Command-line front end.

Subcommands:
  build     construct the cylinder isomorphism for a surface spec file
  verify    re-verify a serialized map, exit 1 on any failed check
  examples  reproduce the four worked isomorphisms and diff them against
            embedded golden formulas
  embed     emit the affine-4-space embedding equations for a surface

Output format is chosen with --format {text,latex,json}; all output is
deterministic (canonical monomial order).  Exit codes: 0 all checks pass,
1 verification failure, 2 input error, 3 inconclusive (a cap or degree
bound was exceeded).
"""

from __future__ import annotations

import argparse
import sys

from .cylinders import (
    build_cylinder_iso,
    certify_cylinder_iso,
    classical_pair_iso,
    embedding_equations,
)
from .errors import (
    CapExceededError,
    DanielewskiError,
    GlobalizationError,
    ParseError,
    PreconditionError,
)
from .gaussian import GaussianRational
from .interpolation import bezout_pair
from .parser import parse_poly
from .polynomials import MultiPoly, XLaurent, substitute_poly
from .render import laurent_str, laurent_tex, poly_str, poly_tex
from .serialize import (
    GEN_ORDER,
    cylinder_map_to_json,
    dump_document,
    load_document,
    map_from_json,
    pair_to_json,
    report_to_json,
    scalar_from_json,
    surface_from_json,
)
from .surfaces import (
    ChartedSurface,
    make_double_example,
    make_iterated_example,
)
from .verification import CheckReport, Report, verify_inverse_pair


# -- embedded golden formulas (exact, compared term for term) ----------------

GOLDEN = {
    "russell": {
        "g": "z - (z^2-1)*z/2",
        "phi": {
            "x": "x",
            "y": "x*y + 2*z*w + x*w^2",
            "z": "z + x*w",
            "w": "1/2*(y*z + 3*z*w^2 + 3*x*y*w + x*w^3)",
        },
        "psi": {
            "x": "x",
            "y": "x^2*w^2 + 2*w*(z-(z^2-1)*z/2) + y^2*(1/4*z^2-1)",
            "z": "x^2*w + (z-(z^2-1)*z/2)",
            "w": "-x*w + 1/2*z*y",
        },
    },
    "iterated": {
        "g": "z^2 - 1/2*z^2*(z^4-1) + x*1/2*z^3",
        "f": "z",
        "u": "x*y + z^2",
        "roots": ["i", "-1", "-i", "1"],
    },
    "double": {
        "g": "(1-i)/2*z^3 + (1+i)/2*z - (z^4-1)*z/4*(3*(1-i)/2*z^2 + (1+i)/2)"
        " + x*1/2*z^2",
        "f": "(z+y)/2 + i*(y-z)/2",
        "u": "z",
        "line_values": ["1", "i", "-i", "-1"],
    },
}


def _golden_check(name: str, actual, expected_src: str) -> CheckReport:
    expected = parse_poly(expected_src)
    if actual == expected:
        return CheckReport(name, True)
    from .verification import Witness

    return CheckReport(name, False, Witness(None, actual - expected))


# -- output helpers -----------------------------------------------------------


def _fmt_value(value, fmt: str) -> str:
    if isinstance(value, XLaurent):
        return laurent_tex(value) if fmt == "latex" else laurent_str(value)
    return poly_tex(value) if fmt == "latex" else poly_str(value)


def _print_report(report: Report) -> None:
    for check in report.checks:
        print(str(check))
    print(f"result: {'PASS' if report.passed else 'FAIL'}")


def _print_map_components(title: str, images: dict, fmt: str) -> None:
    if fmt == "latex":
        print(f"% {title}")
        print("\\begin{align*}")
        for name in GEN_ORDER:
            print(f"\\Phi({name}) &= {_fmt_value(images[name], fmt)}\\\\")
        print("\\end{align*}")
    else:
        print(f"map {title}:")
        for name in GEN_ORDER:
            print(f"  {name} -> {_fmt_value(images[name], fmt)}")


def _print_surface_data(surface: ChartedSurface, fmt: str) -> None:
    print("data:")
    print(f"  n = {surface.spec.n}")
    print("  roots: " + ", ".join(poly_str(MultiPoly.const(r)) for r in surface.spec.roots))
    for i, sigma in enumerate(surface.spec.sigmas):
        print(f"  sigma_{i + 1} = {poly_str(sigma)}")
    if surface.u_ambient is not None:
        print(f"  u = {poly_str(surface.u_ambient)}")
    if surface.f_ambient is not None:
        print(f"  f = {poly_str(surface.f_ambient)}")


def _relation_str(surface: ChartedSurface) -> str:
    return " and ".join(f"{poly_str(r)} = 0" for r in surface.relations)


# -- subcommands ---------------------------------------------------------------


def cmd_build(args) -> int:
    with open(args.spec, encoding="utf-8") as handle:
        surface = surface_from_json(load_document(handle.read(), "surface"))
    if args.target_roots:
        supplied = [scalar_from_json(r.strip()) for r in args.target_roots.split(",")]
        if sorted(supplied, key=str) != sorted(surface.spec.roots, key=str):
            raise PreconditionError(
                "--target-roots must be the surface's root labels (any order)"
            )
    cert = build_cylinder_iso(surface)
    if args.format == "json":
        payload = cylinder_map_to_json(cert.phi)
        doc = {"map": payload, "report": report_to_json(cert.report)}
        sys.stdout.write(dump_document_multi(doc))
    else:
        print(f"surface: {_relation_str(surface) if surface.relations else 'abstract gluing data'}")
        _print_surface_data(surface, args.format)
        g_display = substitute_poly(cert.phi.witness.g, {"t": MultiPoly.variable("z")})
        print(f"  g = {_fmt_value(g_display, args.format)}")
        images = cert.phi.ambient_images or cert.phi.gen_images
        if cert.phi.ambient_images is not None:
            _print_map_components("classical cylinder -> surface cylinder", images, args.format)
        else:
            print("map (per chart):")
            for name in GEN_ORDER:
                reps = ", ".join(_fmt_value(r, args.format) for r in cert.phi.gen_images[name].reps)
                print(f"  {name} -> [{reps}]")
        _print_report(cert.report)
    return 0 if cert.passed else 1


def cmd_verify(args) -> int:
    with open(args.map, encoding="utf-8") as handle:
        loaded = map_from_json(load_document(handle.read(), "map"))
    if loaded.kind == "cylinder":
        report = certify_cylinder_iso(loaded.phi)
    else:
        report = verify_inverse_pair(loaded.phi, loaded.psi)
    if args.format == "json":
        sys.stdout.write(dump_document("report", report_to_json(report)))
    else:
        _print_report(report)
    return 0 if report.passed else 1


def _russell_example(fmt: str) -> tuple[Report, dict]:
    one = GaussianRational(1)
    cert = classical_pair_iso([one, -one], [one, -one], 2, 1)
    report = Report()
    golden = GOLDEN["russell"]
    bez = bezout_pair(parse_poly("z^2-1"))
    report.add(_golden_check("bezout g matches printed form", bez.g, golden["g"]))
    # independent route: the flat interpolant inside the w-image of phi
    report.add(
        _golden_check(
            "bezout g equals interpolation g", bez.g, poly_str(cert.phi.witness.inner)
        )
    )
    for direction, m in (("phi", cert.phi), ("psi", cert.psi)):
        for name in GEN_ORDER:
            report.add(
                _golden_check(
                    f"{direction}.{name} matches printed form",
                    m.ambient_images[name],
                    golden[direction][name],
                )
            )
    inverse = verify_inverse_pair(cert.phi, cert.psi)
    report.checks.extend(inverse.checks)
    payload = {
        "description": "cylinders over x^2*y = z^2-1 and x*y = z^2-1",
        "pair": (cert.phi, cert.psi),
    }
    return report, payload


def _classical_example(fmt: str) -> tuple[Report, dict]:
    roots_p = [scalar_from_json(s) for s in ("1", "-1", "0")]
    roots_q = [scalar_from_json(s) for s in ("2", "-1", "1")]
    cert = classical_pair_iso(roots_p, roots_q, 2, 3)
    report = Report()
    report.checks.extend(cert.report.checks)
    inverse = verify_inverse_pair(cert.phi, cert.psi)
    report.checks.extend(inverse.checks)
    payload = {
        "description": "cylinders over x^2*y = P(z) and x^3*y = Q(z),"
        " P = (z-1)(z+1)z, Q = (z-2)(z+1)(z-1)",
        "pair": (cert.phi, cert.psi),
    }
    return report, payload


def _surface_example(name: str) -> tuple[Report, dict]:
    surface = make_iterated_example() if name == "iterated" else make_double_example()
    cert = build_cylinder_iso(surface)
    golden = GOLDEN[name]
    report = Report()
    g_display = substitute_poly(cert.phi.witness.g, {"t": MultiPoly.variable("z")})
    report.add(_golden_check("g matches printed form", g_display, golden["g"]))
    report.add(
        _golden_check("f matches printed form", surface.f_ambient, golden["f"])
    )
    report.add(
        _golden_check("u matches printed form", surface.u_ambient, golden["u"])
    )
    values = golden.get("roots") or golden.get("line_values")
    for i, expected in enumerate(values):
        value = substitute_poly(surface.f.reps[i], {"x": MultiPoly.const(0)})
        report.add(_golden_check(f"f on line {i + 1}", value, expected))
    if name == "double":
        for i, (root, sigma) in enumerate(
            zip(surface.spec.roots, surface.spec.sigmas)
        ):
            value = substitute_poly(
                cert.phi.witness.g, {"t": MultiPoly.const(root)}
            )
            report.add(
                _golden_check(f"g(x, r_{i + 1}) hits sigma_{i + 1}", value, poly_str(sigma))
            )
    report.checks.extend(cert.report.checks)
    payload = {"description": _relation_str(surface), "cert": cert, "surface": surface}
    return report, payload


def cmd_examples(args) -> int:
    name = args.name
    if name == "russell":
        report, payload = _russell_example(args.format)
    elif name == "classical":
        report, payload = _classical_example(args.format)
    else:
        report, payload = _surface_example(name)
    if args.format == "json":
        if "pair" in payload:
            phi, psi = payload["pair"]
            doc = {"map": pair_to_json(phi, psi), "report": report_to_json(report)}
        else:
            doc = {
                "map": cylinder_map_to_json(payload["cert"].phi),
                "report": report_to_json(report),
            }
        sys.stdout.write(dump_document_multi(doc))
    else:
        print(f"example: {name}")
        print(f"setting: {payload['description']}")
        if "pair" in payload:
            phi, psi = payload["pair"]
            print(f"  f = {_fmt_value(phi.witness.inner, args.format)}")
            print(f"  g = {_fmt_value(phi.witness.outer, args.format)}")
            _print_map_components("phi (forward)", phi.ambient_images, args.format)
            _print_map_components("psi (inverse)", psi.ambient_images, args.format)
        else:
            surface = payload["surface"]
            _print_surface_data(surface, args.format)
            cert = payload["cert"]
            g_display = substitute_poly(
                cert.phi.witness.g, {"t": MultiPoly.variable("z")}
            )
            print(f"  g = {_fmt_value(g_display, args.format)}")
            _print_map_components(
                "surface cylinder -> classical cylinder (pullback form)",
                cert.phi.ambient_images,
                args.format,
            )
        _print_report(report)
    return 0 if report.passed else 1


def cmd_embed(args) -> int:
    with open(args.spec, encoding="utf-8") as handle:
        surface = surface_from_json(load_document(handle.read(), "surface"))
    lam = scalar_from_json(args.lam)
    bound = args.degree_bound
    equations = embedding_equations(surface, lam=lam, degree_bound=bound)
    if args.format == "json":
        payload = {
            "lambda": args.lam,
            "equations": [poly_str(e) for e in equations],
        }
        sys.stdout.write(dump_document("embedding", payload))
    elif args.format == "latex":
        for eq in equations:
            print(f"{poly_tex(eq)} = 0")
    else:
        print("embedding in affine 4-space:")
        for eq in equations:
            print(f"  {poly_str(eq)} = 0")
    return 0


def dump_document_multi(payload: dict) -> str:
    import json as _json

    doc = {"field": "Q(i)"}
    doc.update(payload)
    return _json.dumps(doc, indent=2) + "\n"


def build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="danielewski",
        description="Construct and verify explicit isomorphisms between "
        "cylinders over special Danielewski surfaces (exact arithmetic).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format",
            choices=("text", "latex", "json"),
            default="text",
            help="output format (default text)",
        )

    p_build = sub.add_parser("build", help="build the cylinder isomorphism")
    p_build.add_argument("--spec", required=True, help="surface spec JSON file")
    p_build.add_argument(
        "--target-roots",
        help="comma-separated target roots; must match the surface labels",
    )
    add_format(p_build)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="verify a serialized map")
    p_verify.add_argument("--map", required=True, help="map JSON file")
    add_format(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_examples = sub.add_parser("examples", help="reproduce a worked example")
    p_examples.add_argument(
        "name", choices=("russell", "classical", "iterated", "double")
    )
    add_format(p_examples)
    p_examples.set_defaults(func=cmd_examples)

    p_embed = sub.add_parser("embed", help="emit embedding equations")
    p_embed.add_argument("--spec", required=True, help="surface spec JSON file")
    p_embed.add_argument("--lambda", dest="lam", default="0", help="constant value")
    p_embed.add_argument(
        "--degree-bound",
        type=int,
        default=None,
        help="total degree bound for the ambient search "
        "(default 2*(n+d); DANIELEWSKI_DEGREE_BOUND overrides)",
    )
    add_format(p_embed)
    p_embed.set_defaults(func=cmd_embed)
    return parser


def main(argv=None) -> int:
    args = build_argparser().parse_args(argv)
    try:
        return args.func(args)
    except (CapExceededError, GlobalizationError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 3
    except (ParseError, PreconditionError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except DanielewskiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
