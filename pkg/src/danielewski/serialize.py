"""JSON encoding and decoding for surfaces, maps, and reports.

Top-level documents are objects with a "field" tag (always "Q(i)") and one
of the keys "surface", "map", or "report".  Polynomials are serialized as
canonical expression strings (human-diffable, re-parsed on load) together
with a parallel monomial-to-coefficient map for machine use; the string
form is authoritative.  Everything decoded is re-validated: surfaces run
their construction checks, and maps re-derive their chart images where
those are not stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cylinders import Cylinder, CylinderMap, PairWitness, TheoremWitness
from .errors import PreconditionError
from .gaussian import GaussianRational
from .parser import parse_poly
from .polynomials import MultiPoly, XLaurent, X_NAME
from .render import coeff_str, laurent_str, monomial_str, poly_str
from .surfaces import (
    Chart,
    ChartedSurface,
    GlobalFunction,
    SurfaceSpec,
    make_classical,
    make_double_example,
    make_hypersurface,
    make_iterated_example,
    make_raw,
)
from .verification import CheckReport, Report, Witness

FIELD_TAG = "Q(i)"


def poly_to_json(p: MultiPoly) -> dict:
    return {
        "expr": poly_str(p),
        "terms": {
            monomial_str(p.vars, expo): coeff_str(coeff, wrap_mixed=False)
            for expo, coeff in p.sorted_terms()
        },
    }


def poly_from_json(obj: dict | str) -> MultiPoly:
    if isinstance(obj, str):
        return parse_poly(obj)
    return parse_poly(obj["expr"])


def laurent_to_json(q: XLaurent) -> dict:
    if q.xshift >= 0:
        return {"num": poly_to_json(q.to_poly()), "xpow": 0}
    return {"num": poly_to_json(q.body), "xpow": -q.xshift}


def laurent_from_json(obj: dict) -> XLaurent:
    return XLaurent(poly_from_json(obj["num"]), -obj["xpow"])


def scalar_to_json(value: GaussianRational) -> str:
    return coeff_str(value, wrap_mixed=False)


def scalar_from_json(text: str) -> GaussianRational:
    p = parse_poly(text)
    if not p.is_constant():
        raise PreconditionError(f"expected a constant, got {text!r}")
    return p.constant_value()


# -- surfaces ----------------------------------------------------------------


def surface_to_json(surface: ChartedSurface) -> dict:
    desc = surface.descriptor
    kind = desc.get("type")
    if kind == "classical":
        return {
            "type": "classical",
            "n": desc["n"],
            "roots": [scalar_to_json(r) for r in desc["roots"]],
        }
    if kind == "hypersurface":
        return {
            "type": "hypersurface",
            "n": desc["n"],
            "Q": poly_to_json(desc["q"]),
            "roots": [scalar_to_json(r) for r in desc["roots"]],
        }
    if kind == "builtin":
        return {"type": "builtin", "name": desc["name"]}
    trivial = all(set(c.param) == {X_NAME} for c in surface.charts)
    return {
        "type": "raw",
        "spec": {
            "n": surface.spec.n,
            "sigmas": [poly_to_json(s) for s in surface.spec.sigmas],
            "roots": [scalar_to_json(r) for r in surface.spec.roots],
        },
        "charts": None
        if trivial
        else [
            {gen: poly_to_json(p) for gen, p in sorted(c.param.items())}
            for c in surface.charts
        ],
        "relations": [poly_to_json(r) for r in surface.relations],
        "f": [poly_to_json(rep) for rep in surface.f.reps],
        "u": None if surface.u_ambient is None else poly_to_json(surface.u_ambient),
        "f_ambient": None
        if surface.f_ambient is None
        else poly_to_json(surface.f_ambient),
    }


_BUILTINS = {"iterated": make_iterated_example, "double": make_double_example}


def surface_from_json(obj: dict) -> ChartedSurface:
    kind = obj.get("type")
    if kind == "classical":
        return make_classical(obj["n"], [scalar_from_json(r) for r in obj["roots"]])
    if kind == "hypersurface":
        return make_hypersurface(
            obj["n"],
            poly_from_json(obj["Q"]),
            [scalar_from_json(r) for r in obj["roots"]],
        )
    if kind == "builtin":
        name = obj.get("name")
        if name not in _BUILTINS:
            raise PreconditionError(f"unknown builtin surface {name!r}")
        return _BUILTINS[name]()
    if kind == "raw":
        spec_obj = obj["spec"]
        spec = SurfaceSpec(
            spec_obj["n"],
            tuple(poly_from_json(s) for s in spec_obj["sigmas"]),
            tuple(scalar_from_json(r) for r in spec_obj["roots"]),
        )
        charts = None
        if obj.get("charts"):
            charts = tuple(
                Chart(i, {gen: poly_from_json(p) for gen, p in chart.items()})
                for i, chart in enumerate(obj["charts"])
            )
        f = None
        if obj.get("f"):
            f = GlobalFunction(tuple(poly_from_json(rep) for rep in obj["f"]))
        u_ambient = poly_from_json(obj["u"]) if obj.get("u") else None
        f_ambient = (
            poly_from_json(obj["f_ambient"]) if obj.get("f_ambient") else None
        )
        return make_raw(
            spec,
            charts=charts,
            relations=tuple(poly_from_json(r) for r in obj.get("relations", [])),
            f=f,
            u_ambient=u_ambient,
            f_ambient=f_ambient,
        )
    raise PreconditionError(f"unknown surface type {kind!r}")


# -- maps --------------------------------------------------------------------


GEN_ORDER = (X_NAME, "y", "z", "w")


def cylinder_map_to_json(m: CylinderMap) -> dict:
    if not isinstance(m.witness, TheoremWitness):
        raise PreconditionError("expected a surface-to-classical map")
    target_roots = [scalar_to_json(r) for r in m.target.surface.spec.roots]
    return {
        "kind": "cylinder",
        "source": surface_to_json(m.source.surface),
        "target_roots": target_roots,
        "f": [poly_to_json(rep) for rep in m.witness.f.reps],
        "g": poly_to_json(m.witness.g),
        "gen_images": {
            name: [poly_to_json(rep) for rep in m.gen_images[name].reps]
            for name in GEN_ORDER
        },
        "ambient_images": None
        if m.ambient_images is None
        else {name: laurent_to_json(m.ambient_images[name]) for name in GEN_ORDER},
    }


def pair_to_json(phi: CylinderMap, psi: CylinderMap) -> dict:
    if not isinstance(phi.witness, PairWitness):
        raise PreconditionError("expected a classical pair map")
    return {
        "kind": "pair",
        "n": phi.source.surface.spec.n,
        "m": phi.target.surface.spec.n,
        "roots_p": [scalar_to_json(r) for r in phi.source.surface.spec.roots],
        "roots_q": [scalar_to_json(r) for r in phi.target.surface.spec.roots],
        "f": poly_to_json(phi.witness.inner),
        "g": poly_to_json(phi.witness.outer),
        "phi": {name: poly_to_json(phi.ambient_images[name]) for name in GEN_ORDER},
        "psi": {name: poly_to_json(psi.ambient_images[name]) for name in GEN_ORDER},
    }


@dataclass
class LoadedMap:
    kind: str
    phi: CylinderMap
    psi: CylinderMap | None


def map_from_json(obj: dict) -> LoadedMap:
    kind = obj.get("kind")
    if kind == "cylinder":
        surface = surface_from_json(obj["source"])
        roots = [scalar_from_json(r) for r in obj["target_roots"]]
        target = Cylinder(make_classical(1, roots), "w")
        gen_images = {
            name: GlobalFunction(tuple(poly_from_json(r) for r in reps))
            for name, reps in obj["gen_images"].items()
        }
        ambient = None
        if obj.get("ambient_images"):
            ambient = {
                name: laurent_from_json(v)
                for name, v in obj["ambient_images"].items()
            }
        witness = TheoremWitness(
            f=GlobalFunction(tuple(poly_from_json(r) for r in obj["f"])),
            g=poly_from_json(obj["g"]),
        )
        phi = CylinderMap(
            source=Cylinder(surface, "w"),
            target=target,
            gen_images=gen_images,
            ambient_images=ambient,
            chart_pairing=tuple(range(surface.d)),
            witness=witness,
        )
        return LoadedMap("cylinder", phi, None)
    if kind == "pair":
        roots_p = [scalar_from_json(r) for r in obj["roots_p"]]
        roots_q = [scalar_from_json(r) for r in obj["roots_q"]]
        f = poly_from_json(obj["f"])
        g = poly_from_json(obj["g"])
        w_n = make_classical(obj["n"], roots_p)
        w_m = make_classical(obj["m"], roots_q)

        def direction(src, tgt, comps, outer, inner):
            ambient = {name: poly_from_json(p) for name, p in comps.items()}
            gen_images = {
                name: GlobalFunction(
                    tuple(src.restrict(img, i) for i in range(src.d))
                )
                for name, img in ambient.items()
            }
            return CylinderMap(
                source=Cylinder(src, "w"),
                target=Cylinder(tgt, "w"),
                gen_images=gen_images,
                ambient_images=ambient,
                chart_pairing=tuple(range(src.d)),
                witness=PairWitness(outer=outer, inner=inner),
            )

        phi = direction(w_n, w_m, obj["phi"], g, f)
        psi = direction(w_m, w_n, obj["psi"], f, g)
        return LoadedMap("pair", phi, psi)
    raise PreconditionError(f"unknown map kind {kind!r}")


# -- reports -----------------------------------------------------------------


def report_to_json(report: Report) -> dict:
    checks = []
    for c in report.checks:
        witness = None
        if c.witness is not None:
            witness = {
                "chart": None if c.witness.chart is None else c.witness.chart + 1,
                "residue": c.witness.residue_str(),
            }
        checks.append(
            {"name": c.name, "passed": c.passed, "witness": witness, "note": c.note}
        )
    return {"passed": report.passed, "checks": checks}


def report_from_json(obj: dict) -> Report:
    report = Report()
    for c in obj["checks"]:
        witness = None
        if c.get("witness"):
            chart = c["witness"].get("chart")
            witness = Witness(
                None if chart is None else chart - 1, c["witness"]["residue"]
            )
        report.add(CheckReport(c["name"], c["passed"], witness, c.get("note", "")))
    return report


# -- documents ---------------------------------------------------------------


def dump_document(key: str, payload: dict) -> str:
    return json.dumps({"field": FIELD_TAG, key: payload}, indent=2) + "\n"


def load_document(text: str, key: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("field") != FIELD_TAG:
        raise PreconditionError(f'document must carry "field": "{FIELD_TAG}"')
    if key not in obj:
        raise PreconditionError(f"document does not contain a {key!r} entry")
    return obj[key]
