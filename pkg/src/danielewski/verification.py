"""Independent symbolic checkers.

Everything here compares exactly; there are no tolerances anywhere.  The
checkers return CheckReport objects (never raise on a mere failure), so a
verification suite can collect every failure with its witness.  Only a
genuinely inconclusive situation (nilpotency cap) raises.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import CapExceededError, NotTriangularError
from .gaussian import GaussianRational
from .polynomials import (
    MultiPoly,
    XLaurent,
    X_NAME,
    mul_x_power,
    substitute,
    substitute_laurent,
    substitute_poly,
    taylor_shift,
    truncate_x,
)


@dataclass(frozen=True)
class Witness:
    """Where a check failed: optional chart index plus the exact residue
    (a polynomial, a Laurent element, or a rendered description)."""

    chart: int | None
    residue: object

    def residue_str(self) -> str:
        from .render import laurent_str, poly_str

        if isinstance(self.residue, XLaurent):
            return laurent_str(self.residue)
        if isinstance(self.residue, MultiPoly):
            return poly_str(self.residue)
        return str(self.residue)

    def __str__(self) -> str:
        where = f"chart {self.chart + 1}: " if self.chart is not None else ""
        return f"{where}residue {self.residue_str()}"


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one named check; passed iff there is no witness."""

    name: str
    passed: bool
    witness: Witness | None = None
    note: str = ""

    def __post_init__(self):
        if self.passed == (self.witness is not None):
            raise ValueError("passed must hold exactly when no witness is present")

    def __str__(self) -> str:
        if self.passed:
            suffix = f" ({self.note})" if self.note else ""
            return f"check {self.name}: pass{suffix}"
        return f"check {self.name}: FAIL [{self.witness}]"


@dataclass
class Report:
    """A bundle of check reports; passes iff every check passed."""

    checks: list[CheckReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckReport) -> None:
        self.checks.append(check)

    def failures(self) -> list[CheckReport]:
        return [c for c in self.checks if not c.passed]

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.checks)


def _ok(name: str, note: str = "") -> CheckReport:
    return CheckReport(name, True, None, note)


def _fail(name: str, chart: int | None, residue) -> CheckReport:
    return CheckReport(name, False, Witness(chart, residue))


# -- separation: f takes the value r_i on the i-th special-fiber line -----


def check_separation(f, surface, name: str = "separation") -> CheckReport:
    """f restricted to chart i and then to x = 0 must be the constant
    roots[i], for every chart."""
    for i, rep in enumerate(f.reps):
        at_zero = substitute_poly(rep, {X_NAME: MultiPoly.const(0)})
        residue = at_zero - MultiPoly.const(surface.spec.roots[i])
        if residue.terms:
            return _fail(name, i, residue)
    return _ok(name)


# -- slice congruence: g(x, r_i + x t) matches sigma_i mod x^n ------------


def check_slice_congruence(
    g: MultiPoly,
    sigmas: Sequence[MultiPoly],
    roots: Sequence[GaussianRational],
    n: int,
    t_name: str = "t",
    name: str = "slice-congruence",
) -> CheckReport:
    """Taylor-shift each x-layer of g at r_i, truncate mod x^n and compare
    with sigma_i(x)."""
    layers = g.by_powers(X_NAME)
    for i, (sigma, root) in enumerate(zip(sigmas, roots)):
        total = MultiPoly.zero()
        for j, layer in layers.items():
            if j >= n:
                continue
            shifted = taylor_shift(layer, GaussianRational.coerce(root), t_name=t_name)
            total = total + truncate_x(mul_x_power(shifted, j), n)
        residue = total - sigma
        if residue.terms:
            return _fail(name, i, residue)
    return _ok(name)


# -- local nilpotency ------------------------------------------------------


def default_nilpotency_cap(p: MultiPoly, derivation) -> int:
    """(1 + total degree of p in the non-x variables) times (1 + max total
    degree of the derivation's images) plus 4."""
    if p.terms and X_NAME in p.vars:
        xi = p.vars.index(X_NAME)
        deg = max(sum(e) - e[xi] for e in p.terms)
    else:
        deg = max(p.total_degree(), 0)
    img = 0
    for images in derivation.chart_images:
        for value in images.values():
            img = max(img, value.total_degree())
    return (1 + max(deg, 0)) * (1 + max(img, 0)) + 4


def check_locally_nilpotent(
    derivation,
    gens: Sequence[tuple[int, MultiPoly]],
    cap: int | None = None,
    name: str = "locally-nilpotent",
) -> CheckReport:
    """Iterate the derivation on each (chart, polynomial) generator until it
    reaches zero.  Reports the nilpotency indices; raises CapExceededError
    (inconclusive, distinct from failure) when the cap is hit.
    """
    indices = []
    for chart, gen in gens:
        limit = cap if cap is not None else default_nilpotency_cap(gen, derivation)
        if limit < 1:
            raise ValueError("cap must be at least 1")
        current = gen
        steps = 0
        while current.terms:
            if steps >= limit:
                from .render import poly_str

                raise CapExceededError(limit, f"chart {chart}: {poly_str(gen)}")
            current = derivation.apply_chart(chart, current)
            steps += 1
        indices.append(steps + 1 if gen.terms else 1)
    return _ok(name, note="indices " + ",".join(map(str, indices)))


# -- substitution-based ideal membership ----------------------------------


def cascade_bindings(relations: Sequence[MultiPoly]) -> dict[str, XLaurent]:
    """Solve each relation for one variable with an x-power coefficient.

    Each relation must isolate a distinct variable v != x appearing
    linearly with coefficient c*x^k; the solved expressions are composed in
    dependency order.  NotTriangularError when no such cascade exists
    (e.g. a variable occurs on both sides at higher degree).
    """
    raw: dict[str, tuple[XLaurent, MultiPoly]] = {}
    for rel in relations:
        candidate = None
        for v in rel.vars:
            if v == X_NAME or v in raw:
                continue
            if rel.degree(v) != 1:
                continue
            lead = rel.coefficient(v, 1)
            if set(lead.vars) <= {X_NAME} and len(lead.terms) == 1:
                candidate = v
                break
        if candidate is None:
            raise NotTriangularError(
                "relation does not isolate a variable with an x-power coefficient"
            )
        lead = rel.coefficient(candidate, 1)
        ((expo, scalar),) = lead.terms.items()
        k = expo[0] if lead.vars else 0
        rest = rel.coefficient(candidate, 0)
        expr = XLaurent(rest * (-scalar.inverse()), -k)
        raw[candidate] = (expr, rest)
    resolved: dict[str, XLaurent] = {}
    pending = dict(raw)
    while pending:
        progressed = False
        for v in list(pending):
            expr, rest = pending[v]
            deps = set(rest.vars) & set(raw)
            if deps <= set(resolved):
                resolved[v] = substitute_laurent(expr, resolved) if deps else expr
                del pending[v]
                progressed = True
        if not progressed:
            raise NotTriangularError("cyclic dependency between isolated variables")
    return resolved


def ideal_membership(p: MultiPoly, relations: Sequence[MultiPoly]) -> bool:
    """Membership of p in the ideal of a cascade-solvable relation system,
    decided by substituting the solved cascade over the Laurent-in-x ring.

    Valid because the varieties in scope are irreducible and smooth, so
    vanishing on the dense x != 0 locus is equivalent to membership.
    """
    bindings = cascade_bindings(relations)
    return substitute(p, bindings).is_zero()


def membership_residue(p: MultiPoly, relations: Sequence[MultiPoly]) -> XLaurent:
    """The Laurent residue of p under the cascade; zero iff member."""
    return substitute(p, cascade_bindings(relations))


def division_membership(p: MultiPoly, relation: MultiPoly, main_var: str) -> bool:
    """Independent membership oracle for a single relation linear in
    main_var: long division by the relation treating main_var as the
    leading variable, with Laurent-in-x coefficients; membership iff the
    remainder vanishes."""
    lead = relation.coefficient(main_var, 1)
    if relation.degree(main_var) != 1 or not (
        set(lead.vars) <= {X_NAME} and len(lead.terms) == 1
    ):
        raise NotTriangularError("relation is not linear in the chosen variable")
    ((expo, scalar),) = lead.terms.items()
    k = expo[0] if lead.vars else 0
    inv_lead = XLaurent(MultiPoly.const(scalar.inverse()), -k)
    b_part = XLaurent.from_poly(relation.coefficient(main_var, 0))
    coeffs: dict[int, XLaurent] = {
        deg: XLaurent.from_poly(c) for deg, c in p.by_powers(main_var).items()
    }
    top = max(coeffs, default=0)
    for deg in range(top, 0, -1):
        cur = coeffs.pop(deg, None)
        if cur is None or cur.is_zero():
            continue
        q = cur * inv_lead
        lower = coeffs.get(deg - 1, XLaurent.from_poly(MultiPoly.zero()))
        coeffs[deg - 1] = lower - q * b_part
    remainder = coeffs.get(0, XLaurent.from_poly(MultiPoly.zero()))
    return remainder.is_zero()


# -- inverse pairs of classical-cylinder maps ------------------------------


def _classical_rhs(surface) -> MultiPoly:
    """Recover P(z) from the single relation x^n y - P(z) of a classical
    surface."""
    relation = surface.relations[0]
    n = surface.spec.n
    return mul_x_power(MultiPoly.variable("y"), n) - relation


def _structure_checks(m, label: str, report: Report, relations) -> None:
    """The defining identities of one direction of a classical pair map,
    each decided by the substitution ideal-membership oracle on the source
    cylinder."""
    n_src = m.source.surface.spec.n
    n_tgt = m.target.surface.spec.n
    x = MultiPoly.variable(X_NAME)
    z = MultiPoly.variable("z")
    w = MultiPoly.variable(m.source.var)
    comp = m.ambient_images

    residue = comp[X_NAME] - x
    report.add(_ok(f"{label}.x-form") if not residue.terms else _fail(f"{label}.x-form", None, residue))

    expected_z = m.witness.outer + mul_x_power(w, n_tgt)
    residue = comp["z"] - expected_z
    report.add(_ok(f"{label}.z-form") if not residue.terms else _fail(f"{label}.z-form", None, residue))

    rhs_tgt = _classical_rhs(m.target.surface)
    y_identity = mul_x_power(comp["y"], n_tgt) - substitute_poly(rhs_tgt, {"z": comp["z"]})
    res = membership_residue(y_identity, relations)
    report.add(
        _ok(f"{label}.y-structure") if res.is_zero() else _fail(f"{label}.y-structure", None, res)
    )

    inner_at = substitute_poly(m.witness.inner, {"z": comp["z"]})
    w_identity = mul_x_power(comp[m.target.var], n_src) - (z - inner_at)
    res = membership_residue(w_identity, relations)
    report.add(
        _ok(f"{label}.w-structure") if res.is_zero() else _fail(f"{label}.w-structure", None, res)
    )


def _compose_component(outer_component: MultiPoly, inner, relations) -> XLaurent:
    """Laurent value of outer_component with the inner map's components
    substituted for (x, y, z, w), over the inner map's source cylinder."""
    bindings = cascade_bindings(relations)
    laurent_images = {
        name: substitute(value, bindings) for name, value in inner.ambient_images.items()
    }
    return substitute(outer_component, laurent_images)


def verify_inverse_pair(phi, psi, full_composition: bool = False) -> Report:
    """Check that two classical-cylinder maps are mutually inverse.

    Per direction, the component identities (x-form, z-form, y- and
    w-structure) are decided by ideal membership on the source cylinder;
    the z-composition is then computed literally both ways.  Together these
    identities force both full compositions to be the identity, because the
    coordinate ring is a domain in which x is a non-zero-divisor: from
     psi(z) composed with phi equal to z, applying the ring map to the
    relation gives x^n*(psi o phi)(y) = P(z) = x^n*y, and the w-identity
    transports the same way.  With full_composition=True every generator is
    composed literally as well (quadratic blow-up; meant for small cases).
    """
    report = Report()
    rel_phi = phi.source.surface.relations
    rel_psi = psi.source.surface.relations
    _structure_checks(phi, "phi", report, rel_phi)
    _structure_checks(psi, "psi", report, rel_psi)
    for outer, inner, label, relations in (
        (psi, phi, "psi∘phi", rel_phi),
        (phi, psi, "phi∘psi", rel_psi),
    ):
        gens = ["z"] if not full_composition else [X_NAME, "y", "z", outer.target.var]
        bindings = cascade_bindings(relations)
        for gen in gens:
            value = _compose_component(outer.ambient_images[gen], inner, relations)
            residue = value - substitute(MultiPoly.variable(gen), bindings)
            name = f"{label}.{gen}"
            report.add(_ok(name) if residue.is_zero() else _fail(name, None, residue))
    return report
