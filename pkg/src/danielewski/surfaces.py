"""Charted models of special Danielewski surfaces.

A surface is d >= 2 affine-plane charts Spec C[x, u_i] glued over x != 0 by
u_i |-> u_i + (sigma_i(x) - sigma_j(x))/x^n, with all chart weights equal
(the special case).  Gluing data lives in SurfaceSpec; an optional ambient
presentation (chart parametrizations of ambient generators plus defining
relations) rides along and is verified on construction, never trusted.

Regular functions are stored per chart (GlobalFunction) and must agree on
overlaps; derivations are stored through their images on the chart
generators and applied via the Leibniz rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    CannotSeparateError,
    DuplicateRootsError,
    NotDivisibleError,
    PreconditionError,
)
from .gaussian import GaussianRational, I as IMAG, ONE, ZERO, gr
from .interpolation import hensel_sections, lagrange
from .polynomials import (
    MultiPoly,
    XLaurent,
    X_NAME,
    div_exact_x_power,
    formal_derivative,
    mul_x_power,
    substitute,
    substitute_laurent,
    substitute_poly,
    x_valuation,
)
from .verification import CheckReport, Report, Witness, check_separation

X = MultiPoly.variable(X_NAME)


def chart_var(i: int) -> str:
    """Name of the coordinate on the i-th chart (0-based index, 1-based name)."""
    return f"u{i + 1}"


@dataclass(frozen=True)
class SurfaceSpec:
    """Gluing data: common weight n, one sigma_i(x) of degree < n per chart,
    and the label r_i each special-fiber line must carry under the
    separating function."""

    n: int
    sigmas: tuple[MultiPoly, ...]
    roots: tuple[GaussianRational, ...]

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("chart weight n must be positive")
        d = len(self.sigmas)
        if d < 2:
            raise PreconditionError("a Danielewski surface needs at least two charts")
        if len(self.roots) != d:
            raise PreconditionError("need exactly one root label per chart")
        for s in self.sigmas:
            if not set(s.vars) <= {X_NAME} or s.degree(X_NAME) >= self.n:
                raise PreconditionError("each sigma must be a polynomial in x of degree < n")
        if len(set(self.sigmas)) != d:
            raise PreconditionError("sigma polynomials must be pairwise distinct")
        if len(set(self.roots)) != d:
            raise DuplicateRootsError("root labels must be pairwise distinct")

    @property
    def d(self) -> int:
        return len(self.sigmas)


def transition_map(spec: SurfaceSpec, i: int, j: int) -> dict[str, XLaurent]:
    """Expression of the chart-j coordinate in chart-i coordinates:
    u_j = u_i + (sigma_i - sigma_j)/x^n over x != 0.  Substituting it into a
    chart-j representative transports the function to chart i."""
    ui = MultiPoly.variable(chart_var(i))
    if i == j:
        return {chart_var(i): XLaurent.from_poly(ui)}
    delta = spec.sigmas[i] - spec.sigmas[j]
    return {chart_var(j): XLaurent.from_poly(ui) + XLaurent(delta, -spec.n)}


@dataclass(frozen=True)
class GlobalFunction:
    """A regular function given by one polynomial per chart, in the chart
    variables (x, u_i) plus, on a cylinder, the cylinder variable."""

    reps: tuple[MultiPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "reps", tuple(self.reps))

    def __add__(self, other):
        other = _coerce_global(other, len(self.reps))
        return GlobalFunction(tuple(a + b for a, b in zip(self.reps, other.reps)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_global(other, len(self.reps))
        return GlobalFunction(tuple(a - b for a, b in zip(self.reps, other.reps)))

    def __mul__(self, other):
        other = _coerce_global(other, len(self.reps))
        return GlobalFunction(tuple(a * b for a, b in zip(self.reps, other.reps)))

    __rmul__ = __mul__

    def __neg__(self):
        return GlobalFunction(tuple(-a for a in self.reps))

    def is_zero(self) -> bool:
        return all(not r.terms for r in self.reps)


def _coerce_global(value, d: int) -> GlobalFunction:
    if isinstance(value, GlobalFunction):
        return value
    p = MultiPoly.coerce(value)
    return GlobalFunction((p,) * d)


def check_overlap_consistency(
    g: GlobalFunction, spec: SurfaceSpec, name: str = "overlap"
) -> CheckReport:
    """For every chart pair i < j, transporting the chart-j representative
    to chart i must reproduce the chart-i representative exactly (in the
    Laurent-in-x ring).  Cylinder variables pass through transitions."""
    for i in range(spec.d):
        for j in range(i + 1, spec.d):
            transported = substitute(g.reps[j], transition_map(spec, i, j))
            residue = transported - XLaurent.from_poly(g.reps[i])
            if not residue.is_zero():
                return CheckReport(
                    f"{name}[{i + 1},{j + 1}]", False, Witness(i, residue)
                )
    return CheckReport(name, True)


@dataclass(frozen=True)
class Chart:
    """Parametrization of the ambient generators on one chart; param maps
    each ambient generator name to a polynomial in (x, u_index)."""

    index: int
    param: Mapping[str, MultiPoly]


@dataclass(frozen=True)
class ChartedSurface:
    spec: SurfaceSpec
    charts: tuple[Chart, ...]
    relations: tuple[MultiPoly, ...]
    u_ambient: MultiPoly | None
    f: GlobalFunction
    f_ambient: MultiPoly | None = None
    descriptor: dict = field(default_factory=dict, compare=False)

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def ambient_gens(self) -> tuple[str, ...]:
        from .polynomials import sort_vars

        names = set()
        for chart in self.charts:
            names.update(chart.param)
        return sort_vars(names)

    def u_function(self) -> GlobalFunction:
        """The canonical global function restricting to x^n u_i + sigma_i."""
        return GlobalFunction(
            tuple(
                mul_x_power(MultiPoly.variable(chart_var(i)), self.spec.n)
                + self.spec.sigmas[i]
                for i in range(self.d)
            )
        )

    def restrict(self, ambient: MultiPoly, i: int) -> MultiPoly:
        """Restrict an ambient polynomial to chart i; variables without a
        parametrization (e.g. a cylinder variable) pass through."""
        return substitute_poly(ambient, dict(self.charts[i].param))

    def restrict_function(self, ambient: MultiPoly) -> GlobalFunction:
        return GlobalFunction(tuple(self.restrict(ambient, i) for i in range(self.d)))

    def validate(self) -> Report:
        """Every construction invariant, as a report of exact checks."""
        report = Report()
        spec = self.spec
        for i, chart in enumerate(self.charts):
            allowed = {X_NAME, chart_var(i)}
            name = f"chart-{i + 1}"
            x_param = chart.param.get(X_NAME, X)
            if x_param != X:
                report.add(CheckReport(f"{name}.x", False, Witness(i, x_param - X)))
            bad = next(
                (p for p in chart.param.values() if not set(p.vars) <= allowed), None
            )
            if bad is not None:
                report.add(CheckReport(f"{name}.vars", False, Witness(i, bad)))
            for k, rel in enumerate(self.relations):
                residue = self.restrict(rel, i)
                if residue.terms:
                    report.add(
                        CheckReport(f"{name}.relation-{k + 1}", False, Witness(i, residue))
                    )
        for gen in self.ambient_gens:
            if gen == X_NAME:
                continue
            reps = tuple(self.charts[i].param[gen] for i in range(self.d))
            report.add(
                check_overlap_consistency(GlobalFunction(reps), spec, f"glue({gen})")
            )
        if self.u_ambient is not None:
            expected = self.u_function()
            for i in range(self.d):
                residue = self.restrict(self.u_ambient, i) - expected.reps[i]
                if residue.terms:
                    report.add(CheckReport("u-restriction", False, Witness(i, residue)))
                    break
            else:
                report.add(CheckReport("u-restriction", True))
        report.add(check_overlap_consistency(self.f, spec, "glue(f)"))
        report.add(check_separation(self.f, self, "separation"))
        derivation = canonical_lnd(self)
        for i in range(self.d):
            image = derivation.apply_chart(i, self.f.reps[i])
            if image.terms and x_valuation(image) < 1:
                report.add(
                    CheckReport("f-derivative-divisible", False, Witness(i, image))
                )
                break
        else:
            report.add(CheckReport("f-derivative-divisible", True))
        return report

    def validated(self) -> "ChartedSurface":
        report = self.validate()
        if not report.passed:
            details = "; ".join(str(c) for c in report.failures())
            raise PreconditionError(f"surface data is inconsistent: {details}")
        return self


@dataclass(frozen=True)
class Derivation:
    """A derivation given per chart by its images on the chart generators
    (x, u_i, and the cylinder variable when present).  x must map to 0:
    every derivation in this package fixes the base."""

    surface: ChartedSurface
    chart_images: tuple[dict[str, MultiPoly], ...]

    def __post_init__(self):
        for images in self.chart_images:
            if images.get(X_NAME, MultiPoly.zero()).terms:
                raise PreconditionError("derivations must kill x")

    def apply_chart(self, i: int, p: MultiPoly) -> MultiPoly:
        """Leibniz extension on chart i."""
        images = self.chart_images[i]
        total = MultiPoly.zero()
        for v in p.vars:
            image = images.get(v)
            if image is None:
                if v == X_NAME:
                    continue
                raise PreconditionError(f"no image for generator {v} on chart {i + 1}")
            if image.terms:
                total = total + formal_derivative(p, v) * image
        return total

    def apply_laurent(self, i: int, q: XLaurent) -> XLaurent:
        # D(x) = 0, so the x-power factor differentiates to zero.
        return XLaurent(self.apply_chart(i, q.body), q.xshift)

    def apply(self, g: GlobalFunction) -> GlobalFunction:
        return GlobalFunction(
            tuple(self.apply_chart(i, rep) for i, rep in enumerate(g.reps))
        )

    def check_transition_compatibility(self, name: str = "derivation-glue") -> CheckReport:
        """Applying the derivation in chart i to the transported chart-j
        coordinate must equal the transported image of that coordinate."""
        spec = self.surface.spec
        for i in range(spec.d):
            for j in range(spec.d):
                if i == j:
                    continue
                expr = transition_map(spec, i, j)[chart_var(j)]
                lhs = self.apply_laurent(i, expr)
                rhs = substitute_laurent(
                    XLaurent.from_poly(self.chart_images[j][chart_var(j)]),
                    transition_map(spec, i, j),
                )
                if not (lhs - rhs).is_zero():
                    return CheckReport(f"{name}[{i + 1},{j + 1}]", False, Witness(i, lhs - rhs))
        return CheckReport(name, True)


def canonical_lnd(surface: ChartedSurface) -> Derivation:
    """The derivation with D(x) = 0 and D(u_i) = 1 on every chart, so that
    D(u) = x^n; transition compatibility is verified."""
    images = tuple(
        {X_NAME: MultiPoly.zero(), chart_var(i): MultiPoly.const(1)}
        for i in range(surface.d)
    )
    derivation = Derivation(surface, images)
    compat = derivation.check_transition_compatibility()
    if not compat.passed:
        raise PreconditionError(f"canonical derivation does not glue: {compat}")
    return derivation


def generic_separating_function(spec: SurfaceSpec) -> GlobalFunction:
    """f = L(u) where L is the Lagrange polynomial sending sigma_i(0) to
    r_i; only available when the sigma_i(0) are pairwise distinct."""
    origins = []
    for s in spec.sigmas:
        c = s.coefficient(X_NAME, 0)
        origins.append(c.constant_value() if c.is_constant() else ZERO)
    if len(set(origins)) != spec.d:
        raise CannotSeparateError(
            "sigma_i(0) values collide; supply an explicit separating function"
        )
    ell = lagrange(origins, list(spec.roots), var="t")
    reps = []
    for i in range(spec.d):
        u_rep = mul_x_power(MultiPoly.variable(chart_var(i)), spec.n) + spec.sigmas[i]
        reps.append(substitute_poly(ell, {"t": u_rep}))
    return GlobalFunction(tuple(reps))


def separating_function(surface: ChartedSurface) -> GlobalFunction:
    """The surface's separating function: the built-in one when present,
    otherwise the generic Lagrange construction.  Verifies the separation
    values and that the canonical derivation image is divisible by x."""
    f = surface.f if surface.f is not None else generic_separating_function(surface.spec)
    sep = check_separation(f, surface)
    if not sep.passed:
        raise PreconditionError(f"separating function fails: {sep}")
    derivation = canonical_lnd(surface)
    for i, rep in enumerate(f.reps):
        image = derivation.apply_chart(i, rep)
        if image.terms and x_valuation(image) < 1:
            raise NotDivisibleError(1, str(image), i)
    return f


# -- constructors -----------------------------------------------------------


def roots_product(roots: Sequence[GaussianRational], var: str = "z") -> MultiPoly:
    """The monic polynomial with the given simple roots."""
    v = MultiPoly.variable(var)
    out = MultiPoly.const(1)
    for r in roots:
        out = out * (v - MultiPoly.const(r))
    return out


def make_classical(n: int, roots: Sequence[GaussianRational]) -> ChartedSurface:
    """The hypersurface x^n y = P(z) with P monic with the given simple
    roots, as a charted surface with u_i = (z - r_i)/x^n and f = z."""
    roots = tuple(GaussianRational.coerce(r) for r in roots)
    if len(set(roots)) != len(roots):
        raise DuplicateRootsError("roots of P must be pairwise distinct")
    p_poly = roots_product(roots)
    spec = SurfaceSpec(n, tuple(MultiPoly.const(r) for r in roots), roots)
    charts = []
    z_reps = []
    for i, r in enumerate(roots):
        z_param = MultiPoly.const(r) + mul_x_power(MultiPoly.variable(chart_var(i)), n)
        y_param = div_exact_x_power(substitute_poly(p_poly, {"z": z_param}), n, chart=i)
        charts.append(Chart(i, {X_NAME: X, "y": y_param, "z": z_param}))
        z_reps.append(z_param)
    relation = mul_x_power(MultiPoly.variable("y"), n) - p_poly
    surface = ChartedSurface(
        spec=spec,
        charts=tuple(charts),
        relations=(relation,),
        u_ambient=MultiPoly.variable("z"),
        f=GlobalFunction(tuple(z_reps)),
        f_ambient=MultiPoly.variable("z"),
        descriptor={"type": "classical", "n": n, "roots": roots},
    )
    return surface.validated()


def make_hypersurface(
    n: int, q_poly: MultiPoly, roots: Sequence[GaussianRational]
) -> ChartedSurface:
    """The hypersurface x^n y = Q(x, z): sigma_i is the Hensel lift of the
    simple root r_i of Q(0, z), charts use u_i = (z - sigma_i(x))/x^n, and
    the separating function is z (the roots are the sigma_i(0))."""
    roots = tuple(GaussianRational.coerce(r) for r in roots)
    sigmas = hensel_sections(q_poly, n, list(roots))
    spec = SurfaceSpec(n, tuple(sigmas), roots)
    charts = []
    z_reps = []
    for i, sigma in enumerate(sigmas):
        z_param = sigma + mul_x_power(MultiPoly.variable(chart_var(i)), n)
        y_param = div_exact_x_power(
            substitute_poly(q_poly, {"z": z_param}), n, chart=i
        )
        charts.append(Chart(i, {X_NAME: X, "y": y_param, "z": z_param}))
        z_reps.append(z_param)
    relation = mul_x_power(MultiPoly.variable("y"), n) - q_poly
    surface = ChartedSurface(
        spec=spec,
        charts=tuple(charts),
        relations=(relation,),
        u_ambient=MultiPoly.variable("z"),
        f=GlobalFunction(tuple(z_reps)),
        f_ambient=MultiPoly.variable("z"),
        descriptor={"type": "hypersurface", "n": n, "q": q_poly, "roots": roots},
    )
    return surface.validated()


def make_iterated_example() -> ChartedSurface:
    """The surface x z = (x y + z^2)^2 - 1: four special-fiber lines at the
    fourth roots of unity, weight 2, u = x y + z^2, f = z."""
    eps = IMAG
    sigmas = []
    roots = []
    charts = []
    z_reps = []
    for k in range(4):
        i1 = k + 1
        e_i = eps ** i1
        sigma = MultiPoly.const(e_i ** 2) + mul_x_power(
            MultiPoly.const(e_i ** (-1) / 2), 1
        )
        sigmas.append(sigma)
        roots.append(e_i)
        u = MultiPoly.variable(chart_var(k))
        alpha = mul_x_power(u, 1) + MultiPoly.const(e_i ** (-1) / 2)
        beta = MultiPoly.const(2 * (e_i ** 2)) * u + alpha * alpha
        z_param = MultiPoly.const(e_i) + mul_x_power(beta, 1)
        y_param = alpha - MultiPoly.const(2 * e_i) * beta - mul_x_power(beta * beta, 1)
        charts.append(Chart(k, {X_NAME: X, "y": y_param, "z": z_param}))
        z_reps.append(z_param)
    y_var, z_var = MultiPoly.variable("y"), MultiPoly.variable("z")
    u_amb = mul_x_power(y_var, 1) + z_var * z_var
    relation = mul_x_power(z_var, 1) - (u_amb * u_amb - MultiPoly.const(1))
    surface = ChartedSurface(
        spec=SurfaceSpec(2, tuple(sigmas), tuple(roots)),
        charts=tuple(charts),
        relations=(relation,),
        u_ambient=u_amb,
        f=GlobalFunction(tuple(z_reps)),
        f_ambient=MultiPoly.variable("z"),
        descriptor={"type": "builtin", "name": "iterated"},
    )
    return surface.validated()


DOUBLE_CHART_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def make_double_example() -> ChartedSurface:
    """The surface {x y = z^2 - 1, x t = y^2 - 1} in affine 4-space: charts
    indexed by the sign pairs (i, j), weight 2, u = z, and separating
    function (z + y)/2 + i*(y - z)/2 taking the values 1, i, -i, -1."""
    eps = IMAG
    roots = (ONE, eps, -eps, -ONE)
    sigmas = []
    charts = []
    for k, (si, sj) in enumerate(DOUBLE_CHART_SIGNS):
        sigma = MultiPoly.const(gr(sj)) + mul_x_power(MultiPoly.const(gr(si * sj, 0) / 2), 1)
        sigmas.append(sigma)
        u = MultiPoly.variable(chart_var(k))
        alpha = mul_x_power(u, 1) + MultiPoly.const(gr(si * sj, 0) / 2)
        beta = MultiPoly.const(2 * sj) * u + alpha * alpha
        z_param = MultiPoly.const(gr(sj)) + mul_x_power(alpha, 1)
        y_param = MultiPoly.const(gr(si)) + mul_x_power(beta, 1)
        t_param = (y_param + MultiPoly.const(gr(si))) * beta
        charts.append(
            Chart(k, {X_NAME: X, "y": y_param, "z": z_param, "t": t_param})
        )
    y_var, z_var, t_var = MultiPoly.variable("y"), MultiPoly.variable("z"), MultiPoly.variable("t")
    relations = (
        mul_x_power(y_var, 1) - (z_var * z_var - MultiPoly.const(1)),
        mul_x_power(t_var, 1) - (y_var * y_var - MultiPoly.const(1)),
    )
    half = ONE / 2
    f_amb = (z_var + y_var) * half + (y_var - z_var) * (eps * half)
    f_reps = tuple(
        substitute_poly(f_amb, dict(chart.param)) for chart in charts
    )
    surface = ChartedSurface(
        spec=SurfaceSpec(2, tuple(sigmas), roots),
        charts=tuple(charts),
        relations=relations,
        u_ambient=z_var,
        f=GlobalFunction(f_reps),
        f_ambient=f_amb,
        descriptor={"type": "builtin", "name": "double"},
    )
    return surface.validated()


def make_abstract(
    n: int,
    sigmas: Sequence[MultiPoly],
    roots: Sequence[GaussianRational],
    f: GlobalFunction | None = None,
) -> ChartedSurface:
    """A surface given by gluing data alone (no ambient presentation).
    Without an explicit f the generic Lagrange path is used, which needs
    the sigma_i(0) pairwise distinct."""
    spec = SurfaceSpec(n, tuple(sigmas), tuple(GaussianRational.coerce(r) for r in roots))
    surface = ChartedSurface(
        spec=spec,
        charts=tuple(Chart(i, {X_NAME: X}) for i in range(spec.d)),
        relations=(),
        u_ambient=None,
        f=f if f is not None else generic_separating_function(spec),
        descriptor={"type": "raw"},
    )
    return surface.validated()


def make_raw(
    spec: SurfaceSpec,
    charts: Sequence[Chart] | None = None,
    relations: Sequence[MultiPoly] = (),
    f: GlobalFunction | None = None,
    u_ambient: MultiPoly | None = None,
    f_ambient: MultiPoly | None = None,
) -> ChartedSurface:
    """User-supplied surface data, verified on load."""
    if charts is None:
        charts = tuple(Chart(i, {X_NAME: X}) for i in range(spec.d))
    charts = tuple(charts)
    if f is None and f_ambient is not None:
        f = GlobalFunction(
            tuple(substitute_poly(f_ambient, dict(c.param)) for c in charts)
        )
    surface = ChartedSurface(
        spec=spec,
        charts=charts,
        relations=tuple(relations),
        u_ambient=u_ambient,
        f=f if f is not None else generic_separating_function(spec),
        f_ambient=f_ambient,
        descriptor={"type": "raw"},
    )
    return surface.validated()
