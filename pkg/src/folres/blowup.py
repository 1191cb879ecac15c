"""The three blow-up transforms: one-point, curve-centered, and weight 2.

Chart coordinates are renamed back to x, y, z after every transform, so the
chart map records the substitution as exponent triples: PointChartZ sends
(x, y, z) to (x z, y z, z) with divisor z, the other point charts are the
symmetric permutations, a curve chart rescales one transverse variable, and
the weight-2 chart sends (x, y, z) to (x, y z, z^2) with divisor z.

Each transform computes the chain-rule pullback exactly, factors out the
largest power of the divisor coordinate, and reports that exponent together
with the dicriticalness of the divisor (not invariant iff the divisor
component of the factored field is not divisible by the divisor coordinate).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CenterNotInvariantOrNotSingular,
    NotDivisible,
    NotInNormalForm,
    RegularPoint,
)
from .series import MSeries, var_index
from .vfield import (
    REGULAR,
    VectorField,
    classify,
    factor_divisor,
    nilpotent_normal_form_full,
)

POINT_CHART_X = "point_chart_x"
POINT_CHART_Y = "point_chart_y"
POINT_CHART_Z = "point_chart_z"
CURVE_CHART_FIRST = "curve_chart_first"
CURVE_CHART_SECOND = "curve_chart_second"
WEIGHT2 = "weight2"

_UNIT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class ChartMap:
    """kind, the substitution exponent triples, and the divisor coordinate."""

    kind: str
    substitution: tuple
    divisor_var: str
    center_axis: str | None = None

    def describe(self) -> str:
        from .series import VARS

        pieces = []
        for v, mono in zip(VARS, self.substitution):
            image = "*".join(
                f"{VARS[i]}" if e == 1 else f"{VARS[i]}^{e}"
                for i, e in enumerate(mono)
                if e
            )
            pieces.append(f"{v} -> {image or '0'}")
        return ", ".join(pieces)


def point_chart(divisor) -> ChartMap:
    di = var_index(divisor)
    monos = []
    for vi in range(3):
        mono = list(_UNIT[vi])
        if vi != di:
            mono[di] += 1
        monos.append(tuple(mono))
    kind = (POINT_CHART_X, POINT_CHART_Y, POINT_CHART_Z)[di]
    from .series import VARS

    return ChartMap(kind, tuple(monos), VARS[di])


def curve_chart(center_axis, divisor) -> ChartMap:
    """Chart of the blow-up centered at the coordinate axis of `center_axis`.

    The two transverse variables are the other coordinates; `divisor` is the
    one kept as the exceptional coordinate, and the remaining transverse
    variable gets rescaled by it.
    """
    from .series import VARS

    ai = var_index(center_axis)
    di = var_index(divisor)
    if di == ai:
        raise ValueError("divisor must be transverse to the center axis")
    scaled = next(i for i in range(3) if i not in (ai, di))
    monos = []
    for vi in range(3):
        mono = list(_UNIT[vi])
        if vi == scaled:
            mono[di] += 1
        monos.append(tuple(mono))
    kind = CURVE_CHART_FIRST if di == 2 else CURVE_CHART_SECOND
    return ChartMap(kind, tuple(monos), VARS[di], VARS[ai])


def weight2_chart() -> ChartMap:
    return ChartMap(WEIGHT2, ((1, 0, 0), (0, 1, 1), (0, 0, 2)), "z")


@dataclass(frozen=True)
class BlowupResult:
    """Factored transform, divisor exponent, and dicriticalness.

    The raw pullback equals divisor^divisor_exponent times `vf`; `raw` keeps
    it for the invariance checks of the multiplicity calculus.
    """

    chart: ChartMap
    vf: VectorField
    divisor_exponent: int
    dicritical: bool
    raw: VectorField


def _finish(chart: ChartMap, raw: VectorField) -> BlowupResult:
    e, rep = factor_divisor(raw, chart.divisor_var)
    di = var_index(chart.divisor_var)
    divisor_comp = rep.components[di]
    dicritical = (
        not divisor_comp.is_zero()
        and divisor_comp.variable_multiplicity(chart.divisor_var) == 0
    )
    return BlowupResult(chart, rep, e, dicritical, raw)


def point_blowup(field: VectorField, chart: ChartMap) -> BlowupResult:
    """One-point blow-up at the origin, computed in the given affine chart."""
    if chart.kind not in (POINT_CHART_X, POINT_CHART_Y, POINT_CHART_Z):
        raise ValueError("point_blowup needs a point chart")
    if classify(field).tag == REGULAR:
        raise RegularPoint("refusing to blow up a regular point")
    t = field.trunc
    di = var_index(chart.divisor_var)
    composed = [c.substitute_monomials(chart.substitution, t) for c in field.components]
    out = []
    for vi in range(3):
        if vi == di:
            out.append(composed[vi])
        else:
            scaled = MSeries.variable(("x", "y", "z")[vi], t) * composed[di]
            out.append((composed[vi] - scaled).divide_by_variable(chart.divisor_var))
    return _finish(chart, VectorField(*out))


def curve_blowup(field: VectorField, chart: ChartMap) -> BlowupResult:
    """Blow-up centered at the coordinate axis recorded in the chart."""
    if chart.center_axis is None:
        raise ValueError("curve_blowup needs a curve chart")
    ai = var_index(chart.center_axis)
    transverse = [i for i in range(3) if i != ai]
    for comp in field.components:
        for mono, _ in comp.terms.items():
            if all(mono[i] == 0 for i in transverse):
                raise CenterNotInvariantOrNotSingular(
                    f"component does not vanish on the {chart.center_axis}-axis"
                )
    t = field.trunc
    di = var_index(chart.divisor_var)
    scaled = next(i for i in transverse if i != di)
    composed = [c.substitute_monomials(chart.substitution, t) for c in field.components]
    out = [None, None, None]
    out[ai] = composed[ai]
    out[di] = composed[di]
    rescale = MSeries.variable(("x", "y", "z")[scaled], t) * composed[di]
    out[scaled] = (composed[scaled] - rescale).divide_by_variable(chart.divisor_var)
    return _finish(chart, VectorField(*out))


def weight2_blowup(field: VectorField) -> BlowupResult:
    """Two-to-one substitution (x, y, z) -> (x, y z, z^2) centered at {y=z=0}.

    Requires the ledgered nilpotent shape z^k h [(y+zf) d/dx + zg d/dy
    + z^n d/dz]; the raw transform vanishes on the divisor with order 2k+1
    and its factored representative has eigenvalues {0, +sqrt(lam), -sqrt(lam)}.
    """
    parts, reason = nilpotent_normal_form_full(field)
    if parts is None:
        raise NotInNormalForm(reason or "not in nilpotent normal form")
    chart = weight2_chart()
    t = field.trunc
    composed = [c.substitute_monomials(chart.substitution, t) for c in field.components]
    half = MSeries.constant("1/2", t)
    y = MSeries.variable("y", t)
    z = MSeries.variable("z", t)
    try:
        comp_x = composed[0]
        comp_z = (composed[2] * half).divide_by_variable("z")
        numerator = z * composed[1] - (y * composed[2]) * half
        comp_y = numerator.divide_by_variable("z").divide_by_variable("z")
    except NotDivisible as exc:
        raise NotInNormalForm(f"weight-2 pullback is not holomorphic: {exc}") from exc
    return _finish(chart, VectorField(comp_x, comp_y, comp_z))
