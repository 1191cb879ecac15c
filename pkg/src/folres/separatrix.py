"""Formal curves, invariance residuals, multiplicities, separatrix solving,
curve transforms under blow-up, and coordinate straightening.

A formal curve is a triple of parameter series (phi1, phi2, phi3).  The
invariance equations of a field (F, G, H) along phi are the two cross
residuals

    phi1' (G o phi) - phi2' (F o phi)     and     phi2' (H o phi) - phi3' (G o phi),

and the multiplicity along an invariant curve is the parameter-order of the
scalar series g with X o phi = g phi'.

``solve_graph_separatrix`` looks for a curve (x(z), y(z), z).  Writing the
invariance as x'(z) (H o phi) = F o phi and y'(z) (H o phi) = G o phi, the
degree-d coefficient pair (x_d, y_d) enters each residual linearly at a
field-dependent shift; the solver locates, for each degree, the lowest
residual coefficients the pair controls, solves that 2x2 system exactly, and
verifies every skipped residual coefficient, reporting the first
inconsistency as an obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CurveMissesCenter,
    DivisionObstructed,
    NotASeparatrix,
    NotGraph,
    NotGraphParameterizable,
    Obstructed,
    ZeroAlongCurve,
)
from .scalars import GaussianRational, ONE, ZERO
from .series import INFINITE, MSeries, USeries, compose_curve
from .vfield import PolyMap, VectorField, conjugate


@dataclass(frozen=True)
class FormalCurve:
    """Parameterized formal curve; graph_over_z means phi3 = T identically."""

    phi1: USeries
    phi2: USeries
    phi3: USeries
    graph_over_z: bool = False
    parameter_power: int = 1

    @staticmethod
    def graph(a: USeries, b: USeries) -> "FormalCurve":
        t = min(a.trunc, b.trunc)
        return FormalCurve(
            a.retrunc(t), b.retrunc(t), USeries.identity(t), graph_over_z=True
        )

    @staticmethod
    def z_axis(trunc: int) -> "FormalCurve":
        return FormalCurve.graph(USeries.zero(trunc), USeries.zero(trunc))

    @property
    def components(self):
        return (self.phi1, self.phi2, self.phi3)

    @property
    def ledger(self) -> int:
        return min(c.trunc for c in self.components)

    def tangency_bound(self) -> int:
        """Contact order with the z-axis, truncated to the trusted ledger.

        min of the graph-series valuations; a series that vanishes at this
        precision counts as ledger + 1 (the best trusted lower bound).
        """
        vals = []
        for s in (self.phi1, self.phi2):
            v = s.valuation()
            vals.append(s.trunc + 1 if v == INFINITE else int(v))
        return min(vals)

    def constants(self):
        return tuple(c.coeffs[0] for c in self.components)

    def recenter(self) -> tuple["FormalCurve", tuple]:
        """Split off the constant terms; returns (origin-based curve, point)."""
        consts = self.constants()
        comps = []
        for c, c0 in zip(self.components, consts):
            if c0:
                coeffs = list(c.coeffs)
                coeffs[0] = ZERO
                comps.append(USeries(coeffs, c.trunc))
            else:
                comps.append(c)
        graph = _is_param_identity(comps[2])
        return (
            FormalCurve(comps[0], comps[1], comps[2], graph, self.parameter_power),
            consts,
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


@dataclass(frozen=True)
class ResidualReport:
    order: int
    ledger: int

    @property
    def full(self) -> bool:
        return self.order >= self.ledger


def invariance_residual(field: VectorField, phi: FormalCurve) -> ResidualReport:
    """Order of trusted vanishing of the two invariance residuals."""
    images = [compose_curve(c, phi.components) for c in field.components]
    derivs = [c.derivative() for c in phi.components]
    r1 = derivs[0] * images[1] - derivs[1] * images[0]
    r2 = derivs[1] * images[2] - derivs[2] * images[1]
    ledger = min(r1.trunc, r2.trunc)
    order = ledger
    for m in range(ledger + 1):
        if r1.coeffs[m] or r2.coeffs[m]:
            order = m - 1
            break
    return ResidualReport(order=order, ledger=ledger)


def multiplicity(field: VectorField, phi: FormalCurve) -> int:
    """Order of g in X o phi = g phi'; invariant under blow-ups.

    Divides along the phi' component of least valuation and cross-checks the
    other components, so a curve that is not actually invariant is rejected.
    """
    images = [compose_curve(c, phi.components) for c in field.components]
    if all(im.is_zero() for im in images):
        raise ZeroAlongCurve("field vanishes along the curve at this precision")
    derivs = [c.derivative() for c in phi.components]
    vals = [d.valuation() for d in derivs]
    pivot = min(range(3), key=lambda i: vals[i])
    if vals[pivot] == INFINITE:
        raise NotASeparatrix("curve is constant at this precision")
    if images[pivot].valuation() < vals[pivot]:
        raise NotASeparatrix("image valuation below the parameter derivative")
    g = images[pivot].divide(derivs[pivot])
    for j in range(3):
        if j == pivot:
            continue
        if not (g * derivs[j]).eq_trusted(images[j]):
            raise NotASeparatrix(
                f"component {j} fails the cross-check X o phi = g phi'"
            )
    v = g.valuation()
    if v == INFINITE:
        raise ZeroAlongCurve("g vanishes at this precision")
    return int(v)


# ---------------------------------------------------------------------------
# Degree-by-degree graph solving
# ---------------------------------------------------------------------------


class _Composer:
    """On-demand coefficients of S o (a(z), b(z), z) for a fixed prefix."""

    def __init__(self, a, b, cap: int):
        self.cap = cap
        self.a_pows = [[ONE] + [ZERO] * cap]
        self.b_pows = [[ONE] + [ZERO] * cap]
        self._a = a
        self._b = b
        self.memo = {}

    def _power(self, pows, base, e: int):
        while len(pows) <= e:
            prev = pows[-1]
            cur = [ZERO] * (self.cap + 1)
            for i, c in enumerate(prev):
                if not c:
                    continue
                for j in range(1, self.cap - i + 1):
                    d = base[j]
                    if d:
                        cur[i + j] = cur[i + j] + c * d
            pows.append(cur)
        return pows[e]

    def coeff(self, series: MSeries, m: int, tag) -> GaussianRational:
        key = (tag, m)
        if key in self.memo:
            return self.memo[key]
        acc = ZERO
        for (i, j, k), c in series.terms.items():
            if k > m:
                continue
            pa = self._power(self.a_pows, self._a, i)
            pb = self._power(self.b_pows, self._b, j)
            r = m - k
            conv = ZERO
            for s in range(r + 1):
                u = pa[s]
                if u:
                    w = pb[r - s]
                    if w:
                        conv = conv + u * w
            if conv:
                acc = acc + c * conv
        self.memo[key] = acc
        return acc


def _deriv_conv(coeffs, comp: _Composer, series, q: int, tag) -> GaussianRational:
    """Coefficient q of a' * (series o phi) for a with the given coefficients."""
    acc = ZERO
    for r in range(1, len(coeffs)):
        c = coeffs[r]
        if not c:
            continue
        m = q - (r - 1)
        if m < 0:
            continue
        acc = acc + c * r * comp.coeff(series, m, tag)
    return acc


@dataclass
class _GraphSystem:
    F: MSeries
    G: MSeries
    H: MSeries
    Fx: MSeries
    Fy: MSeries
    Gx: MSeries
    Gy: MSeries
    Hx: MSeries
    Hy: MSeries


def solve_graph_separatrix(field: VectorField, degree: int) -> FormalCurve:
    """Solve for a formal curve (x(z), y(z), z) invariant under the field.

    Returns the curve with every coefficient through `degree` determined (or
    through the largest degree the field's ledger supports, if smaller).
    Raises Obstructed when a residual coefficient cannot be matched and
    NotGraphParameterizable when the system is not z-parameterized.
    """
    F, G, H = field.components
    h_axis = _axis_valuation(H)
    if h_axis is None or h_axis < 1:
        raise NotGraphParameterizable(
            "third component has no positive-order part on the z-axis"
        )
    cap = field.trunc
    if degree < 1:
        raise ValueError("degree must be positive")
    sys_ = _GraphSystem(
        F=F, G=G, H=H,
        Fx=F.partial("x"), Fy=F.partial("y"),
        Gx=G.partial("x"), Gy=G.partial("y"),
        Hx=H.partial("x"), Hy=H.partial("y"),
    )
    a = [ZERO] * (cap + 2)
    b = [ZERO] * (cap + 2)
    frontier_a = -1
    frontier_b = -1
    solved = 0
    for d in range(1, degree + 1):
        comp = _Composer(a, b, cap)

        def col_a_ra(m):
            acc = comp.coeff(sys_.H, m - d + 1, "H") * d if m - d + 1 >= 0 else ZERO
            acc = acc + _deriv_conv(a, comp, sys_.Hx, m - d, "Hx")
            return acc - (comp.coeff(sys_.Fx, m - d, "Fx") if m >= d else ZERO)

        def col_b_ra(m):
            acc = _deriv_conv(a, comp, sys_.Hy, m - d, "Hy")
            return acc - (comp.coeff(sys_.Fy, m - d, "Fy") if m >= d else ZERO)

        def col_a_rb(m):
            acc = _deriv_conv(b, comp, sys_.Hx, m - d, "Hx")
            return acc - (comp.coeff(sys_.Gx, m - d, "Gx") if m >= d else ZERO)

        def col_b_rb(m):
            acc = comp.coeff(sys_.H, m - d + 1, "H") * d if m - d + 1 >= 0 else ZERO
            acc = acc + _deriv_conv(b, comp, sys_.Hy, m - d, "Hy")
            return acc - (comp.coeff(sys_.Gy, m - d, "Gy") if m >= d else ZERO)

        def res_a(m):
            return _deriv_conv(a, comp, sys_.H, m, "H") - comp.coeff(sys_.F, m, "F")

        def res_b(m):
            return _deriv_conv(b, comp, sys_.H, m, "H") - comp.coeff(sys_.G, m, "G")

        row_a = _schedule_row(res_a, col_a_ra, col_b_ra, frontier_a, cap, d)
        row_b = _schedule_row(res_b, col_a_rb, col_b_rb, frontier_b, cap, d)
        if row_a is None or row_b is None:
            break  # ledger exhausted before both unknowns are pinned
        A, B = _solve_two_by_two(row_a, row_b, d)
        a[d] = A
        b[d] = B
        # verify every residual coefficient between the old and new frontiers
        check = _Composer(a, b, cap)

        def res_a2(m):
            return _deriv_conv(a, check, sys_.H, m, "H") - check.coeff(sys_.F, m, "F")

        def res_b2(m):
            return _deriv_conv(b, check, sys_.H, m, "H") - check.coeff(sys_.G, m, "G")

        for name, res, lo, hi in (
            ("first", res_a2, frontier_a, row_a[0]),
            ("second", res_b2, frontier_b, row_b[0]),
        ):
            for m in range(lo + 1, hi + 1):
                val = res(m)
                if val:
                    raise Obstructed(
                        d, f"{name} residual has coefficient {val} at degree {m}"
                    )
        frontier_a = row_a[0]
        frontier_b = row_b[0]
        solved = d
    a_series = USeries(a[: solved + 1], solved)
    b_series = USeries(b[: solved + 1], solved)
    return FormalCurve.graph(a_series, b_series)


def _axis_valuation(H: MSeries):
    vals = [k for (i, j, k) in H.terms if i == 0 and j == 0]
    return min(vals) if vals else None


def _schedule_row(res, col_a, col_b, frontier: int, cap: int, d: int):
    """Find the lowest residual degree the new pair controls.

    Returns (degree, residual value, A-column, B-column), or None when the
    ledger ends before any controllable degree; a nonzero residual strictly
    below the controllable degree is reported by the caller's verification.
    """
    for m in range(frontier + 1, cap + 1):
        ca = col_a(m)
        cb = col_b(m)
        if ca or cb:
            return (m, res(m), ca, cb)
    return None


def _solve_two_by_two(row_a, row_b, degree: int):
    # each row encodes: residual + ca*A + cb*B = 0
    (_, r1, a1, b1) = row_a
    (_, r2, a2, b2) = row_b
    det = a1 * b2 - a2 * b1
    if det:
        return ((b1 * r2 - b2 * r1) / det, (a2 * r1 - a1 * r2) / det)
    # singular system: eliminate greedily, remaining free unknowns set to zero
    A = None
    B = None
    for r, ca, cb in ((r1, a1, b1), (r2, a2, b2)):
        rhs = -r
        if A is not None:
            rhs = rhs - ca * A
            ca = ZERO
        if B is not None:
            rhs = rhs - cb * B
            cb = ZERO
        if ca:
            A = rhs / ca
            if cb and B is None:
                B = ZERO  # one equation controls both: free unknown to zero
        elif cb:
            B = rhs / cb
        elif rhs:
            raise Obstructed(degree, "inconsistent singular coefficient system")
    return (A if A is not None else ZERO, B if B is not None else ZERO)


# ---------------------------------------------------------------------------
# Transforms of curves
# ---------------------------------------------------------------------------


def transform_curve(phi: FormalCurve, chart) -> FormalCurve:
    """Strict-transform parameterization of the curve in the given chart."""
    from .blowup import (
        CURVE_CHART_FIRST,
        CURVE_CHART_SECOND,
        POINT_CHART_X,
        POINT_CHART_Y,
        POINT_CHART_Z,
        WEIGHT2,
    )
    from .series import var_index

    comps = list(phi.components)
    for c in comps:
        if c.coeffs[0]:
            raise CurveMissesCenter("curve does not pass through the origin")
    if chart.kind in (POINT_CHART_X, POINT_CHART_Y, POINT_CHART_Z):
        di = var_index(chart.divisor_var)
        div = comps[di]
        dval = div.valuation()
        if dval == INFINITE:
            raise DivisionObstructed("divisor component vanishes at this precision")
        out = []
        for i, c in enumerate(comps):
            if i == di:
                out.append(c)
                continue
            if c.valuation() < dval:
                raise DivisionObstructed(
                    "curve tangent direction lies outside this chart"
                )
            out.append(c.divide(div))
        t = min(c.trunc for c in out)
        out = [c.retrunc(t) for c in out]
        graph = _is_param_identity(out[2]) and not out[0].coeffs[0] and not out[1].coeffs[0]
        return FormalCurve(
            out[0], out[1], out[2],
            graph_over_z=graph, parameter_power=phi.parameter_power,
        )
    if chart.kind in (CURVE_CHART_FIRST, CURVE_CHART_SECOND):
        ai = var_index(chart.center_axis)
        di = var_index(chart.divisor_var)
        si = next(i for i in range(3) if i not in (ai, di))
        div = comps[di]
        if div.valuation() == INFINITE:
            raise DivisionObstructed("divisor component vanishes at this precision")
        if comps[si].valuation() < div.valuation():
            raise DivisionObstructed("curve tangent direction lies outside this chart")
        out = list(comps)
        out[si] = comps[si].divide(div)
        t = min(c.trunc for c in out)
        out = [c.retrunc(t) for c in out]
        graph = _is_param_identity(out[2]) and not out[0].coeffs[0] and not out[1].coeffs[0]
        return FormalCurve(
            out[0], out[1], out[2],
            graph_over_z=graph, parameter_power=phi.parameter_power,
        )
    if chart.kind == WEIGHT2:
        if not phi.graph_over_z:
            raise NotGraph("weight-2 lift implemented for graph curves")
        t = phi.ledger
        new_t = max(2 * t - 1, 0)
        a2 = [ZERO] * (new_t + 1)
        b2 = [ZERO] * (new_t + 1)
        for k in range(t + 1):
            if 2 * k <= new_t:
                a2[2 * k] = phi.phi1.coeffs[k]
            if 2 * k - 1 >= 0 and 2 * k - 1 <= new_t:
                b2[2 * k - 1] = phi.phi2.coeffs[k]
        return FormalCurve(
            USeries(a2, new_t), USeries(b2, new_t), USeries.identity(new_t),
            graph_over_z=True, parameter_power=phi.parameter_power * 2,
        )
    raise ValueError(f"unknown chart kind {chart.kind}")


def straighten(field: VectorField, phi: FormalCurve, m: int):
    """Conjugate so the degree-m truncation of the curve becomes the z-axis.

    Uses the shift (x, y, z) -> (x + a_m(z), y + b_m(z), z) built from the
    curve's graph series; the returned curve has contact > m with the z-axis
    and dg/dx at the origin is unchanged.
    """
    if not phi.graph_over_z:
        raise NotGraph("straighten needs a graph over z")
    if m > field.trunc:
        raise ValueError("m exceeds the field ledger")
    t = field.trunc
    a_m = _useries_to_z_poly(phi.phi1, m, t)
    b_m = _useries_to_z_poly(phi.phi2, m, t)
    cmap = PolyMap(
        (
            MSeries.variable("x", t) + a_m,
            MSeries.variable("y", t) + b_m,
            MSeries.variable("z", t),
        )
    )
    moved = conjugate(field, cmap)
    new_a = _zero_through(phi.phi1, m)
    new_b = _zero_through(phi.phi2, m)
    return moved, FormalCurve.graph(new_a, new_b)


def _zero_through(s: USeries, m: int) -> USeries:
    """Subtract the degree-m truncation; the ledger is unchanged."""
    return USeries(
        [ZERO if k <= m else s.coeffs[k] for k in range(s.trunc + 1)], s.trunc
    )


def _useries_to_z_poly(s: USeries, m: int, trunc: int) -> MSeries:
    terms = {}
    for k in range(min(m, s.trunc) + 1):
        if s.coeffs[k] and k <= trunc:
            terms[(0, 0, k)] = s.coeffs[k]
    return MSeries(terms, trunc)


def _is_param_identity(s: USeries) -> bool:
    """True when the series equals T through its trusted ledger."""
    if s.trunc < 1 or s.coeffs[0] or s.coeffs[1] != ONE:
        return False
    return all(not c for c in s.coeffs[2:])
