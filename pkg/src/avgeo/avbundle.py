"""AV-bundles in local affine coordinates (x^a, s).

Sections are s-free polynomials on the base, and the fundamental field
is X_Z = -d/ds.  A gauge change is a re-trivialization s -> s + g(x);
every construction here comes with its induced gauge action so that
frame independence can be tested as exact covariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactpoly import (
    FORM,
    MULTIVECTOR,
    ChartMismatch,
    Poly,
    PolyTensor,
    apply_vector,
    bivector_apply,
    exterior_derivative,
    pullback_form,
    wedge,
)


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class AVChart:
    base_coords: tuple
    fiber_coord: str = "s"

    def __post_init__(self):
        object.__setattr__(self, "base_coords", tuple(self.base_coords))
        if self.fiber_coord in self.base_coords:
            raise BundleError(f"fiber coordinate {self.fiber_coord!r} clashes with a base coordinate")
        if len(set(self.base_coords)) != len(self.base_coords):
            raise BundleError("repeated base coordinate")

    @property
    def chart(self) -> tuple:
        return self.base_coords + (self.fiber_coord,)

    @property
    def base_dim(self) -> int:
        return len(self.base_coords)

    @property
    def s(self) -> Poly:
        return Poly.var(self.chart, self.fiber_coord)

    def fundamental_field(self) -> PolyTensor:
        return -PolyTensor.partial(self.chart, self.fiber_coord)

    def base_poly(self, f) -> Poly:
        """Coerce to a base polynomial; raises if f depends on s."""
        if isinstance(f, Poly):
            if f.chart == self.base_coords:
                return f
            if f.chart == self.chart:
                if f.depends_on(self.fiber_coord):
                    raise BundleError("expected an s-free polynomial")
                return f.on(self.base_coords)
            raise ChartMismatch(f"polynomial on {f.chart}, bundle base is {self.base_coords}")
        return Poly.const(self.base_coords, f)

    def lift(self, f) -> Poly:
        """Pull a base function back to the total space."""
        return self.base_poly(f).on(self.chart)

    # phase and contact charts: (x.., p_x..) and (x.., p_x.., s)
    def momentum_names(self) -> tuple:
        return tuple(f"p_{x}" for x in self.base_coords)

    def phase_chart(self) -> tuple:
        return self.base_coords + self.momentum_names()

    def contact_chart(self) -> tuple:
        return self.phase_chart() + (self.fiber_coord,)


@dataclass(frozen=True)
class AVSection:
    bundle: AVChart
    value: Poly

    def __post_init__(self):
        object.__setattr__(self, "value", self.bundle.base_poly(self.value))

    def __add__(self, g):
        """Translate by a basic function (vertical lift)."""
        return AVSection(self.bundle, self.value + self.bundle.base_poly(g))

    def __sub__(self, other: "AVSection") -> Poly:
        if not isinstance(other, AVSection):
            return AVSection(self.bundle, self.value - self.bundle.base_poly(other))
        if other.bundle != self.bundle:
            raise BundleError("sections of different bundles")
        return self.value - other.value

    def __str__(self) -> str:
        return f"s = {self.value}"


def section(bundle: AVChart, value) -> AVSection:
    return AVSection(bundle, bundle.base_poly(value))


def f_map(sig: AVSection) -> Poly:
    """F_sigma(x, s) = sigma(x) - s."""
    b = sig.bundle
    return b.lift(sig.value) - b.s


def section_of(bundle: AVChart, F: Poly) -> AVSection:
    """Inverse of f_map: an affine fiber function with X_Z(F) = 1."""
    if apply_vector(bundle.fundamental_field(), F) != Poly.const(bundle.chart, 1):
        raise BundleError("function does not satisfy X_Z(F) = 1")
    return AVSection(bundle, (F + bundle.s).on(bundle.base_coords))


def vertical_jacobi(bundle: AVChart, f: Poly, g: Poly) -> Poly:
    """{f, g}_Z = f X_Z(g) - g X_Z(f)."""
    X = bundle.fundamental_field()
    f = _on_total(bundle, f)
    g = _on_total(bundle, g)
    return f * apply_vector(X, g) - g * apply_vector(X, f)


def _on_total(bundle: AVChart, f) -> Poly:
    if isinstance(f, Poly) and f.chart == bundle.base_coords:
        return f.on(bundle.chart)
    if isinstance(f, Poly):
        if f.chart != bundle.chart:
            raise ChartMismatch(f"polynomial on {f.chart}, bundle chart is {bundle.chart}")
        return f
    return Poly.const(bundle.chart, f)


def affine_function(bundle: AVChart, alpha, beta) -> Poly:
    """The fiber-affine function alpha(x) s + beta(x)."""
    return bundle.lift(alpha) * bundle.s + bundle.lift(beta)


def split_affine(bundle: AVChart, phi: Poly) -> tuple[Poly, Poly]:
    """(alpha, beta) with phi = alpha s + beta; raises if phi is not fiber-affine."""
    phi = _on_total(bundle, phi)
    s = bundle.fiber_coord
    alpha = phi.diff(s)
    if alpha.depends_on(s):
        raise BundleError("function is not affine along the fibers")
    beta = phi - alpha * bundle.s
    return alpha.on(bundle.base_coords), beta.on(bundle.base_coords)


def hull_function(bundle: AVChart, c, b) -> Poly:
    """F_u for the hull section u with weight c(x) and F_u = b(x) - c(x) s."""
    return bundle.lift(b) - bundle.lift(c) * bundle.s


def hull_pairing(bundle: AVChart, phi: Poly, c, b) -> Poly:
    """<phi, u> by linear extension: points (c=1, b=sigma) give phi(sigma)."""
    alpha, beta = split_affine(bundle, phi)
    return alpha * bundle.base_poly(b) + beta * bundle.base_poly(c)


# ---------------------------------------------------------------------------
# gauge changes


@dataclass(frozen=True)
class GaugeChange:
    bundle: AVChart
    g: Poly

    def __post_init__(self):
        object.__setattr__(self, "g", self.bundle.base_poly(self.g))

    def compose(self, other: "GaugeChange") -> "GaugeChange":
        return GaugeChange(self.bundle, self.g + other.g)

    def inverse(self) -> "GaugeChange":
        return GaugeChange(self.bundle, -self.g)

    def section(self, sig: AVSection) -> AVSection:
        """New-coordinate description of the same section."""
        return AVSection(sig.bundle, sig.value + self.g)

    def function(self, F: Poly) -> Poly:
        """Express a function on Z in the new fiber coordinate s' = s + g."""
        b = self.bundle
        F = _on_total(b, F)
        return F.substitute({b.fiber_coord: b.s - b.lift(self.g)}, b.chart)

    def one_form(self, a: "AffOneForm") -> "AffOneForm":
        return AffOneForm(a.bundle, tuple(c + dg for c, dg in zip(a.coeffs, self.g.gradient())))

    def phase_map(self) -> dict:
        """Induced translation of the phase chart, p_a -> p_a + dg/dx^a."""
        b = self.bundle
        ch = b.phase_chart()
        out = {x: Poly.var(ch, x) for x in b.base_coords}
        for x, p in zip(b.base_coords, b.momentum_names()):
            out[p] = Poly.var(ch, p) + self.g.diff(x).on(ch)
        return out

    def contact_map(self) -> dict:
        """Translation of the contact chart by the first jet (dg, g)."""
        b = self.bundle
        ch = b.contact_chart()
        out = {x: Poly.var(ch, x) for x in b.base_coords}
        for x, p in zip(b.base_coords, b.momentum_names()):
            out[p] = Poly.var(ch, p) + self.g.diff(x).on(ch)
        out[b.fiber_coord] = Poly.var(ch, b.fiber_coord) + self.g.on(ch)
        return out

    def contact_inverse_map(self) -> dict:
        return GaugeChange(self.bundle, -self.g).contact_map()


# ---------------------------------------------------------------------------
# affine de Rham complex


@dataclass(frozen=True)
class AffOneForm:
    bundle: AVChart
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.bundle.base_poly(c) for c in self.coeffs)
        if len(cs) != self.bundle.base_dim:
            raise BundleError("one coefficient per base coordinate is required")
        object.__setattr__(self, "coeffs", cs)

    def __sub__(self, other: "AffOneForm") -> PolyTensor:
        """Difference of two affine 1-forms is an ordinary 1-form on the base."""
        return _coeff_form(self.bundle, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def as_form(self) -> PolyTensor:
        """Coefficient form alpha_a dx^a in the chosen trivialization."""
        return _coeff_form(self.bundle, self.coeffs)


def _coeff_form(bundle: AVChart, coeffs) -> PolyTensor:
    base = bundle.base_coords
    return PolyTensor(base, FORM, 1, {(i,): c for i, c in enumerate(coeffs)})


def affine_differential(obj):
    """d sigma as an affine 1-form, or d alpha as a 2-form on the base."""
    if isinstance(obj, AVSection):
        return AffOneForm(obj.bundle, obj.value.gradient())
    if isinstance(obj, AffOneForm):
        return exterior_derivative(obj.as_form())
    raise TypeError("affine_differential takes an AVSection or an AffOneForm")


def connection_form(a: AffOneForm) -> PolyTensor:
    """F_alpha = alpha_a dx^a - ds on the total space."""
    b = a.bundle
    ch = b.chart
    comps = {(i,): c.on(ch) for i, c in enumerate(a.coeffs)}
    comps[(len(ch) - 1,)] = Poly.const(ch, -1)
    return PolyTensor(ch, FORM, 1, comps)


def pullback_to_total(bundle: AVChart, w: PolyTensor) -> PolyTensor:
    """zeta^* of a base form."""
    return pullback_form(w, {x: Poly.var(bundle.chart, x) for x in bundle.base_coords}, bundle.chart)


def curvature_defect(a: AffOneForm) -> PolyTensor:
    """d(F_alpha) - zeta^*(d alpha); zero identically."""
    return exterior_derivative(connection_form(a)) - pullback_to_total(a.bundle, affine_differential(a))


# ---------------------------------------------------------------------------
# phase bundle and contact bundle


def phase_symplectic(bundle: AVChart) -> PolyTensor:
    """omega_Z = dp_a ^ dx^a on (x.., p..)."""
    ch = bundle.phase_chart()
    out = PolyTensor.zero(ch, FORM, 2)
    for x, p in zip(bundle.base_coords, bundle.momentum_names()):
        out = out + wedge(PolyTensor.d(ch, p), PolyTensor.d(ch, x))
    return out


def adjoint_phase_map(bundle: AVChart) -> dict:
    """Identification of P(Zbar) with the phase chart: sections of Zbar are -sigma, so p -> -p."""
    ch = bundle.phase_chart()
    out = {x: Poly.var(ch, x) for x in bundle.base_coords}
    for p in bundle.momentum_names():
        out[p] = -Poly.var(ch, p)
    return out


def adjoint_symplectic(bundle: AVChart) -> PolyTensor:
    return pullback_form(phase_symplectic(bundle), adjoint_phase_map(bundle), bundle.phase_chart())


def liouville(bundle: AVChart) -> AffOneForm:
    """theta_Z = p_a dx^a as an affine 1-form of the AV-bundle over the phase chart."""
    pz = AVChart(bundle.phase_chart(), bundle.fiber_coord)
    ch = pz.base_coords
    coeffs = [Poly.var(ch, p) for p in bundle.momentum_names()] + [Poly.zero(ch)] * bundle.base_dim
    return AffOneForm(pz, tuple(coeffs))


@dataclass(frozen=True)
class ContactStructure:
    bundle: AVChart
    theta: AffOneForm
    eta: PolyTensor
    Lambda: PolyTensor
    Gamma: PolyTensor

    @property
    def chart(self) -> tuple:
        return self.bundle.contact_chart()

    def bracket(self, f: Poly, g: Poly) -> Poly:
        """Jacobi bracket of the pair: Lambda(df, dg) + f Gamma(g) - g Gamma(f)."""
        return jacobi_pair_bracket(self.Lambda, self.Gamma, f, g)


def contact_structure(bundle: AVChart) -> ContactStructure:
    ch = bundle.contact_chart()
    s = bundle.fiber_coord
    eta = -PolyTensor.d(ch, s)
    lam = PolyTensor.zero(ch, MULTIVECTOR, 2)
    for x, p in zip(bundle.base_coords, bundle.momentum_names()):
        P = Poly.var(ch, p)
        eta = eta + PolyTensor.d(ch, x) * P
        dp = PolyTensor.partial(ch, p)
        lam = lam + wedge(dp, PolyTensor.partial(ch, x)) + wedge(dp, PolyTensor.partial(ch, s)) * P
    gamma = -PolyTensor.partial(ch, s)
    return ContactStructure(bundle, liouville(bundle), eta, lam, gamma)


def jacobi_pair_bracket(Lambda: PolyTensor, Gamma: PolyTensor, f: Poly, g: Poly) -> Poly:
    return bivector_apply(Lambda, f, g) + f * apply_vector(Gamma, g) - g * apply_vector(Gamma, f)


def cjb(bundle: AVChart, f: Poly, g: Poly) -> Poly:
    """Contact bracket written out termwise in (x, p, s)."""
    out = Poly.zero(bundle.contact_chart())
    s = bundle.fiber_coord
    fs, gs = f.diff(s), g.diff(s)
    ef, eg = -f, -g
    for x, p in zip(bundle.base_coords, bundle.momentum_names()):
        P = Poly.var(f.chart, p)
        out = out + f.diff(p) * g.diff(x) - g.diff(p) * f.diff(x)
        ef = ef + P * f.diff(p)
        eg = eg + P * g.diff(p)
    return out + ef * gs - eg * fs


def gauge_contact_tensor(t: PolyTensor, gauge: GaugeChange) -> PolyTensor:
    """Push a contact-chart multivector forward by the first-jet translation."""
    from .exactpoly import pushforward_multivector
    return pushforward_multivector(t, gauge.contact_map(), gauge.contact_inverse_map(), gauge.bundle.contact_chart())


def gauge_contact_form(w: PolyTensor, gauge: GaugeChange) -> PolyTensor:
    return pullback_form(w, gauge.contact_map(), gauge.bundle.contact_chart())
