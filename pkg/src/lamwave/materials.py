"""Constitutive catalogue and static magneto-elastic equilibrium of soft bi-laminates.

Each layer is an incompressible generalised neo-Hookean solid whose strain
energy depends on the first invariant only.  Four models are supported:
``neo-hookean``, ``yeoh`` (two-term), ``fung-demiray`` and ``gent``.  All
quantities are SI unless a function is explicitly documented as dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, GentLocking, InversionFailure, NoRoot

MU0 = 4.0e-7 * math.pi  # vacuum permeability, N/A^2

#: evaluation margin on the Gent denominator 1 - beta*(I1 - 3)
GENT_MARGIN = 1.0e-9

NEO_HOOKEAN = "neo-hookean"
YEOH = "yeoh"
FUNG_DEMIRAY = "fung-demiray"
GENT = "gent"
KINDS = (NEO_HOOKEAN, YEOH, FUNG_DEMIRAY, GENT)

_KIND_ALIASES = {
    "neohookean": NEO_HOOKEAN,
    "neo-hookean": NEO_HOOKEAN,
    "neo_hookean": NEO_HOOKEAN,
    "yeoh": YEOH,
    "fungdemiray": FUNG_DEMIRAY,
    "fung-demiray": FUNG_DEMIRAY,
    "fung_demiray": FUNG_DEMIRAY,
    "gent": GENT,
}


def canonical_kind(kind: str) -> str:
    """Normalise a model-kind spelling (``"NeoHookean"`` -> ``"neo-hookean"``)."""
    key = kind.strip().lower().replace(" ", "")
    try:
        return _KIND_ALIASES[key]
    except KeyError:
        raise DomainError(f"unknown hyperelastic model kind: {kind!r}") from None


@dataclass(frozen=True)
class HyperelasticModel:
    """One-invariant incompressible model with ground-state modulus and nonlinearity.

    ``shear_modulus`` is the small-strain shear modulus (Pa); ``beta`` is the
    dimensionless stiffening parameter, absent (zero) for neo-Hookean.
    """

    kind: str
    shear_modulus: float
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if not self.shear_modulus > 0.0:
            raise DomainError(f"shear_modulus must be positive, got {self.shear_modulus}")
        if self.beta < 0.0:
            raise DomainError(f"beta must be non-negative, got {self.beta}")
        if self.kind == NEO_HOOKEAN and self.beta != 0.0:
            raise DomainError("neo-Hookean model takes no beta parameter")


def _gent_denominator(model: HyperelasticModel, I1: float) -> float:
    denom = 1.0 - model.beta * (I1 - 3.0)
    if denom <= GENT_MARGIN:
        raise GentLocking(
            f"Gent model locked: 1 - beta*(I1-3) = {denom:.3e} at I1 = {I1:.6g} "
            f"(limit I1 = {3.0 + 1.0 / model.beta:.6g})"
        )
    return denom


def _check_invariant(I1: float) -> None:
    if I1 < 3.0 - 1e-12:
        raise DomainError(f"first invariant must satisfy I1 >= 3, got {I1}")


def strain_energy(model: HyperelasticModel, I1: float) -> float:
    """Strain energy density W(I1) in Pa."""
    _check_invariant(I1)
    G, b, d = model.shear_modulus, model.beta, I1 - 3.0
    if model.kind == NEO_HOOKEAN or b == 0.0:
        return 0.5 * G * d
    if model.kind == YEOH:
        return 0.5 * G * (d + 0.5 * b * d * d)
    if model.kind == FUNG_DEMIRAY:
        return 0.5 * G / b * math.expm1(b * d)
    denom = _gent_denominator(model, I1)
    return -0.5 * G / b * math.log(denom)


def generalized_shear_modulus(model: HyperelasticModel, I1: float) -> float:
    """Generalised shear modulus G(I1) = 2 dW/dI1 in Pa."""
    _check_invariant(I1)
    G, b, d = model.shear_modulus, model.beta, I1 - 3.0
    if model.kind == NEO_HOOKEAN or b == 0.0:
        return G
    if model.kind == YEOH:
        return G * (1.0 + b * d)
    if model.kind == FUNG_DEMIRAY:
        return G * math.exp(b * d)
    return G / _gent_denominator(model, I1)


def modulus_derivative(model: HyperelasticModel, I1: float) -> float:
    """Derivative dG/dI1 in Pa."""
    _check_invariant(I1)
    G, b, d = model.shear_modulus, model.beta, I1 - 3.0
    if model.kind == NEO_HOOKEAN or b == 0.0:
        return 0.0
    if model.kind == YEOH:
        return G * b
    if model.kind == FUNG_DEMIRAY:
        return G * b * math.exp(b * d)
    return G * b / _gent_denominator(model, I1) ** 2


def uniaxial_first_invariant(stretch: float) -> float:
    """First invariant of an isochoric uniaxial stretch along the layer normal."""
    if not stretch > 0.0:
        raise DomainError(f"stretch must be positive, got {stretch}")
    return stretch * stretch + 2.0 / stretch


@dataclass(frozen=True)
class ShearCoefficients:
    """Linear and cubic stiffness of the shear stress law sigma = g*gamma + h/3*gamma^3."""

    g: float  # Pa
    h: float  # Pa


def shear_coefficients(model: HyperelasticModel, stretch: float) -> ShearCoefficients:
    """Shear-wave stiffness coefficients of a pre-stretched layer.

    ``g = stretch^2 * G(I1)`` and ``h = 3 * stretch^4 * G'(I1)`` evaluated at
    the uniaxial base state ``I1 = stretch^2 + 2/stretch``.
    """
    I1 = uniaxial_first_invariant(stretch)
    l2 = stretch * stretch
    g = l2 * generalized_shear_modulus(model, I1)
    h = 3.0 * l2 * l2 * modulus_derivative(model, I1)
    return ShearCoefficients(g=g, h=h)


def calibrate_from_gh(kind: str, g: float, h: float, stretch: float) -> HyperelasticModel:
    """Recover model parameters from shear coefficients measured at a given stretch.

    Inverts :func:`shear_coefficients` for the requested model kind.  The
    intermediate ``beta_u = h / (3 stretch^2 g)`` is the exact Fung-Demiray
    nonlinearity; the Yeoh and Gent inverses follow from it.
    """
    kind = canonical_kind(kind)
    if not g > 0.0:
        raise DomainError(f"g must be positive, got {g}")
    if h < 0.0:
        raise DomainError(f"h must be non-negative, got {h}")
    I1 = uniaxial_first_invariant(stretch)
    d = I1 - 3.0
    l2 = stretch * stretch
    beta_u = h / (3.0 * l2 * g)
    if h == 0.0:
        if kind == NEO_HOOKEAN:
            return HyperelasticModel(kind, g / l2)
        return HyperelasticModel(kind, g / l2, 0.0)
    if kind == NEO_HOOKEAN:
        raise InversionFailure("neo-Hookean model cannot produce h != 0")
    if kind == FUNG_DEMIRAY:
        return HyperelasticModel(kind, g / l2 * math.exp(-beta_u * d), beta_u)
    if kind == YEOH:
        scale = 1.0 - beta_u * d
        if scale <= 0.0:
            raise InversionFailure(
                f"Yeoh inverse singular: 1/beta_u = {1.0 / beta_u:.6g} <= I1 - 3 = {d:.6g}"
            )
        return HyperelasticModel(kind, g / l2 * scale, beta_u / scale)
    scale = 1.0 + beta_u * d
    return HyperelasticModel(kind, g / l2 / scale, beta_u / scale)


def stiffness_ratio_curve(kind: str, r: float) -> float:
    """Tangent shear stiffness over g as a function of the normalised strain r.

    ``r^2 = gamma^2 h / g`` collapses all stretches onto a single curve per
    model family.
    """
    kind = canonical_kind(kind)
    x = r * r / 3.0
    if kind == NEO_HOOKEAN:
        return 1.0
    if kind == YEOH:
        return 1.0 + x
    if kind == FUNG_DEMIRAY:
        return math.exp(x)
    if x >= 1.0 - GENT_MARGIN:
        raise GentLocking(f"Gent stiffness ratio diverges at r^2 = 3, got r^2 = {r * r:.6g}")
    return 1.0 / (1.0 - x)


@dataclass(frozen=True)
class Phase:
    """One material layer of the laminate."""

    model: HyperelasticModel
    density: float  # kg/m^3
    volume_fraction: float
    permeability: float = MU0  # N/A^2
    remnant_induction: float = 0.0  # T

    def __post_init__(self):
        if not self.density > 0.0:
            raise DomainError(f"density must be positive, got {self.density}")
        if not 0.0 < self.volume_fraction < 1.0:
            raise DomainError(f"volume_fraction must lie in (0, 1), got {self.volume_fraction}")
        if self.permeability < MU0 * (1.0 - 1e-12):
            raise DomainError("permeability cannot be below the vacuum value")


@dataclass(frozen=True)
class Laminate:
    """Periodic bi-laminate: two alternating phases and the undeformed period."""

    phase1: Phase
    phase2: Phase
    period: float  # undeformed spatial period L, m

    def __post_init__(self):
        nu_sum = self.phase1.volume_fraction + self.phase2.volume_fraction
        if abs(nu_sum - 1.0) > 1e-9:
            raise DomainError(f"volume fractions must sum to 1, got {nu_sum}")
        if not self.period > 0.0:
            raise DomainError(f"period must be positive, got {self.period}")

    @property
    def phases(self) -> tuple[Phase, Phase]:
        return (self.phase1, self.phase2)

    def deformed_period(self, stretch: float) -> float:
        """Spatial period after a uniaxial stretch along the layer normal."""
        return stretch * self.period

    def layer_thicknesses(self, stretch: float) -> tuple[float, float]:
        ell = self.deformed_period(stretch)
        return (self.phase1.volume_fraction * ell, self.phase2.volume_fraction * ell)

    def swapped(self) -> "Laminate":
        """The same laminate with phase labels exchanged."""
        return Laminate(self.phase2, self.phase1, self.period)


@dataclass(frozen=True)
class MagneticLoad:
    """Applied axial magnetic induction, physical or dimensionless.

    Exactly one of ``b`` (T), ``bn`` (induction over sqrt(mu0 * mean modulus))
    or ``bn_br_product`` may be given.  The product form only determines the
    equilibrium when the effective permeability equals the vacuum value.
    """

    b: float | None = None
    bn: float | None = None
    bn_br_product: float | None = None

    def __post_init__(self):
        given = [v for v in (self.b, self.bn, self.bn_br_product) if v is not None]
        if len(given) != 1:
            raise DomainError("specify exactly one of b, bn, bn_br_product")
        if not math.isfinite(given[0]):
            raise DomainError("magnetic load must be finite")


@dataclass(frozen=True)
class MagnetoCoefficients:
    """Magnetic mixture coefficients and the stretch-dependent average modulus."""

    mu_breve: float  # N/A^2
    br_check: float  # T
    average_modulus: Callable[[float], float]


def arithmetic_modulus(lam: Laminate) -> float:
    """Volume-weighted arithmetic mean of the ground-state shear moduli (Pa)."""
    p1, p2 = lam.phases
    return (
        p1.volume_fraction * p1.model.shear_modulus
        + p2.volume_fraction * p2.model.shear_modulus
    )


def average_shear_modulus(lam: Laminate, stretch: float) -> float:
    """Volume-weighted average of the generalised moduli at the stretched state."""
    I1 = uniaxial_first_invariant(stretch)
    p1, p2 = lam.phases
    return p1.volume_fraction * generalized_shear_modulus(
        p1.model, I1
    ) + p2.volume_fraction * generalized_shear_modulus(p2.model, I1)


def effective_permeability(lam: Laminate) -> float:
    """Series (harmonic) mixture of the phase permeabilities."""
    p1, p2 = lam.phases
    return 1.0 / (p1.volume_fraction / p1.permeability + p2.volume_fraction / p2.permeability)


def effective_remnant_induction(lam: Laminate) -> float:
    """Effective remnant induction of the stack (T)."""
    p1, p2 = lam.phases
    mu_breve = effective_permeability(lam)
    return mu_breve * (
        p1.volume_fraction * p1.remnant_induction / p1.permeability
        + p2.volume_fraction * p2.remnant_induction / p2.permeability
    )


def magneto_coefficients(lam: Laminate) -> MagnetoCoefficients:
    """Bundle of the magnetic mixture rules used by the stretch balance."""
    return MagnetoCoefficients(
        mu_breve=effective_permeability(lam),
        br_check=effective_remnant_induction(lam),
        average_modulus=lambda stretch: average_shear_modulus(lam, stretch),
    )


@dataclass(frozen=True)
class LoadNormalization:
    """Scales converting physical inductions to the dimensionless pair (bn, brn)."""

    b_scale: float  # T per unit of bn
    br_n: float  # dimensionless remnant induction of this laminate


def load_normalization(lam: Laminate) -> LoadNormalization:
    scale = math.sqrt(MU0 * arithmetic_modulus(lam))
    mu_breve = effective_permeability(lam)
    br_n = 2.0 * effective_remnant_induction(lam) * MU0 / mu_breve / scale
    return LoadNormalization(b_scale=scale, br_n=br_n)


def dimensionless_load_rhs(lam: Laminate, load: MagneticLoad) -> float:
    """Right-hand side of the stretch balance, normalised by mu0 * mean modulus."""
    mu_breve = effective_permeability(lam)
    vac_term = 1.0 - MU0 / mu_breve
    norm = load_normalization(lam)
    if load.bn_br_product is not None:
        if abs(vac_term) > 1e-12:
            raise DomainError(
                "bn_br_product only defines the load when the effective permeability "
                "equals the vacuum value"
            )
        return load.bn_br_product
    bn = load.bn if load.bn is not None else load.b / norm.b_scale
    return vac_term * bn * bn + bn * norm.br_n


def _stretch_residual(lam: Laminate, stretch: float, rhs_norm: float) -> float:
    gbar = average_shear_modulus(lam, stretch) / arithmetic_modulus(lam)
    return gbar * (stretch * stretch - 1.0 / stretch) - rhs_norm


def _stretch_residual_prime(lam: Laminate, stretch: float) -> float:
    I1 = uniaxial_first_invariant(stretch)
    p1, p2 = lam.phases
    gbar = average_shear_modulus(lam, stretch)
    dgbar = (
        p1.volume_fraction * modulus_derivative(p1.model, I1)
        + p2.volume_fraction * modulus_derivative(p2.model, I1)
    ) * (2.0 * stretch - 2.0 / (stretch * stretch))
    lhs_prime = dgbar * (stretch * stretch - 1.0 / stretch) + gbar * (
        2.0 * stretch + 1.0 / (stretch * stretch)
    )
    return lhs_prime / arithmetic_modulus(lam)


def _newton_stretch(lam: Laminate, start: float, rhs_norm: float, tol: float) -> float | None:
    x = start
    for _ in range(60):
        try:
            f = _stretch_residual(lam, x, rhs_norm)
            fp = _stretch_residual_prime(lam, x)
        except (GentLocking, DomainError):
            return None
        if fp == 0.0 or not math.isfinite(fp):
            return None
        x_new = x - f / fp
        if x_new <= 0.2 * x:  # keep iterates on the positive axis
            x_new = 0.2 * x
        if abs(x_new - x) <= tol * max(1.0, abs(x_new)):
            x = x_new
            try:
                f = _stretch_residual(lam, x, rhs_norm)
            except (GentLocking, DomainError):
                return None
            if abs(f) > 1e-9 * max(1.0, abs(rhs_norm)):
                return None
            return x
        x = x_new
    return None


def _locking_stretch(lam: Laminate, side: float) -> float | None:
    """Stretch at which the stiffest Gent phase locks, on the tension/compression side."""
    from scipy.optimize import brentq

    betas = [p.model.beta for p in lam.phases if p.model.kind == GENT and p.model.beta > 0.0]
    if not betas:
        return None
    i1_lock = 3.0 + 1.0 / max(betas)

    def f(x: float) -> float:
        return uniaxial_first_invariant(x) - i1_lock

    if side >= 0.0:
        hi = 2.0
        while f(hi) < 0.0:
            hi *= 2.0
        return float(brentq(f, 1.0, hi, xtol=1e-14))
    lo = 0.5
    while f(lo) < 0.0:
        lo *= 0.5
    return float(brentq(f, lo, 1.0, xtol=1e-15))


def stretch_from_field(lam: Laminate, load: MagneticLoad, tol: float = 1e-12) -> float:
    """Axial stretch produced by a permanent magnetic induction along the layers.

    Solves ``mu0 * Gbar(stretch) * (stretch^2 - 1/stretch) = rhs`` on the
    branch continued from the unloaded state (stretch 1 at zero load), with
    adaptive load stepping and Newton polishing at each step.

    Raises :class:`NoRoot` when the continuation path runs into the Gent
    validity limit; the exception carries the locking stretch.
    """
    target = dimensionless_load_rhs(lam, load)
    if target == 0.0:
        return 1.0
    x, r = 1.0, 0.0
    step = target
    min_step = abs(target) * 1e-12
    while r != target:
        remaining = target - r
        if abs(step) > abs(remaining):
            step = remaining
        root = _newton_stretch(lam, x, r + step, tol)
        if root is None:
            step *= 0.5
            if abs(step) < min_step:
                raise NoRoot(
                    f"stretch continuation stalled at load fraction {r / target:.6g} "
                    f"(stretch {x:.6g}); the Gent validity limit blocks the path",
                    locking_stretch=_locking_stretch(lam, math.copysign(1.0, target)),
                )
            continue
        x, r = root, r + step
        step *= 2.0
    return x


def is_gent_equal_beta(lam: Laminate) -> bool:
    """True when both phases are Gent with the same nonlinearity parameter."""
    m1, m2 = lam.phase1.model, lam.phase2.model
    return m1.kind == GENT and m2.kind == GENT and m1.beta == m2.beta and m1.beta > 0.0


def gent_equal_beta_stretch_roots(lam: Laminate, rhs_norm: float) -> list[float]:
    """All admissible closed-form stretch roots for an equal-beta Gent laminate.

    The balance reduces to a cubic in the stretch; roots are filtered to the
    positive axis and the Gent validity domain, and sorted ascending.  More
    than one admissible root flags a multi-branch load state.
    """
    if not is_gent_equal_beta(lam):
        raise DomainError("closed-form stretch roots require Gent phases with equal beta")
    import numpy as np

    beta = lam.phase1.model.beta
    coeffs = [1.0 + beta * rhs_norm, 0.0, -rhs_norm * (1.0 + 3.0 * beta), 2.0 * beta * rhs_norm - 1.0]
    roots = np.roots(coeffs)
    good = []
    for z in roots:
        if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
            continue
        x = float(z.real)
        if x <= 0.0:
            continue
        denom = 1.0 - beta * (uniaxial_first_invariant(x) - 3.0)
        if denom <= GENT_MARGIN:
            continue
        # reject spurious roots introduced by clearing denominators
        if abs(_stretch_residual(lam, x, rhs_norm)) > 1e-6 * max(1.0, abs(rhs_norm)):
            continue
        good.append(x)
    return sorted(good)
