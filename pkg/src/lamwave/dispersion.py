"""Floquet-Bloch dispersion of the bi-laminate and its homogenised approximations.

A time-harmonic shear wave in the periodic stack satisfies

    cos(kappa ell) = cos(a1) cos(a2) - (z1/z2 + z2/z1)/2 * sin(a1) sin(a2),

with ``a_i = omega * ell_i / c_i`` the per-layer phase travel and ``z_i`` the
acoustic impedances.  Frequencies are handled in the dimensionless form
``omega * ell / c`` throughout (``c`` the effective speed), wave numbers as
``kappa * ell``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoGap
from .homogenize import EffectiveModel, effective_model
from .materials import Laminate, shear_coefficients

#: maximum bisection iterations when refining a band edge
EDGE_MAX_ITER = 200
#: band-edge refinement tolerance in omega*ell/c
EDGE_TOL = 1e-10


@dataclass(frozen=True)
class BandGap:
    """Frequency interval (in omega*ell/c) where harmonic waves cannot propagate."""

    lo: float
    hi: float
    index: int

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class DispersionBranch:
    """Sampled branch: arrays of kappa*ell (folded and unfolded) and omega*ell/c."""

    kappa_ell: np.ndarray
    kappa_ell_folded: np.ndarray
    omega_norm: np.ndarray
    index: int


def _phase_travel(lam: Laminate, stretch: float):
    """Per-layer (travel-time fraction, impedance) data for the Bloch relation."""
    p1, p2 = lam.phases
    sc1 = shear_coefficients(p1.model, stretch)
    sc2 = shear_coefficients(p2.model, stretch)
    c1 = math.sqrt(sc1.g / p1.density)
    c2 = math.sqrt(sc2.g / p2.density)
    eff = effective_model(lam, stretch)
    # omega*ell_i/c_i = (omega*ell/c) * nu_i * c / c_i
    t1 = p1.volume_fraction * eff.c / c1
    t2 = p2.volume_fraction * eff.c / c2
    z1 = p1.density * c1
    z2 = p2.density * c2
    return t1, t2, z1, z2


def bloch_cosine(lam: Laminate, stretch: float, omega_norm) -> np.ndarray | float:
    """cos(kappa*ell) of the exact layered medium at frequency omega*ell/c.

    Values outside [-1, 1] mark evanescent (band-gap) frequencies.
    Accepts scalars or arrays.
    """
    t1, t2, z1, z2 = _phase_travel(lam, stretch)
    w = np.asarray(omega_norm, dtype=float)
    a1 = w * t1
    a2 = w * t2
    zz = 0.5 * (z1 / z2 + z2 / z1)
    out = np.cos(a1) * np.cos(a2) - zz * np.sin(a1) * np.sin(a2)
    return out if out.ndim else float(out)


def bloch_band_gaps(
    lam: Laminate, stretch: float = 1.0, omega_max: float = 3.0 * math.pi, n_scan: int = 10_000
) -> list[BandGap]:
    """Band gaps of the exact dispersion relation up to ``omega_max`` (omega*ell/c).

    Scans ``n_scan`` frequencies, then refines each edge by bisection of
    |cos(kappa ell)| - 1 to ``EDGE_TOL``.  Returns an empty list when no gap
    opens (e.g. matched impedances).
    """
    if not omega_max > 0.0:
        raise DomainError("omega_max must be positive")
    if n_scan < 1000:
        raise DomainError("n_scan must be at least 1000")
    w = np.linspace(0.0, omega_max, n_scan + 1)
    w[0] = 1e-12 * omega_max
    f = np.abs(np.asarray(bloch_cosine(lam, stretch, w))) - 1.0

    def fscalar(x: float) -> float:
        return abs(bloch_cosine(lam, stretch, x)) - 1.0

    def refine(neg: float, pos: float) -> float:
        # invariant: f(neg) <= 0 < f(pos); orientation-agnostic bisection
        for _ in range(EDGE_MAX_ITER):
            if abs(pos - neg) < EDGE_TOL:
                break
            m = 0.5 * (neg + pos)
            if fscalar(m) <= 0.0:
                neg = m
            else:
                pos = m
        return 0.5 * (neg + pos)

    gaps: list[BandGap] = []
    inside = f > 0.0
    idx = 0
    i = 0
    n = len(w)
    while i < n:
        if inside[i]:
            j = i
            while j + 1 < n and inside[j + 1]:
                j += 1
            lo = refine(w[i - 1], w[i]) if i > 0 else w[0]
            hi = refine(w[j + 1], w[j]) if j + 1 < n else w[-1]
            if hi > lo:
                idx += 1
                gaps.append(BandGap(lo=min(lo, hi), hi=max(lo, hi), index=idx))
            i = j + 1
        i += 1
    return gaps


def exact_acoustic_frequency(lam: Laminate, stretch: float, kappa_ell: float) -> float:
    """Invert the exact relation on the acoustic branch: omega*ell/c at given kappa*ell."""
    if not 0.0 <= kappa_ell <= math.pi:
        raise DomainError("acoustic-branch inversion needs kappa*ell in [0, pi]")
    if kappa_ell == 0.0:
        return 0.0
    target = math.cos(kappa_ell)

    def f(w: float) -> float:
        return float(bloch_cosine(lam, stretch, w)) - target

    # the acoustic branch ends at the first |cos| = 1 crossing above omega = 0
    hi = math.pi
    gaps = bloch_band_gaps(lam, stretch, omega_max=2.0 * math.pi, n_scan=2000)
    if gaps:
        hi = gaps[0].lo
    return float(brentq(f, 1e-14, hi, xtol=1e-14, rtol=8.9e-16, maxiter=300))


def homogenized_branch_frequencies(eff: EffectiveModel, kappa_ell) -> np.ndarray:
    """Real non-negative omega*ell/c roots of the optimised homogenised relation.

    Solves ``eta_t chi^2 - (1 - eta_m k^2) chi + k^2 - eta_y k^4 = 0`` for
    ``chi = (omega ell / c)^2`` and returns the real branch frequencies sorted
    ascending (acoustic first).  May return fewer than two values where roots
    are complex or negative.
    """
    k = float(kappa_ell)
    k2 = k * k
    a = eff.eta_t
    b = -(1.0 - eff.eta_m * k2)
    c = k2 - eff.eta_y * k2 * k2
    if a == 0.0:
        if b == 0.0:
            return np.array([])
        chi = [-c / b]
    else:
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            return np.array([])
        s = math.sqrt(disc)
        chi = [(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)]
    out = sorted(x for x in chi if x >= -1e-14)
    return np.sqrt(np.clip(np.asarray(out), 0.0, None))


def homogenized_band_gap(eff: EffectiveModel) -> BandGap:
    """First band gap predicted by the optimised homogenised model."""
    if eff.eta <= 0.0:
        raise NoGap("a non-dispersive laminate (eta <= 0) has no band gap")
    if eff.eta_t <= 0.0:
        raise NoGap("homogenised gap formula requires eta_t > 0")
    root = math.pi * math.sqrt(2.0 * eff.eta)
    lo = math.sqrt((1.0 - root) / (2.0 * eff.eta_t))
    hi = math.sqrt((1.0 + root) / (2.0 * eff.eta_t))
    return BandGap(lo=lo, hi=hi, index=1)


def mkdv_wavenumber(eff: EffectiveModel, omega_norm) -> np.ndarray | float:
    """kappa*ell of the unidirectional (mKdV) linearised model at omega*ell/c."""
    w = np.asarray(omega_norm, dtype=float)
    out = w + 0.5 * eff.eta * w**3
    return out if out.ndim else float(out)


def _unfold(kappa_folded: np.ndarray, band: np.ndarray) -> np.ndarray:
    """Monotone-continuation unfolding of kappa*ell onto [0, n*pi]."""
    even = band % 2 == 0
    return np.where(even, band * math.pi + kappa_folded, (band + 1) * math.pi - kappa_folded)


def sample_exact_branches(
    lam: Laminate, stretch: float = 1.0, omega_max: float = 2.6 * math.pi, n: int = 2000
) -> list[DispersionBranch]:
    """Sample the exact dispersion curves on an omega grid, split per pass band.

    Each branch carries the folded wave number (first Brillouin zone) and the
    monotone-continuation unfolded one.
    """
    w = np.linspace(0.0, omega_max, n)
    rhs = np.asarray(bloch_cosine(lam, stretch, w))
    propagating = np.abs(rhs) <= 1.0
    # band index = number of completed gaps below each frequency
    gap = ~propagating
    band = np.cumsum(np.diff(np.concatenate([[False], gap]).astype(int)) == 1)
    folded = np.arccos(np.clip(rhs, -1.0, 1.0))
    branches = []
    for b in range(int(band.max()) + 1 if len(band) else 1):
        sel = propagating & (band == b)
        if not np.any(sel):
            continue
        kf = folded[sel]
        ku = _unfold(kf, np.full(kf.shape, b))
        branches.append(
            DispersionBranch(kappa_ell=ku, kappa_ell_folded=kf, omega_norm=w[sel], index=b)
        )
    return branches


def dispersion_table(
    lam: Laminate,
    stretch: float = 1.0,
    omega_max: float = 2.6 * math.pi,
    n: int = 2000,
    folded: bool = False,
) -> tuple[list[str], list[tuple]]:
    """Rows (kappa_ell, omega_norm, branch, theory) for all three theories."""
    eff = effective_model(lam, stretch)
    rows: list[tuple] = []
    for br in sample_exact_branches(lam, stretch, omega_max, n):
        k = br.kappa_ell_folded if folded else br.kappa_ell
        rows.extend(
            (float(ki), float(wi), br.index, "exact") for ki, wi in zip(k, br.omega_norm)
        )
    kgrid = np.linspace(0.0, 2.0 * math.pi, n // 2)
    for k in kgrid:
        freqs = homogenized_branch_frequencies(eff, k)
        kk = k if not folded else (k if k <= math.pi else 2.0 * math.pi - k)
        for b, wv in enumerate(freqs):
            rows.append((float(kk), float(wv), b, "homogenized"))
    wgrid = np.linspace(0.0, omega_max, n // 2)
    km = np.asarray(mkdv_wavenumber(eff, wgrid))
    for ki, wi in zip(km, wgrid):
        kk = ki if not folded else math.acos(math.cos(ki))
        rows.append((float(kk), float(wi), 0, "mkdv"))
    return ["kappa_ell", "omega_norm", "branch", "theory"], rows


def band_gap_records(
    lam: Laminate, stretch: float = 1.0, omega_max: float = 3.0 * math.pi, n_scan: int = 10_000
) -> list[dict]:
    """JSON-ready gap records for both theories, frequencies in units of pi."""
    eff = effective_model(lam, stretch)
    records = [
        {
            "index": g.index,
            "lo_over_pi": g.lo / math.pi,
            "hi_over_pi": g.hi / math.pi,
            "theory": "exact",
        }
        for g in bloch_band_gaps(lam, stretch, omega_max, n_scan)
    ]
    try:
        g = homogenized_band_gap(eff)
        records.append(
            {
                "index": g.index,
                "lo_over_pi": g.lo / math.pi,
                "hi_over_pi": g.hi / math.pi,
                "theory": "homogenized",
            }
        )
    except NoGap:
        pass
    return records
