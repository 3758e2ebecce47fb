"""Parameter studies: band-gap and solitary-wave tunability.

Three sweep variables are supported: the normalised magnetic load product,
the volume fraction of phase 2 (at unit stretch), and the shear-modulus
contrast (at unit stretch).  Rows are mutually independent; with
``threads > 1`` they are evaluated by a thread pool and merged in order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from . import dispersion, materials, soliton
from .errors import DomainError, GentLocking, LamwaveError, NoRoot
from .homogenize import effective_model
from .materials import Laminate, MagneticLoad

VARIABLES = ("magnetic_load_product", "volume_fraction_2", "modulus_contrast")


@dataclass(frozen=True)
class SweepSpec:
    """Grid specification for one sweep variable."""

    variable: str
    lo: float
    hi: float
    n: int = 201
    omega_max: float = 3.0 * math.pi  # exact band-gap scan ceiling, in omega*ell/c
    n_scan: int = 4000

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if not self.lo < self.hi:
            raise DomainError("sweep range must satisfy lo < hi")
        if self.n < 2:
            raise DomainError("sweep needs at least 2 points")
        if self.variable == "volume_fraction_2" and not (0.0 < self.lo and self.hi < 1.0):
            raise DomainError("volume fractions must stay inside (0, 1)")
        if self.variable == "modulus_contrast" and not self.lo > 0.0:
            raise DomainError("modulus contrast must be positive")

    def grid(self) -> np.ndarray:
        if self.variable == "modulus_contrast":
            # exact reciprocal pairs keep the inversion symmetry testable
            return np.exp(np.linspace(math.log(self.lo), math.log(self.hi), self.n))
        return np.linspace(self.lo, self.hi, self.n)


@dataclass
class SweepResult:
    variable: str
    values: np.ndarray
    rows: list[dict]
    fixed: dict
    summary: dict

    def column(self, key: str) -> np.ndarray:
        return np.asarray([row.get(key, math.nan) for row in self.rows], dtype=float)


def _gap_fields(row: dict, lam: Laminate, stretch: float, eff, spec: SweepSpec, scale: float):
    """First exact and homogenised gap edges, rescaled by ``scale``."""
    gaps = dispersion.bloch_band_gaps(lam, stretch, spec.omega_max, spec.n_scan)
    if gaps:
        row["gap_exact_lo"] = gaps[0].lo * scale
        row["gap_exact_hi"] = gaps[0].hi * scale
    else:
        row["gap_exact_lo"] = row["gap_exact_hi"] = math.nan
    try:
        hg = dispersion.homogenized_band_gap(eff)
        row["gap_homog_lo"] = hg.lo * scale
        row["gap_homog_hi"] = hg.hi * scale
    except LamwaveError:
        row["gap_homog_lo"] = row["gap_homog_hi"] = math.nan


def _bound_fields(row: dict, eff, speed_scale: float):
    try:
        bound = soliton.existence_bound(eff)
        row["max_speed_ratio"] = bound * speed_scale if math.isfinite(bound) else math.inf
        row["max_strain"] = (
            soliton.max_strain_amplitude(eff) if math.isfinite(bound) else math.nan
        )
    except LamwaveError:
        row["max_speed_ratio"] = math.nan
        row["max_strain"] = math.nan


def _run_rows(values, worker, threads: int) -> list[dict]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, values))
    return [worker(v) for v in values]


def sweep_magnetic(lam: Laminate, spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Stretch, band gaps and solitary-wave bounds versus the magnetic load product.

    Frequencies are reported as omega*L/c0 with c0 the undeformed effective
    speed, so rows are comparable across stretch states.  Rows where the
    stretch solve hits the Gent validity limit are flagged ``locked`` instead
    of aborting the sweep.
    """
    if spec.variable != "magnetic_load_product":
        raise DomainError("spec.variable must be 'magnetic_load_product'")
    c0 = effective_model(lam, 1.0).c

    def worker(p: float) -> dict:
        row: dict = {"load_product": float(p), "locked": 0, "n_stretch_roots": 1}
        try:
            stretch = materials.stretch_from_field(lam, MagneticLoad(bn_br_product=p))
            if materials.is_gent_equal_beta(lam):
                roots = materials.gent_equal_beta_stretch_roots(lam, p)
                row["n_stretch_roots"] = len(roots)
            eff = effective_model(lam, stretch)
        except (NoRoot, GentLocking) as exc:
            row["locked"] = 1
            row["stretch"] = math.nan
            row["eta"] = math.nan
            for key in ("gap_exact_lo", "gap_exact_hi", "gap_homog_lo", "gap_homog_hi",
                        "max_speed_ratio", "max_strain"):
                row[key] = math.nan
            row["note"] = str(exc)
            return row
        row["stretch"] = stretch
        row["eta"] = eff.eta
        row["zeta"] = eff.zeta
        # omega*L/c0 = (omega*ell/c) * c / (stretch * c0)
        scale = eff.c / (stretch * c0)
        _gap_fields(row, lam, stretch, eff, spec, scale)
        _bound_fields(row, eff, speed_scale=eff.c / c0)
        return row

    values = spec.grid()
    rows = _run_rows(values, worker, threads)
    unlocked = [r for r in rows if not r["locked"]]
    summary = {
        "n_locked": sum(r["locked"] for r in rows),
        "stretch_min": min((r["stretch"] for r in unlocked), default=math.nan),
        "stretch_max": max((r["stretch"] for r in unlocked), default=math.nan),
        "multi_root_rows": sum(1 for r in rows if r.get("n_stretch_roots", 1) > 1),
    }
    return SweepResult(
        variable=spec.variable,
        values=values,
        rows=rows,
        fixed={"period_m": lam.period},
        summary=summary,
    )


def _with_volume_fraction(lam: Laminate, nu2: float) -> Laminate:
    p1 = replace(lam.phase1, volume_fraction=1.0 - nu2)
    p2 = replace(lam.phase2, volume_fraction=nu2)
    return Laminate(p1, p2, lam.period)


def _with_contrast(lam: Laminate, ratio: float) -> Laminate:
    model2 = replace(lam.phase2.model, shear_modulus=ratio * lam.phase1.model.shear_modulus)
    return Laminate(lam.phase1, replace(lam.phase2, model=model2), lam.period)


def _refine_argmax(fn, lo: float, hi: float) -> float:
    res = minimize_scalar(lambda x: -fn(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.x)


def sweep_volume_fraction(lam: Laminate, spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Band gaps and solitary-wave bounds versus the phase-2 volume fraction (stretch 1)."""
    if spec.variable != "volume_fraction_2":
        raise DomainError("spec.variable must be 'volume_fraction_2'")

    def worker(nu2: float) -> dict:
        sub = _with_volume_fraction(lam, float(nu2))
        eff = effective_model(sub, 1.0)
        row = {"volume_fraction_2": float(nu2), "eta": eff.eta, "zeta": eff.zeta}
        _gap_fields(row, sub, 1.0, eff, spec, scale=1.0)
        _bound_fields(row, eff, speed_scale=1.0)
        return row

    values = spec.grid()
    rows = _run_rows(values, worker, threads)

    def eta_of(x: float) -> float:
        return effective_model(_with_volume_fraction(lam, x), 1.0).eta

    def strain_of(x: float) -> float:
        try:
            return soliton.max_strain_amplitude(effective_model(_with_volume_fraction(lam, x), 1.0))
        except LamwaveError:
            return -math.inf

    eta_col = np.asarray([r["eta"] for r in rows])
    strain_col = np.asarray([r["max_strain"] for r in rows])
    pad = max((values[-1] - values[0]) / (len(values) - 1), 1e-4)

    def bracket(col: np.ndarray) -> tuple[float, float]:
        i = int(np.nanargmax(col))
        return max(values[0], values[i] - pad), min(values[-1], values[i] + pad)

    sc1 = materials.shear_coefficients(lam.phase1.model, 1.0)
    sc2 = materials.shear_coefficients(lam.phase2.model, 1.0)
    c1 = math.sqrt(sc1.g / lam.phase1.density)
    c2 = math.sqrt(sc2.g / lam.phase2.density)
    summary = {
        "argmax_eta": _refine_argmax(eta_of, *bracket(eta_col)),
        "argmax_max_strain": _refine_argmax(strain_of, *bracket(strain_col)),
        "speed_ratio_prediction": c2 / (c1 + c2),
    }
    return SweepResult(
        variable=spec.variable,
        values=values,
        rows=rows,
        fixed={"stretch": 1.0, "period_m": lam.period},
        summary=summary,
    )


def sweep_contrast(lam: Laminate, spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Band gaps and solitary-wave bounds versus the shear-modulus contrast (stretch 1).

    The contrast multiplies the phase-1 modulus to give phase 2; the grid is
    logarithmic so reciprocal pairs are present exactly.
    """
    if spec.variable != "modulus_contrast":
        raise DomainError("spec.variable must be 'modulus_contrast'")

    def worker(ratio: float) -> dict:
        sub = _with_contrast(lam, float(ratio))
        eff = effective_model(sub, 1.0)
        row = {"modulus_contrast": float(ratio), "eta": eff.eta, "zeta": eff.zeta}
        _gap_fields(row, sub, 1.0, eff, spec, scale=1.0)
        _bound_fields(row, eff, speed_scale=1.0)
        return row

    values = spec.grid()
    rows = _run_rows(values, worker, threads)
    widths = [r["gap_exact_hi"] - r["gap_exact_lo"] for r in rows]
    summary = {
        "max_gap_width": float(np.nanmax(widths)) if widths else math.nan,
        "contrast_at_max_gap": float(values[int(np.nanargmax(widths))]) if widths else math.nan,
    }
    return SweepResult(
        variable=spec.variable,
        values=values,
        rows=rows,
        fixed={"stretch": 1.0, "period_m": lam.period},
        summary=summary,
    )


def sweep_table(result: SweepResult) -> tuple[list[str], list[tuple]]:
    """Column names and rows for CSV emission (union of row keys, stable order)."""
    keys: list[str] = []
    for row in result.rows:
        for k in row:
            if k not in keys and k != "note":
                keys.append(k)
    rows = [tuple(row.get(k, math.nan) for k in keys) for row in result.rows]
    return keys, rows
