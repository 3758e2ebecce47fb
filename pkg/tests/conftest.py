"""Shared fixtures: the benchmark bi-laminate and the expensive simulation runs.

The benchmark stack is two equal-thickness Gent layers (4.7 MPa / 0.94 MPa,
beta 0.0132, 930 kg/m^3, 1 cm period).  Two variants appear throughout: the
matched-impedance stack (phase-2 density 4650 kg/m^3, no dispersion) and the
low-dispersion stack (3720 kg/m^3).  Long simulations are session-scoped so
module tests and the acceptance suite share one run.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

import lamwave as lw
from lamwave import fv_sim, soliton, spectral_sim
from lamwave.homogenize import effective_model


def gent_bilaminate() -> lw.Laminate:
    return lw.Laminate(
        lw.Phase(lw.HyperelasticModel("gent", 4.7e6, 0.0132), 930.0, 0.5),
        lw.Phase(lw.HyperelasticModel("gent", 0.94e6, 0.0132), 930.0, 0.5),
        0.01,
    )


def with_phase2_density(lam: lw.Laminate, rho2: float) -> lw.Laminate:
    return lw.Laminate(lam.phase1, dataclasses.replace(lam.phase2, density=rho2), lam.period)


@pytest.fixture(scope="session")
def bilam() -> lw.Laminate:
    return gent_bilaminate()


@pytest.fixture(scope="session")
def eff(bilam):
    return effective_model(bilam, 1.0)


@pytest.fixture(scope="session")
def matched_bilam(bilam) -> lw.Laminate:
    """Impedance-matched variant: rho2 = rho1 * G1/G2, so eta = 0."""
    return with_phase2_density(bilam, 4650.0)


@pytest.fixture(scope="session")
def low_disp_bilam(bilam) -> lw.Laminate:
    """Low-dispersion variant: rho2 = 4 rho1."""
    return with_phase2_density(bilam, 3720.0)


def impact_geometry(lam: lw.Laminate, v_over_c: float, wavelengths: float):
    """Common impact-run quantities: (eff, velocity, kappa, y_star, duration)."""
    e = effective_model(lam, 1.0)
    velocity = v_over_c * e.c
    kappa = 2.0 * math.pi / (wavelengths * e.ell)
    y_star = soliton.shock_distance(e, velocity, kappa)
    duration = 2.0 * math.pi / (kappa * e.c)
    return e, velocity, kappa, y_star, duration


@pytest.fixture(scope="session")
def fv_matched_run(matched_bilam):
    """Matched-impedance impact with a probe ladder through the shock region."""
    e, velocity, kappa, y_star, duration = impact_geometry(matched_bilam, 2.0, 16.0)
    multiples = (0.3, 0.6, 0.9, 1.0, 1.1, 1.25, 1.4, 1.6, 1.8, 2.0)
    probes = [m * y_star for m in multiples]
    t_final = 2.0 * y_star / e.c + 3.0 * duration
    result = fv_sim.impact_run(matched_bilam, 1.0, velocity, kappa, probes, t_final)
    return {"result": result, "eff": e, "y_star": y_star, "kappa": kappa, "velocity": velocity}


@pytest.fixture(scope="session")
def fv_nonlinear_run(bilam):
    """Nonlinear dispersive impact on the benchmark stack.

    Probes sit at y*, 2y* (the reference recording positions) and 3y* (past
    soliton separation, for the fission property).
    """
    e, velocity, kappa, y_star, duration = impact_geometry(bilam, 2.0, 16.0)
    probes = [y_star, 2.0 * y_star, 3.0 * y_star]
    t_final = 3.0 * y_star / e.c + 4.0 * duration
    result = fv_sim.impact_run(bilam, 1.0, velocity, kappa, probes, t_final)
    return {"result": result, "eff": e, "y_star": y_star, "kappa": kappa, "velocity": velocity}


@pytest.fixture(scope="session")
def mkdv_nonlinear_run(bilam):
    """Spectral march of the same nonlinear dispersive impact problem."""
    e, velocity, kappa, y_star, _ = impact_geometry(bilam, 2.0, 16.0)
    result = spectral_sim.impact_march(
        e, velocity, kappa, [y_star, 2.0 * y_star], window_factor=8.0
    )
    return {"result": result, "eff": e, "y_star": y_star, "kappa": kappa, "velocity": velocity}


@pytest.fixture(scope="session")
def mkdv_blowup_run(matched_bilam):
    """Spectral march of the non-dispersive analogue, past the shock distance."""
    e, velocity, kappa, y_star, _ = impact_geometry(matched_bilam, 2.0, 16.0)
    result = spectral_sim.impact_march(e, velocity, kappa, [1.3 * y_star], window_factor=8.0)
    return {"result": result, "eff": e, "y_star": y_star}


@pytest.fixture(scope="session")
def low_dispersion_pair(low_disp_bilam):
    """FV and spectral runs of the low-dispersion impact, probed at y* and 2y*."""
    e, velocity, kappa, y_star, duration = impact_geometry(low_disp_bilam, math.sqrt(2.0), 8.0)
    probes = [y_star, 2.0 * y_star]
    t_final = 2.0 * y_star / e.c + 3.0 * duration
    fv_result = fv_sim.impact_run(low_disp_bilam, 1.0, velocity, kappa, probes, t_final)
    mk_result = spectral_sim.impact_march(e, velocity, kappa, probes, window_factor=8.0)
    return {
        "fv": fv_result,
        "mkdv": mk_result,
        "eff": e,
        "y_star": y_star,
        "kappa": kappa,
        "velocity": velocity,
    }


@pytest.fixture(scope="session")
def transport_results(bilam):
    """Soliton transport at the default step (shape error sits near the window floor)."""
    e = effective_model(bilam, 1.0)
    speed = 1.02 * e.c
    return {"default": spectral_sim.soliton_transport_test(e, speed), "eff": e, "speed": speed}


@pytest.fixture(scope="session")
def march_refinement(bilam):
    """Step-halving error ladder of the spectral march against a fine reference.

    At the production step the nonlinear stepping error is below rounding, so
    the convergence order is exhibited on coarse steps of the nonlinear
    impact march (pre-shock), all dividing the same target distance.
    """
    e, velocity, kappa, _, _ = impact_geometry(bilam, 2.0, 16.0)
    y_target = 0.1
    base = spectral_sim.config_for_impact(kappa, e.c, window_factor=8.0)
    fields = {}
    for divisor in (16, 32, 64, 512):
        cfg = dataclasses.replace(base, dy=y_target / divisor)
        res = spectral_sim.impact_march(e, velocity, kappa, [y_target], cfg=cfg)
        fields[divisor] = res.records[res.y_final]
    ref = fields[512]
    scale = float(np.linalg.norm(ref))
    errors = {
        d: float(np.linalg.norm(fields[d] - ref)) / scale for d in (16, 32, 64)
    }
    return errors
