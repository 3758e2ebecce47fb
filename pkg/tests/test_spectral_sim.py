"""Pseudo-spectral marching: exact linear transport, conservation, solitons, blow-up."""

import dataclasses
import math

import numpy as np
import pytest

import lamwave as lw
from lamwave import spectral_sim as sp
from lamwave.errors import DomainError, Instability
from lamwave.homogenize import effective_model


def neo_hookean_stack():
    """Linear (zeta = 0) variant of the benchmark stack; eta is unchanged."""
    return lw.Laminate(
        lw.Phase(lw.HyperelasticModel("neo-hookean", 4.7e6), 930.0, 0.5),
        lw.Phase(lw.HyperelasticModel("neo-hookean", 0.94e6), 930.0, 0.5),
        0.01,
    )


class TestConfig:
    def test_power_of_two_required(self):
        with pytest.raises(DomainError):
            sp.SpectralConfig(n_points=1000, window=1.0)
        with pytest.raises(DomainError):
            sp.SpectralConfig(n_points=128, window=1.0)

    def test_impact_window_sizing(self):
        cfg = sp.config_for_impact(kappa=40.0, c=40.0, window_factor=4.0)
        assert cfg.n_points == 4096
        assert cfg.window == pytest.approx(4.0 * 2.0 * math.pi / (40.0 * 40.0), rel=1e-12)
        with pytest.raises(DomainError):
            sp.config_for_impact(kappa=40.0, c=40.0, window_factor=2.0)


class TestLinear:
    def test_zero_signal_stays_zero(self, eff):
        cfg = sp.SpectralConfig(n_points=256, window=1e-2, quiet_zone_check=False)
        res = sp.mkdv_march(eff, lambda t: np.zeros_like(t), cfg, [0.01])
        assert np.all(res.records[res.y_final] == 0.0)

    def test_single_harmonic_phase_shift(self):
        """With zeta = 0 each mode advances by exactly kappa(omega) * y."""
        eff = effective_model(neo_hookean_stack(), 1.0)
        assert eff.zeta == 0.0
        window = 0.02
        cfg = sp.SpectralConfig(
            n_points=1024, window=window, viscosity=0.0, quiet_zone_check=False
        )
        m_mode = 12
        omega = 2.0 * math.pi * m_mode / window
        res = sp.mkdv_march(eff, lambda t: np.sin(omega * t), cfg, [0.05])
        y = res.y_final
        kappa = omega / eff.c + eff.eta * eff.ell**2 * omega**3 / (2.0 * eff.c**3)
        exact = np.sin(omega * res.t - kappa * y)
        assert np.max(np.abs(res.records[y] - exact)) < 1e-10

    def test_l2_norm_conserved(self):
        """Linear inviscid evolution is unitary: discrete L2 exactly preserved."""
        eff = effective_model(neo_hookean_stack(), 1.0)
        cfg = sp.SpectralConfig(
            n_points=256, window=5e-3, dy=1e-4, viscosity=0.0, quiet_zone_check=False
        )
        rng = np.random.default_rng(3)
        sig = rng.standard_normal(256)
        res = sp.mkdv_march(eff, sig, cfg, [10_000 * cfg.dy])
        n0 = float(np.linalg.norm(sig))
        n1 = float(np.linalg.norm(res.records[res.y_final]))
        assert abs(n1 - n0) / n0 < 1e-10

    def test_viscosity_decays_modes(self):
        eff = effective_model(neo_hookean_stack(), 1.0)
        window = 0.02
        cfg = sp.SpectralConfig(
            n_points=1024, window=window, viscosity=1e-6, quiet_zone_check=False
        )
        m_mode = 20
        omega = 2.0 * math.pi * m_mode / window
        res = sp.mkdv_march(eff, lambda t: np.sin(omega * t), cfg, [0.05])
        amp = float(np.max(np.abs(res.records[res.y_final])))
        assert amp == pytest.approx(math.exp(-1e-6 * omega**2 * res.y_final), rel=1e-3)


class TestInvariants:
    def test_mkdv_integrals_drift(self, bilam):
        """Inviscid smooth marching preserves the two lowest invariants."""
        eff = effective_model(bilam, 1.0)
        kappa = 2.0 * math.pi / (16.0 * eff.ell)
        velocity = 2.0 * eff.c
        cfg = dataclasses.replace(
            sp.config_for_impact(kappa, eff.c, window_factor=8.0), viscosity=0.0
        )
        from lamwave.soliton import shock_distance

        y_star = shock_distance(eff, velocity, kappa)
        res = sp.impact_march(eff, velocity, kappa, [0.5 * y_star], cfg=cfg)
        v0 = velocity * np.sin(0.5 * kappa * eff.c * res.t) ** 2
        v0[res.t > 2.0 * math.pi / (kappa * eff.c)] = 0.0
        v1 = res.records[res.y_final]
        for power in (1, 2):
            i0 = float(np.sum(v0**power))
            i1 = float(np.sum(v1**power))
            assert abs(i1 - i0) / abs(i0) < 1e-6

    def test_instability_detected(self, eff):
        """A huge step size blows the nonlinear stage up and is reported."""
        cfg = sp.SpectralConfig(
            n_points=512, window=5e-3, dy=1.0, viscosity=0.0, quiet_zone_check=False
        )
        big = 50.0 * eff.c
        with pytest.raises(Instability):
            sp.mkdv_march(eff, lambda t: big * np.sin(2e3 * math.pi * t), cfg, [100.0])

    def test_quiet_zone_enforced(self, eff):
        cfg = sp.SpectralConfig(n_points=512, window=1e-2)
        with pytest.raises(Instability):
            sp.mkdv_march(eff, lambda t: np.sin(2.0 * math.pi * t / 1e-2), cfg, [0.01])

    def test_window_overrun_rejected(self, eff):
        kappa = 2.0 * math.pi / (16.0 * eff.ell)
        with pytest.raises(Instability):
            sp.impact_march(eff, 0.1 * eff.c, kappa, [50.0], window_factor=4.0)


class TestSolitonTransport:
    def test_shape_preserved(self, transport_results):
        default = transport_results["default"]
        assert default.distance >= 99.0 * 0.0049  # ~100 soliton lengths
        assert default.shape_error < 1e-3
        assert default.amplitude_drift < 1e-3

    def test_fourth_order_refinement(self, march_refinement):
        """Halving the march step cuts the error by at least 8x (4th order gives ~16x)."""
        errors = march_refinement
        assert errors[16] / errors[32] >= 8.0
        assert errors[32] / errors[64] >= 8.0

    def test_sonic_speed_rejected(self, eff):
        from lamwave.errors import NoSoliton

        with pytest.raises(NoSoliton):
            sp.soliton_transport_test(eff, eff.c)


class TestBlowup:
    def test_blowup_at_shock_distance(self, mkdv_blowup_run):
        """The non-dispersive march steepens into a shock at the analytic distance."""
        res = mkdv_blowup_run["result"]
        eff = mkdv_blowup_run["eff"]
        y_star = mkdv_blowup_run["y_star"]
        y_est = sp.gradient_blowup_distance(res, eff)
        assert y_est == pytest.approx(y_star, rel=0.05)

    def test_blowup_insensitive_to_window_doubling(self, mkdv_blowup_run, matched_bilam):
        eff = mkdv_blowup_run["eff"]
        y_star = mkdv_blowup_run["y_star"]
        kappa = 2.0 * math.pi / (16.0 * eff.ell)
        wide = sp.impact_march(
            eff, 2.0 * eff.c, kappa, [1.3 * y_star], window_factor=16.0
        )
        base = sp.gradient_blowup_distance(mkdv_blowup_run["result"], eff)
        doubled = sp.gradient_blowup_distance(wide, eff)
        assert doubled == pytest.approx(base, rel=0.01)

    def test_no_blowup_without_steepening(self):
        eff = effective_model(neo_hookean_stack(), 1.0)
        cfg = sp.SpectralConfig(n_points=512, window=2e-2, quiet_zone_check=False)
        res = sp.mkdv_march(eff, lambda t: np.sin(2.0 * math.pi * 8 * t / 2e-2), cfg, [0.02])
        with pytest.raises(DomainError):
            sp.gradient_blowup_distance(res, eff)


class TestEmission:
    def test_march_bit_reproducible(self, eff):
        kappa = 2.0 * math.pi / (16.0 * eff.ell)
        runs = [
            sp.impact_march(eff, 0.5 * eff.c, kappa, [0.02], window_factor=4.0)
            for _ in range(2)
        ]
        a = runs[0].records[runs[0].y_final]
        b = runs[1].records[runs[1].y_final]
        assert np.array_equal(a, b)

    def test_probe_table_schema(self, eff):
        kappa = 2.0 * math.pi / (16.0 * eff.ell)
        res = sp.impact_march(eff, 0.1 * eff.c, kappa, [0.01], window_factor=4.0)
        header, rows = sp.probe_table(res, kappa, eff.c)
        assert header == ["t_s", "t_norm", "v_over_c", "probe_y_m", "theory"]
        assert all(r[4] == "mkdv" for r in rows)
