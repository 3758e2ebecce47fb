"""Exact and homogenised dispersion, band gaps, and the monodromy-matrix oracle."""

import dataclasses
import math

import numpy as np
import pytest

import lamwave as lw
from lamwave import dispersion as dsp
from lamwave import materials as m
from lamwave.errors import NoGap
from lamwave.homogenize import effective_model


def monodromy_half_trace(lam: lw.Laminate, stretch: float, omega_norm: float) -> float:
    """Independent oracle: half trace of the 2x2 transfer matrix across one period.

    Propagates the (displacement, traction) state through each uniform layer
    with the standard harmonic-layer matrix and multiplies the two factors.
    """
    eff = effective_model(lam, stretch)
    ell = lam.deformed_period(stretch)
    omega = omega_norm * eff.c / ell
    mat = np.eye(2)
    for phase, thickness in zip(lam.phases, lam.layer_thicknesses(stretch)):
        sc = m.shear_coefficients(phase.model, stretch)
        c = math.sqrt(sc.g / phase.density)
        k = omega / c
        kd = k * thickness
        layer = np.array(
            [
                [math.cos(kd), math.sin(kd) / (sc.g * k)],
                [-sc.g * k * math.sin(kd), math.cos(kd)],
            ]
        )
        mat = layer @ mat
    return 0.5 * float(np.trace(mat))


def random_laminate(rng) -> lw.Laminate:
    kind = rng.choice(["neo-hookean", "yeoh", "gent", "fung-demiray"])
    beta = 0.0 if kind == "neo-hookean" else float(rng.uniform(0.0, 0.05))
    g1 = float(rng.uniform(2e5, 2e7))
    g2 = g1 * float(rng.uniform(0.05, 0.95))
    nu = float(rng.uniform(0.1, 0.9))
    return lw.Laminate(
        lw.Phase(lw.HyperelasticModel(kind, g1, beta), float(rng.uniform(800, 5000)), nu),
        lw.Phase(lw.HyperelasticModel(kind, g2, beta), float(rng.uniform(800, 5000)), 1.0 - nu),
        float(rng.uniform(0.002, 0.05)),
    )


class TestBlochCosine:
    def test_zero_frequency(self, bilam):
        assert dsp.bloch_cosine(bilam, 1.0, 0.0) == 1.0

    def test_homogeneous_limit(self):
        p = lw.Phase(lw.HyperelasticModel("neo-hookean", 2e6), 1000.0, 0.5)
        lam = lw.Laminate(p, dataclasses.replace(p), 0.01)
        w = np.linspace(0.0, 8.0, 50)
        assert np.allclose(dsp.bloch_cosine(lam, 1.0, w), np.cos(w), atol=1e-13)

    def test_even_in_frequency(self, bilam):
        w = np.linspace(0.1, 6.0, 17)
        assert np.allclose(
            dsp.bloch_cosine(bilam, 1.0, w), dsp.bloch_cosine(bilam, 1.0, -w), atol=1e-14
        )

    def test_relabeling_invariance(self, bilam):
        w = np.linspace(0.1, 6.0, 17)
        assert np.allclose(
            dsp.bloch_cosine(bilam, 1.0, w),
            dsp.bloch_cosine(bilam.swapped(), 1.0, w),
            atol=1e-13,
        )

    def test_monodromy_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            lam = random_laminate(rng)
            stretch = float(rng.uniform(0.8, 1.3))
            w = float(rng.uniform(0.05, 8.0))
            closed = float(dsp.bloch_cosine(lam, stretch, w))
            oracle = monodromy_half_trace(lam, stretch, w)
            assert closed == pytest.approx(oracle, abs=1e-12 * max(1.0, abs(oracle)))


class TestBandGaps:
    def test_homogeneous_has_none(self):
        p = lw.Phase(lw.HyperelasticModel("neo-hookean", 2e6), 1000.0, 0.5)
        lam = lw.Laminate(p, dataclasses.replace(p), 0.01)
        assert dsp.bloch_band_gaps(lam, 1.0, 3.0 * math.pi, 2000) == []

    def test_benchmark_first_gap(self, bilam):
        gaps = dsp.bloch_band_gaps(bilam, 1.0, 3.0 * math.pi, 4000)
        assert gaps[0].lo == pytest.approx(0.83 * math.pi, abs=0.01 * math.pi)
        assert gaps[0].hi == pytest.approx(1.27 * math.pi, abs=0.01 * math.pi)

    def test_matched_impedance_gap_closes(self, matched_bilam):
        gaps = dsp.bloch_band_gaps(matched_bilam, 1.0, 2.0 * math.pi, 4000)
        assert not gaps or gaps[0].width < 1e-6

    def test_edges_refined(self, bilam):
        gaps = dsp.bloch_band_gaps(bilam, 1.0, 2.0 * math.pi, 2000)
        for edge in (gaps[0].lo, gaps[0].hi):
            assert abs(abs(float(dsp.bloch_cosine(bilam, 1.0, edge))) - 1.0) < 1e-8


class TestHomogenizedBranches:
    def test_zero_wavenumber_roots(self, eff):
        freqs = dsp.homogenized_branch_frequencies(eff, 0.0)
        assert freqs[0] == pytest.approx(0.0, abs=1e-12)
        assert freqs[1] == pytest.approx(1.0 / math.sqrt(eff.eta_t), rel=1e-12)

    def test_degenerate_relation(self, eff):
        bare = dataclasses.replace(eff, eta_y=eff.eta, eta_m=0.0, eta_t=0.0)
        for k in (0.3, 1.0, 2.0):
            freqs = dsp.homogenized_branch_frequencies(bare, k)
            assert len(freqs) == 1
            assert freqs[0] == pytest.approx(math.sqrt(k**2 - eff.eta * k**4), rel=1e-12)

    def test_acoustic_long_wave(self, eff):
        k = 1e-3
        freqs = dsp.homogenized_branch_frequencies(eff, k)
        assert freqs[0] == pytest.approx(k, rel=1e-5)

    def test_zero_group_velocity_at_zone_edge(self, eff):
        dk = 1e-4
        for branch in (0, 1):
            w_m = dsp.homogenized_branch_frequencies(eff, math.pi - dk)[branch]
            w_p = dsp.homogenized_branch_frequencies(eff, math.pi + dk)[branch]
            assert abs(w_p - w_m) / (2.0 * dk) < 1e-5

    def test_gap_formula(self, eff):
        gap = dsp.homogenized_band_gap(eff)
        assert gap.lo == pytest.approx(0.84 * math.pi, abs=0.005 * math.pi)
        assert gap.hi == pytest.approx(1.32 * math.pi, abs=0.005 * math.pi)

    def test_gap_width_arithmetic(self, eff):
        gap = dsp.homogenized_band_gap(eff)
        assert (gap.hi - gap.lo) / math.pi == pytest.approx(0.48, abs=0.01)

    def test_zero_width_limit(self):
        tiny = dataclasses.replace(
            effective_model(
                lw.Laminate(
                    lw.Phase(lw.HyperelasticModel("neo-hookean", 4.7e6), 930.0, 0.5),
                    lw.Phase(lw.HyperelasticModel("neo-hookean", 0.94e6), 930.0, 0.5),
                    0.01,
                )
            ),
            eta=1e-12,
            eta_t=1.0 / (2.0 * math.pi**2) - 1e-12,
        )
        gap = dsp.homogenized_band_gap(tiny)
        assert gap.lo == pytest.approx(math.pi, rel=1e-5)
        assert gap.hi == pytest.approx(math.pi, rel=1e-5)

    def test_no_gap_without_dispersion(self, eff):
        flat = dataclasses.replace(eff, eta=0.0)
        with pytest.raises(NoGap):
            dsp.homogenized_band_gap(flat)


class TestMkdvDispersion:
    def test_trivials(self, eff):
        assert dsp.mkdv_wavenumber(eff, 0.0) == 0.0
        flat = dataclasses.replace(eff, eta=0.0)
        assert dsp.mkdv_wavenumber(flat, 1.7) == pytest.approx(1.7, rel=1e-15)

    def test_cubic_term(self, eff):
        w = math.pi
        assert dsp.mkdv_wavenumber(eff, w) == pytest.approx(
            math.pi + 0.5 * eff.eta * math.pi**3, rel=1e-14
        )


class TestLongWaveAgreement:
    def test_quartic_error_decay(self, bilam, eff):
        """The homogenised acoustic branch matches the exact one to O((k ell)^4).

        Sampled on k*ell in [0.03, 0.3]: below that the relative difference
        falls under double-precision resolution of the root finder.
        """
        ks = np.array([0.03, 0.06, 0.12, 0.24])
        errs = []
        for k in ks:
            w_exact = dsp.exact_acoustic_frequency(bilam, 1.0, float(k))
            w_h = dsp.homogenized_branch_frequencies(eff, float(k))[0]
            errs.append(abs(w_h - w_exact) / w_exact)
        slope = np.polyfit(np.log(ks), np.log(errs), 1)[0]
        assert slope == pytest.approx(4.0, abs=0.4)

    def test_first_cutoff_within_two_percent(self, bilam, eff):
        exact = dsp.bloch_band_gaps(bilam, 1.0, 2.0 * math.pi, 4000)[0]
        homog = dsp.homogenized_band_gap(eff)
        assert homog.lo == pytest.approx(exact.lo, rel=0.02)


class TestSampling:
    def test_branch_shapes(self, bilam):
        branches = dsp.sample_exact_branches(bilam, 1.0, 2.6 * math.pi, 1200)
        assert len(branches) >= 3
        acoustic = branches[0]
        assert np.all(np.diff(acoustic.omega_norm) > 0)
        assert np.all(acoustic.kappa_ell_folded >= 0)
        assert np.all(acoustic.kappa_ell_folded <= math.pi + 1e-12)
        second = branches[1]
        # unfolded continuation enters the second zone
        assert second.kappa_ell.max() > math.pi

    def test_tables(self, bilam):
        header, rows = dsp.dispersion_table(bilam, 1.0, 2.0 * math.pi, 400)
        assert header == ["kappa_ell", "omega_norm", "branch", "theory"]
        theories = {r[3] for r in rows}
        assert theories == {"exact", "homogenized", "mkdv"}

    def test_gap_records(self, bilam):
        records = dsp.band_gap_records(bilam, 1.0, 2.0 * math.pi, 4000)
        exact = [r for r in records if r["theory"] == "exact"]
        homog = [r for r in records if r["theory"] == "homogenized"]
        assert exact and homog
        assert 0.8 < exact[0]["lo_over_pi"] < 0.9
