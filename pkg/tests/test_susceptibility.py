import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import wofz

from polarispec.core import (
    AccuracyWarning,
    RealSpectrum,
    TimeGrid,
    ValidationError,
    make_grid,
)
from polarispec.bathmap import CorrelationFunction, spectral_density_from_chi
from polarispec.susceptibility import (
    DisorderSpec,
    MultilevelModel,
    TlsEnsemble,
    Transition,
    TransitionSet,
    VibronicModel,
    chi_disordered,
    chi_from_correlation,
    chi_from_spectral_density,
    chi_multilevel,
    chi_three_level,
    chi_tls_thermal,
    chi_vibronic,
    faddeeva,
    thermal_factor,
    tls_transitions,
    vibronic_transitions,
    with_mirror_transitions,
)


def _single(omega, weight, p_y, p_z, gamma):
    return TransitionSet([Transition(omega, weight, p_y, p_z, gamma)])


class TestChiMultilevel:
    def test_single_transition_value_at_zero(self):
        # -4 / (0.15i) = +26.666...i
        g = make_grid(-1, 1, 3)
        chi = chi_multilevel(_single(0.0, 4.0, 1.0, 0.0, 0.3), g)
        assert chi.values[1] == pytest.approx(1j * 80.0 / 3.0, abs=1e-12)

    def test_saturated_transition_contributes_nothing(self):
        g = make_grid(-1, 1, 21)
        chi = chi_multilevel(_single(0.5, 3.0, 0.4, 0.4, 0.2), g)
        assert np.all(chi.values == 0)

    def test_two_sided_symmetry(self):
        g = make_grid(-5, 5, 201)
        ts = TransitionSet(
            [
                Transition(2.0, 1.5, 0.8, 0.2, 0.3),
                Transition(-2.0, 1.5, 0.2, 0.8, 0.3),
            ]
        )
        chi = chi_multilevel(ts, g)
        flipped = chi.values[::-1]
        # grid points are not bitwise antisymmetric, so allow slope * eps
        assert np.allclose(flipped, np.conj(chi.values), rtol=0, atol=1e-12)

    def test_empty_set_rejected(self):
        g = make_grid(-1, 1, 3)
        with pytest.raises(ValidationError):
            chi_multilevel(TransitionSet([]), g)

    def test_pointwise_evaluation_is_bitwise_identical(self):
        # frequency points are independent and the transition order is
        # fixed, so evaluating any pair of grid points alone must
        # reproduce the full-grid values bit for bit
        ts = TransitionSet(
            [Transition(w, 0.5 + w, 0.9, 0.1, 0.2) for w in (0.5, 1.0, 2.5)]
        )
        g = make_grid(-3, 3, 601)
        full = chi_multilevel(ts, g).values
        for i in (0, 77, 300, 511):
            pair = make_grid(g.points[i], g.points[i + 1], 2)
            vals = chi_multilevel(ts, pair).values
            assert vals[0] == full[i]
            assert vals[1] == full[i + 1]


class TestChiTlsThermal:
    def test_zero_temperature_value(self):
        g = make_grid(-1, 1, 3)
        m = TlsEnsemble(1.0, 2.0, 0.0, math.inf, 0.3)
        chi = chi_tls_thermal(m, g)
        assert chi.values[1] == pytest.approx(1j * 80.0 / 3.0, abs=1e-12)

    def test_infinite_temperature_is_transparent(self):
        g = make_grid(-1, 1, 51)
        m = TlsEnsemble(1.0, 2.0, 1.0, 0.0, 0.3)
        assert np.all(chi_tls_thermal(m, g).values == 0)

    def test_thermal_factor_scales_zero_temperature_result(self):
        g = make_grid(-3, 3, 101)
        cold = chi_tls_thermal(TlsEnsemble(1.0, 1.3, 1.0, math.inf, 0.2), g)
        for beta in (0.3, 1.0, 4.0):
            warm = chi_tls_thermal(TlsEnsemble(1.0, 1.3, 1.0, beta, 0.2), g)
            factor = math.tanh(beta * 1.0 / 2)
            assert np.allclose(
                warm.values, factor * cold.values, rtol=1e-15, atol=0
            )

    def test_matches_generic_two_level_transition(self):
        g = make_grid(-3, 3, 301)
        m = TlsEnsemble(2.5, 0.8, 1.2, 1.7, 0.25)
        t = thermal_factor(m.beta, m.omega_exc)
        ts = _single(1.2, 2.5 * 0.8**2, (1 + t) / 2, (1 - t) / 2, 0.25)
        ref = chi_multilevel(ts, g).values
        got = chi_tls_thermal(m, g).values
        assert np.abs(got - ref).max() <= 1e-12 * np.abs(ref).max()

    def test_thermal_factor_at_zero_temperature_zero_frequency(self):
        assert thermal_factor(math.inf, 0.0) == 1.0

    def test_negative_beta_rejected(self):
        with pytest.raises(ValidationError):
            TlsEnsemble(1.0, 1.0, 1.0, -0.5, 0.3)


class TestChiDisordered:
    def test_lorentzian_closed_form(self):
        g = make_grid(-5, 5, 401)
        m = TlsEnsemble(1.0, 1.5, 0.0, math.inf, 0.1)
        d = DisorderSpec("lorentzian", 0.0, 1.0)
        chi = chi_disordered(m, d, g)
        ref = -2.25 / (g.points - 0.0 + 0.55j)
        assert np.array_equal(chi.values, ref)

    def test_lorentzian_matches_quadrature(self):
        m = TlsEnsemble(1.0, 1.0, 0.5, math.inf, 0.2)
        d = DisorderSpec("lorentzian", 0.5, 0.8)
        g = make_grid(-2, 3, 11)
        chi = chi_disordered(m, d, g)
        for i, w in enumerate(g.points):
            ref = _disorder_quadrature(w, m, d)
            assert abs(chi.values[i] - ref) <= 1e-8 * abs(ref)

    def test_gaussian_matches_quadrature(self):
        m = TlsEnsemble(1.0, 1.5, 0.0, math.inf, 0.1)
        d = DisorderSpec("gaussian", 0.0, 1.0)
        g = make_grid(-4, 4, 17)
        chi = chi_disordered(m, d, g)
        for i, w in enumerate(g.points):
            ref = _disorder_quadrature(w, m, d)
            assert abs(chi.values[i] - ref) <= 1e-8 * abs(ref)

    def test_narrow_gaussian_approaches_homogeneous(self):
        g = make_grid(-2, 2, 201)
        gamma = 0.3
        m = TlsEnsemble(1.0, 1.2, 0.0, math.inf, gamma)
        chi_dis = chi_disordered(m, DisorderSpec("gaussian", 0.0, 1e-4 * gamma), g)
        chi_hom = chi_tls_thermal(m, g)
        rel = np.abs(chi_dis.values - chi_hom.values) / np.abs(chi_hom.values)
        assert rel.max() < 1e-6

    def test_gaussian_line_center_peak_value(self):
        # narrow homogeneous width: Im chi(center) -> N g^2 sqrt(pi/2)/sigma
        sigma = 0.7
        m = TlsEnsemble(1.0, 1.0, 0.0, math.inf, 1e-8)
        g = make_grid(-1, 1, 3)
        chi = chi_disordered(m, DisorderSpec("gaussian", 0.0, sigma), g)
        expected = math.sqrt(math.pi / 2) / sigma
        assert chi.values[1].imag == pytest.approx(expected, rel=1e-7)

    def test_finite_temperature_rejected(self):
        g = make_grid(-1, 1, 3)
        m = TlsEnsemble(1.0, 1.0, 0.0, 2.0, 0.1)
        with pytest.raises(ValidationError):
            chi_disordered(m, DisorderSpec("gaussian", 0.0, 1.0), g)

    def test_bad_sigma_rejected(self):
        with pytest.raises(ValidationError):
            DisorderSpec("gaussian", 0.0, 0.0)
        with pytest.raises(ValidationError):
            DisorderSpec("uniform", 0.0, 1.0)


def _disorder_quadrature(w, m, d):
    """Adaptive quadrature of the disorder average (test oracle)."""
    ngg = m.n_emitters * m.g**2
    if d.kind == "gaussian":
        def p(x):
            return math.exp(-0.5 * ((x - d.center) / d.sigma) ** 2) / (
                d.sigma * math.sqrt(2 * math.pi)
            )
        span = 14.0 * d.sigma
    else:
        def p(x):
            return (d.sigma / 2) / math.pi / ((x - d.center) ** 2 + d.sigma**2 / 4)
        span = 4e4 * d.sigma
    lo, hi = d.center - span, d.center + span

    def integrand(x, part):
        val = -ngg * p(x) / (w - x + 0.5j * m.gamma)
        return val.real if part == 0 else val.imag

    pts = [w] if lo < w < hi else None
    kw = dict(points=pts, limit=400, epsabs=1e-13, epsrel=1e-12)
    return quad(integrand, lo, hi, args=(0,), **kw)[0] + 1j * quad(
        integrand, lo, hi, args=(1,), **kw
    )[0]


class TestChiVibronic:
    def test_no_displacement_reduces_to_bare_line(self):
        g = make_grid(-3, 3, 301)
        m = VibronicModel(1.0, 1.1, 0.4, 0.3, 0.0, 0.2)
        bare = chi_tls_thermal(TlsEnsemble(1.0, 1.1, 0.4, math.inf, 0.2), g)
        assert np.array_equal(chi_vibronic(m, g).values, bare.values)

    def test_progression_weight(self):
        ts = vibronic_transitions(VibronicModel(1.0, 1.0, 0.0, 0.3, 3.0, 0.1))
        w3 = ts.transitions[3].weight
        assert w3 == pytest.approx(math.exp(-3.0) * 27.0 / 6.0, rel=1e-13)
        assert w3 == pytest.approx(0.22404180765538775, rel=1e-12)

    def test_weights_sum_to_one(self):
        for s in (0.0, 0.7, 3.0, 12.0):
            ts = vibronic_transitions(VibronicModel(1.0, 1.0, 0.0, 0.3, s, 0.1))
            total = sum(t.weight for t in ts)
            assert abs(total - 1.0) <= 1e-12

    def test_explicit_truncation(self):
        ts = vibronic_transitions(VibronicModel(1.0, 1.0, 0.0, 0.3, 3.0, 0.1, m_max=2))
        assert len(ts) == 3

    def test_line_positions(self):
        m = VibronicModel(1.0, 1.0, 0.5, 0.3, 2.0, 0.1)
        ts = vibronic_transitions(m)
        assert ts.transitions[0].omega_zy == pytest.approx(0.5 - 2.0 * 0.3)
        assert ts.transitions[4].omega_zy == pytest.approx(0.5 + 2.0 * 0.3)


class TestChiThreeLevel:
    def _model(self, pops):
        return MultilevelModel(
            levels=[(0.0, pops[0]), (1.0, pops[1]), (3.0, pops[2])],
            dipoles=[(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)],
            n_emitters=1.0,
            g_scale=1.0,
            gamma=0.3,
        )

    def test_equal_populations_transparent(self):
        g = make_grid(-1, 5, 201)
        chi = chi_three_level(self._model((1 / 3, 1 / 3, 1 / 3)), g)
        assert np.all(chi.values == 0)

    def test_population_difference_prefactors(self):
        g = make_grid(-1, 5, 601)
        chi = chi_three_level(self._model((0.7, 0.2, 0.1)), g)
        w = g.points
        ref = (
            -0.5 / (w - 1.0 + 0.15j)
            - 0.1 / (w - 2.0 + 0.15j)
            - 0.6 / (w - 3.0 + 0.15j)
        )
        assert np.abs(chi.values - ref).max() <= 1e-14 * np.abs(ref).max()

    def test_saturated_pair_drops_out(self):
        g = make_grid(-1, 5, 601)
        chi = chi_three_level(self._model((0.48, 0.48, 0.04)), g)
        w = g.points
        ref = -0.44 / (w - 2.0 + 0.15j) - 0.44 / (w - 3.0 + 0.15j)
        assert np.abs(chi.values - ref).max() <= 1e-14 * np.abs(ref).max()

    def test_population_sum_validated(self):
        with pytest.raises(ValidationError):
            self._model((0.7, 0.2, 0.2))

    def test_exactly_three_levels_required(self):
        m = MultilevelModel(
            levels=[(0.0, 0.6), (1.0, 0.4)],
            dipoles=[(1, 2, 1.0)],
            n_emitters=1.0,
            g_scale=1.0,
            gamma=0.3,
        )
        g = make_grid(-1, 2, 31)
        with pytest.raises(ValidationError):
            chi_three_level(m, g)


class TestChiFromSpectralDensity:
    def test_zero_density_gives_zero(self):
        g = make_grid(0, 5, 101)
        chi = chi_from_spectral_density(RealSpectrum(g, np.zeros(101)), g)
        assert np.all(chi.values == 0)

    def test_negative_density_rejected(self):
        g = make_grid(0, 5, 101)
        vals = np.zeros(101)
        vals[50] = -1.0
        with pytest.raises(ValidationError):
            chi_from_spectral_density(RealSpectrum(g, vals), g)

    def test_weight_at_negative_frequency_rejected(self):
        g = make_grid(-5, 5, 101)
        vals = np.ones(101)
        with pytest.raises(ValidationError):
            chi_from_spectral_density(RealSpectrum(g, vals), g)

    def test_narrow_spike_gives_single_pole(self):
        g = make_grid(0.0, 12.0, 12001)
        w = g.points
        gamma_s, w0, wt = 0.02, 6.0, 0.9
        spike = wt * (gamma_s / 2) / ((w - w0) ** 2 + gamma_s**2 / 4)
        greg = 4 * g.spacing
        chi = chi_from_spectral_density(RealSpectrum(g, spike), g, gamma_reg=greg)
        pole = -wt / (w - w0 + 0.5j * (gamma_s + greg))
        sel = np.abs(w - w0) < 4
        rel = np.abs(chi.values[sel] - pole[sel]) / np.abs(pole[sel])
        assert rel.max() < 1e-3

    def test_round_trip_recovers_density(self):
        g = make_grid(0.0, 12.0, 12001)
        w = g.points
        bump = np.where(
            (w > 0.5) & (w < 11.5), np.sin(math.pi * (w - 0.5) / 11.0) ** 4, 0.0
        )
        J = RealSpectrum(g, 3.0 * bump)
        chi = chi_from_spectral_density(J, g, gamma_reg=3 * g.spacing)
        back = spectral_density_from_chi(chi)
        core = J.values >= 0.5 * J.values.max()
        rel = np.abs(back.values[core] - J.values[core]) / J.values[core]
        assert rel.max() < 1e-3

    def test_negative_frequencies_filled_by_reflection(self):
        gj = make_grid(0.0, 6.0, 3001)
        w = gj.points
        spike = np.where((w > 2) & (w < 4), 1.0 - np.cos(math.pi * (w - 2)), 0.0)
        J = RealSpectrum(gj, spike)
        g2 = make_grid(-5, 5, 501)
        chi = chi_from_spectral_density(J, g2)
        assert np.allclose(
            chi.values[::-1], np.conj(chi.values), rtol=0, atol=1e-15
        )


class TestChiFromCorrelation:
    def test_zero_correlation(self):
        tg = TimeGrid(10.0, 101)
        c2 = CorrelationFunction(tg, np.zeros(101, complex))
        g = make_grid(-2, 2, 41)
        assert np.all(chi_from_correlation(c2, g).values == 0)

    def test_single_exponential_matches_analytic_transform(self):
        w0, gamma, wt = 3.0, 1.0, 0.7
        tg = TimeGrid(64.0, 640001)
        c2 = CorrelationFunction(tg, wt * np.exp((-1j * w0 - gamma / 2) * tg.times))
        g = make_grid(-8, 8, 201)
        chi = chi_from_correlation(c2, g)
        ref = -wt / (g.points - w0 + 0.5j * gamma) + wt / (
            g.points + w0 + 0.5j * gamma
        )
        rel = np.abs(chi.values - ref) / np.abs(ref)
        assert rel.max() < 1e-6

    def test_single_pole_limit_near_resonance(self):
        # for a narrow line the counter-rotating pole is negligible near
        # resonance, bounded by gamma/(4 w0)
        w0, gamma, wt = 5.0, 0.02, 1.0
        tg = TimeGrid(32.0 / gamma, 540001)
        c2 = CorrelationFunction(tg, wt * np.exp((-1j * w0 - gamma / 2) * tg.times))
        g = make_grid(4.0, 6.0, 51)
        chi = chi_from_correlation(c2, g)
        pole = -wt / (g.points - w0 + 0.5j * gamma)
        rel = np.abs(chi.values - pole) / np.abs(pole)
        assert rel.max() < 3.0 * gamma / (4 * w0)

    def test_matches_transition_sum_for_thermal_ensemble(self):
        from polarispec.bathmap import correlation_from_transitions

        m = TlsEnsemble(1.0, 1.0, 3.0, 1.5, 1.0)
        ts = with_mirror_transitions(tls_transitions(m))
        tg = TimeGrid(40.0, 400001)
        c2 = correlation_from_transitions(ts, tg)
        g = make_grid(-8, 8, 201)
        chi = chi_from_correlation(c2, g)
        ref = chi_multilevel(ts, g)
        rel = np.abs(chi.values - ref.values) / np.abs(ref.values)
        assert rel.max() < 1e-6

    def test_undamped_window_warns(self):
        tg = TimeGrid(5.0, 501)
        c2 = CorrelationFunction(tg, np.exp((-1j * 2.0 - 0.01) * tg.times))
        g = make_grid(-3, 3, 21)
        with pytest.warns(AccuracyWarning):
            chi_from_correlation(c2, g)


class TestFaddeeva:
    def test_at_origin(self):
        assert faddeeva(0.0) == pytest.approx(1.0, abs=1e-13)

    def test_at_unit_imaginary_vs_erfc_oracle(self):
        # high-precision complementary error function as independent oracle
        import mpmath

        mpmath.mp.dps = 30
        expected = float(mpmath.e * mpmath.erfc(1))
        got = faddeeva(1j)
        assert got.imag == pytest.approx(0.0, abs=1e-14)
        assert got.real == pytest.approx(expected, rel=1e-12)
        assert got.real == pytest.approx(0.42758357615580705, rel=1e-12)

    def test_large_argument_asymptotics(self):
        z = 100j
        asym = 1j / (math.sqrt(math.pi) * z) * (1 + 1 / (2 * z**2) + 3 / (4 * z**4))
        assert abs(faddeeva(z) - asym) / abs(asym) < 1e-6

    def test_against_reference_implementation(self):
        rng = np.random.default_rng(42)
        z = rng.uniform(-50, 50, 500) + 1j * rng.uniform(0, 50, 500)
        rel = np.abs(faddeeva(z) - wofz(z)) / np.abs(wofz(z))
        assert rel.max() < 1e-12

    def test_lower_half_plane_rejected(self):
        with pytest.raises(ValidationError):
            faddeeva(1.0 - 0.5j)


class TestInvariants:
    def _random_passive_set(self, rng):
        transitions = []
        for _ in range(rng.integers(1, 4)):
            w = rng.uniform(0.2, 3.0)
            wt = rng.uniform(0.1, 4.0)
            p_y = rng.uniform(0.5, 1.0)
            p_z = rng.uniform(0.0, p_y)
            gam = rng.uniform(0.05, 0.6)
            transitions.append(Transition(w, wt, p_y, p_z, gam))
        return TransitionSet(transitions)

    def test_passivity(self):
        rng = np.random.default_rng(3)
        g = make_grid(0.0, 5.0, 301)
        for _ in range(50):
            ts = self._random_passive_set(rng)
            chi = chi_multilevel(ts, g)
            assert chi.values.imag.min() >= 0

    def test_mirrored_passive_set_still_absorbs_at_positive_frequency(self):
        rng = np.random.default_rng(4)
        g = make_grid(0.0, 5.0, 301)
        for _ in range(20):
            ts = with_mirror_transitions(self._random_passive_set(rng))
            chi = chi_multilevel(ts, g)
            assert chi.values.imag.min() >= -1e-15

    def test_saturation_null(self):
        g = make_grid(-4, 4, 101)
        ts = TransitionSet(
            [Transition(w, 1.0, 0.25, 0.25, 0.3) for w in (0.5, 1.0, 2.0)]
        )
        assert np.all(chi_multilevel(ts, g).values == 0)

    def test_linearity_in_emitter_count(self):
        g = make_grid(-3, 3, 101)
        base = chi_tls_thermal(TlsEnsemble(1.0, 0.9, 1.0, 2.0, 0.3), g)
        doubled = chi_tls_thermal(TlsEnsemble(2.0, 0.9, 1.0, 2.0, 0.3), g)
        assert np.allclose(doubled.values, 2.0 * base.values, rtol=1e-15, atol=0)

    def test_kramers_kronig_reconstruction(self):
        # principal-value quadrature of Im chi reproduces Re chi away from
        # the grid edges
        g = make_grid(-4, 4, 4001)
        m = TlsEnsemble(1.0, 2.0, 0.0, math.inf, 0.3)
        chi = chi_tls_thermal(m, g)
        w = g.points
        dw = g.spacing
        im = chi.values.imag
        re = chi.values.real
        dim = np.gradient(im, dw)
        sel = np.nonzero((w >= -4 + 10 * 0.3) & (w <= 4 - 10 * 0.3))[0][::5]
        rec = np.empty(sel.size)
        for k, i in enumerate(sel):
            diff = w - w[i]
            diff[i] = 1.0
            terms = im / diff
            terms[i] = 0.0
            rec[k] = (terms.sum() * dw + 2 * dw * dim[i]) / math.pi
        scale = np.abs(re[sel]).max()
        assert np.abs(rec - re[sel]).max() < 0.02 * scale
