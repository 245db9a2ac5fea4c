import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import optimize

from objectivity.bounds import (
    ALPHA,
    BETA_BOX,
    KAPPA,
    LAMBDA,
    MU,
    ObjectivityParams,
    finite_dimensional_bound,
    markov_exceedance,
    optimize_d,
    pureloss_envelope,
    qi_ranard,
    qr_compare,
    qr_threshold,
    qr_threshold_by_bisection,
    zeta_exact_m,
    zeta_general,
    zeta_special,
)
from objectivity.errors import NotSummable
from objectivity.pureloss import lower_bound
from objectivity.spectra import Spectrum, local_entropy, tail_epsilon

# mpmath, 30 digits
KAPPA_MP = 6.69015843276571242760450606252
ALPHA_MP = 10.5340064257490113745861375259
BETA_MP = 5.13019932064745638217614543868
MU_MP = 7.31235529476139706850348309904
BOX_FIRST_D100 = 0.124164704457699226764416042319
BOX_TAIL_D100 = 0.511740060817363629165535344513
HARMONIC_D100 = 3.10962886687704604320723341141


def test_constants():
    assert_allclose(KAPPA, KAPPA_MP, rtol=1e-14)
    assert LAMBDA == KAPPA
    assert_allclose(ALPHA, ALPHA_MP, rtol=1e-14)
    assert_allclose(BETA_BOX, BETA_MP, rtol=1e-14)
    assert_allclose(MU, MU_MP, rtol=1e-14)
    assert MU < 10


def test_params_validation():
    with pytest.raises(ValueError):
        ObjectivityParams(1.0, 1.0, 10)
    with pytest.raises(ValueError):
        ObjectivityParams(1.0, 0.5, 1.5)
    with pytest.raises(ValueError):
        ObjectivityParams(0.0, 0.5, 10)


def test_box_example_d100():
    p = ObjectivityParams(1.0, 0.5, 1e12)
    z = zeta_general(Spectrum.box(), p, 100)
    assert_allclose(z.first_term, BOX_FIRST_D100, rtol=1e-12)
    assert_allclose(z.tail_term, BOX_TAIL_D100, rtol=1e-12)
    assert_allclose(z.zeta, z.first_term + z.tail_term, rtol=1e-15)
    assert_allclose(z.bound, z.zeta / 0.5, rtol=1e-15)
    assert z.m_opt == "analytic"


def test_first_term_vanishes_at_large_n():
    spec = Spectrum.box()
    z = zeta_general(spec, ObjectivityParams(1.5, 0.1, 1e300), 20)
    assert_allclose(z.zeta, 4 * 1.5 / local_entropy(spec).c_f ** 2 * tail_epsilon(spec, 20), rtol=1e-12)


def test_harmonic_example_d100():
    z = zeta_special("harmonic", ObjectivityParams(1.0, 0.5, 1e12), 100)
    assert_allclose(z.zeta, HARMONIC_D100, rtol=1e-12)


def test_harmonic_needs_dedicated_form():
    with pytest.raises(NotSummable):
        zeta_general(Spectrum.harmonic(), ObjectivityParams(1.0, 0.5, 1e6), 10)


def test_special_preconditions():
    p = ObjectivityParams(1.0, 0.5, 1e6)
    with pytest.raises(ValueError):
        zeta_special("bridge", p, 2, D=3, omega=1.0)
    with pytest.raises(ValueError):
        zeta_special("harmonic", p, 1)
    with pytest.raises(ValueError):
        zeta_special("oscillator", p, 5)


def test_bridge_limit_d2_formula():
    for E, N, d in [(1.0, 1e6, 2), (2.5, 1e9, 7)]:
        z = zeta_special("bridge_limit", ObjectivityParams(E, 0.5, N), d, D=2)
        assert_allclose(z.zeta, (432 * E**2 * 4 * d**3 * math.log(2) / N) ** (1 / 3), rtol=1e-14)


def test_box_general_equals_special_grid():
    spec = Spectrum.box()
    for E in (0.5, 1.0, 2.0, 5.0, 20.0):
        for N in (1e3, 1e6, 1e9, 1e12, 1e20):
            for d in (1, 3, 10, 100, 1000):
                p = ObjectivityParams(E, 0.5, N)
                assert_allclose(zeta_general(spec, p, d).zeta, zeta_special("box", p, d).zeta, rtol=1e-9)


def test_bridge_general_equals_special():
    for D, omega in [(2, 0.5), (3, 1.0), (5, 2.0)]:
        spec = Spectrum.bridge(D, omega)
        for N in (1e4, 1e10):
            for d in range(D, D + 15):
                p = ObjectivityParams(1.7, 0.5, N)
                assert_allclose(
                    zeta_general(spec, p, d).zeta, zeta_special("bridge", p, d, D=D, omega=omega).zeta, rtol=1e-9
                )


def test_bridge_approaches_limit():
    p = ObjectivityParams(1.0, 0.5, 1e8)
    for D in range(2, 11):
        for d in range(D, 51):
            a = zeta_special("bridge", p, d, D=D, omega=50.0).zeta
            b = zeta_special("bridge_limit", p, d, D=D).zeta
            assert_allclose(a, b, rtol=1e-6)


def test_exact_m_relaxation():
    spec = Spectrum.box()
    for N in (2, 10, 1e3, 1e6, 1e9):
        for d in (1, 10, 50):
            p = ObjectivityParams(1.0, 0.5, N)
            assert zeta_exact_m(spec, p, d).zeta >= zeta_general(spec, p, d).zeta * (1 - 1e-15)


def test_exact_m_matches_integer_search():
    spec = Spectrum.box()
    summary = local_entropy(spec)
    p = ObjectivityParams(1.0, 0.5, 1e6)
    d = 10
    a = math.sqrt(32 * math.log(2) * d**3 * summary.sigma_bits / summary.c_f**4)
    m = np.arange(1, 10**6 + 1, dtype=float)
    brute = np.min(a / np.sqrt(m) + 2 * m / p.N)
    z = zeta_exact_m(spec, p, d)
    assert_allclose(z.first_term, brute, rtol=1e-13)


def test_exact_m_gap_small_for_large_n():
    spec = Spectrum.box()
    for N in (1e6, 1e8, 1e12):
        p = ObjectivityParams(1.0, 0.5, N)
        exact, relaxed = zeta_exact_m(spec, p, 10).zeta, zeta_general(spec, p, 10).zeta
        assert (exact - relaxed) / relaxed < 1e-3


def test_real_m_minimum_reproduces_kappa():
    spec = Spectrum.box()
    summary = local_entropy(spec)
    for E, N, d in [(1.0, 1e6, 10), (3.0, 1e12, 200)]:
        a = math.sqrt(32 * math.log(2) * E**2 * d**3 * summary.sigma_bits / summary.c_f**4)
        res = optimize.minimize_scalar(
            lambda lm: a * math.exp(-lm / 2) + 2 * math.exp(lm) / N, bracket=(0, math.log(N)), tol=1e-12
        )
        z = zeta_general(spec, ObjectivityParams(E, 0.5, N), d)
        assert_allclose(res.fun, z.first_term, rtol=1e-12)


def _brute_optimum(target, p, d_max, **kw):
    if isinstance(target, Spectrum):
        zs = [zeta_general(target, p, d).zeta for d in range(1, d_max + 1)]
        return 1 + int(np.argmin(zs)), min(zs)
    lo = kw.get("D", 2 if target == "harmonic" else 1)
    zs = [zeta_special(target, p, d, **kw).zeta for d in range(lo, d_max + 1)]
    return lo + int(np.argmin(zs)), min(zs)


def test_optimize_d_matches_brute_force():
    cases = [
        (Spectrum.box(), {}),
        ("box", {}),
        ("harmonic", {}),
        ("bridge", {"D": 3, "omega": 0.7}),
        (Spectrum.bridge(2, 1.3), {}),
    ]
    for N in (1e3, 1e7, 1e12):
        p = ObjectivityParams(1.5, 0.2, N)
        for target, kw in cases:
            best = optimize_d(target, p, **kw)
            d_brute, z_brute = _brute_optimum(target, p, 5000, **kw)
            assert best.d == d_brute
            assert_allclose(best.zeta, z_brute, rtol=1e-14)


def test_optimize_d_custom_finite():
    spec = Spectrum.custom([1, 2, 3, 5, 8])
    p = ObjectivityParams(2.0, 0.5, 1e4)
    d_brute, z_brute = _brute_optimum(spec, p, 5)
    best = optimize_d(spec, p)
    assert (best.d, best.zeta) == (d_brute, z_brute)


def test_optimize_box_extreme_n():
    best = optimize_d("box", ObjectivityParams(1.0, 0.01, 1e60))
    assert best.bound < 0.06
    witness = zeta_special("box", ObjectivityParams(1.0, 0.01, 1e60), 4 * 10**8)
    assert best.zeta <= witness.zeta


def test_optimized_bound_monotone():
    Ns = np.logspace(3, 15, 30)
    for target in ("box", "harmonic"):
        bounds = [optimize_d(target, ObjectivityParams(1.0, 0.01, N)).bound for N in Ns]
        assert all(b <= a for a, b in zip(bounds, bounds[1:]))
        energies = [optimize_d(target, ObjectivityParams(E, 0.01, 1e9)).zeta for E in (1.0, 1.5, 3.0, 10.0)]
        assert all(b >= a for a, b in zip(energies, energies[1:]))


def test_harmonic_d_grows():
    ds = [optimize_d("harmonic", ObjectivityParams(1.0, 0.5, N)).d for N in np.logspace(3, 30, 20)]
    assert all(b >= a for a, b in zip(ds, ds[1:]))
    assert ds[-1] > ds[0]


def test_trivial_flag():
    p = ObjectivityParams(1.0, 0.01, 1e3)
    assert optimize_d("box", p).trivial
    assert not optimize_d("box", ObjectivityParams(1.0, 0.5, 1e20)).trivial


def test_qi_ranard_values():
    assert_allclose(qi_ranard(2, 1e6, 0.1, 1), 0.0297863792884722730620899705509, rtol=1e-14)
    for D in (2, 5, 9):
        assert_allclose(qi_ranard(D, 1e5, 0.3, 2) / qi_ranard(D, 1e5, 0.3, 1), 4 / math.sqrt(D), rtol=1e-14)
    with pytest.raises(ValueError):
        qi_ranard(1, 1e6, 0.1, 1)
    with pytest.raises(ValueError):
        qi_ranard(2, 1e6, 0.1, 3)


def test_qr_threshold():
    assert_allclose(qr_threshold(2, 0.1), 54 * 32 * math.log(2) / 1e-3, rtol=1e-15)
    assert_allclose(qr_threshold(2, 0.1), 1.1978e6, rtol=1e-4)
    assert qr_threshold(3, 0.001) > qr_threshold(3, 0.01) > qr_threshold(3, 0.1)


def test_threshold_is_root_of_b_equals_two():
    for D in (2, 3, 7):
        for delta in (0.01, 0.1, 0.6):
            t = qr_threshold(D, delta)
            assert_allclose(finite_dimensional_bound(D, t, delta), 2.0, rtol=1e-12)
            assert_allclose(qr_threshold_by_bisection(D, delta), t, rtol=1e-9)


def test_qr_compare_row():
    row = qr_compare(2, 0.1, 1e9)
    assert row.b_nontrivial and not row.b_beats_b2
    assert_allclose(row.b2, qi_ranard(2, 1e9, 0.1, 2))


def test_pureloss_envelope_is_real_minimum():
    for E, N in [(1.0, 1e6), (2.0, 1e10), (0.3, 1e3)]:
        res = optimize.minimize_scalar(
            lambda ld: LAMBDA * (math.exp(6 * ld) / N) ** (1 / 3) + 4 * math.sqrt(E / math.exp(ld)),
            bracket=(0.0, 10.0),
            tol=1e-12,
        )
        assert_allclose(pureloss_envelope(E, N), res.fun, rtol=1e-10)


def test_envelope_dominates_integer_optimum_at_large_n():
    # log2 d <= d makes the envelope an upper bound once the optimum d is >= 2
    for E in (1.0, 3.0):
        for N in (1e8, 1e12, 1e20):
            best = optimize_d("harmonic", ObjectivityParams(E, 0.5, N))
            assert best.zeta <= pureloss_envelope(E, N)


def test_envelope_above_lower_bound():
    for N in np.unique(np.round(np.logspace(np.log10(2), 6, 60)).astype(int)):
        assert pureloss_envelope(max(1.0, 2 / N), N) >= lower_bound(int(N)).value >= 1 / (2 * N)


@given(st.lists(st.floats(0.0, 1e6), min_size=1, max_size=200), st.floats(0.01, 0.99))
def test_markov_fraction(values, delta):
    assert markov_exceedance(values, delta) <= delta


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 20.0), st.floats(2.0, 1e30), st.integers(1, 500))
def test_breakdown_invariants(E, N, d):
    z = zeta_special("box", ObjectivityParams(E, 0.3, N), d)
    assert z.first_term >= 0 and z.tail_term >= 0
    assert_allclose(z.zeta, z.first_term + z.tail_term, rtol=1e-15)
    assert_allclose(z.bound, z.zeta / 0.3, rtol=1e-15)
