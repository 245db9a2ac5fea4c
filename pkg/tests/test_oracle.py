import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from objectivity.bounds import markov_exceedance
from objectivity.oracle import (
    DensityOperator,
    KrausChannel,
    Povm,
    attenuator,
    dephasing_channel,
    discord_numeric,
    f_choi,
    identity_channel,
    povm_distance_probe,
    choi_diamond_bound,
    mp_construct,
    mutual_information,
    nsplitter_gaps,
    nsplitter_reduce,
    partial_trace,
    random_channel,
    sampled_diamond_lower,
    tmsv_overlap_check,
    trace_norm,
    truncation_check,
)
from objectivity.oracle.choi import truncated_cf
from objectivity.oracle.suite import (
    random_density,
    run_suites,
    suite_choi_diamond,
    suite_mp_construct,
    suite_truncation,
)
from objectivity.pureloss import tmsv_overlap
from objectivity.spectra import Spectrum

FLAT2 = Spectrum.custom([1, 1])
BELL = DensityOperator.pure([1, 0, 0, 1])


def test_trace_norm_basics():
    assert_allclose(trace_norm(np.eye(2)), 2.0)
    assert_allclose(trace_norm(np.diag([1.0, -1.0])), 2.0)
    assert_allclose(trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]])), 1.0)
    with pytest.raises(ValueError):
        trace_norm(np.ones((2, 3)))


def test_partial_trace_of_product():
    a, b, c = np.diag([0.2, 0.8]), np.diag([0.1, 0.3, 0.6]), np.diag([0.5, 0.5])
    m = np.kron(np.kron(a, b), c)
    assert_allclose(partial_trace(m, [2, 3, 2], [1]), b)
    assert_allclose(partial_trace(m, [2, 3, 2], [0, 2]), np.kron(a, c))


def test_type_validation():
    with pytest.raises(ValueError):
        DensityOperator(np.diag([0.5, 0.6]))
    with pytest.raises(ValueError):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        KrausChannel(2, 2, (0.5 * np.eye(2),))
    with pytest.raises(ValueError):
        Povm(2, (np.diag([1.0, 0.0]),))
    rho = DensityOperator(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_random_channel_properties():
    for seed in range(100):
        ch = random_channel(3, 2, 2, seed)
        total = sum(k.conj().T @ k for k in ch.kraus_ops)
        assert np.abs(total - np.eye(3)).max() < 1e-12
    a, b = random_channel(3, 3, 1, 7), random_channel(3, 3, 1, 7)
    assert all(np.array_equal(x, y) for x, y in zip(a.kraus_ops, b.kraus_ops))
    u = a.kraus_ops[0]
    assert_allclose(u @ u.conj().T, np.eye(3), atol=1e-12)
    with pytest.raises(ValueError):
        random_channel(5, 2, 2, 0)


def test_f_choi_examples():
    assert_allclose(f_choi(identity_channel(2), FLAT2).matrix, BELL.matrix, atol=1e-15)
    assert_allclose(f_choi(dephasing_channel(2), FLAT2).matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    spec = Spectrum.custom([1, 2, 4, 8])
    choi = f_choi(random_channel(4, 3, 2, 11), spec)
    marginal = partial_trace(choi.matrix, [4, 3], [0])
    assert_allclose(marginal, np.diag(truncated_cf([1, 2, 4, 8]) ** 2 / np.array([1, 2, 4, 8])), atol=1e-12)


def test_f_choi_dimension_mismatch():
    with pytest.raises(IndexError):
        f_choi(identity_channel(3), FLAT2)


def test_truncation_exact_case():
    spec = Spectrum.custom([1, 2])
    res = truncation_check(identity_channel(2), spec, 1)
    eps = 1 / math.sqrt(3)
    assert_allclose(res.distance, eps * math.sqrt(4 - 3 * eps**2), rtol=1e-12)
    assert_allclose(res.bound, 2 * eps, rtol=1e-12)
    full = truncation_check(identity_channel(2), spec, 2)
    assert full.distance < 1e-15 and full.bound == 0.0


def test_truncation_suite():
    res = suite_truncation(seed=3)
    assert res.passes == res.instances == 100


def test_mp_construct_empty_measurement():
    spec = Spectrum.custom([1, 2, 4])
    lam = random_channel(3, 4, 2, 5)
    res = mp_construct(lam, spec, [2, 2], [], None, 1)
    assert len(res.povm.elements) == 1
    assert_allclose(res.povm.elements[0], np.eye(3), atol=1e-12)


def test_mp_construct_targets_share_povm():
    spec = Spectrum.custom([1, 2, 4])
    lam = random_channel(3, 8, 2, 21)
    a = mp_construct(lam, spec, [2, 2, 2], [0], None, 1)
    b = mp_construct(lam, spec, [2, 2, 2], [0], None, 2)
    for x, y in zip(a.povm.elements, b.povm.elements):
        assert np.abs(x - y).max() < 1e-12
    assert a.choi_error < 1e-10 and a.completeness_error < 1e-10


def test_mp_construct_argument_errors():
    spec = Spectrum.custom([1, 2, 4])
    lam = random_channel(3, 8, 2, 21)
    with pytest.raises(ValueError):
        mp_construct(lam, spec, [2, 2, 2], [0], None, 0)
    with pytest.raises(ValueError):
        mp_construct(lam, spec, [2, 3], [0], None, 1)
    with pytest.raises(ValueError):
        mp_construct(lam, spec, [2, 2, 2], [0], {1: np.eye(2)}, 2)


def test_mp_suite_and_markov():
    res, distances = suite_mp_construct(seed=9)
    assert res.passes == res.instances == 20
    for delta in (0.1, 0.3, 0.7):
        assert markov_exceedance(distances, delta) <= delta


def test_sampled_diamond_identical_channels():
    ch = random_channel(3, 3, 2, 1)
    assert sampled_diamond_lower(ch, ch, Spectrum.custom([1, 2, 3]), 2.0, 20, 0) < 1e-12


def test_sampled_diamond_identity_vs_dephasing():
    lower = sampled_diamond_lower(identity_channel(2), dephasing_channel(2), FLAT2, 1.0, 20, 0)
    # Bell input: ||Bell - dephased Bell||_1 = 1
    assert lower >= 1.0 - 1e-12
    assert lower <= choi_diamond_bound(identity_channel(2), dephasing_channel(2), FLAT2, 1.0) + 1e-12


def test_sampled_diamond_energy_too_low():
    with pytest.raises(ValueError):
        sampled_diamond_lower(identity_channel(2), dephasing_channel(2), Spectrum.custom([1, 2]), 0.5, 5, 0)


def test_choi_diamond_suite():
    res = suite_choi_diamond(seed=4)
    assert res.passes == res.instances == 100


def test_povm_distance_probe_examples():
    same = povm_distance_probe(identity_channel(2), identity_channel(2), FLAT2, 1, 2, 0)
    assert same.lhs < 1e-12 and same.passed
    rep = povm_distance_probe(identity_channel(2), dephasing_channel(2), FLAT2, 2, 3, 0)
    assert rep.passed
    assert rep.rhs > 10 * rep.lhs
    with pytest.raises(ValueError):
        povm_distance_probe(identity_channel(3), identity_channel(3), Spectrum.custom([1, 2, 3]), 1, 1, 0)


def test_attenuator_examples():
    for eta in (0.1, 0.5, 1.0):
        vac = DensityOperator(np.diag([1.0, 0, 0, 0]))
        assert_allclose(attenuator(eta, 4).apply(vac).matrix, vac.matrix, atol=1e-15)
        one = DensityOperator(np.diag([0.0, 1.0]))
        assert_allclose(attenuator(eta, 2).apply(one).matrix, np.diag([1 - eta, eta]), atol=1e-15)
    rho = random_density(5, np.random.default_rng(0))
    assert_allclose(attenuator(1.0, 5).apply(rho).matrix, rho.matrix, atol=1e-15)
    with pytest.raises(ValueError):
        attenuator(0.0, 4)


def test_nsplitter_single_photon():
    outs = nsplitter_reduce(DensityOperator(np.diag([0.0, 1.0])), 2, 2)
    for o in outs:
        assert_allclose(o.matrix, np.diag([0.5, 0.5]), atol=1e-12)
    vac = DensityOperator(np.diag([1.0, 0, 0]))
    for o in nsplitter_reduce(vac, 3, 3):
        assert_allclose(o.matrix, vac.matrix, atol=1e-12)


def test_nsplitter_coherent_input():
    alpha, cutoff = 0.6, 6
    n = np.arange(cutoff)
    amps = np.array([alpha**k / math.sqrt(math.factorial(k)) for k in n])
    rho = DensityOperator.pure(amps)
    symmetry, path = nsplitter_gaps(rho, 3, cutoff)
    assert symmetry < 1e-10 and path < 1e-8


def test_nsplitter_random_inputs():
    gen = np.random.default_rng(5)
    for _ in range(3):
        outs = nsplitter_reduce(random_density(5, gen), 3, 5)
        assert len(outs) == 3


def test_nsplitter_large_n_uses_attenuator():
    rho = DensityOperator(np.diag([0.0, 1.0]))
    outs = nsplitter_reduce(rho, 20, 2)
    assert_allclose(outs[7].matrix, np.diag([0.95, 0.05]), atol=1e-14)


def test_tmsv_overlap_check():
    assert_allclose(tmsv_overlap_check(2, 0.0, 0.0, 10), 1.0, atol=1e-12)
    assert_allclose(tmsv_overlap_check(2, 0.3, 0.2, 40), tmsv_overlap(2, 0.3, 0.2), atol=1e-12)
    assert_allclose(tmsv_overlap_check(3, 0.5, 0.5, 60), tmsv_overlap(3, 0.5, 0.5), atol=1e-12)
    with pytest.raises(ValueError):
        tmsv_overlap_check(2, 0.5, 0.5, 10)


def test_mutual_information_examples():
    product = DensityOperator(np.kron(np.diag([0.3, 0.7]), np.diag([0.5, 0.5])))
    assert mutual_information(product, 2) < 1e-12
    assert_allclose(mutual_information(BELL, 2), 2.0, atol=1e-12)
    assert_allclose(mutual_information(DensityOperator(np.diag([0.5, 0, 0, 0.5])), 2), 1.0, atol=1e-12)
    with pytest.raises(ValueError):
        mutual_information(BELL, 3)


def test_discord_examples():
    assert_allclose(discord_numeric(BELL, 2), 1.0, atol=1e-6)
    assert discord_numeric(DensityOperator(np.diag([0.5, 0, 0, 0.5])), 2) < 1e-9
    product = DensityOperator(np.kron(np.diag([0.3, 0.7]), np.diag([0.2, 0.8])))
    assert discord_numeric(product, 2) < 1e-9
    with pytest.raises(ValueError):
        discord_numeric(DensityOperator(np.eye(6) / 6), 2)


def test_discord_werner_state():
    # Werner state p|Bell><Bell| + (1-p) I/4 has a known closed form
    p = 0.6
    rho = DensityOperator(p * BELL.matrix + (1 - p) * np.eye(4) / 4)

    def h4(x):
        return -x * math.log2(x)

    a, b = (1 + 3 * p) / 4, (1 - p) / 4
    mi = 2 - (h4(a) + 3 * h4(b))
    classical = 1 - (h4((1 + p) / 2) + h4((1 - p) / 2))
    assert_allclose(discord_numeric(rho, 2), mi - classical, atol=1e-8)


@pytest.mark.slow
def test_full_suite_report():
    results = run_suites(seed=0)
    names = [r.suite for r in results]
    assert names[0] == "truncation" and "povm_distance_probe" in names
    for r in results:
        assert set(r.as_dict()) >= {"suite", "instances", "passes", "worst_margin", "seed"}
        assert r.ok
