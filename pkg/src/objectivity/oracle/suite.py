"""Seeded Monte-Carlo suites over the finite-dimensional oracles.

Each suite reports ``{suite, instances, passes, worst_margin, seed}``; a
negative margin marks a failed instance.  Heuristic suites are reported but
never count as failures.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..bounds import markov_exceedance
from ..errors import OracleAssertionError
from ..pureloss import tmsv_overlap
from ..spectra import Spectrum
from .channels import haar_isometry, nsplitter_gaps, random_channel, rng, tmsv_overlap_check
from .choi import (
    f_choi,
    fragment_channel,
    povm_distance_probe,
    choi_diamond_bound,
    mp_construct,
    sampled_diamond_lower,
    truncation_check,
)
from .info import discord_numeric
from .linalg import DensityOperator, trace_norm


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    instances: int
    passes: int
    worst_margin: float
    seed: int
    asserted: bool = True

    @property
    def ok(self) -> bool:
        return not self.asserted or self.passes == self.instances

    def as_dict(self) -> dict:
        return asdict(self)


def child_seeds(seed: int, n: int) -> list[int]:
    return [int(x) for x in np.random.SeedSequence(seed).generate_state(n, dtype=np.uint32)]


def random_density(dim: int, gen: np.random.Generator) -> DensityOperator:
    g = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def _summarise(name, margins, seed, asserted=True):
    margins = [float(m) for m in margins]
    return SuiteResult(name, len(margins), sum(m >= 0 for m in margins), min(margins), seed, asserted)


def suite_truncation(seed: int, instances: int = 100) -> SuiteResult:
    margins = []
    for s in child_seeds(seed, instances):
        gen = rng(s)
        dim_in = int(gen.integers(2, 9))
        dim_out = int(gen.integers(1, 9))
        env = max(1, math.ceil(dim_in / dim_out), int(gen.integers(1, 4)))
        ch = random_channel(dim_in, dim_out, env, s)
        spec = Spectrum.custom([2.0**j for j in range(dim_in)])
        d = int(gen.integers(1, dim_in + 1))
        try:
            margins.append(truncation_check(ch, spec, d).margin)
        except OracleAssertionError:
            margins.append(-1.0)
    return _summarise("truncation", margins, seed)


def _mp_instance(s):
    gen = rng(s)
    spec = Spectrum.custom([1.0, 2.0, 4.0])
    dims = [2, 2, 2]
    lam = random_channel(3, 8, 2, s)
    basis = haar_isometry(2, 2, gen) if gen.random() < 0.5 else np.eye(2)
    results = [mp_construct(lam, spec, dims, [0], {0: basis}, t) for t in (1, 2)]
    return lam, spec, dims, results


def suite_mp_construct(seed: int, instances: int = 20) -> tuple[SuiteResult, list[float]]:
    """Completeness, Choi identity and target independence; also returns per-fragment distances."""
    margins, distances = [], []
    for s in child_seeds(seed, instances):
        try:
            lam, spec, dims, results = _mp_instance(s)
        except OracleAssertionError:
            margins.append(-1.0)
            continue
        povm_gap = max(
            float(np.abs(a - b).max()) for a, b in zip(results[0].povm.elements, results[1].povm.elements)
        )
        worst = max(povm_gap, *(r.completeness_error for r in results), *(r.choi_error for r in results))
        margins.append(1e-10 - worst)
        for t, r in zip((1, 2), results):
            exact = f_choi(fragment_channel(lam, dims, t), spec).matrix
            distances.append(trace_norm(exact - f_choi(r.channel, spec).matrix))
    return _summarise("mp_construct", margins, seed), distances


def suite_markov(seed: int, distances) -> SuiteResult:
    margins = [delta - markov_exceedance(distances, delta) for delta in (0.1, 0.25, 0.5, 0.9)]
    return _summarise("markov", margins, seed)


def _random_levels(n, gen):
    return np.cumsum(1.0 + gen.exponential(1.0, n)) - 1.0 + 0.5


def suite_choi_diamond(seed: int, instances: int = 100, samples: int = 30) -> SuiteResult:
    margins = []
    for s in child_seeds(seed, instances):
        gen = rng(s)
        dim_in = int(gen.integers(2, 7))
        dim_out = int(gen.integers(2, 7))
        levels = _random_levels(dim_in, gen)
        spec = Spectrum.custom(levels)
        E = float(levels[0] + gen.uniform(0.0, 2.0) * (levels.mean() - levels[0]))
        env = max(1, math.ceil(dim_in / dim_out))
        ch0 = random_channel(dim_in, dim_out, env + 1, s)
        ch1 = random_channel(dim_in, dim_out, env, s + 1)
        lower = sampled_diamond_lower(ch0, ch1, spec, E, samples, s)
        margins.append(choi_diamond_bound(ch0, ch1, spec, E) - lower)
    return _summarise("choi_diamond", margins, seed)


def suite_nsplitter(seed: int, instances: int = 3, N: int = 3, cutoff: int = 5) -> SuiteResult:
    margins = []
    for s in child_seeds(seed, instances):
        rho = random_density(cutoff, rng(s))
        symmetry, path = nsplitter_gaps(rho, N, cutoff)
        margins.append(min(1e-10 - symmetry, 1e-8 - path))
    return _summarise("nsplitter", margins, seed)


def suite_tmsv(seed: int, cutoff: int = 50) -> SuiteResult:
    grid = (0.1, 0.3, 0.5)
    margins = [
        1e-6 - abs(tmsv_overlap_check(N, r, s, cutoff) - tmsv_overlap(N, r, s))
        for N in (2, 3)
        for r in grid
        for s in grid
    ]
    return _summarise("tmsv_overlap", margins, seed)


def suite_discord(seed: int) -> SuiteResult:
    bell = np.zeros(4)
    bell[[0, 3]] = 1.0
    classical = np.diag([0.5, 0, 0, 0.5])
    product = np.kron(np.diag([0.7, 0.3]), np.diag([0.4, 0.6]))
    margins = [
        0.005 - abs(discord_numeric(DensityOperator.pure(bell), 2) - 1.0),
        0.005 - discord_numeric(DensityOperator(classical), 2),
        0.005 - discord_numeric(DensityOperator(product), 2),
    ]
    return _summarise("discord", margins, seed)


def suite_povm_distance(seed: int, instances: int = 50, restarts: int = 4) -> SuiteResult:
    margins = []
    for s in child_seeds(seed, instances):
        gen = rng(s)
        dim_in = int(gen.integers(2, 5))
        spec = Spectrum.custom(_random_levels(dim_in, gen))
        ch0 = random_channel(dim_in, 2, dim_in, s)
        ch1 = random_channel(dim_in, 2, dim_in, s + 1)
        d = int(gen.integers(1, dim_in + 1))
        rep = povm_distance_probe(ch0, ch1, spec, d, restarts, s)
        margins.append(rep.rhs - rep.lhs)
    return _summarise("povm_distance_probe", margins, seed, asserted=False)


def run_suites(seed: int = 0) -> list[SuiteResult]:
    mp, distances = suite_mp_construct(seed)
    return [
        suite_truncation(seed),
        mp,
        suite_markov(seed, distances),
        suite_choi_diamond(seed),
        suite_nsplitter(seed),
        suite_tmsv(seed),
        suite_discord(seed),
        suite_povm_distance(seed),
    ]
