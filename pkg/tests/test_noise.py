"""Jump laws, samplers, and compound Poisson increments."""

import functools
import math

import numpy as np
import pytest
from scipy import integrate, stats

from erlangshot.noise import (
    ErlangJumpLaw,
    RngStream,
    SymmetricLaplaceLaw,
    TiltedJumpLaw,
    compound_poisson_increment,
    erlang_pdf,
    erlang_sample,
    laplace_sample,
    tilted_sample,
)
from erlangshot.simulate import ks_distance
from erlangshot.specfun import erlang_survival


def test_erlang_pdf_values():
    assert erlang_pdf(ErlangJumpLaw(1, 1.0), 0.0) == 1.0
    assert erlang_pdf(ErlangJumpLaw(3, 2.0), -0.5) == 0.0
    # direct high-precision evaluation: gamma^2 x e^{-gamma x} at (2, 1, 1)
    assert erlang_pdf(ErlangJumpLaw(2, 1.0), 1.0) == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_erlang_pdf_unit_mass():
    for m, g in [(1, 1.0), (2, 0.7), (4, 2.3), (6, 0.4)]:
        mass, _ = integrate.quad(
            functools.partial(erlang_pdf, ErlangJumpLaw(m, g)), 0, np.inf, limit=200
        )
        assert mass == pytest.approx(1.0, abs=1e-8)


def test_law_validation():
    with pytest.raises(ValueError):
        ErlangJumpLaw(0, 1.0)
    with pytest.raises(ValueError):
        ErlangJumpLaw(2, -1.0)
    with pytest.raises(ValueError):
        SymmetricLaplaceLaw(0.0)
    with pytest.raises(ValueError):
        TiltedJumpLaw(SymmetricLaplaceLaw(2.0), 2.0)  # beta >= gamma


def test_erlang_sample_moments():
    law = ErlangJumpLaw(2, 3.0)
    s = erlang_sample(law, RngStream(7, 0), size=100_000)
    assert np.all(s >= 0)
    se = s.std(ddof=1) / math.sqrt(len(s))
    assert abs(s.mean() - 2.0 / 3.0) < 4 * se


def test_erlang_sample_ks():
    law = ErlangJumpLaw(3, 1.0)
    s = erlang_sample(law, RngStream(8, 1), size=100_000)
    d = ks_distance(s, lambda x: 1.0 - erlang_survival(3, 1.0, np.maximum(x, 0.0)))
    assert d < 0.01


def test_erlang_sum_decomposition():
    # Erlang(m) equals the sum of m Erlang(1) draws in distribution
    m, g, n = 3, 1.4, 100_000
    a = erlang_sample(ErlangJumpLaw(m, g), RngStream(9, 0), size=n)
    b = sum(erlang_sample(ErlangJumpLaw(1, g), RngStream(9, k + 1), size=n) for k in range(m))
    d = stats.ks_2samp(a, b).statistic
    assert d < 0.02


def test_laplace_sample_moments_and_ks():
    law = SymmetricLaplaceLaw(1.7)
    s = laplace_sample(law, RngStream(10, 0), size=100_000)
    se = s.std(ddof=1) / math.sqrt(len(s))
    assert abs(s.mean()) < 4 * se
    a = np.abs(s)
    se_a = a.std(ddof=1) / math.sqrt(len(a))
    assert abs(a.mean() - 1.0 / 1.7) < 4 * se_a
    assert ks_distance(s, law.cdf) < 0.01


def test_tilted_mass_identity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = rng.uniform(0.5, 4.0)
        b = rng.uniform(0.0, 0.95) * g
        law = TiltedJumpLaw(SymmetricLaplaceLaw(g), b)
        # integrate on a range wide enough for 1e-10 tails; cosh * pdf would
        # hit inf * 0 on the library's infinite-domain transform
        hw = 30.0 / (g - b)
        quad_mass, _ = integrate.quad(
            lambda y: law.base.pdf(y) * np.cosh(b * y), -hw, hw, limit=200
        )
        assert quad_mass == pytest.approx(g**2 / (g**2 - b**2), abs=1e-8)
        assert law.mass == pytest.approx(quad_mass, abs=1e-8)


def test_tilted_pdf_unit_mass():
    law = TiltedJumpLaw(SymmetricLaplaceLaw(2.0), 1.0)
    mass, _ = integrate.quad(law.pdf, -np.inf, np.inf, limit=200)
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_tilted_beta_zero_matches_laplace():
    lap = SymmetricLaplaceLaw(1.3)
    tilted = TiltedJumpLaw(lap, 0.0)
    a = tilted_sample(tilted, RngStream(11, 0), size=100_000)
    b = laplace_sample(lap, RngStream(11, 1), size=100_000)
    assert stats.ks_2samp(a, b).statistic < 0.02


def test_tilted_symmetry_and_ks():
    law = TiltedJumpLaw(SymmetricLaplaceLaw(2.0), 1.0)
    s = tilted_sample(law, RngStream(12, 0), size=100_000)
    right = np.count_nonzero(s > 0)
    # symmetric law: right/left split is binomial(n, 1/2)
    assert abs(right - len(s) / 2) < 4 * math.sqrt(len(s) / 4)
    # numeric CDF built by quadrature of the normalized tilted density
    xs = np.linspace(-15, 15, 4001)
    dens = law.pdf(xs)
    cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2 * (xs[1] - xs[0]))])
    cdf /= cdf[-1]
    assert ks_distance(s, lambda x: np.interp(x, xs, cdf)) < 0.01


def test_compound_poisson_increment():
    rng = RngStream(13, 0)
    assert compound_poisson_increment(0.0, None, 0.5, rng) == 0.0
    law = ErlangJumpLaw(1, 1.0)
    sampler = functools.partial(erlang_sample, law)
    vals = np.array(
        [compound_poisson_increment(2.0, sampler, 1.0, rng) for _ in range(100_000)]
    )
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - 2.0) < 4 * se  # lam * dt * E[J] = 2


def test_compound_poisson_count_distribution():
    # jump counts against the Poisson pmf by chi-square
    lam, dt, n = 3.0, 0.7, 50_000
    rng = RngStream(14, 0)
    counts = rng.poisson(lam * dt, n)
    kmax = int(counts.max())
    observed = np.bincount(counts, minlength=kmax + 1).astype(float)
    expected = n * stats.poisson.pmf(np.arange(kmax + 1), lam * dt)
    # pool the tail so expected counts stay above 5
    while expected[-1] < 5 and len(expected) > 2:
        expected[-2] += expected[-1]
        observed[-2] += observed[-1]
        expected, observed = expected[:-1], observed[:-1]
    expected *= observed.sum() / expected.sum()
    chi2 = np.sum((observed - expected) ** 2 / expected)
    p = stats.chi2.sf(chi2, df=len(expected) - 1)
    assert p > 0.001


def test_stream_determinism():
    a = RngStream(21, 5).uniform(64)
    b = RngStream(21, 5).uniform(64)
    assert a.tobytes() == b.tobytes()
    c = RngStream(21, 6).uniform(64)
    assert a.tobytes() != c.tobytes()


def test_stream_frozen_vectors():
    # pins the generator choice: Philox4x64-10 keyed by (stream_id << 64) | seed
    u = RngStream(42, 7).uniform(5)
    np.testing.assert_allclose(
        u,
        [0.649420079613736, 0.8848813535936771, 0.5537339411764371,
         0.9529724189339113, 0.41318058559510695],
        rtol=0, atol=0,
    )
    e = RngStream(42, 7).exponential(2.0, 3)
    np.testing.assert_allclose(
        e,
        [0.5240832901396282, 1.0808959872913102, 0.403419980188265],
        rtol=0, atol=0,
    )


def test_stream_validation():
    with pytest.raises(ValueError):
        RngStream(-1, 0)
    with pytest.raises(ValueError):
        RngStream(0, 2**64)
