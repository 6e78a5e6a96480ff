"""Jump-size laws and compound Poisson increments.

Provides the one-sided Erlang jump law, the symmetric Laplace law, the
cosh-tilted Laplace law with its mass factor, and exact samplers for each.
Sampling is inverse-CDF throughout (monotone in the underlying uniforms) so
that sample sequences are reproducible and easy to audit.

Randomness comes from counter-based Philox4x64-10 streams keyed by
``(seed, stream_id)``; distinct stream ids give statistically independent
streams for the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import gammaln

__all__ = [
    "RngStream",
    "ErlangJumpLaw",
    "SymmetricLaplaceLaw",
    "TiltedJumpLaw",
    "erlang_pdf",
    "erlang_sample",
    "laplace_sample",
    "tilted_sample",
    "compound_poisson_increment",
]


@dataclass
class RngStream:
    """Deterministic random stream keyed by (seed, stream_id).

    Backed by numpy's Philox4x64-10 counter-based generator with the
    128-bit key ``(stream_id << 64) | seed``.  The pair fully determines
    the sample sequence; streams with different ids are independent.
    """

    seed: int
    stream_id: int = 0
    _gen: Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")
        if not (0 <= self.stream_id < 2**64):
            raise ValueError("stream_id must fit in 64 bits")
        self._gen = Generator(Philox(key=(self.stream_id << 64) | self.seed))

    @property
    def generator(self) -> Generator:
        return self._gen

    def uniform(self, size=None):
        """Uniform draws on [0, 1)."""
        return self._gen.random(size)

    def exponential(self, rate, size=None):
        """Exponential draws of the given rate via inverse CDF."""
        u = self._gen.random(size)
        return -np.log1p(-u) / rate

    def poisson(self, mean, size=None):
        return self._gen.poisson(mean, size)


@dataclass(frozen=True)
class ErlangJumpLaw:
    """Erlang(m, gamma) jump-size law: sum of m exponentials of rate gamma."""

    m: int
    gamma: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("Erlang shape m must be an integer >= 1")
        if not self.gamma > 0:
            raise ValueError("Erlang rate gamma must be positive")

    @property
    def mean(self):
        return self.m / self.gamma

    @property
    def variance(self):
        return self.m / self.gamma**2


@dataclass(frozen=True)
class SymmetricLaplaceLaw:
    """Two-sided exponential law with density gamma/2 * exp(-gamma |x|)."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("Laplace rate gamma must be positive")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = 0.5 * self.gamma * np.exp(-self.gamma * np.abs(x))
        return float(out) if out.ndim == 0 else out

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(
            x < 0,
            0.5 * np.exp(self.gamma * x),
            1.0 - 0.5 * np.exp(-self.gamma * x),
        )
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TiltedJumpLaw:
    """Cosh-tilted Laplace law: density phi(y) cosh(beta y) / mass.

    The tilt multiplies the Laplace density by cosh(beta y); the raw tilted
    kernel has total mass ``mass = gamma^2 / (gamma^2 - beta^2)``, exposed
    separately because the transient solution needs it.  Integrability
    requires beta < gamma.
    """

    base: SymmetricLaplaceLaw
    beta: float

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("tilt beta must be nonnegative")
        if self.beta >= self.base.gamma:
            raise ValueError("tilted law requires beta < gamma for integrability")

    @property
    def mass(self):
        g, b = self.base.gamma, self.beta
        return g**2 / (g**2 - b**2)

    def pdf(self, x):
        """Normalized density phi(x) cosh(beta x) / mass.

        Evaluated as the stable two-rate form
        (gamma/4) [e^{-(gamma-beta)|x|} + e^{-(gamma+beta)|x|}] / mass,
        which cannot overflow for large |x|.
        """
        x = np.abs(np.asarray(x, dtype=float))
        g, b = self.base.gamma, self.beta
        out = 0.25 * g * (np.exp(-(g - b) * x) + np.exp(-(g + b) * x)) / self.mass
        return float(out) if out.ndim == 0 else out

    def mixture_weights_and_rates(self):
        """Four-branch decomposition over (sign, rate).

        The tilted kernel splits into symmetric two-sided exponentials of
        rates gamma -+ beta; returns ``(weights, rates, signs)`` with the
        four normalized branch weights.
        """
        g, b = self.base.gamma, self.beta
        w_slow = g / (4.0 * (g - b)) / self.mass
        w_fast = g / (4.0 * (g + b)) / self.mass
        weights = np.array([w_slow, w_fast, w_slow, w_fast])
        rates = np.array([g - b, g + b, g - b, g + b])
        signs = np.array([1.0, 1.0, -1.0, -1.0])
        return weights, rates, signs

    def char_fn(self, u):
        """Characteristic function of the normalized tilted law (real, even)."""
        u = np.asarray(u, dtype=float)
        g, b = self.base.gamma, self.beta
        rm, rp = g - b, g + b
        wm = g / (2.0 * rm)
        wp = g / (2.0 * rp)
        out = (wm * rm**2 / (rm**2 + u**2) + wp * rp**2 / (rp**2 + u**2)) / self.mass
        return float(out) if out.ndim == 0 else out


def erlang_pdf(law: ErlangJumpLaw, x):
    """Erlang(m, gamma) density; zero on the negative half line."""
    x = np.asarray(x, dtype=float)
    m, g = law.m, law.gamma
    if m == 1:
        vals = np.where(x >= 0, g * np.exp(-g * x), 0.0)
    else:
        safe = np.where(x > 0, x, 1.0)
        logpdf = m * np.log(g) + (m - 1) * np.log(safe) - g * safe - gammaln(m)
        vals = np.where(x > 0, np.exp(logpdf), 0.0)
    return float(vals) if vals.ndim == 0 else vals


def erlang_sample(law: ErlangJumpLaw, rng: RngStream, size=None):
    """Draw Erlang(m, gamma) samples as sums of m inverse-CDF exponentials."""
    if size is None:
        u = rng.uniform(law.m)
        return float(-np.log1p(-u).sum() / law.gamma)
    u = rng.uniform((size, law.m))
    return -np.log1p(-u).sum(axis=1) / law.gamma


def laplace_sample(law: SymmetricLaplaceLaw, rng: RngStream, size=None):
    """Draw from the two-sided exponential by inverting its CDF."""
    u = rng.uniform(size)
    out = np.where(
        u < 0.5,
        np.log(2.0 * u) / law.gamma,
        -np.log(2.0 * (1.0 - np.asarray(u))) / law.gamma,
    )
    return float(out) if np.ndim(out) == 0 else out


def tilted_sample(law: TiltedJumpLaw, rng: RngStream, size=None):
    """Draw from the normalized cosh-tilted law.

    Uses the exact four-branch mixture of one-sided exponentials on each
    half line with rates gamma -+ beta; branch choice and magnitude both
    come from inverse-CDF uniforms.
    """
    weights, rates, signs = law.mixture_weights_and_rates()
    edges = np.cumsum(weights)
    scalar = size is None
    n = 1 if scalar else int(size)
    u_branch = rng.uniform(n)
    u_mag = rng.uniform(n)
    idx = np.searchsorted(edges, u_branch, side="right")
    idx = np.minimum(idx, 3)
    mag = -np.log1p(-u_mag) / rates[idx]
    out = signs[idx] * mag
    return float(out[0]) if scalar else out


def compound_poisson_increment(rate, jump_sampler, dt, rng: RngStream):
    """One compound Poisson increment over a step of length dt.

    ``jump_sampler(rng, n)`` must return n jump sizes.  The number of jumps
    is Poisson(rate * dt); the increment is their sum (0.0 when no jump
    fires or the rate is zero).
    """
    if rate < 0:
        raise ValueError("rate must be nonnegative")
    if not dt > 0:
        raise ValueError("dt must be positive")
    if rate == 0:
        return 0.0
    n = int(rng.poisson(rate * dt))
    if n == 0:
        return 0.0
    return float(np.sum(jump_sampler(rng, n)))
