"""Monte Carlo engine: jump-diffusion paths and the mean-field swarm.

Path simulation is Euler-Maruyama with a fixed in-step order (drift, then
diffusion, then jumps) and per-path Philox streams keyed by
``(seed, path_index)``, so results are reproducible and independent of how
paths are partitioned across workers.  The interacting swarm couples pure
jump agents through the empirical barycenter entering their Poisson
rates; state-dependent rates are simulated by thinning against a per-step
majorant.

Estimators (wave speed, normalized histograms, Kolmogorov-Smirnov
distance) live here as well.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox

from .master import ConstantRate, ModelSpec

__all__ = [
    "SimConfig",
    "TrajectoryBatch",
    "SwarmSeries",
    "EmpiricalDensity",
    "ThinningError",
    "simulate_paths",
    "simulate_tanh",
    "simulate_ou_tanh",
    "simulate_swarm",
    "sample_linear_shot_noise_exact",
    "estimate_speed",
    "empirical_density",
    "ks_distance",
    "interp_cdf",
]

_CHUNK = 4096
_ESTIMATOR_STREAM_BASE = 2**63


class ThinningError(RuntimeError):
    """Raised when the thinning majorant cannot be certified."""


@dataclass(frozen=True)
class SimConfig:
    """Step size, horizon, path count, seed, and recording stride."""

    dt: float
    t_end: float
    n_paths: int
    seed: int = 0
    record_stride: int = 1
    n_workers: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_end > 0 or self.dt > self.t_end:
            raise ValueError("t_end must satisfy dt <= t_end")
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        if not 1 <= self.n_workers <= 64:
            raise ValueError("n_workers must be in 1..64")

    @property
    def n_steps(self):
        return int(round(self.t_end / self.dt))

    def record_steps(self):
        steps = list(range(0, self.n_steps + 1, self.record_stride))
        if steps[-1] != self.n_steps:
            steps.append(self.n_steps)
        return np.asarray(steps)


@dataclass(frozen=True)
class TrajectoryBatch:
    """Recorded positions for a batch of paths."""

    times: np.ndarray
    paths: np.ndarray  # (n_paths, n_recorded)
    jump_counts: np.ndarray  # per-path totals

    def __post_init__(self):
        if not np.all(np.diff(self.times) > 0):
            raise ValueError("recorded times must be strictly increasing")
        if self.paths.shape != (len(self.jump_counts), len(self.times)):
            raise ValueError("paths shape must be (n_paths, n_times)")

    @property
    def final_positions(self):
        return self.paths[:, -1]

    def tail_window_mean(self, fraction=0.5):
        """Per-path time averages over the trailing window, then their mean
        and standard error across paths."""
        t0 = self.times[-1] * (1.0 - fraction)
        sel = self.times >= t0
        per_path = self.paths[:, sel].mean(axis=1)
        n = len(per_path)
        return float(per_path.mean()), float(per_path.std(ddof=1) / math.sqrt(n))


@dataclass(frozen=True)
class SwarmSeries:
    """Barycenter track and periodic position snapshots of the swarm."""

    times: np.ndarray
    barycenter: np.ndarray
    snapshots: np.ndarray  # (n_recorded, n_agents)
    n_agents: int
    m: int
    gamma: float
    beta: float
    majorant_retries: int = 0

    def centered_tail_positions(self, fraction=0.5):
        """Pooled barycenter-centered positions over the trailing window."""
        t0 = self.times[-1] * (1.0 - fraction)
        sel = self.times >= t0
        return (self.snapshots[sel] - self.barycenter[sel, None]).ravel()


@dataclass(frozen=True)
class EmpiricalDensity:
    """Normalized histogram: bin edges and per-bin masses summing to one."""

    bin_edges: np.ndarray
    masses: np.ndarray
    n_samples: int

    def __post_init__(self):
        if np.any(self.masses < 0) or abs(self.masses.sum() - 1.0) > 1e-12:
            raise ValueError("masses must be nonnegative and sum to one")


def _path_generator(seed, index):
    return Generator(Philox(key=((index & 0xFFFFFFFFFFFFFFFF) << 64) | seed))


def _run_chunks(n_paths, n_workers, worker):
    """Run ``worker(lo, hi)`` over fixed-size chunks, optionally threaded.

    Chunk boundaries are independent of the worker count, and each chunk
    writes to disjoint output slices, so results are bit-identical for any
    n_workers.
    """
    spans = [(lo, min(lo + _CHUNK, n_paths)) for lo in range(0, n_paths, _CHUNK)]
    if n_workers == 1 or len(spans) == 1:
        for lo, hi in spans:
            worker(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(lambda s: worker(*s), spans))


def _euler_engine(drift_fn, sigma, jump_magnitudes, rate, config, x0):
    """Shared Euler-Maruyama loop.

    ``jump_magnitudes(gen, total)`` draws jump sizes from a path's own
    generator.  Returns (times, recorded paths, jump counts).
    """
    n_steps = config.n_steps
    rec = config.record_steps()
    rec_pos = {s: i for i, s in enumerate(rec)}
    times = rec * config.dt
    out = np.empty((config.n_paths, len(rec)))
    counts = np.zeros(config.n_paths, dtype=np.int64)
    dt = config.dt
    sqdt = math.sqrt(dt)

    def worker(lo, hi):
        k = hi - lo
        incr = np.zeros((n_steps, k))
        for j in range(k):
            g = _path_generator(config.seed, lo + j)
            col = sqdt * sigma * g.standard_normal(n_steps) if sigma > 0 else np.zeros(n_steps)
            if rate > 0:
                nj = g.poisson(rate * dt, n_steps)
                tot = int(nj.sum())
                counts[lo + j] = tot
                if tot:
                    jm = jump_magnitudes(g, tot)
                    col = col + np.bincount(
                        np.repeat(np.arange(n_steps), nj), weights=jm, minlength=n_steps
                    )
            incr[:, j] = col
        x = np.full(k, float(x0))
        out[lo:hi, 0] = x
        for s in range(n_steps):
            x = x + drift_fn(x) * dt + incr[s]
            i = rec_pos.get(s + 1)
            if i is not None:
                out[lo:hi, i] = x

    _run_chunks(config.n_paths, config.n_workers, worker)
    return times, out, counts


def simulate_paths(model: ModelSpec, config: SimConfig, x0=0.0) -> TrajectoryBatch:
    """Euler-Maruyama paths of the shot-noise SDE with Erlang jumps.

    The rate must be the constant variant here; state-dependent rates are
    handled by the swarm simulator.  Step order is drift, diffusion, jumps.
    """
    if not isinstance(model.rate, ConstantRate):
        raise ValueError("simulate_paths requires a constant Poisson rate")
    lam = model.rate.lam
    law = model.jumps
    sigma_arr = model.diffusion.sigma(np.zeros(1))
    sigma = float(sigma_arr[0])

    def jumps(g, total):
        u = g.random((total, law.m))
        return -np.log1p(-u).sum(axis=1) / law.gamma

    times, paths, counts = _euler_engine(
        model.drift.b, sigma, jumps, lam, config, x0
    )
    return TrajectoryBatch(times, paths, counts)


def _laplace_jumps(gamma):
    def jumps(g, total):
        u = g.random(total)
        return np.where(u < 0.5, np.log(2 * u), -np.log(2 * (1 - u))) / gamma

    return jumps


def simulate_tanh(lam, gamma, beta, config: SimConfig) -> TrajectoryBatch:
    """Paths of dX = beta tanh(beta X) dt + dW + Laplace-jump compound
    Poisson, started at zero."""
    if lam < 0 or not gamma > 0 or not beta > 0:
        raise ValueError("need lam >= 0, gamma > 0, beta > 0")

    def drift(x):
        return beta * np.tanh(beta * x)

    times, paths, counts = _euler_engine(
        drift, 1.0, _laplace_jumps(gamma), lam, config, 0.0
    )
    return TrajectoryBatch(times, paths, counts)


def simulate_ou_tanh(alpha, lam, gamma, beta, config: SimConfig) -> TrajectoryBatch:
    """Paths of dY = -alpha Y dt + dX, driven step-for-step by the
    tanh-drift jump diffusion increments dX."""
    if not alpha > 0 or lam < 0 or not gamma > 0 or beta < 0:
        raise ValueError("need alpha > 0, lam >= 0, gamma > 0, beta >= 0")
    n_steps = config.n_steps
    rec = config.record_steps()
    rec_pos = {s: i for i, s in enumerate(rec)}
    times = rec * config.dt
    out = np.empty((config.n_paths, len(rec)))
    counts = np.zeros(config.n_paths, dtype=np.int64)
    dt = config.dt
    sqdt = math.sqrt(dt)
    jump_fn = _laplace_jumps(gamma)

    def worker(lo, hi):
        k = hi - lo
        incr = np.zeros((n_steps, k))
        for j in range(k):
            g = _path_generator(config.seed, lo + j)
            col = sqdt * g.standard_normal(n_steps)
            if lam > 0:
                nj = g.poisson(lam * dt, n_steps)
                tot = int(nj.sum())
                counts[lo + j] = tot
                if tot:
                    jm = jump_fn(g, tot)
                    col = col + np.bincount(
                        np.repeat(np.arange(n_steps), nj), weights=jm, minlength=n_steps
                    )
            incr[:, j] = col
        x = np.zeros(k)
        y = np.zeros(k)
        out[lo:hi, 0] = y
        for s in range(n_steps):
            dx = beta * np.tanh(beta * x) * dt + incr[s]
            y = y - alpha * y * dt + dx
            x = x + dx
            i = rec_pos.get(s + 1)
            if i is not None:
                out[lo:hi, i] = y

    _run_chunks(config.n_paths, config.n_workers, worker)
    return TrajectoryBatch(times, out, counts)


def sample_linear_shot_noise_exact(alpha, lam, gamma, m, x0, t, n, seed):
    """Exact samples of the linear-drift shot-noise state at time t.

    X_t = x0 e^{-alpha t} + sum_j J_j e^{-alpha (t - tau_j)} with jump times
    uniform on [0, t] given their Poisson(lam t) count and Erlang(m, gamma)
    magnitudes.  No discretization error; paths that saw no jump sit at
    exactly x0 * exp(-alpha * t).
    """
    out = np.empty(n)
    for lo in range(0, n, _CHUNK):
        hi = min(n, lo + _CHUNK)
        k = hi - lo
        g = _path_generator(seed, _ESTIMATOR_STREAM_BASE + lo)
        nj = g.poisson(lam * t, k)
        tot = int(nj.sum())
        base = x0 * np.exp(-alpha * t)
        x = np.full(k, base)
        if tot:
            tau = t * g.random(tot)
            u = g.random((tot, m))
            jm = -np.log1p(-u).sum(axis=1) / gamma
            contrib = jm * np.exp(-alpha * (t - tau))
            idx = np.repeat(np.arange(k), nj)
            x = x + np.bincount(idx, weights=contrib, minlength=k)
        out[lo:hi] = x
    return out


# ---------------------------------------------------------------------------
# interacting swarm


class _UniformBuffer:
    """Blocked per-agent uniform streams with on-demand refill."""

    def __init__(self, seed, n_agents, block=2048):
        self.gens = [_path_generator(seed, i) for i in range(n_agents)]
        self.block = block
        self.buf = np.vstack([g.random(block) for g in self.gens])
        self.cursor = np.zeros(n_agents, dtype=np.int64)

    def refill_low(self, headroom=16):
        low = np.nonzero(self.cursor >= self.block - headroom)[0]
        for i in low:
            self.buf[i] = self.gens[i].random(self.block)
            self.cursor[i] = 0

    def draw_all(self):
        """One uniform per agent, vectorized."""
        u = self.buf[np.arange(len(self.cursor)), self.cursor]
        self.cursor += 1
        return u

    def draw(self, i, k=1):
        if self.cursor[i] + k > self.block:
            self.buf[i] = self.gens[i].random(self.block)
            self.cursor[i] = 0
        v = self.buf[i, self.cursor[i] : self.cursor[i] + k]
        self.cursor[i] += k
        return v


def _poisson_count_from_uniform(u, mu, p0):
    """Invert a Poisson(mu) count from a single uniform (u > p0 known)."""
    k = 0
    pk = p0
    cdf = p0
    while u > cdf:
        k += 1
        pk *= mu / k
        cdf += pk
        if k > 10000:
            raise ThinningError("Poisson inversion failed to terminate")
    return k


def simulate_swarm(n_agents, m, gamma, beta, config: SimConfig) -> SwarmSeries:
    """Pure-jump agents coupled through their barycenter.

    Each agent jumps at instantaneous rate exp(-beta (x_i - xbar)) with
    Erlang(m, gamma) magnitudes, xbar being the empirical mean position
    (the finite-population stand-in for the mean-field average).  Within a
    step the barycenter is frozen; events are generated by thinning against
    the majorant exp(-beta (xi_i - Chat dt)), where Chat over-estimates how
    fast the barycenter can move.  A post-step check certifies the
    majorant: if the barycenter advanced more than Chat dt, the step is
    rolled back, Chat is enlarged, the step is retried with a halved
    sub-step, and the retry count is reported on the result.

    Agents start at zero; the barycenter and full position snapshots are
    recorded every ``record_stride`` steps.
    """
    if n_agents < 2:
        raise ValueError("need at least 2 agents")
    if m not in (1, 2):
        raise ValueError("swarm supports m in {1, 2}")
    if not gamma > 0 or not beta > 0:
        raise ValueError("gamma and beta must be positive")

    buffers = _UniformBuffer(config.seed, n_agents)
    x = np.zeros(n_agents)
    xbar = 0.0
    chat = 1.0 / beta
    retries = 0
    agent_idx = np.arange(n_agents)

    def advance(dt, depth):
        """One certified step of length dt; recurses on majorant failure."""
        nonlocal x, xbar, chat, retries
        if depth > 24:
            raise ThinningError("majorant certification failed after 24 halvings")
        saved = x.copy()
        lb = np.exp(-beta * (x - xbar - chat * dt))
        mu = lb * dt
        buffers.refill_low()
        u = buffers.draw_all()
        p0 = np.exp(-mu)
        for i in np.nonzero(u > p0)[0]:
            k = _poisson_count_from_uniform(u[i], mu[i], p0[i])
            for _ in range(k):
                # accept with current-rate / majorant; own jumps only raise
                # x_i, so the ratio stays below one within the step
                acc = math.exp(-beta * (x[i] - xbar)) / lb[i]
                if buffers.draw(i)[0] <= acc:
                    uj = buffers.draw(i, m)
                    x[i] += -np.log1p(-uj).sum() / gamma
        new_bar = x.mean()
        if new_bar - xbar <= chat * dt:
            xbar = new_bar
            return
        # majorant violated: enlarge the overestimate and redo in halves
        retries += 1
        chat = max(2.0 * chat, 2.0 * (new_bar - xbar) / dt)
        x = saved
        advance(dt / 2.0, depth + 1)
        advance(dt / 2.0, depth + 1)

    n_steps = config.n_steps
    rec = config.record_steps()
    rec_set = set(rec.tolist())
    times = [0.0]
    bary = [0.0]
    snaps = [x.copy()]
    refit_every = max(config.record_stride * 10, 50)
    for step in range(1, n_steps + 1):
        advance(config.dt, 0)
        if step in rec_set:
            times.append(step * config.dt)
            bary.append(xbar)
            snaps.append(x.copy())
        if step % refit_every == 0 and len(bary) >= 12:
            tt = np.asarray(times)
            bb = np.asarray(bary)
            half = tt >= tt[-1] / 2.0
            if half.sum() >= 2 and np.ptp(tt[half]) > 0:
                slope = np.polyfit(tt[half], bb[half], 1)[0]
                chat = max(1.0 / beta, 2.0 * slope)

    return SwarmSeries(
        times=np.asarray(times),
        barycenter=np.asarray(bary),
        snapshots=np.asarray(snaps),
        n_agents=n_agents,
        m=m,
        gamma=gamma,
        beta=beta,
        majorant_retries=retries,
    )


# ---------------------------------------------------------------------------
# estimators


def estimate_speed(series: SwarmSeries, window_fraction=0.5):
    """Least-squares slope of the barycenter over the trailing window."""
    if not 0 < window_fraction <= 1:
        raise ValueError("window_fraction must be in (0, 1]")
    t = series.times
    sel = t >= t[-1] * (1.0 - window_fraction)
    if sel.sum() < 10:
        raise ValueError("need at least 10 recorded times in the window")
    return float(np.polyfit(t[sel], series.barycenter[sel], 1)[0])


def empirical_density(samples, n_bins) -> EmpiricalDensity:
    """Normalized histogram over [min, max] with equal-width bins."""
    samples = np.asarray(samples, dtype=float)
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    lo, hi = samples.min(), samples.max()
    if samples.size < 2 or lo == hi:
        raise ValueError("degenerate sample: need at least 2 distinct values")
    counts, edges = np.histogram(samples, bins=n_bins, range=(lo, hi))
    return EmpiricalDensity(edges, counts / samples.size, samples.size)


def ks_distance(samples, cdf):
    """Sup-norm distance between the empirical CDF of samples and ``cdf``.

    Correct for reference distributions with atoms: the sup is attained at
    a sample point or just before one, so both one-sided limits of the
    reference CDF are compared against the matching ECDF limits.
    """
    xs = np.asarray(samples, dtype=float)
    n = len(xs)
    xu, counts = np.unique(xs, return_counts=True)
    c_right = np.cumsum(counts)
    c_left = c_right - counts
    f_right = np.asarray(cdf(xu), dtype=float)
    f_left = np.asarray(cdf(np.nextafter(xu, -np.inf)), dtype=float)
    d = max(
        np.max(np.abs(c_right / n - f_right)),
        np.max(np.abs(f_left - c_left / n)),
    )
    return float(d)


def interp_cdf(grid_x, grid_cdf):
    """CDF callable by linear interpolation of a tabulated grid."""
    def cdf(x):
        return np.interp(x, grid_x, grid_cdf, left=0.0, right=1.0)

    return cdf
