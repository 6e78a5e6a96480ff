"""Closed-form densities, transforms, wave profiles, and speeds.

Analytic solutions for shot-noise dynamics with Erlang jumps: the m=1
stationary density for general drift/rate, the m=2 linear-drift stationary
law (Bessel I form), stationary cumulants, the Laplace transform and m=1
transient for linear drift, the Gumbel and Whittaker traveling-wave
profiles with their speeds, and the tanh-drift jump diffusion: transient
law by characteristic-function inversion and the invariant law of its
Ornstein-Uhlenbeck-driven companion.

Quadrature is adaptive (QUADPACK) with absolute tolerance 1e-8 or better;
infinite domains go through the library's exponential mappings.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gammaln, ive, kv

from .master import GridFunction, GridSpec
from .noise import SymmetricLaplaceLaw, TiltedJumpLaw
from .specfun import digamma, erlang_survival, kummer_1f1, kummer_u

__all__ = [
    "NormalizationError",
    "DivergenceError",
    "WaveSolution",
    "TransientLaw",
    "TanhTransientLaw",
    "TiltedOuLaw",
    "stationary_m1",
    "stationary_ou_m2",
    "cumulant",
    "laplace_transform_linear",
    "transient_m1_linear",
    "gumbel_wave",
    "whittaker_wave",
    "mellin_moment",
    "tanh_transient",
    "ou_tanh_stationary",
    "gaussian_pair_mixture",
]


class NormalizationError(RuntimeError):
    """Raised when a density cannot be normalized (diverging mass)."""


class DivergenceError(ValueError):
    """Raised when a requested integral does not converge."""


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


def _quad(fn, a, b, **kw):
    opts = dict(epsabs=1e-11, epsrel=1e-11, limit=400)
    opts.update(kw)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, a, b, **opts)
        except integrate.IntegrationWarning as exc:
            raise DivergenceError(f"quadrature failed to converge: {exc}") from exc
    if not np.isfinite(val):
        raise DivergenceError("quadrature produced a non-finite value")
    return val


# ---------------------------------------------------------------------------
# stationary laws


def stationary_m1(f, lambda_fn, gamma, grid: GridSpec) -> GridFunction:
    """Stationary density for m=1 jumps, drift -f(x), and rate lambda(x).

    Evaluates N / f(x) * exp(-gamma x + int^x lambda/f) on the grid and
    normalizes by quadrature.  The exponent integral is accumulated with
    per-cell Gauss-Legendre on a 4x refined grid and the mass with Simpson
    on the same refinement, so grid values are accurate to ~1e-10 for
    smooth inputs.

    Raises NormalizationError when the mass diverges (non-finite values or
    a non-decaying right tail), in which case no stationary regime exists.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    refine = 4
    fine = grid.refine(refine)
    xf = fine.nodes()

    def _eval(fn, pts):
        return np.broadcast_to(np.asarray(fn(pts), dtype=float), pts.shape)

    fvals = _eval(f, xf)
    if np.any(fvals <= 0):
        raise ValueError("stationary_m1 requires f(x) > 0 on the grid")
    # Cumulative integral of lambda/f by 5-point Gauss-Legendre per cell.
    # The knot set is the refined grid united with a log-spaced ladder from
    # the left edge, so integrands steep near x_lo (the typical f(0) = 0
    # case, where lambda/f ~ 1/x) are still resolved to ~1e-12.
    if grid.x_lo > 0 and grid.x_hi / grid.x_lo > 50.0:
        ladder = np.geomspace(grid.x_lo, grid.x_hi, 600)
        knots = np.unique(np.concatenate([xf, ladder]))
    else:
        knots = xf
    mid = 0.5 * (knots[1:] + knots[:-1])
    half = 0.5 * (knots[1:] - knots[:-1])
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    integrand = _eval(lambda_fn, pts) / _eval(f, pts)
    cells = half * (integrand @ _GL_WEIGHTS)
    cum = np.concatenate([[0.0], np.cumsum(cells)])
    expo = cum[np.searchsorted(knots, xf)] - gamma * (xf - xf[0])
    expo -= expo.max()  # normalization absorbs the shift
    unnorm = np.exp(expo) / fvals
    if not np.all(np.isfinite(unnorm)):
        raise NormalizationError("stationary density is not finite on the grid")
    mass = integrate.simpson(unnorm, x=xf)
    if not (np.isfinite(mass) and mass > 0):
        raise NormalizationError("stationary mass is not finite and positive")
    # a non-decaying right tail means the grid truncates diverging mass
    if unnorm[-1] * (grid.x_hi - grid.x_lo) > 1e-6 * mass:
        raise NormalizationError(
            "density does not decay at the right grid end; mass may diverge"
        )
    return GridFunction(grid, unnorm[::refine] / mass)


def stationary_ou_m2(alpha, lam, gamma, x):
    """Stationary density for m=2 jumps and linear restoring drift.

    P(x) = gamma e^{-lam/alpha - gamma x} (alpha gamma x / lam)^{(lam/alpha-1)/2}
           I_{lam/alpha-1}(2 sqrt(gamma lam x / alpha))  on x >= 0,

    evaluated in log space with the exponentially scaled Bessel function so
    large arguments do not overflow.  The sign of lam/alpha in the leading
    exponential is the one that normalizes the density (the series identity
    int_0^inf e^{-u} u^{nu/2} I_nu(2 sqrt(a u)) du = a^{nu/2} e^a pins it);
    mass and mean are verified by quadrature in the tests.
    """
    for name, v in (("alpha", alpha), ("lam", lam), ("gamma", gamma)):
        if not v > 0:
            raise ValueError(f"{name} must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("stationary_ou_m2 requires x >= 0")
    nu = lam / alpha - 1.0
    pos = x > 0
    out = np.zeros_like(x)
    xp = np.where(pos, x, 1.0)
    z = 2.0 * np.sqrt(gamma * lam * xp / alpha)
    logp = (
        np.log(gamma)
        - lam / alpha
        - gamma * xp
        + 0.5 * nu * np.log(alpha * gamma * xp / lam)
        + np.log(ive(nu, z))
        + z
    )
    out = np.where(pos, np.exp(logp), 0.0)
    # x = 0 limit: gamma^{nu+1} e^{-lam/alpha} x^nu / Gamma(nu+1)
    if np.any(~pos):
        if nu > 0:
            lim = 0.0
        elif nu == 0:
            lim = gamma * np.exp(-lam / alpha)
        else:
            lim = np.inf
        out = np.where(pos, out, lim)
    return float(out) if out.ndim == 0 else out


def cumulant(j, m, gamma, lam, f):
    """j-th stationary cumulant of the shot-noise process with drift -f.

    kappa_j = int_0^inf x^j lam * S(m, gamma; x) / f(x) dx with S the Erlang
    survival function, by adaptive quadrature (abs tol 1e-8).  Raises
    DivergenceError when the tail is not integrable.
    """
    if int(j) != j or j < 1:
        raise ValueError("cumulant order j must be an integer >= 1")
    if int(m) != m or m < 1:
        raise ValueError("Erlang shape m must be an integer >= 1")
    if lam < 0:
        raise ValueError("rate lam must be nonnegative")
    if lam == 0:
        return 0.0

    def integrand(x):
        return x**j * lam * erlang_survival(m, gamma, x) / f(x)

    # cheap non-integrability probe before handing to QUADPACK
    probe = np.array([50.0, 100.0, 200.0]) * (m / gamma)
    vals = np.array([integrand(p) for p in probe])
    if np.any(~np.isfinite(vals)) or (vals[-1] > vals[0] and vals[-1] > 1e-6):
        raise DivergenceError("cumulant integrand does not decay at infinity")
    return _quad(integrand, 0.0, np.inf, epsabs=1e-10, epsrel=1e-10)


# ---------------------------------------------------------------------------
# linear drift: Laplace transform and m=1 transient


def laplace_transform_linear(u, t, m, alpha, lam, gamma, x0):
    """Laplace transform of the linear-drift shot-noise law at (u, t).

    E[e^{-u X_t}] = exp(-x0 u e^{-alpha t}
                        - lam int_0^t [1 - (gamma/(gamma + u e^{-alpha v}))^m] dv).

    The sign of the x0 term is fixed by the t=0 requirement
    E[e^{-u X_0}] = e^{-u x0}; the inner integral is adaptive quadrature.
    """
    if u < 0 or t < 0:
        raise ValueError("u and t must be nonnegative")
    if u == 0:
        return 1.0
    if t == 0:
        return float(np.exp(-u * x0))

    def integrand(v):
        return 1.0 - (gamma / (gamma + u * np.exp(-alpha * v))) ** m

    inner = _quad(integrand, 0.0, t, epsabs=1e-12, epsrel=1e-12)
    return float(np.exp(-x0 * u * np.exp(-alpha * t) - lam * inner))


@dataclass(frozen=True)
class TransientLaw:
    """Time-dependent law for m=1 jumps and linear restoring drift.

    The law at time t is a point mass of weight e^{-lam t} at the decayed
    start x0 e^{-alpha t} (no jump yet) plus an absolutely continuous part
    supported on z = x - x0 e^{-alpha t} >= 0.
    """

    alpha: float
    lam: float
    gamma: float
    x0: float

    def __post_init__(self):
        for name in ("alpha", "lam", "gamma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def atom_weight(self, t):
        return float(np.exp(-self.lam * t))

    def atom_location(self, t):
        return float(self.x0 * np.exp(-self.alpha * t))

    def continuous_density(self, x, t):
        """Continuous part at position x and time t > 0 (zero for z < 0)."""
        if not t > 0:
            raise ValueError("t must be positive")
        x = np.asarray(x, dtype=float)
        z = x - self.atom_location(t)
        a, lam, g = self.alpha, self.lam, self.gamma
        grow = np.expm1(a * t)  # e^{alpha t} - 1
        zz = np.where(z > 0, z, 0.0)
        hyp = np.array(
            [kummer_1f1(1.0 - lam / a, 2.0, -g * grow * zi) for zi in np.atleast_1d(zz)]
        ).reshape(zz.shape)
        vals = np.exp(-lam * t) * (lam * g / a) * grow * np.exp(-g * zz) * hyp
        out = np.where(z >= 0, vals, 0.0)
        return float(out) if out.ndim == 0 else out

    def total_mass(self, t, z_max=None):
        """Atom weight plus quadrature mass of the continuous part."""
        if z_max is None:
            z_max = 60.0 / self.gamma + 10.0 * self.lam / (self.alpha * self.gamma)
        loc = self.atom_location(t)
        cont = _quad(
            lambda z: self.continuous_density(loc + z, t),
            0.0,
            z_max,
            epsabs=1e-10,
        )
        return self.atom_weight(t) + cont

    def cdf_grid(self, t, z_max, n=4001):
        """Right-continuous CDF tabulated on x = atom_location + [0, z_max]."""
        loc = self.atom_location(t)
        z = np.linspace(0.0, z_max, n)
        dens = self.continuous_density(loc + z, t)
        cum = integrate.cumulative_trapezoid(dens, z, initial=0.0)
        return loc + z, self.atom_weight(t) + cum


def transient_m1_linear(x, t, alpha, lam, gamma, x0):
    """Continuous part of the m=1 linear-drift transient density at (x, t).

    The point mass (weight e^{-lam t} at x0 e^{-alpha t}) is carried by
    TransientLaw explicitly and is not smeared into this value.
    """
    return TransientLaw(alpha, lam, gamma, x0).continuous_density(x, t)


# ---------------------------------------------------------------------------
# traveling waves


@dataclass(frozen=True)
class WaveSolution:
    """Traveling-wave profile with its speed and normalization constant.

    ``profile(xi)`` evaluates the centered probability density in the
    co-moving coordinate xi; it integrates to one and has zero mean.
    """

    m: int
    beta: float
    gamma: float
    speed: float
    norm: float

    def profile(self, xi):
        xi = np.asarray(xi, dtype=float)
        b, g, c = self.beta, self.gamma, self.speed
        if self.m == 1:
            out = self.norm * np.exp(-g * xi - np.exp(-b * xi) / (b * c))
        else:
            z = np.exp(-b * xi) / (b * c)
            # W_{kappa,0}(z) = e^{-z/2} sqrt(z) U(gamma/beta, 1, z)
            u = kummer_u(g / b, 1.0, z)
            out = self.norm * np.exp((b / 2 - g) * xi - z) * np.sqrt(z) * u
        return float(out) if out.ndim == 0 else out

    def support_bounds(self, tail=1e-14):
        """Interval outside which the profile is numerically negligible."""
        b, g, c = self.beta, self.gamma, self.speed
        lo = -np.log(-np.log(tail) * b * c * (2.0 if self.m == 2 else 1.0)) / b
        hi = (-np.log(tail) + 8.0) / g
        return float(lo), float(hi)

    def mass_and_mean(self):
        lo, hi = self.support_bounds()
        mass = _quad(self.profile, lo, hi, epsabs=1e-11)
        mean = _quad(lambda s: s * self.profile(s), lo, hi, epsabs=1e-11)
        return mass, mean

    def variance(self):
        lo, hi = self.support_bounds()
        return _quad(lambda s: s * s * self.profile(s), lo, hi, epsabs=1e-10)

    def cdf_grid(self, n=6001):
        lo, hi = self.support_bounds()
        xi = np.linspace(lo, hi, n)
        dens = self.profile(xi)
        cum = integrate.cumulative_trapezoid(dens, xi, initial=0.0)
        return xi, cum / cum[-1]


def gumbel_wave(beta, gamma) -> WaveSolution:
    """m=1 traveling wave: Gumbel-type profile and its speed.

    speed C1 = (1/beta) exp(-psi(gamma/beta)),
    norm  N  = beta / ((beta C1)^{gamma/beta} Gamma(gamma/beta)),
    profile(xi) = N exp(-gamma xi - e^{-beta xi}/(beta C1)).
    """
    if not (beta > 0 and gamma > 0):
        raise ValueError("beta and gamma must be positive")
    r = gamma / beta
    speed = np.exp(-digamma(r)) / beta
    norm = beta * np.exp(-r * np.log(beta * speed) - gammaln(r))
    return WaveSolution(1, beta, gamma, float(speed), float(norm))


def whittaker_wave(beta, gamma) -> WaveSolution:
    """m=2 traveling wave: Whittaker-W profile and its speed.

    speed C2 = (1/beta) exp(psi(2 gamma/beta) - 2 psi(gamma/beta)),
    norm  N  = beta (beta C2)^{1/2 - gamma/beta} Gamma(2 gamma/beta)
               / Gamma(gamma/beta)^2,
    profile(xi) = N exp((beta/2 - gamma) xi - z/2) W_{kappa,0}(z)
    with z = e^{-beta xi}/(beta C2) and kappa = (beta - 2 gamma)/(2 beta).
    Only the decaying W branch enters (the regular M branch is excluded by
    positivity of the profile's exponential moments).
    """
    if not (beta > 0 and gamma > 0):
        raise ValueError("beta and gamma must be positive")
    r = gamma / beta
    speed = np.exp(digamma(2 * r) - 2 * digamma(r)) / beta
    norm = beta * np.exp(
        (0.5 - r) * np.log(beta * speed) + gammaln(2 * r) - 2 * gammaln(r)
    )
    return WaveSolution(2, beta, gamma, float(speed), float(norm))


def mellin_moment(sol: WaveSolution, u):
    """Exponential moment G(u) = int e^{-u xi} P(xi) dxi of a wave profile.

    Converges for u > -gamma (the profile's right tail is ~ e^{-gamma xi});
    outside the strip a DivergenceError is raised.  G(0) = 1 and G'(0) = 0
    express normalization and the zero-mean condition fixing the speed.
    """
    if u <= -sol.gamma:
        raise DivergenceError(
            f"mellin moment diverges for u <= -gamma (u={u}, gamma={sol.gamma})"
        )
    lo, hi = sol.support_bounds()
    if u < 0:
        hi = max(hi, (-np.log(1e-16)) / (sol.gamma + u) + 10.0)
    return _quad(lambda s: np.exp(-u * s) * sol.profile(s), lo, hi, epsabs=1e-11)


# ---------------------------------------------------------------------------
# tanh-drift jump diffusion


def gaussian_pair_mixture(x, t, beta):
    """Equal mixture of unit-variance-rate Gaussians drifting at +-beta."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * (
        np.exp(-((x - beta * t) ** 2) / (2 * t)) + np.exp(-((x + beta * t) ** 2) / (2 * t))
    ) / np.sqrt(2 * np.pi * t)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TanhTransientLaw:
    """Transient law of the tanh-drift jump diffusion started at zero.

    dX = beta tanh(beta X) dt + dW + compound Poisson(lam, Laplace(gamma))
    with symmetric jumps.  The cosh tilt turns the dynamics into a +-beta
    drift mixture driven by a pure-jump process whose jumps follow the
    normalized tilted law and whose rate is lam * M(beta), M being the tilt
    mass gamma^2/(gamma^2 - beta^2):

        Q(x, t) = 1/2 [N^{(+beta)} + N^{(-beta)}](., t) * Q_tilt(., t).

    Keeping the tilt's mass in the rate (rather than as a growing scalar
    prefactor) is exactly what keeps Q normalized; total mass one is an
    acceptance check.  The density is recovered by characteristic-function
    inversion on a uniform frequency grid truncated where the Gaussian
    factor is below 1e-18.
    """

    lam: float
    gamma: float
    beta: float
    tilt: TiltedJumpLaw = field(init=False)

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        object.__setattr__(
            self, "tilt", TiltedJumpLaw(SymmetricLaplaceLaw(self.gamma), self.beta)
        )

    def char_fn(self, u, t):
        """Characteristic function at frequency u and time t (real, even)."""
        u = np.asarray(u, dtype=float)
        rate = self.lam * self.tilt.mass
        out = (
            np.cos(u * self.beta * t)
            * np.exp(-(u**2) * t / 2.0)
            * np.exp(rate * t * (self.tilt.char_fn(u) - 1.0))
        )
        return float(out) if out.ndim == 0 else out

    def _frequency_grid(self, t, x_scale):
        u_max = np.sqrt(2.0 * 42.0 / t)
        du = np.pi / (abs(x_scale) + self.beta * t + 10.0 * np.sqrt(t) + 50.0 / (self.gamma - self.beta))
        n = int(np.ceil(u_max / du)) + 1
        return np.linspace(0.0, u_max, max(n, 2001))

    def density(self, x, t):
        """Density at positions x and time t > 0."""
        if not t > 0:
            raise ValueError("t must be positive")
        x = np.asarray(x, dtype=float)
        if self.lam == 0:
            return gaussian_pair_mixture(x, t, self.beta)
        u = self._frequency_grid(t, np.max(np.abs(x)) if x.size else 1.0)
        phi = self.char_fn(u, t)
        w = np.full(u.shape, u[1] - u[0])
        w[0] *= 0.5
        w[-1] *= 0.5
        out = (np.cos(np.outer(np.atleast_1d(x), u)) @ (phi * w)) / np.pi
        out = out.reshape(x.shape)
        return float(out) if out.ndim == 0 else out

    def support_halfwidth(self, t):
        """Half width beyond which the density is numerically negligible."""
        return self.beta * t + 10.0 * np.sqrt(t) + 45.0 / (self.gamma - self.beta)

    def mass(self, t, n=8001):
        hw = self.support_halfwidth(t)
        x = np.linspace(-hw, hw, n)
        return float(integrate.simpson(self.density(x, t), x=x))

    def cdf_grid(self, t, n=8001):
        hw = self.support_halfwidth(t)
        x = np.linspace(-hw, hw, n)
        dens = self.density(x, t)
        cum = integrate.cumulative_trapezoid(dens, x, initial=0.0)
        return x, cum / cum[-1]


def tanh_transient(x, t, lam, gamma, beta):
    """Density of the tanh-drift jump diffusion at (x, t), started at 0."""
    return TanhTransientLaw(lam, gamma, beta).density(x, t)


@dataclass(frozen=True)
class TiltedOuLaw:
    """Invariant law of the OU process driven by tanh-drift jump-diffusion
    increments: dY = -alpha Y dt + dX.

    At long times the driving process saturates to a +-beta drift with
    untilted Laplace jumps, so the invariant law is the symmetric mixture
    of two components centered at +-beta/alpha.  The jump part of each
    component is the Bessel-K (variance-gamma) law with index
    nu = (1 - lam/alpha)/2; the Brownian part of dX contributes an extra
    Gaussian convolution of variance 1/(2 alpha).

    ``jump_component_density`` is the bare Bessel-K mixture (log-singular
    at the centers when nu = 0); ``density`` is the full invariant law
    including the Gaussian factor, which is what simulations converge to.
    """

    alpha: float
    lam: float
    gamma: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "lam", "gamma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")

    @property
    def nu(self):
        return 0.5 * (1.0 - self.lam / self.alpha)

    def _bessel_component(self, s):
        """Bessel-K density of the centered jump part at distance s >= 0."""
        g, nu = self.gamma, self.nu
        s = np.asarray(s, dtype=float)
        tiny = s <= 0
        sp = np.where(tiny, 1.0, s)
        if nu == 0:
            vals = g * kv(0, g * sp) / np.pi
            lim = np.inf
        else:
            pref = 2.0**nu * g ** (1.0 - nu) / (
                np.sqrt(np.pi) * np.exp(gammaln(0.5 - nu))
            )
            vals = pref * sp ** (-nu) * kv(abs(nu), g * sp)
            if nu > 0:
                lim = np.inf
            else:
                # s^{|nu|} K_{|nu|}(g s) -> 2^{|nu|-1} Gamma(|nu|) g^{-|nu|}
                a = abs(nu)
                lim = pref * 2.0 ** (a - 1.0) * np.exp(gammaln(a)) * g ** (-a)
        out = np.where(tiny, lim, vals)
        return out

    def jump_component_density(self, y):
        """Symmetric Bessel-K mixture centered at +-beta/alpha (jump part only)."""
        y = np.asarray(y, dtype=float)
        c = self.beta / self.alpha
        out = 0.5 * (
            self._bessel_component(np.abs(y - c))
            + self._bessel_component(np.abs(y + c))
        )
        return float(out) if out.ndim == 0 else out

    def char_fn(self, u):
        """Characteristic function of the full invariant law."""
        u = np.asarray(u, dtype=float)
        a, lam, g, b = self.alpha, self.lam, self.gamma, self.beta
        out = (
            np.cos(u * b / a)
            * np.exp(-(u**2) / (4.0 * a))
            * (g**2 / (g**2 + u**2)) ** (lam / (2.0 * a))
        )
        return float(out) if out.ndim == 0 else out

    def density(self, y):
        """Full invariant density (jump mixture convolved with the Brownian
        stationary Gaussian), by characteristic-function inversion."""
        y = np.asarray(y, dtype=float)
        u_max = np.sqrt(4.0 * self.alpha * 42.0)
        y_max = max(1.0, np.max(np.abs(y))) if y.size else 1.0
        du = np.pi / (y_max + self.beta / self.alpha + 50.0 / self.gamma + 10.0 / np.sqrt(self.alpha))
        n = max(int(np.ceil(u_max / du)) + 1, 2001)
        u = np.linspace(0.0, u_max, n)
        phi = self.char_fn(u)
        w = np.full(n, u[1] - u[0])
        w[0] *= 0.5
        w[-1] *= 0.5
        out = (np.cos(np.outer(np.atleast_1d(y), u)) @ (phi * w)) / np.pi
        out = out.reshape(y.shape)
        return float(out) if out.ndim == 0 else out

    def support_halfwidth(self):
        return (
            self.beta / self.alpha
            + 50.0 / self.gamma
            + 10.0 / np.sqrt(2.0 * self.alpha)
        )

    def cdf_grid(self, n=8001):
        hw = self.support_halfwidth()
        y = np.linspace(-hw, hw, n)
        dens = self.density(y)
        cum = integrate.cumulative_trapezoid(dens, y, initial=0.0)
        return y, cum / cum[-1]


def ou_tanh_stationary(y, law: TiltedOuLaw):
    """Bessel-K mixture 1/2 [P^(-beta) + P^(+beta)] of the invariant law.

    This is the jump-driven part of the invariant measure; see
    TiltedOuLaw.density for the full law including the Brownian factor.
    """
    return law.jump_component_density(y)
