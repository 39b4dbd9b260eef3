"""Monte-Carlo layer: price noise, growth-rate and size statistics.

Price deviations from the mean follow a Langevin equation whose
restoring force has constant magnitude and opposite sign to the
deviation; its stationary law is a Laplace (double exponential)
distribution with variance ``D^2 / (2 b^2)``.  Mapping price deviations
through the demand-curve slope carries the Laplace shape over to sales
growth rates, while multiplicative accumulation of such rates drives
unit sizes toward a lognormal law.  A jump-relaxation process for the
reproduction coefficient reproduces the separation between its
short-window mean (zero) and its long-window mean (investment driven).

Every simulation takes an explicit seed and is reproducible bit for bit
for that seed; paths with distinct seeds are independent and may run
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from ._validation import as_float_array, check_nonnegative, check_positive
from .errors import StepSizeError

__all__ = [
    "PriceNoiseParams",
    "ReproductionSimParams",
    "SizeDistParams",
    "ReproductionSimResult",
    "langevin_price_sim",
    "langevin_price_ensemble",
    "laplace_pdf",
    "laplace_cdf",
    "laplace_fit",
    "growth_rate_transform",
    "lognormal_size_pdf",
    "multiplicative_growth_sim",
    "reproduction_param_sim",
    "ks_statistic",
]


@dataclass(frozen=True)
class PriceNoiseParams:
    """Restoring magnitude ``b`` and white-noise amplitude ``noise``.

    The drift on a price deviation ``d`` is ``-b * sign(d)`` (zero at
    ``d == 0``); the generalized potential is ``b * |d|``.
    """

    restoring: float
    noise: float

    def __post_init__(self):
        check_positive(self.restoring, "restoring")
        check_positive(self.noise, "noise")

    def force(self, deviation):
        return -self.restoring * np.sign(deviation)

    def potential(self, deviation):
        return self.restoring * np.abs(deviation)

    @property
    def stationary_variance(self) -> float:
        return 0.5 * self.noise**2 / self.restoring**2


@dataclass(frozen=True)
class ReproductionSimParams:
    """Jump-relaxation process for the reproduction coefficient.

    ``compensation`` is the relaxation rate toward zero, ``jump_size``
    the mean output jump of one investment, and ``amortization`` the
    mean time between investments (the time to repay one from the
    profit flow, so a higher profit per unit means a shorter
    amortization and a larger long-run mean coefficient
    ``jump_size / (amortization * compensation)``).
    """

    compensation: float
    jump_size: float
    amortization: float
    noise_amp: float = 0.05

    def __post_init__(self):
        check_positive(self.compensation, "compensation")
        check_nonnegative(self.jump_size, "jump_size")
        check_positive(self.amortization, "amortization")
        check_nonnegative(self.noise_amp, "noise_amp")


@dataclass(frozen=True)
class SizeDistParams:
    """Lognormal size law: log drift, log volatility and reference size."""

    drift: float
    volatility: float
    base_size: float = 1.0

    def __post_init__(self):
        check_positive(self.volatility, "volatility")
        check_positive(self.base_size, "base_size")


@dataclass(frozen=True)
class ReproductionSimResult:
    """Path and windowed means returned by :func:`reproduction_param_sim`."""

    times: np.ndarray
    path: np.ndarray
    short_window_means: np.ndarray
    short_window: float
    long_window_mean: float


def langevin_price_sim(
    params: PriceNoiseParams,
    dt: float,
    steps: int,
    seed: int,
    start: float = 0.0,
) -> np.ndarray:
    """Euler-Maruyama path of the price deviation.

    Update rule per step:
    ``d <- d - b*sign(d)*dt + sqrt(noise*dt) * xi`` with standard normal
    ``xi``.  Returns the path including the start value (length
    ``steps + 1``); deterministic for a fixed seed.
    """
    check_positive(dt, "dt")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rng = np.random.default_rng(seed)
    path = np.empty(steps + 1)
    path[0] = x = float(start)
    kicks = np.sqrt(params.noise * dt) * rng.standard_normal(steps)
    b_dt = params.restoring * dt
    for i in range(steps):
        x = x - b_dt * np.sign(x) + kicks[i]
        path[i + 1] = x
    return path


def langevin_price_ensemble(
    params: PriceNoiseParams,
    dt: float,
    n_paths: int,
    keep_steps: int,
    seed: int,
    burn_in: float | None = None,
) -> np.ndarray:
    """Post-burn-in deviation samples from many independent paths.

    Runs ``n_paths`` paths from zero, discards a burn-in of
    ``burn_in`` time units (default ``10 / (b^2 / noise)``, ten
    relaxation times) and then keeps ``keep_steps`` consecutive states
    of every path.  Returns the flattened samples, ``n_paths *
    keep_steps`` of them.
    """
    check_positive(dt, "dt")
    if n_paths < 1 or keep_steps < 1:
        raise ValueError("n_paths and keep_steps must be at least 1")
    if burn_in is None:
        burn_in = 10.0 * params.noise / params.restoring**2
    burn_steps = int(round(burn_in / dt))
    rng = np.random.default_rng(seed)
    x = np.zeros(n_paths)
    sq = np.sqrt(params.noise * dt)
    b_dt = params.restoring * dt
    for _ in range(burn_steps):
        x += -b_dt * np.sign(x) + sq * rng.standard_normal(n_paths)
    kept = np.empty((keep_steps, n_paths))
    for i in range(keep_steps):
        x += -b_dt * np.sign(x) + sq * rng.standard_normal(n_paths)
        kept[i] = x
    return kept.ravel()


def laplace_pdf(x, restoring: float, noise: float):
    """Stationary density of the price deviation: ``(b/D) exp(-2b|x|/D)``.

    Integrates to one; variance ``D^2 / (2 b^2)``.
    """
    check_positive(restoring, "restoring")
    check_positive(noise, "noise")
    x_arr = np.asarray(x, dtype=float)
    out = (restoring / noise) * np.exp(-2.0 * restoring * np.abs(x_arr) / noise)
    return float(out) if np.isscalar(x) else out


def laplace_cdf(x, restoring: float, noise: float):
    """Cumulative form of :func:`laplace_pdf`."""
    check_positive(restoring, "restoring")
    check_positive(noise, "noise")
    x_arr = np.asarray(x, dtype=float)
    scale = noise / (2.0 * restoring)
    out = np.where(
        x_arr < 0, 0.5 * np.exp(x_arr / scale), 1.0 - 0.5 * np.exp(-x_arr / scale)
    )
    return float(out) if np.isscalar(x) else out


def laplace_fit(samples) -> tuple[float, float]:
    """Maximum-likelihood location and scale of a Laplace law.

    Location is the sample median with the lower-median tie rule (even
    sample sizes take the smaller of the two central values); scale is
    the mean absolute deviation from it.
    """
    data = as_float_array(samples, "samples")
    if data.size < 2:
        raise ValueError("laplace_fit needs at least two samples")
    ordered = np.sort(data)
    location = float(ordered[(data.size - 1) // 2])
    scale = float(np.abs(data - location).mean())
    return location, scale


def growth_rate_transform(y_prev, y_next):
    """Log growth rate ``log(y_next / y_prev)`` of positive sales."""
    prev = np.asarray(y_prev, dtype=float)
    nxt = np.asarray(y_next, dtype=float)
    if np.any(prev <= 0) or np.any(nxt <= 0):
        raise ValueError("sales must be positive to take a log growth rate")
    out = np.log(nxt / prev)
    scalar = np.isscalar(y_prev) and np.isscalar(y_next)
    return float(out) if scalar else out


def lognormal_size_pdf(y, t, params: SizeDistParams):
    """Density of unit sizes after ``t`` time units of multiplicative growth.

    ``log(y / base_size)`` is normal with mean ``drift * t`` and
    variance ``volatility^2 * t``; the median is
    ``base_size * exp(drift * t)`` and the distribution broadens with
    time.
    """
    check_positive(t, "t")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr <= 0):
        raise ValueError("size must be positive")
    var = params.volatility**2 * t
    log_dev = np.log(y_arr / params.base_size) - params.drift * t
    out = np.exp(-(log_dev**2) / (2.0 * var)) / (y_arr * np.sqrt(2.0 * np.pi * var))
    return float(out) if np.isscalar(y) else out


def multiplicative_growth_sim(
    n_units: int,
    steps: int,
    rate_sampler,
    seed: int,
    base_size: float = 1.0,
) -> np.ndarray:
    """Grow ``n_units`` unit sizes through i.i.d. multiplicative shocks.

    Each step multiplies every size by ``exp(r)`` with ``r`` drawn from
    ``rate_sampler(rng, size)``.  With heavy-tailed rates the log sizes
    still approach normality, which is the route to the lognormal size
    law.

    Parameters
    ----------
    n_units, steps : int
        ``steps=0`` returns all sizes at ``base_size``.
    rate_sampler : callable
        ``rate_sampler(rng, size) -> ndarray`` of growth rates.
    seed : int
    base_size : float
    """
    if n_units < 1:
        raise ValueError("n_units must be at least 1")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    check_positive(base_size, "base_size")
    rng = np.random.default_rng(seed)
    log_sizes = np.zeros(n_units)
    for _ in range(steps):
        log_sizes += np.asarray(rate_sampler(rng, n_units), dtype=float)
    return base_size * np.exp(log_sizes)


def reproduction_param_sim(
    params: ReproductionSimParams,
    dt: float,
    steps: int,
    seed: int,
    start: float = 0.0,
    short_window: float | None = None,
    n_short_windows: int = 100,
    burn_in: float | None = None,
) -> ReproductionSimResult:
    """Simulate the reproduction coefficient as relaxation plus jumps.

    Per step the coefficient decays at the compensation rate, receives
    Gaussian noise, and receives Poisson-arriving investment jumps of
    ``jump_size`` at rate ``1 / amortization``:

        g <- g * (1 - compensation*dt) + noise_amp*sqrt(dt)*xi
             + jump_size * Poisson(dt / amortization)

    The result reports means over short windows (long against the
    relaxation time, short against the amortization time: statistically
    zero) and over the whole post-burn-in path (positive, approaching
    ``jump_size / (amortization * compensation)``).

    Raises
    ------
    StepSizeError
        If ``dt * compensation >= 0.5`` (stability bound).
    """
    check_positive(dt, "dt")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if dt * params.compensation >= 0.5:
        raise StepSizeError("dt * compensation must stay below 0.5")
    if short_window is None:
        short_window = 10.0 / params.compensation
    if burn_in is None:
        burn_in = 5.0 / params.compensation

    rng = np.random.default_rng(seed)
    noise = params.noise_amp * np.sqrt(dt) * rng.standard_normal(steps)
    jumps = params.jump_size * rng.poisson(dt / params.amortization, size=steps)
    inputs = noise + jumps
    decay = 1.0 - params.compensation * dt

    path = np.empty(steps + 1)
    path[0] = start
    path[1:] = lfilter([1.0], [1.0, -decay], inputs)
    if start != 0.0:
        path[1:] += start * decay ** np.arange(1, steps + 1)
    times = dt * np.arange(steps + 1)

    burn_idx = min(int(round(burn_in / dt)), steps)
    window_len = max(int(round(short_window / dt)), 1)
    tail = path[burn_idx + 1 :]
    n_windows = min(n_short_windows, tail.size // window_len)
    if n_windows < 1:
        raise ValueError("path too short for the requested short windows")
    window_means = (
        tail[: n_windows * window_len].reshape(n_windows, window_len).mean(axis=1)
    )
    return ReproductionSimResult(
        times=times,
        path=path,
        short_window_means=window_means,
        short_window=window_len * dt,
        long_window_mean=float(tail.mean()),
    )


def ks_statistic(samples, cdf) -> float:
    """Kolmogorov-Smirnov distance between samples and a CDF callable."""
    data = np.sort(as_float_array(samples, "samples"))
    n = data.size
    if n == 0:
        raise ValueError("ks_statistic needs samples")
    theory = np.asarray(cdf(data), dtype=float)
    upper = np.max(np.arange(1, n + 1) / n - theory)
    lower = np.max(theory - np.arange(0, n) / n)
    return float(max(upper, lower))
