"""Fractional Brownian motion sampling on uniform grids.

Coordinates are independent fBm's with a common Hurst index.  The default
sampler runs the Hosking/Durbin-Levinson recursion on the stationary
increment process (O(n^2), numerically robust for every H in (1/3, 1)); a
dense Cholesky factorization of the path covariance is available as a
cross-check oracle for moderate grids.

Randomness comes from the counter-based Philox generator with a 64-bit
seed; coordinate k draws from the stream spawned with key (seed, (k,)), so
enlarging ``dims`` never disturbs the lower coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CovarianceNotPD
from .paths import Grid, SamplePath

#: sampler pinned into CSV metadata; coordinate k uses spawn key (seed, (k,))
RNG_NAME = "philox4x64"

_CHOLESKY_MAX_N = 1024
_CHOLESKY_MIN_PIVOT = 1e-12


@dataclass(frozen=True)
class FbmSpec:
    """Sampling request: Hurst index, horizon, segment count, dims, seed."""

    hurst: float
    horizon: float
    n: int
    dims: int = 1
    seed: int = 0

    def __post_init__(self):
        if not (1.0 / 3.0 < self.hurst < 1.0):
            raise ValueError("hurst must lie in (1/3, 1)")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        if self.n < 1:
            raise ValueError("need at least one segment")
        if self.dims < 1:
            raise ValueError("need at least one coordinate")
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must fit in 64 bits")


def fbm_covariance(s, t, hurst: float):
    """Cov(B_s, B_t) = (|s|^2H + |t|^2H - |t-s|^2H) / 2 per coordinate."""
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(s) ** h2 + np.abs(t) ** h2 - np.abs(t - s) ** h2)


def _fgn_autocov(n: int, hurst: float) -> np.ndarray:
    """Autocovariance of unit-spaced fractional Gaussian noise, lags 0..n."""
    k = np.arange(n + 1, dtype=np.float64)
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2.0 * np.abs(k) ** h2 + np.abs(k - 1) ** h2)


def _coordinate_rng(seed: int, coord: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(coord,))
    return np.random.Generator(np.random.Philox(ss))


def _fgn_batch_hosking(n: int, hurst: float, n_paths: int, rng) -> np.ndarray:
    """(n_paths, n) unit-spaced fGn samples via the Durbin-Levinson recursion."""
    acov = _fgn_autocov(n, hurst)
    x = np.empty((n_paths, n))
    x[:, 0] = rng.standard_normal(n_paths)
    if n == 1:
        return x
    # phi[j-1] multiplies the j-th most recent sample in the one-step
    # predictor; var is the innovation variance of that predictor.
    phi = np.array([acov[1]])
    var = 1.0 - acov[1] ** 2
    for k in range(1, n):
        mu = x[:, :k] @ phi[::-1]
        x[:, k] = mu + np.sqrt(var) * rng.standard_normal(n_paths)
        if k == n - 1:
            break
        reflect = (acov[k + 1] - phi @ acov[k:0:-1]) / var
        phi = np.concatenate([phi - reflect * phi[::-1], [reflect]])
        var *= 1.0 - reflect**2
        if var <= 0.0:
            raise CovarianceNotPD("Durbin-Levinson innovation variance collapsed")
    return x


def _fbm_batch_cholesky(spec: FbmSpec, n_paths: int, rng) -> np.ndarray:
    if spec.n > _CHOLESKY_MAX_N:
        raise ValueError(
            f"cholesky sampling is limited to n <= {_CHOLESKY_MAX_N} (got {spec.n})"
        )
    t = np.linspace(0.0, spec.horizon, spec.n + 1)[1:]
    cov = fbm_covariance(t[:, None], t[None, :], spec.hurst)
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise CovarianceNotPD("fBm covariance failed Cholesky factorization") from exc
    if float(np.min(np.diag(chol)) ** 2) < _CHOLESKY_MIN_PIVOT:
        raise CovarianceNotPD("fBm covariance pivot below 1e-12")
    xi = rng.standard_normal((n_paths, spec.n))
    return xi @ chol.T


def sample_fbm_ensemble(spec: FbmSpec, n_paths: int, method: str = "hosking") -> np.ndarray:
    """Sample ``n_paths`` independent paths; shape (n_paths, n+1, dims).

    Every path starts at zero.  The draw is deterministic in (spec, n_paths,
    method); the two methods use the same streams but different constructions,
    so they agree in law, not pathwise.
    """
    if n_paths < 1:
        raise ValueError("need at least one path")
    out = np.zeros((n_paths, spec.n + 1, spec.dims))
    delta = spec.horizon / spec.n
    for k in range(spec.dims):
        rng = _coordinate_rng(spec.seed, k)
        if method == "hosking":
            fgn = _fgn_batch_hosking(spec.n, spec.hurst, n_paths, rng)
            out[:, 1:, k] = np.cumsum(fgn, axis=1) * delta**spec.hurst
        elif method == "cholesky":
            out[:, 1:, k] = _fbm_batch_cholesky(spec, n_paths, rng)
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


def sample_fbm(spec: FbmSpec, method: str = "hosking") -> SamplePath:
    """One path on the uniform grid, values (n+1, dims), B(0) = 0."""
    values = sample_fbm_ensemble(spec, 1, method=method)[0]
    return SamplePath(Grid.uniform(spec.n, spec.horizon), values)


def build_time_space_signal(b: SamplePath) -> SamplePath:
    """Augment a noise path to W(t) = (t, B_1(t), ..., B_d(t))."""
    v = b.values if b.values.ndim == 2 else b.values[:, None]
    return SamplePath(b.grid, np.column_stack([b.grid.times, v]))
