"""Multi-start damped least squares for two-bin Gabor phase retrieval.

The forward map ``c -> Gf_c(x_n, omega_j)`` is linear, ``y = A c``, so the
residuals ``|A c|^2 - s`` are real quartic polynomials in ``(Re c, Im c)``
with an explicit Jacobian. Each start runs Levenberg-Marquardt with
Nielsen's damping update; the best start wins by ``(loss, start_index)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .sampling import MagnitudeSamples, MeasurementGrid, sample_magnitudes
from .signal_model import BandlimitedSignal
from .transforms import gabor_matrix

__all__ = [
    "ReconstructionConfig",
    "ReconstructionResult",
    "forward_matrix",
    "loss",
    "reconstruct",
    "empirical_distinctness",
    "thread_limit",
]


@dataclass(frozen=True)
class ReconstructionConfig:
    starts: int = 16
    max_iterations: int = 500
    gradient_tolerance: float = 1e-10
    loss_tolerance: float = 1e-14
    seed: int = 0
    # Gauss-Newton polishing steps taken after the loss tolerance is met
    polish_steps: int = 3

    def __post_init__(self):
        if self.starts < 1 or self.max_iterations < 1:
            raise ValueError("starts and max_iterations must be positive")
        if not (self.gradient_tolerance > 0 and self.loss_tolerance > 0):
            raise ValueError("tolerances must be positive")
        if self.polish_steps < 0:
            raise ValueError("polish_steps must be nonnegative")


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    signal: BandlimitedSignal
    loss: float
    converged: bool
    start_index: int
    iterations: int
    gradient_norm: float = 0.0
    history: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "loss": self.loss,
            "converged": self.converged,
            "iterations": self.iterations,
            "start_index": self.start_index,
            "bandwidth": self.signal.bandwidth,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.signal.coeffs],
        }


def thread_limit() -> int:
    """Inner parallelism cap from ``GABORPR_THREADS`` (default 1)."""
    raw = os.environ.get("GABORPR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _bins(bins):
    bins = (0, 1) if bins is None else tuple(bins)
    if not bins or any(b not in (0, 1) for b in bins) or len(set(bins)) != len(bins):
        raise ValueError(f"bins must be a nonempty subset of (0, 1), got {bins!r}")
    return bins


def forward_matrix(grid: MeasurementGrid, K: int, bins=None) -> np.ndarray:
    """Stacked rows of the linear map ``c -> Gf_c`` over the selected bins."""
    x = grid.points
    return np.concatenate([gabor_matrix(x, grid.omegas[j], grid.bandwidth, K) for j in _bins(bins)])


def _data(samples, bins):
    return np.concatenate([samples.values[j] for j in _bins(bins)])


def _residual_jacobian(A, s, p):
    M = A.shape[1]
    y = A @ (p[:M] + 1j * p[M:])
    r = np.abs(y) ** 2 - s
    cy = np.conj(y)[:, None] * A
    J = np.hstack([2 * cy.real, -2 * cy.imag])
    return r, J


def loss(candidate_coeffs, samples: MagnitudeSamples, bins=None, matrix=None):
    """Least-squares misfit and its gradient over ``(Re c, Im c)``.

    Returns ``(value, gradient)`` with ``value = sum (|Gf_c|^2 - s)^2``.
    ``bins`` restricts the fit to a subset of the two frequency bins.
    """
    c = np.asarray(candidate_coeffs, dtype=complex).ravel()
    if c.size % 2 != 1:
        raise ValueError("coefficient vector must have odd length")
    K = (c.size - 1) // 2
    if samples.K is not None and samples.K != K:
        raise ValueError(f"candidate K={K} does not match samples K={samples.K}")
    A = forward_matrix(samples.grid, K, bins) if matrix is None else matrix
    if A.shape[1] != c.size:
        raise ValueError("matrix and candidate dimensions differ")
    r, J = _residual_jacobian(A, _data(samples, bins), np.concatenate([c.real, c.imag]))
    return float(r @ r), 2.0 * (J.T @ r)


def _levenberg_marquardt(A, s, p, config):
    """One damped least-squares run; returns (p, loss, gnorm, iterations, history)."""
    r, J = _residual_jacobian(A, s, p)
    f = float(r @ r)
    g = 2.0 * (J.T @ r)
    history = [f]
    H = J.T @ J
    mu = 1e-3 * float(np.max(np.diag(H))) if H.size else 1.0
    nu = 2.0
    polish = 0
    it = 0
    n = p.size
    while it < config.max_iterations:
        gnorm = float(np.linalg.norm(g))
        if f <= config.loss_tolerance or gnorm <= config.gradient_tolerance:
            if polish >= config.polish_steps or f == 0.0:
                break
            polish += 1
        it += 1
        try:
            step = np.linalg.solve(H + mu * np.eye(n), -(J.T @ r))
        except np.linalg.LinAlgError:
            mu *= nu
            nu *= 2
            continue
        p_new = p + step
        r_new, J_new = _residual_jacobian(A, s, p_new)
        f_new = float(r_new @ r_new)
        # decrease predicted by the linear model ||r + J step||^2
        predicted = float(step @ (mu * step - J.T @ r))
        if f_new < f:
            rho = (f - f_new) / max(predicted, np.finfo(float).tiny)
            p, r, J, f = p_new, r_new, J_new, f_new
            g = 2.0 * (J.T @ r)
            H = J.T @ J
            mu *= max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
            nu = 2.0
            history.append(f)
        else:
            mu *= nu
            nu *= 2.0
            if not np.isfinite(mu) or mu > 1e300:
                break
    return p, f, float(np.linalg.norm(g)), it, history


def _initial_point(rng, A, s, M):
    c = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    c /= np.linalg.norm(c)
    model = float(np.sum(np.abs(A @ c) ** 2))
    if model > 0:
        c *= math.sqrt(float(s.sum()) / model)
    return np.concatenate([c.real, c.imag])


def reconstruct(samples: MagnitudeSamples, K: int | None = None,
                config: ReconstructionConfig | None = None, bins=None) -> ReconstructionResult:
    """Recover a model signal, up to global phase, from magnitude samples.

    Runs ``config.starts`` independent Levenberg-Marquardt descents from
    complex Gaussian initial points (rescaled to the data energy) and
    returns the run with the smallest loss. Non-convergence is reported
    through ``converged``, never raised.
    """
    config = config or ReconstructionConfig()
    K = samples.K if K is None else int(K)
    if K is None or K < 0:
        raise ValueError("K must be given (or recorded in the samples) and nonnegative")
    grid = samples.grid
    M = 2 * K + 1
    s = _data(samples, bins)
    if not np.any(s):
        zero = BandlimitedSignal(grid.bandwidth, np.zeros(M, dtype=complex))
        return ReconstructionResult(zero, 0.0, True, 0, 0, 0.0, (0.0,))
    A = forward_matrix(grid, K, bins)
    seeds = np.random.SeedSequence(config.seed).spawn(config.starts)
    inits = [_initial_point(np.random.default_rng(sq), A, s, M) for sq in seeds]

    def run(i):
        return (i,) + _levenberg_marquardt(A, s, inits[i], config)

    workers = min(thread_limit(), config.starts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, range(config.starts)))
    else:
        runs = [run(i) for i in range(config.starts)]

    i, p, f, gnorm, iters, history = min(runs, key=lambda item: (item[2], item[0]))
    c = p[:M] + 1j * p[M:]
    converged = f <= config.loss_tolerance or gnorm <= config.gradient_tolerance
    return ReconstructionResult(BandlimitedSignal(grid.bandwidth, c), f, bool(converged),
                                int(i), int(iters), gnorm, tuple(history))


def empirical_distinctness(f: BandlimitedSignal, g: BandlimitedSignal,
                           grid: MeasurementGrid, bins=None) -> float:
    """Largest difference of squared magnitudes over the lattice and bins."""
    if f.bandwidth != g.bandwidth:
        raise ValueError("signals must share the bandwidth")
    sf = sample_magnitudes(f, grid).values
    sg = sample_magnitudes(g, grid).values
    idx = list(_bins(bins))
    return float(np.max(np.abs(sf[idx] - sg[idx])))
