"""Euler–Maruyama integration of the phase, bulk and Riccati diffusions.

Four diffusions are supported:

``phi``
    The hard-edge phase diffusion started at :math:`2\\pi`,

    .. math::

        d\\varphi = \\tfrac{\\beta}{2}(a+\\tfrac12)\\sin\\tfrac{\\varphi}{2}\\,dt
        + \\beta\\lambda e^{-\\beta t/8}\\,dt + \\tfrac12\\sin\\varphi\\,dt
        + 2\\sin\\tfrac{\\varphi}{2}\\,dB_t .

    The number of points of the hard-edge singular-value process in
    :math:`[0, \\lambda]` is :math:`\\lfloor \\varphi(\\infty)/4\\pi \\rfloor`.

``alpha``
    The bulk (Sine-beta) diffusion started at 0,
    :math:`d\\alpha = \\lambda\\frac{\\beta}{4}e^{-\\beta t/4}dt + \\mathrm{Re}[(e^{-i\\alpha}-1)dZ]`
    with complex Brownian motion :math:`Z`; :math:`\\alpha(\\infty)/2\\pi` counts
    Sine-beta points in :math:`[0, \\lambda]`.

``psi_coupled``
    Two ``phi`` diffusions at :math:`\\lambda` and :math:`\\lambda + x` driven by
    the same Brownian path.  Their difference counts points in
    :math:`(\\lambda, \\lambda + x]`.

``riccati``
    The Riccati diffusion
    :math:`dp = \\frac{2}{\\sqrt\\beta}p\\,dB + ((a + \\frac{2}{\\beta})p - p^2 - \\Lambda e^{-t})dt`
    started at :math:`+\\infty` and restarted there after each explosion to
    :math:`-\\infty`.  It is integrated in the angle :math:`\\theta = \\operatorname{arccot} p`,
    in which explosions and zeros of ``p`` are smooth crossings of multiples of
    :math:`\\pi/2`.  Its zero count equals the hard-edge count at :math:`\\sqrt\\Lambda`.

All four processes have barriers (multiples of :math:`2\\pi`, resp.
:math:`\\pi/2` for the Riccati angle) where the diffusion coefficient and every
drift term except the nonnegative forcing vanish, so the exact processes never
cross a barrier downwards.  The integrator enforces this by clamping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import partial
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError, IntegrationError
from .noise import CHUNK_STEPS, NoiseDriver, StreamBlock, map_blocks

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi
HALF_PI = 0.5 * np.pi
PATH_POINTS = 4096

_RICCATI_TRIG_MAX = 3.0 * math.sqrt(3.0) / 16.0  # max |sin x cos^3 x|


@dataclass(frozen=True)
class ModelParams:
    """Dyson index ``beta``, hard-edge parameter ``a`` and spectral scale ``lam``."""

    beta: float
    a: float
    lam: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not (math.isfinite(self.a) and self.a > -1):
            raise DomainError(f"a must exceed -1, got {self.a}")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise DomainError(f"lambda must be nonnegative, got {self.lam}")

    def envelope(self, t):
        """Drift envelope ``beta * exp(-beta t / 8)``."""
        return self.beta * np.exp(-self.beta * np.asarray(t, dtype=float) / 8.0)

    def with_lam(self, lam: float) -> "ModelParams":
        return replace(self, lam=float(lam))


@dataclass(frozen=True)
class IntegratorConfig:
    """Time stepping and stopping rule.

    The step at time ``t`` is ``min(base_step, substep_ratio * base_step / D(t))``
    where ``D(t)`` bounds the drift magnitude.  With the default base step the
    per-step drift increment and the diffusion increment ``2 sqrt(dt)`` both stay
    below 0.1, and halving ``base_step`` halves every step.

    The horizon is ``(8/beta) (log max(lam, 1) + log(1/tolerance)) + settle_window``.
    A run is declared converged when its count has been constant over the last
    ``settle_window`` time units.  For ``a > 0`` the terminal phase must also lie
    at least ``delta`` below the next multiple of ``4 pi``; the limit is an odd
    multiple of ``2 pi`` that may be approached from either side, and only the
    upper count boundary can still be crossed.
    """

    base_step: float = 2.5e-3
    tolerance: float = 1e-3
    settle_window: float = 10.0
    substep_ratio: float = 40.0
    delta: float = 0.1

    def __post_init__(self):
        for name in ("base_step", "tolerance", "settle_window", "substep_ratio", "delta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v}")
        if self.tolerance >= 1:
            raise DomainError("tolerance must be below 1")

    def horizon(self, beta: float, lam: float) -> float:
        return (8.0 / beta) * (math.log(max(lam, 1.0)) + math.log(1.0 / self.tolerance)) + self.settle_window

    def refined(self) -> "IntegratorConfig":
        return replace(self, base_step=0.5 * self.base_step)

    def schedule(self, t_end: float, drift_bound):
        """Start times and step sizes covering ``[0, t_end]`` exactly."""
        ts, dts = [], []
        t = 0.0
        h, cap = self.base_step, self.substep_ratio * self.base_step
        eps = 1e-12 * max(t_end, 1.0)
        while t_end - t > eps:
            d = drift_bound(t)
            dt = h if d * h <= cap else cap / d
            if t + dt > t_end - eps:
                dt = t_end - t
            ts.append(t)
            dts.append(dt)
            t += dt
        return np.array(ts), np.array(dts)


@dataclass
class DiffusionRun:
    """Terminal state of one simulated diffusion.

    ``terminal_value`` is the phase at the end of the horizon (the Riccati angle
    for ``kind="riccati"``).  ``last_change`` is the last time the integer count
    read off the phase changed.  ``path_t``/``path_x`` hold a downsampled path
    when one was requested.
    """

    kind: str
    params: ModelParams
    terminal_value: float
    converged: bool
    t_end: float
    n_steps: int
    last_change: float
    noise: NoiseDriver
    path_t: Optional[np.ndarray] = None
    path_x: Optional[np.ndarray] = None


@dataclass
class CountSample:
    """An observed value of a counting function."""

    value: int
    process: str  # "bess", "sine" or "bess_increment"
    params: ModelParams
    provenance: str  # "sde" or "matrix_oracle"
    converged: bool
    offset: Optional[float] = None
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("counts are nonnegative")


class BatchResult(NamedTuple):
    values: np.ndarray
    converged: np.ndarray
    terminal: np.ndarray


# --------------------------------------------------------------------------
# models


def _half_angle(x):
    """``sin(x/2)`` and ``sin(x)`` with the argument reduced modulo ``2 pi``.

    Exact zeros at the barriers keep fixed points fixed to the last bit.
    """
    j = np.rint(x / TWO_PI)
    r = x - j * TWO_PI
    sign = 1.0 - 2.0 * np.mod(j, 2.0)
    return sign * np.sin(0.5 * r), np.sin(r)


class _Phi:
    barrier = TWO_PI
    width = 1

    def __init__(self, beta, a, lams):
        self.beta = beta
        self.k_sin = 0.5 * beta * (a + 0.5)
        self.lams = np.asarray(lams, dtype=float).reshape(-1, 1)
        self.lam_max = float(self.lams.max(initial=0.0))
        self._static = abs(self.k_sin) + 0.5

    def drift_bound(self, t):
        return self.beta * self.lam_max * math.exp(-self.beta * t / 8.0) + self._static

    def step(self, t, dt, x, dw):
        s_half, s_full = _half_angle(x)
        force = self.beta * math.exp(-self.beta * t / 8.0) * self.lams
        return x + (self.k_sin * s_half + force + 0.5 * s_full) * dt + 2.0 * s_half * dw[0]

    @staticmethod
    def count(x):
        return np.floor(x / FOUR_PI)


class _Alpha:
    barrier = TWO_PI
    width = 2

    def __init__(self, beta, lams):
        self.beta = beta
        self.lams = np.asarray(lams, dtype=float).reshape(-1, 1)
        self.lam_max = float(self.lams.max(initial=0.0))

    def drift_bound(self, t):
        return 0.25 * self.beta * self.lam_max * math.exp(-0.25 * self.beta * t)

    def step(self, t, dt, x, dw):
        s_half, s_full = _half_angle(x)
        force = 0.25 * self.beta * math.exp(-0.25 * self.beta * t) * self.lams
        # Re[(e^{-i x} - 1)(dX + i dY)] = (cos x - 1) dX + sin x dY
        return x + force * dt - 2.0 * s_half * s_half * dw[0] + s_full * dw[1]

    @staticmethod
    def count(x):
        return np.rint(x / TWO_PI)


class _RiccatiAngle:
    barrier = HALF_PI
    width = 1

    def __init__(self, beta, a, scales):
        self.sigma = 2.0 / math.sqrt(beta)
        self.c = a + 2.0 / beta
        self.scales = np.asarray(scales, dtype=float).reshape(-1, 1)
        self.scale_max = float(self.scales.max(initial=0.0))
        self._static = 1.0 + 0.5 * abs(self.c) + self.sigma ** 2 * _RICCATI_TRIG_MAX

    def drift_bound(self, t):
        return self.scale_max * math.exp(-t) + self._static

    def step(self, t, dt, x, dw):
        s, c = np.sin(x), np.cos(x)
        sc = s * c
        drift = c * c + (math.exp(-t) * self.scales) * (s * s) - self.c * sc + self.sigma ** 2 * sc * c * c
        return x + drift * dt - self.sigma * sc * dw[0]

    @staticmethod
    def count(x):
        return np.floor(x / np.pi + 0.5)


def _integrate(model, x0, t_end, cfg, block, hook=None, record=False):
    ts, dts = cfg.schedule(t_end, model.drift_bound)
    sq = np.sqrt(dts)
    x = np.array(x0, dtype=float)
    barrier = model.barrier
    count = model.count(x)
    last = np.zeros_like(x)
    n = len(dts)
    path_t = path_x = None
    if record:
        stride = max(1, -(-n // (PATH_POINTS - 1)))
        path_t, path_x = [0.0], [x.copy()]
    pos = 0
    while pos < n:
        m = min(CHUNK_STEPS, n - pos)
        z = block.draw(m)
        for k in range(m):
            i = pos + k
            xn = model.step(ts[i], dts[i], x, sq[i] * z[k])
            xn = np.maximum(xn, barrier * np.floor(x / barrier))
            c = model.count(xn)
            changed = c != count
            if changed.any():
                last[changed] = ts[i] + dts[i]
                count = c
            x = xn
            if hook is not None:
                hook(ts[i] + dts[i], dts[i], x)
            if record and ((i + 1) % stride == 0 or i + 1 == n):
                path_t.append(ts[i] + dts[i])
                path_x.append(x.copy())
        pos += m
        if not np.all(np.isfinite(x)):
            raise IntegrationError(f"non-finite state before t={ts[pos - 1] + dts[pos - 1]:.6g}")
    out = {"x": x, "count": count, "last": last, "t_end": float(t_end), "n_steps": n}
    if record:
        out["path_t"] = np.array(path_t)
        out["path_x"] = np.stack(path_x, axis=-1)
    return out


def _phi_converged(x, last, t_end, a, cfg):
    ok = (t_end - last) >= cfg.settle_window
    if a > 0:
        ok &= np.mod(x, FOUR_PI) < FOUR_PI - cfg.delta
    return ok


def _resolve(cfg):
    return IntegratorConfig() if cfg is None else cfg


# --------------------------------------------------------------------------
# block kernels (module level so they can be shipped to worker processes)


def _phi_block(beta, a, lams, cfg, master_seed, indices, t_end=None, record=False):
    model = _Phi(beta, a, lams)
    if t_end is None:
        t_end = cfg.horizon(beta, model.lam_max)
    x0 = np.full((len(model.lams), len(indices)), TWO_PI)
    out = _integrate(model, x0, t_end, cfg, StreamBlock(master_seed, indices, 1), record=record)
    out["converged"] = _phi_converged(out["x"], out["last"], out["t_end"], a, cfg)
    return out


def _alpha_block(beta, lams, cfg, master_seed, indices, record=False):
    model = _Alpha(beta, lams)
    t_end = cfg.horizon(beta, model.lam_max)
    x0 = np.zeros((len(model.lams), len(indices)))
    out = _integrate(model, x0, t_end, cfg, StreamBlock(master_seed, indices, 2), record=record)
    out["converged"] = (out["t_end"] - out["last"]) >= cfg.settle_window
    return out


def _riccati_horizon(beta, scale, cfg):
    return 0.25 * beta * cfg.horizon(beta, math.sqrt(scale))


def _riccati_block(beta, a, scales, cfg, master_seed, indices, record=False):
    model = _RiccatiAngle(beta, a, scales)
    t_end = _riccati_horizon(beta, model.scale_max, cfg)
    x0 = np.zeros((len(model.scales), len(indices)))
    out = _integrate(model, x0, t_end, cfg, StreamBlock(master_seed, indices, 1), record=record)
    out["converged"] = (out["t_end"] - out["last"]) >= 0.25 * beta * cfg.settle_window
    return out


class _Oscillation:
    """Trapezoidal running integral of ``exp(i c phi)`` and its running sup modulus."""

    def __init__(self, c, x0):
        self.c = c
        self.f = np.exp(1j * c * x0[0])
        self.integral = np.zeros_like(self.f)
        self.sup = np.zeros(self.f.shape)

    def __call__(self, t, dt, x):
        f = np.exp(1j * self.c * x[0])
        self.integral += 0.5 * dt * (self.f + f)
        self.f = f
        np.maximum(self.sup, np.abs(self.integral), out=self.sup)


def _oscillation_block(beta, a, lam, c, T, cfg, master_seed, indices):
    model = _Phi(beta, a, [lam])
    x0 = np.full((1, len(indices)), TWO_PI)
    hook = _Oscillation(c, x0)
    _integrate(model, x0, T, cfg, StreamBlock(master_seed, indices, 1), hook=hook)
    return hook.sup


def _stack(results, key):
    return np.concatenate([r[key] for r in results], axis=-1)


# --------------------------------------------------------------------------
# single runs


def _single_run(kind, params, out, noise):
    kw = {}
    if "path_x" in out:
        kw = {"path_t": out["path_t"], "path_x": out["path_x"][0, 0]}
    return DiffusionRun(
        kind=kind,
        params=params,
        terminal_value=float(out["x"][0, 0]),
        converged=bool(out["converged"][0, 0]),
        t_end=out["t_end"],
        n_steps=out["n_steps"],
        last_change=float(out["last"][0, 0]),
        noise=noise,
        **kw,
    )


def simulate_phi(params: ModelParams, cfg: IntegratorConfig | None = None, noise: NoiseDriver | None = None,
                 record_path: bool = False) -> DiffusionRun:
    """Integrate the phase diffusion ``phi`` from ``2 pi`` to the horizon."""
    cfg = _resolve(cfg)
    noise = noise or NoiseDriver(0)
    out = _phi_block(params.beta, params.a, [params.lam], cfg, noise.master_seed, [noise.stream_index],
                     record=record_path)
    return _single_run("phi", params, out, noise)


def count_from_phi(run: DiffusionRun) -> CountSample:
    """Hard-edge count ``floor(phi(T) / 4 pi)`` read off a ``phi`` run.

    For ``a > 0`` the limit is an odd multiple of ``2 pi``, where the count also
    equals ``floor((phi - 2 pi) / 4 pi)``.  A terminal phase still below that
    multiple makes the two readings differ; the sample then carries a warning.
    """
    if run.kind != "phi":
        raise DomainError(f"expected a phi run, got {run.kind!r}")
    phi = run.terminal_value
    value = int(math.floor(phi / FOUR_PI))
    warnings = ()
    if run.params.a > 0 and int(math.floor((phi - TWO_PI) / FOUR_PI)) != value:
        warnings = ("terminal phase below its limiting odd multiple of 2 pi",)
    return CountSample(value, "bess", run.params, "sde", run.converged, warnings=warnings)


def simulate_alpha(lam: float, beta: float, cfg: IntegratorConfig | None = None,
                   noise: NoiseDriver | None = None, record_path: bool = False) -> DiffusionRun:
    """Integrate the bulk diffusion ``alpha_lam`` from 0.

    The returned run's ``params.a`` is a placeholder (0); the bulk process has
    no hard-edge parameter.
    """
    params = ModelParams(beta, 0.0, lam)
    cfg = _resolve(cfg)
    noise = noise or NoiseDriver(0)
    out = _alpha_block(beta, [lam], cfg, noise.master_seed, [noise.stream_index], record=record_path)
    return _single_run("alpha", params, out, noise)


def count_from_alpha(run: DiffusionRun) -> CountSample:
    """Sine-beta count: ``alpha(T) / 2 pi`` rounded to the nearest integer."""
    if run.kind != "alpha":
        raise DomainError(f"expected an alpha run, got {run.kind!r}")
    value = int(np.rint(run.terminal_value / TWO_PI))
    return CountSample(value, "sine", run.params, "sde", run.converged)


def increment_count(phi_lo, phi_hi):
    """``floor((phi_hi - phi_lo + 2 pi) / 4 pi)``, elementwise."""
    return np.floor((np.asarray(phi_hi) - np.asarray(phi_lo) + TWO_PI) / FOUR_PI)


def simulate_coupled_increment(params: ModelParams, x: float, cfg: IntegratorConfig | None = None,
                               noise: NoiseDriver | None = None):
    """Integrate ``phi`` at ``lam`` and ``lam + x`` against one Brownian path.

    Returns ``(run_lam, run_lam_plus_x, increment)`` where ``increment`` counts
    points in ``(lam, lam + x]``.
    """
    if not (math.isfinite(x) and x >= 0):
        raise DomainError(f"offset x must be nonnegative, got {x}")
    cfg = _resolve(cfg)
    noise = noise or NoiseDriver(0)
    out = _phi_block(params.beta, params.a, [params.lam, params.lam + x], cfg, noise.master_seed,
                     [noise.stream_index])
    runs = []
    for r, p in enumerate((params, params.with_lam(params.lam + x))):
        runs.append(DiffusionRun("psi_coupled", p, float(out["x"][r, 0]), bool(out["converged"][r, 0]),
                                 out["t_end"], out["n_steps"], float(out["last"][r, 0]), noise))
    value = int(increment_count(runs[0].terminal_value, runs[1].terminal_value))
    sample = CountSample(value, "bess_increment", params, "sde", runs[0].converged and runs[1].converged,
                         offset=float(x))
    return runs[0], runs[1], sample


def simulate_riccati(params: ModelParams, cfg: IntegratorConfig | None = None,
                     noise: NoiseDriver | None = None) -> CountSample:
    """Number of zeros of the restarted Riccati diffusion at eigenvalue scale ``params.lam``.

    The result is a sample of the hard-edge count at ``sqrt(params.lam)``; the
    returned sample's ``params.lam`` holds that square root.
    """
    cfg = _resolve(cfg)
    noise = noise or NoiseDriver(0)
    out = _riccati_block(params.beta, params.a, [params.lam], cfg, noise.master_seed, [noise.stream_index])
    value = int(out["count"][0, 0])
    return CountSample(value, "bess", params.with_lam(math.sqrt(params.lam)), "sde", bool(out["converged"][0, 0]))


def riccati_run(params: ModelParams, cfg: IntegratorConfig | None = None, noise: NoiseDriver | None = None,
                record_path: bool = False) -> DiffusionRun:
    """The Riccati angle run behind :func:`simulate_riccati`, for diagnostics."""
    cfg = _resolve(cfg)
    noise = noise or NoiseDriver(0)
    out = _riccati_block(params.beta, params.a, [params.lam], cfg, noise.master_seed, [noise.stream_index],
                         record=record_path)
    return _single_run("riccati", params, out, noise)


def _check_oscillation_regime(params, T):
    if params.lam <= 1:
        raise DomainError(f"oscillation regime needs lambda > 1, got {params.lam}")
    limit = (8.0 / params.beta) * math.log(params.lam)
    if T > limit:
        raise DomainError(f"T={T} exceeds (8/beta) log(lambda) = {limit:.6g}")


def oscillatory_statistic(params: ModelParams, c: float, T: float, noise: NoiseDriver | None = None,
                          cfg: IntegratorConfig | None = None, check_regime: bool = True) -> float:
    """``sup_{s <= T} |int_0^s exp(i c phi(t)) dt|`` along one simulated path."""
    if c == 0 or not math.isfinite(c):
        raise DomainError("c must be a nonzero real")
    if not (math.isfinite(T) and T > 0):
        raise DomainError("T must be positive")
    if check_regime:
        _check_oscillation_regime(params, T)
    cfg = _resolve(cfg)
    noise = noise or NoiseDriver(0)
    sup = _oscillation_block(params.beta, params.a, params.lam, c, T, cfg, noise.master_seed, [noise.stream_index])
    return float(sup[0])


# --------------------------------------------------------------------------
# batches


def _indices(n_samples, first_index):
    if n_samples < 0:
        raise DomainError("n_samples must be nonnegative")
    return np.arange(first_index, first_index + n_samples, dtype=np.int64)


def bess_counts(beta: float, a: float, lams, n_samples: int, master_seed: int,
                cfg: IntegratorConfig | None = None, first_index: int = 0) -> BatchResult:
    """Hard-edge counts at every ``lam`` in ``lams`` for ``n_samples`` streams.

    All ``lams`` share each stream's Brownian path, so row ``r`` column ``j`` of
    the result is the count at ``lams[r]`` of the ``j``-th sampled point
    configuration.
    """
    lams = [float(v) for v in np.atleast_1d(lams)]
    for v in lams:
        ModelParams(beta, a, v)
    cfg = _resolve(cfg)
    res = map_blocks(partial(_phi_block, beta, a, lams, cfg, master_seed), _indices(n_samples, first_index))
    if not res:
        empty = np.zeros((len(lams), 0))
        return BatchResult(empty.astype(np.int64), empty.astype(bool), empty)
    x = _stack(res, "x")
    conv = _stack(res, "converged")
    return BatchResult(np.floor(x / FOUR_PI).astype(np.int64), conv, x)


def bess_increments(beta: float, a: float, lam: float, xs, n_samples: int, master_seed: int,
                    cfg: IntegratorConfig | None = None, first_index: int = 0) -> BatchResult:
    """Counts in ``(lam, lam + x]`` for each offset in ``xs``, via shared-noise ``phi`` pairs.

    ``terminal`` holds the phase differences ``phi_{lam+x} - phi_lam``.
    """
    xs = [float(v) for v in np.atleast_1d(xs)]
    if any(not (math.isfinite(v) and v >= 0) for v in xs):
        raise DomainError("offsets must be nonnegative")
    lams = [lam] + [lam + v for v in xs]
    base = bess_counts(beta, a, lams, n_samples, master_seed, cfg, first_index)
    psi = base.terminal[1:] - base.terminal[:1]
    values = increment_count(base.terminal[:1], base.terminal[1:]).astype(np.int64)
    conv = base.converged[1:] & base.converged[:1]
    return BatchResult(values, conv, psi)


def sine_counts(beta: float, lams, n_samples: int, master_seed: int,
                cfg: IntegratorConfig | None = None, first_index: int = 0) -> BatchResult:
    """Sine-beta counts ``N(lam)`` for each ``lam``, coupled through one complex noise per stream."""
    if not (math.isfinite(beta) and beta > 0):
        raise DomainError(f"beta must be positive, got {beta}")
    lams = [float(v) for v in np.atleast_1d(lams)]
    if any(not (math.isfinite(v) and v >= 0) for v in lams):
        raise DomainError("lambda must be nonnegative")
    cfg = _resolve(cfg)
    res = map_blocks(partial(_alpha_block, beta, lams, cfg, master_seed), _indices(n_samples, first_index))
    if not res:
        empty = np.zeros((len(lams), 0))
        return BatchResult(empty.astype(np.int64), empty.astype(bool), empty)
    x = _stack(res, "x")
    return BatchResult(np.rint(x / TWO_PI).astype(np.int64), _stack(res, "converged"), x)


def riccati_counts(beta: float, a: float, scales, n_samples: int, master_seed: int,
                   cfg: IntegratorConfig | None = None, first_index: int = 0) -> BatchResult:
    """Riccati zero counts at each eigenvalue scale in ``scales`` (shared noise per stream)."""
    scales = [float(v) for v in np.atleast_1d(scales)]
    for v in scales:
        ModelParams(beta, a, v)
    cfg = _resolve(cfg)
    res = map_blocks(partial(_riccati_block, beta, a, scales, cfg, master_seed), _indices(n_samples, first_index))
    if not res:
        empty = np.zeros((len(scales), 0))
        return BatchResult(empty.astype(np.int64), empty.astype(bool), empty)
    return BatchResult(_stack(res, "count").astype(np.int64), _stack(res, "converged"), _stack(res, "x"))


def oscillation_samples(params: ModelParams, c: float, T: float, n_samples: int, master_seed: int,
                        cfg: IntegratorConfig | None = None, first_index: int = 0,
                        check_regime: bool = True) -> np.ndarray:
    """:func:`oscillatory_statistic` for ``n_samples`` consecutive streams."""
    if c == 0 or not math.isfinite(c):
        raise DomainError("c must be a nonzero real")
    if not (math.isfinite(T) and T > 0):
        raise DomainError("T must be positive")
    if check_regime:
        _check_oscillation_regime(params, T)
    cfg = _resolve(cfg)
    res = map_blocks(partial(_oscillation_block, params.beta, params.a, params.lam, c, T, cfg, master_seed),
                     _indices(n_samples, first_index))
    return np.concatenate(res) if res else np.zeros(0)
