"""Second-order evolution equations for one-time and two-time quantities.

Integrates, with a fixed-step classical Runge-Kutta scheme, the coupled
equations

    d<sx>/dt = -D(t) <sx> - w <sy>,   d<sy>/dt = -D(t) <sy> + w <sx>,
    d<sz>/dt = 0,

their two-time counterparts (where the pair (sx, sy) x (sx, sy) couples
through the cross kernel Dtilde(t1, t2)), and the time-local master
equation  drho/dt = -i w/2 [sz, rho] - D(t)/2 (rho - sz rho sz).

Coefficient substitution is controlled by ``Mode``:

* ``NM_FULL``   -- D(t1) and Dtilde(t1, t2) from the kernel cache.
* ``NM_QRT``    -- D(t1) kept, Dtilde forced to zero (the regression-theorem
                   ansatz, wrong at finite t2).
* ``MARKOVIAN`` -- constant D_inf and no cross kernel.
* ``EXACT``     -- bypasses the integrator and evaluates the closed forms.

Coefficients are read at full and half steps, so the cache grid step should
divide half the integrator step.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import exact as _exact
from .kernels import KernelCache, markovian_rate
from .model import (DensityMatrix, ModelParams, SpinOperator, TimeGrid,
                    SIGMA_X, SIGMA_Y, SIGMA_Z, expectation, pauli_product)

__all__ = [
    "Mode",
    "SingleTimeTrajectory",
    "CfTrajectory",
    "evolve_single",
    "evolve_two_time",
    "equal_time_value",
    "evolve_master",
    "two_time_trajectory",
]

_T_ALIGN = 1e-9


class Mode(enum.Enum):
    """Coefficient substitution mode for the evolution equations."""

    NM_FULL = "nm-full"
    NM_QRT = "nm-qrt"
    MARKOVIAN = "markovian"
    EXACT = "exact"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> "Mode":
        for m in cls:
            if m.value == label:
                return m
        raise ValueError(f"unknown mode {label!r}; expected one of "
                         f"{[m.value for m in cls]}")


@dataclass(frozen=True)
class SingleTimeTrajectory:
    """<sx>, <sy>, <sz> sampled on a uniform grid."""

    mode: Mode
    times: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


@dataclass(frozen=True)
class CfTrajectory:
    """One two-time correlator <A(t1) B(t2)> over t1 at fixed t2."""

    label_a: str
    label_b: str
    t2: float
    mode: Mode
    times: np.ndarray
    values: np.ndarray


def _rate_table(cache: KernelCache, mode: Mode, t_start: float,
                step: float, n_steps: int) -> list[float]:
    """D at t_start + j*step/2 for j = 0..2n (constant for Markovian mode)."""
    if mode is Mode.MARKOVIAN:
        return [markovian_rate(cache.params)] * (2 * n_steps + 1)
    ts = t_start + 0.5 * step * np.arange(2 * n_steps + 1)
    return np.asarray(cache.rate(ts), dtype=float).tolist()


def _cross_table(cache: KernelCache, mode: Mode, t2: float, t_start: float,
                 step: float, n_steps: int) -> list[complex]:
    """Dtilde(t1, t2) on the half-step grid; identically zero unless NM_FULL."""
    if mode is not Mode.NM_FULL:
        return [0.0j] * (2 * n_steps + 1)
    ts = t_start + 0.5 * step * np.arange(2 * n_steps + 1)
    vals = 4.0 * (np.asarray(cache.antiderivative(ts), dtype=complex)
                  - np.asarray(cache.antiderivative_signed(ts - t2), dtype=complex))
    return vals.tolist()


def _check_grid(grid: TimeGrid, cache: KernelCache) -> None:
    tol = _T_ALIGN * max(1.0, cache.t_max)
    if grid.t_start < -tol or grid.t_end > cache.t_max + tol:
        raise ValueError(
            f"time grid [{grid.t_start}, {grid.t_end}] exceeds cached range "
            f"[0, {cache.t_max}]")


def _markovian_expectation(A: SpinOperator, t: float, rho0: DensityMatrix,
                           params: ModelParams) -> complex:
    """Single-time value with the constant-rate (Markovian) coherence decay."""
    rate = markovian_rate(params)
    osc = cmath.exp(1j * params.omega_s * t)
    decay = math.exp(-rate * t)
    return (decay * (A.a * rho0.rho10 * osc + A.b * rho0.rho01 / osc)
            + A.c * rho0.rho00 + A.d * rho0.rho11)


def equal_time_value(A: SpinOperator, B: SpinOperator, t2: float,
                     rho0: DensityMatrix, mode: Mode, cache: KernelCache,
                     markov_seed: str = "markov") -> complex:
    """Initial condition <A(t2) B(t2)> = <(A B)(t2)>.

    Evaluated through the exact state for the non-Markovian modes; the
    Markovian mode seeds from its own constant-rate evolution unless
    ``markov_seed="exact"`` is requested.
    """
    prod = pauli_product(A, B)
    if mode is Mode.MARKOVIAN and markov_seed != "exact":
        return _markovian_expectation(prod, t2, rho0, cache.params)
    ctx = _exact.ExactContext(cache=cache, rho0=rho0)
    return _exact.expectation_single(prod, t2, ctx)


# ---------------------------------------------------------------------------
# fixed-step RK4 integrators (plain-python loops over complex scalars)
# ---------------------------------------------------------------------------

def _integrate_pair(x0: complex, y0: complex, w: float, d_tab: list[float],
                    h: float, n_steps: int):
    """RK4 for dx = -D x - w y, dy = -D y + w x with tabulated D."""
    xs = [x0]
    ys = [y0]
    x, y = x0, y0
    for k in range(n_steps):
        j = 2 * k
        d0, dm, d1 = d_tab[j], d_tab[j + 1], d_tab[j + 2]
        k1x = -d0 * x - w * y
        k1y = -d0 * y + w * x
        ax, ay = x + 0.5 * h * k1x, y + 0.5 * h * k1y
        k2x = -dm * ax - w * ay
        k2y = -dm * ay + w * ax
        bx, by = x + 0.5 * h * k2x, y + 0.5 * h * k2y
        k3x = -dm * bx - w * by
        k3y = -dm * by + w * bx
        cx, cy = x + h * k3x, y + h * k3y
        k4x = -d1 * cx - w * cy
        k4y = -d1 * cy + w * cx
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        xs.append(x)
        ys.append(y)
    return np.array(xs, dtype=complex), np.array(ys, dtype=complex)


def _integrate_case3(y0: tuple[complex, complex, complex, complex], w: float,
                     d_tab: list[float], dt_tab: list[complex], h: float,
                     n_steps: int) -> np.ndarray:
    """RK4 for the coupled (xx, xy, yx, yy) system with cross coupling."""

    def rhs(d, c, xx, xy, yx, yy):
        return (-d * xx - w * yx + c * yy,
                -d * xy - w * yy - c * yx,
                -d * yx + w * xx - c * xy,
                -d * yy + w * xy + c * xx)

    out = np.empty((n_steps + 1, 4), dtype=complex)
    xx, xy, yx, yy = y0
    out[0] = y0
    for k in range(n_steps):
        j = 2 * k
        d0, dm, d1 = d_tab[j], d_tab[j + 1], d_tab[j + 2]
        c0, cm, c1 = dt_tab[j], dt_tab[j + 1], dt_tab[j + 2]
        k1 = rhs(d0, c0, xx, xy, yx, yy)
        k2 = rhs(dm, cm, xx + 0.5 * h * k1[0], xy + 0.5 * h * k1[1],
                 yx + 0.5 * h * k1[2], yy + 0.5 * h * k1[3])
        k3 = rhs(dm, cm, xx + 0.5 * h * k2[0], xy + 0.5 * h * k2[1],
                 yx + 0.5 * h * k2[2], yy + 0.5 * h * k2[3])
        k4 = rhs(d1, c1, xx + h * k3[0], xy + h * k3[1],
                 yx + h * k3[2], yy + h * k3[3])
        xx += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        xy += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        yx += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        yy += h / 6.0 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
        out[k + 1] = (xx, xy, yx, yy)
    return out


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def evolve_single(rho0: DensityMatrix, grid: TimeGrid, mode: Mode,
                  cache: KernelCache) -> SingleTimeTrajectory:
    """Single-time <sx>, <sy>, <sz> over the grid.

    Modes NM_FULL and NM_QRT share the same single-time equation; the
    Markovian mode replaces D(t) by its long-time limit; EXACT evaluates the
    closed form instead of integrating.
    """
    _check_grid(grid, cache)
    times = grid.times()
    sz0 = complex(expectation(SIGMA_Z, rho0))
    if mode is Mode.EXACT:
        ctx = _exact.ExactContext(cache=cache, rho0=rho0)
        sx = np.array([_exact.expectation_single(SIGMA_X, t, ctx) for t in times])
        sy = np.array([_exact.expectation_single(SIGMA_Y, t, ctx) for t in times])
    else:
        d_tab = _rate_table(cache, mode, grid.t_start, grid.step, grid.n_steps)
        sx, sy = _integrate_pair(complex(expectation(SIGMA_X, rho0)),
                                 complex(expectation(SIGMA_Y, rho0)),
                                 cache.params.omega_s, d_tab, grid.step,
                                 grid.n_steps)
    sz = np.full(times.shape, sz0, dtype=complex)
    return SingleTimeTrajectory(mode=mode, times=times, sx=sx, sy=sy, sz=sz)


_PAULI_NAMES = {"sx": SIGMA_X, "sy": SIGMA_Y, "sz": SIGMA_Z}


def _pauli_name(op: SpinOperator) -> str | None:
    for name, ref in _PAULI_NAMES.items():
        if (op.c, op.a, op.b, op.d) == (ref.c, ref.a, ref.b, ref.d):
            return name
    return None


def evolve_two_time(A: SpinOperator, B: SpinOperator, t2: float,
                    grid: TimeGrid, mode: Mode, rho0: DensityMatrix,
                    cache: KernelCache,
                    markov_seed: str = "markov") -> CfTrajectory:
    """<A(t1) B(t2)> over t1 in the grid (which must start at t2).

    A and B must be single Pauli operators; reduce general operators by
    linearity (see ``two_time_trajectory``).  The (sx, sy) x (sx, sy)
    correlators are integrated as the coupled four-component system even
    when only one is requested.
    """
    if abs(grid.t_start - t2) > _T_ALIGN * max(1.0, abs(t2)):
        raise ValueError("t1 grid must start at t2")
    if t2 < 0:
        raise ValueError("t2 must be >= 0")
    _check_grid(grid, cache)
    name_a, name_b = _pauli_name(A), _pauli_name(B)
    if name_a is None or name_b is None:
        raise ValueError("evolve_two_time supports sx, sy, sz only; "
                         "decompose general operators by linearity")
    times = grid.times()

    if mode is Mode.EXACT:
        ctx = _exact.ExactContext(cache=cache, rho0=rho0)
        values = np.array([_exact.cf_exact(A, B, float(t1), t2, ctx)
                           for t1 in times])
        return CfTrajectory(name_a, name_b, t2, mode, times, values)

    if name_a == "sz":
        # frozen: d<sz(t1) B(t2)>/dt1 = 0
        v0 = equal_time_value(SIGMA_Z, B, t2, rho0, mode, cache, markov_seed)
        values = np.full(times.shape, v0, dtype=complex)
    elif name_b == "sz":
        x0 = equal_time_value(SIGMA_X, SIGMA_Z, t2, rho0, mode, cache, markov_seed)
        y0 = equal_time_value(SIGMA_Y, SIGMA_Z, t2, rho0, mode, cache, markov_seed)
        d_tab = _rate_table(cache, mode, t2, grid.step, grid.n_steps)
        xs, ys = _integrate_pair(x0, y0, cache.params.omega_s, d_tab,
                                 grid.step, grid.n_steps)
        values = xs if name_a == "sx" else ys
    else:
        eq = {}
        for na in ("sx", "sy"):
            for nb in ("sx", "sy"):
                eq[na + nb] = equal_time_value(_PAULI_NAMES[na], _PAULI_NAMES[nb],
                                               t2, rho0, mode, cache, markov_seed)
        d_tab = _rate_table(cache, mode, t2, grid.step, grid.n_steps)
        dt_tab = _cross_table(cache, mode, t2, t2, grid.step, grid.n_steps)
        sol = _integrate_case3((eq["sxsx"], eq["sxsy"], eq["sysx"], eq["sysy"]),
                               cache.params.omega_s, d_tab, dt_tab,
                               grid.step, grid.n_steps)
        col = {"sxsx": 0, "sxsy": 1, "sysx": 2, "sysy": 3}[name_a + name_b]
        values = sol[:, col]
    return CfTrajectory(name_a, name_b, t2, mode, times, values)


def evolve_master(rho0: DensityMatrix, grid: TimeGrid, mode: Mode,
                  cache: KernelCache) -> list[DensityMatrix]:
    """Integrate the time-local master equation; populations stay frozen.

    Only the coherence obeys an equation of motion,
    drho01/dt = -(i w + D(t)) rho01, with the mode-substituted rate.
    """
    _check_grid(grid, cache)
    if mode is Mode.EXACT:
        ctx = _exact.ExactContext(cache=cache, rho0=rho0)
        return [_exact.reduced_density(float(t), ctx) for t in grid.times()]
    d_tab = _rate_table(cache, mode, grid.t_start, grid.step, grid.n_steps)
    w = cache.params.omega_s
    h = grid.step
    r01 = complex(rho0.rho01)
    out = [rho0]
    for k in range(grid.n_steps):
        j = 2 * k
        lam0 = -(1j * w + d_tab[j])
        lamm = -(1j * w + d_tab[j + 1])
        lam1 = -(1j * w + d_tab[j + 2])
        k1 = lam0 * r01
        k2 = lamm * (r01 + 0.5 * h * k1)
        k3 = lamm * (r01 + 0.5 * h * k2)
        k4 = lam1 * (r01 + h * k3)
        r01 += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(DensityMatrix(rho0.rho00, r01, r01.conjugate(), rho0.rho11))
    return out


def two_time_trajectory(A: SpinOperator, B: SpinOperator, t2: float,
                        grid: TimeGrid, mode: Mode, rho0: DensityMatrix,
                        cache: KernelCache, markov_seed: str = "markov",
                        label_a: str = "A", label_b: str = "B") -> CfTrajectory:
    """<A(t1) B(t2)> for arbitrary operators, assembled by linearity.

    Expands A and B over (sx, sy, sz, I) and combines Pauli-pair
    trajectories from ``evolve_two_time`` with the single-time pieces.
    Identity components use the closed-form single-time values of the mode
    (exact decay for the non-Markovian modes, constant-rate decay for the
    Markovian one).
    """
    if mode is Mode.EXACT:
        ctx = _exact.ExactContext(cache=cache, rho0=rho0)
        times = grid.times()
        values = np.array([_exact.cf_exact(A, B, float(t1), t2, ctx)
                           for t1 in times])
        return CfTrajectory(label_a, label_b, t2, mode, times, values)

    ax, ay, az, ai = A.pauli_coefficients()
    bx, by, bz, bi = B.pauli_coefficients()
    times = grid.times()
    values = np.zeros(times.shape, dtype=complex)

    def single_time(op: SpinOperator, t: float) -> complex:
        if mode is Mode.MARKOVIAN:
            return _markovian_expectation(op, t, rho0, cache.params)
        ctx = _exact.ExactContext(cache=cache, rho0=rho0)
        return _exact.expectation_single(op, t, ctx)

    # (sx, sy) x (sx, sy): one shared run of the coupled system
    pair_coeffs = {("sx", "sx"): ax * bx, ("sx", "sy"): ax * by,
                   ("sy", "sx"): ay * bx, ("sy", "sy"): ay * by}
    if any(v != 0 for v in pair_coeffs.values()):
        eq = {na + nb: equal_time_value(_PAULI_NAMES[na], _PAULI_NAMES[nb], t2,
                                        rho0, mode, cache, markov_seed)
              for na in ("sx", "sy") for nb in ("sx", "sy")}
        d_tab = _rate_table(cache, mode, t2, grid.step, grid.n_steps)
        dt_tab = _cross_table(cache, mode, t2, t2, grid.step, grid.n_steps)
        sol = _integrate_case3((eq["sxsx"], eq["sxsy"], eq["sysx"], eq["sysy"]),
                               cache.params.omega_s, d_tab, dt_tab,
                               grid.step, grid.n_steps)
        cols = {("sx", "sx"): 0, ("sx", "sy"): 1, ("sy", "sx"): 2, ("sy", "sy"): 3}
        for key, coeff in pair_coeffs.items():
            if coeff != 0:
                values += coeff * sol[:, cols[key]]

    # (sx, sy) x sz
    if bz != 0 and (ax != 0 or ay != 0):
        x0 = equal_time_value(SIGMA_X, SIGMA_Z, t2, rho0, mode, cache, markov_seed)
        y0 = equal_time_value(SIGMA_Y, SIGMA_Z, t2, rho0, mode, cache, markov_seed)
        d_tab = _rate_table(cache, mode, t2, grid.step, grid.n_steps)
        xs, ys = _integrate_pair(x0, y0, cache.params.omega_s, d_tab,
                                 grid.step, grid.n_steps)
        values += bz * (ax * xs + ay * ys)

    # sz x (sx, sy): frozen at the t2 value
    if az != 0 and (bx != 0 or by != 0):
        op = SpinOperator(0.0, bx - 1j * by, bx + 1j * by, 0.0)
        values += az * equal_time_value(SIGMA_Z, op, t2, rho0, mode, cache,
                                        markov_seed)

    # (sx, sy) x I: single-time evolution of A's off-diagonal part
    if bi != 0 and (ax != 0 or ay != 0):
        op = SpinOperator(0.0, ax - 1j * ay, ax + 1j * ay, 0.0)
        values += bi * np.array([single_time(op, float(t)) for t in times])

    # I x (sx, sy): frozen single-time value of B at t2
    if ai != 0 and (bx != 0 or by != 0):
        op = SpinOperator(0.0, bx - 1j * by, bx + 1j * by, 0.0)
        values += ai * single_time(op, t2)

    sz0 = complex(expectation(SIGMA_Z, rho0))
    values += az * bz + (az * bi + ai * bz) * sz0 + ai * bi
    return CfTrajectory(label_a, label_b, t2, mode, times, values)
