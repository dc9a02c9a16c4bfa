"""Closed-form state evolution and two-time correlation functions.

For a two-level system whose bath coupling commutes with the free
Hamiltonian, populations are conserved and the coherence decays as
exp(-F(t)) with F(t) = i*omega_s*t + Gamma(t).  Two-time correlators
<A(t1) B(t2)> (t1 >= t2) split into three closed-form cases by the
diagonal/off-diagonal structure of A and B:

* case 1 -- A off-diagonal, B = sigma_z: decays with Gamma(t1) only.
* case 2 -- A = sigma_z, B off-diagonal: frozen at its t2 value.
* case 3 -- both off-diagonal: picks up the cross-interval exponent
  integral_0^t1 Dtilde(tau, t2) dtau on top of -Gamma(t1)-Gamma(t2).

``cf_exact`` dispatches arbitrary operator pairs over these cases by
linearity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .kernels import KernelCache, cross_kernel_integral
from .model import DensityMatrix, SpinOperator, pauli_product, expectation

__all__ = [
    "ExactContext",
    "reduced_density",
    "expectation_single",
    "cf_case1",
    "cf_case2",
    "cf_case3",
    "cf_exact",
]


@dataclass(frozen=True)
class ExactContext:
    """Model parameters, kernel cache and initial state for the closed forms."""

    cache: KernelCache
    rho0: DensityMatrix

    def __post_init__(self) -> None:
        # the cache fixes the parameters; nothing else to cross-check
        if self.cache.n_nodes < 2:
            raise ValueError("kernel cache is empty")

    @property
    def params(self):
        return self.cache.params


def reduced_density(t: float, ctx: ExactContext) -> DensityMatrix:
    """State at time t: populations frozen, coherence damped by exp(-F(t))."""
    w = ctx.params.omega_s
    gam = float(ctx.cache.exponent(t))
    f = complex(0.0, w * t) + gam
    r = ctx.rho0
    return DensityMatrix(r.rho00, r.rho01 * cmath.exp(-f),
                         r.rho10 * cmath.exp(-f.conjugate()), r.rho11)


def expectation_single(A: SpinOperator, t1: float, ctx: ExactContext) -> complex:
    """<A(t1)> = e^{-Gamma(t1)} (a rho10 e^{i w t1} + b rho01 e^{-i w t1}) + c rho00 + d rho11."""
    w = ctx.params.omega_s
    decay = cmath.exp(-float(ctx.cache.exponent(t1)))
    osc = cmath.exp(1j * w * t1)
    r = ctx.rho0
    return (decay * (A.a * r.rho10 * osc + A.b * r.rho01 / osc)
            + A.c * r.rho00 + A.d * r.rho11)


def _require_offdiagonal(A: SpinOperator, name: str) -> None:
    if not A.is_offdiagonal:
        raise ValueError(f"{name} must be purely off-diagonal (c = d = 0)")


def _require_ordered(t1: float, t2: float) -> None:
    if t2 < 0 or t1 < t2:
        raise ValueError("correlation functions require t1 >= t2 >= 0")


def cf_case1(A: SpinOperator, t1: float, t2: float, ctx: ExactContext) -> complex:
    """<A(t1) sigma_z(t2)> for off-diagonal A; independent of t2."""
    _require_offdiagonal(A, "A")
    _require_ordered(t1, t2)
    w = ctx.params.omega_s
    decay = cmath.exp(-float(ctx.cache.exponent(t1)))
    osc = cmath.exp(1j * w * t1)
    r = ctx.rho0
    return decay * (-A.a * r.rho10 * osc + A.b * r.rho01 / osc)


def cf_case2(B: SpinOperator, t1: float, t2: float, ctx: ExactContext) -> complex:
    """<sigma_z(t1) B(t2)> for off-diagonal B; independent of t1."""
    _require_offdiagonal(B, "B")
    _require_ordered(t1, t2)
    w = ctx.params.omega_s
    decay = cmath.exp(-float(ctx.cache.exponent(t2)))
    osc = cmath.exp(1j * w * t2)
    r = ctx.rho0
    return decay * (B.a * r.rho10 * osc - B.b * r.rho01 / osc)


def _case3_core(A: SpinOperator, B: SpinOperator, s1: float, s2: float,
                ctx: ExactContext) -> complex:
    """Both-off-diagonal correlator with A at s1 and B at s2, any ordering."""
    w = ctx.params.omega_s
    exponent = (-float(ctx.cache.exponent(s1)) - float(ctx.cache.exponent(s2))
                + cross_kernel_integral(s1, s2, ctx.cache))
    osc = cmath.exp(1j * w * (s1 - s2))
    r = ctx.rho0
    bracket = A.a * B.b * r.rho00 * osc + A.b * B.a * r.rho11 / osc
    return cmath.exp(exponent) * bracket


def cf_case3(A: SpinOperator, B: SpinOperator, t1: float, t2: float,
             ctx: ExactContext) -> complex:
    """<A(t1) B(t2)> for both operators off-diagonal, t1 >= t2.

    The exponent is -Gamma(t1) - Gamma(t2) + integral_0^t1 Dtilde(tau, t2) dtau,
    the last term integrated by Simpson over the cache grid.
    """
    _require_offdiagonal(A, "A")
    _require_offdiagonal(B, "B")
    _require_ordered(t1, t2)
    return _case3_core(A, B, t1, t2, ctx)


def cf_exact(A: SpinOperator, B: SpinOperator, t1: float, t2: float,
             ctx: ExactContext) -> complex:
    """<A(t1) B(t2)> for arbitrary operators, dispatched by linearity.

    Decomposes A = A_off + az*sigma_z + aI*I (and likewise B) and sums the
    closed-form pieces.  Rejects t1 < t2: the reversed ordering has no
    derived form here.
    """
    _require_ordered(t1, t2)
    a_off, az, ai = A.offdiagonal_part(), A.z_coefficient, A.identity_coefficient
    b_off, bz, bi = B.offdiagonal_part(), B.z_coefficient, B.identity_coefficient
    sz0 = ctx.rho0.rho00 - ctx.rho0.rho11  # <sigma_z> is conserved

    total = 0.0 + 0.0j
    have_a = a_off.a != 0 or a_off.b != 0
    have_b = b_off.a != 0 or b_off.b != 0
    if have_a and have_b:
        total += cf_case3(a_off, b_off, t1, t2, ctx)
    if have_a and bz != 0:
        total += bz * cf_case1(a_off, t1, t2, ctx)
    if have_b and az != 0:
        total += az * cf_case2(b_off, t1, t2, ctx)
    if have_a and bi != 0:
        total += bi * expectation_single(a_off, t1, ctx)
    if have_b and ai != 0:
        total += ai * expectation_single(b_off, t2, ctx)
    total += az * bz
    total += az * bi * sz0 + ai * bz * sz0
    total += ai * bi
    return total
