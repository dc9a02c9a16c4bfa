"""Domain types and two-level operator algebra shared by all modules.

Unit convention: hbar = k_B = 1 and the system frequency sets the time
unit (omega_s = 1 makes all times dimensionless).  The sigma_z eigenbasis
is fixed by sigma_z|0> = |0>, sigma_z|1> = -|1>; the excited state of a
pure initial state maps to |0>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "SpinOperator",
    "DensityMatrix",
    "TimeGrid",
    "pauli_product",
    "expectation",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "IDENTITY",
    "OPERATORS",
]

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-12
_POSITIVITY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the two-level system and its bosonic bath.

    Attributes
    ----------
    omega_s : float
        Angular frequency of the two-level splitting (inverse-time units).
    gamma : float
        Dimensionless system-bath coupling strength.
    cutoff : float
        Bath cutoff frequency, same units as ``omega_s``.
    temperature : float
        Bath temperature as k_B*T/hbar, same units as ``omega_s``; 0 allowed.
    """

    omega_s: float = 1.0
    gamma: float = 0.1
    cutoff: float = 5.0
    temperature: float = 0.1

    def __post_init__(self) -> None:
        if not math.isfinite(self.omega_s):
            raise ValueError("omega_s must be finite")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if not self.cutoff > 0:
            raise ValueError("cutoff must be > 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class SpinOperator:
    """A 2x2 system operator decomposed over |0><0|, sigma_+, sigma_-, |1><1|.

    The matrix is [[c, a], [b, d]] in the sigma_z eigenbasis, with
    sigma_+ = |0><1| and sigma_- = |1><0|.
    """

    c: complex = 0.0
    a: complex = 0.0
    b: complex = 0.0
    d: complex = 0.0

    @classmethod
    def from_matrix(cls, m) -> "SpinOperator":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(c=complex(m[0, 0]), a=complex(m[0, 1]),
                   b=complex(m[1, 0]), d=complex(m[1, 1]))

    def matrix(self) -> np.ndarray:
        return np.array([[self.c, self.a], [self.b, self.d]], dtype=complex)

    def dagger(self) -> "SpinOperator":
        """Hermitian conjugate: (c, a, b, d) -> (conj c, conj b, conj a, conj d)."""
        c, a, b, d = self.c, self.a, self.b, self.d
        return SpinOperator(np.conj(c), np.conj(b), np.conj(a), np.conj(d))

    def __add__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(self.c + other.c, self.a + other.a,
                            self.b + other.b, self.d + other.d)

    def __sub__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(self.c - other.c, self.a - other.a,
                            self.b - other.b, self.d - other.d)

    def __mul__(self, scalar) -> "SpinOperator":
        s = complex(scalar)
        return SpinOperator(s * self.c, s * self.a, s * self.b, s * self.d)

    __rmul__ = __mul__

    @property
    def is_offdiagonal(self) -> bool:
        return self.c == 0 and self.d == 0

    def offdiagonal_part(self) -> "SpinOperator":
        return SpinOperator(0.0, self.a, self.b, 0.0)

    @property
    def z_coefficient(self) -> complex:
        """Weight of sigma_z in the (I, sigma_z, sigma_+, sigma_-) expansion."""
        return (self.c - self.d) / 2

    @property
    def identity_coefficient(self) -> complex:
        return (self.c + self.d) / 2

    def pauli_coefficients(self) -> tuple[complex, complex, complex, complex]:
        """Coefficients (alpha_x, alpha_y, alpha_z, alpha_I) over the Pauli basis."""
        ax = (self.a + self.b) / 2
        ay = 1j * (self.a - self.b) / 2
        return ax, ay, self.z_coefficient, self.identity_coefficient


SIGMA_X = SpinOperator(0.0, 1.0, 1.0, 0.0)
SIGMA_Y = SpinOperator(0.0, -1.0j, 1.0j, 0.0)
SIGMA_Z = SpinOperator(1.0, 0.0, 0.0, -1.0)
SIGMA_PLUS = SpinOperator(0.0, 1.0, 0.0, 0.0)
SIGMA_MINUS = SpinOperator(0.0, 0.0, 1.0, 0.0)
IDENTITY = SpinOperator(1.0, 0.0, 0.0, 1.0)

OPERATORS: dict[str, SpinOperator] = {
    "sx": SIGMA_X,
    "sy": SIGMA_Y,
    "sz": SIGMA_Z,
    "sp": SIGMA_PLUS,
    "sm": SIGMA_MINUS,
    "id": IDENTITY,
}


@dataclass(frozen=True)
class DensityMatrix:
    """Reduced 2x2 system state in the sigma_z eigenbasis.

    Validates unit trace, Hermiticity and positivity on construction.
    """

    rho00: complex
    rho01: complex
    rho10: complex
    rho11: complex

    def __post_init__(self) -> None:
        r00, r01, r10, r11 = (complex(self.rho00), complex(self.rho01),
                              complex(self.rho10), complex(self.rho11))
        if abs(r00.imag) > _HERM_TOL or abs(r11.imag) > _HERM_TOL:
            raise ValueError("populations must be real")
        if r00.real < -_POSITIVITY_TOL or r11.real < -_POSITIVITY_TOL:
            raise ValueError("populations must be nonnegative")
        if abs(r00 + r11 - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace must be 1, got {r00 + r11}")
        if abs(r10 - np.conj(r01)) > _HERM_TOL:
            raise ValueError("state must be Hermitian: rho10 == conj(rho01)")
        det = r00.real * r11.real - abs(r01) ** 2
        if det < -_POSITIVITY_TOL:
            raise ValueError(f"state must be positive, det = {det}")

    @classmethod
    def from_pure(cls, amp_excited: complex, amp_ground: complex) -> "DensityMatrix":
        """State |psi><psi| for |psi> = amp_excited|0> + amp_ground|1> (normalized)."""
        norm = abs(amp_excited) ** 2 + abs(amp_ground) ** 2
        if norm == 0:
            raise ValueError("amplitudes cannot both vanish")
        ae = complex(amp_excited) / math.sqrt(norm)
        ag = complex(amp_ground) / math.sqrt(norm)
        return cls(ae * np.conj(ae), ae * np.conj(ag), ag * np.conj(ae), ag * np.conj(ag))

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    def matrix(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01], [self.rho10, self.rho11]],
                        dtype=complex)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid [t_start, t_end] with step dividing the span."""

    t_start: float
    t_end: float
    step: float

    def __post_init__(self) -> None:
        if self.t_end < self.t_start:
            raise ValueError("t_end must be >= t_start")
        if not self.step > 0:
            raise ValueError("step must be > 0")
        span = self.t_end - self.t_start
        n = round(span / self.step)
        if span > 0 and abs(n * self.step - span) > 1e-9 * max(span, self.step):
            raise ValueError("span must be an integer multiple of step")

    @property
    def n_steps(self) -> int:
        return round((self.t_end - self.t_start) / self.step)

    def times(self) -> np.ndarray:
        return self.t_start + self.step * np.arange(self.n_steps + 1)


def pauli_product(A: SpinOperator, B: SpinOperator) -> SpinOperator:
    """Matrix product A @ B in decomposed form."""
    return SpinOperator(
        c=A.c * B.c + A.a * B.b,
        a=A.c * B.a + A.a * B.d,
        b=A.b * B.c + A.d * B.b,
        d=A.b * B.a + A.d * B.d,
    )


def expectation(A: SpinOperator, rho: DensityMatrix) -> complex:
    """Tr(A @ rho) = c*rho00 + a*rho10 + b*rho01 + d*rho11."""
    return (A.c * rho.rho00 + A.a * rho.rho10
            + A.b * rho.rho01 + A.d * rho.rho11)
