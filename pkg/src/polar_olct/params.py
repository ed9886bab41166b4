"""Parameter bundles for the offset transforms.

A bundle is the matrix (a, b; c, d) with det = 1 plus the spatial offset tau
and the modulation offset eta.  All angle/magnitude/phase quantities the
kernels need are derived here once.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = ["KernelParams", "OffsetParams", "InverseParams"]

_DET_TOL = 1e-12


@dataclass(frozen=True)
class KernelParams:
    """Raw kernel bundle; b may have either sign (internal inverse use)."""

    a: float
    b: float
    c: float
    d: float
    tau: tuple[float, float] = (0.0, 0.0)
    eta: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "tau", (float(self.tau[0]), float(self.tau[1])))
        object.__setattr__(self, "eta", (float(self.eta[0]), float(self.eta[1])))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > _DET_TOL:
            raise ValueError(f"parameter matrix must have unit determinant, got {det!r}")
        if self.b == 0.0:
            raise ValueError("b = 0 is outside the supported branch")

    # -- derived scalars -------------------------------------------------

    @property
    def mu1(self) -> float:
        return math.hypot(*self.tau)

    @property
    def shift_vec(self) -> tuple[float, float]:
        """d*tau - b*eta, the vector whose magnitude is mu2."""
        return (
            self.d * self.tau[0] - self.b * self.eta[0],
            self.d * self.tau[1] - self.b * self.eta[1],
        )

    @property
    def mu2(self) -> float:
        return math.hypot(*self.shift_vec)

    @property
    def phi1(self) -> float:
        # atan2 resolves the tau2 = 0 coordinate singularity of tan phi1
        return math.atan2(self.tau[0], self.tau[1])

    @property
    def phi2(self) -> float:
        v = self.shift_vec
        return math.atan2(v[0], v[1])

    @property
    def ell1(self) -> complex:
        return cmath.exp(1j * self.d * self.mu1 ** 2 / self.b)

    @property
    def ell2(self) -> complex:
        return cmath.exp(-1j * self.a * self.mu2 ** 2 / self.b)

    @property
    def sigma(self) -> complex:
        return self.ell1 * self.ell2

    @property
    def has_offsets(self) -> bool:
        return self.mu1 != 0.0 or self.mu2 != 0.0


@dataclass(frozen=True)
class OffsetParams(KernelParams):
    """Public forward bundle: unit determinant and b > 0 enforced."""

    def __post_init__(self):
        super().__post_init__()
        if self.b <= 0.0:
            raise ValueError("forward transform requires b > 0")

    def inverse(self) -> "InverseParams":
        return InverseParams(self)


@dataclass(frozen=True)
class InverseParams:
    """The inverse bundle (d, -b; -c, a) with offsets xi and gamma."""

    source: OffsetParams

    @property
    def matrix(self) -> tuple[float, float, float, float]:
        s = self.source
        return (s.d, -s.b, -s.c, s.a)

    @property
    def xi(self) -> tuple[float, float]:
        s = self.source
        return (s.b * s.eta[0] - s.d * s.tau[0], s.b * s.eta[1] - s.d * s.tau[1])

    @property
    def gamma(self) -> tuple[float, float]:
        s = self.source
        return (s.c * s.tau[0] - s.a * s.eta[0], s.c * s.tau[1] - s.a * s.eta[1])

    def bundle(self) -> KernelParams:
        m = self.matrix
        return KernelParams(m[0], m[1], m[2], m[3], self.xi, self.gamma)

    def twice(self) -> KernelParams:
        """Applying the inverse map to the inverse bundle; recovers the
        forward parameters exactly."""
        m = self.matrix
        b = self.bundle()
        xi2 = (m[1] * b.eta[0] - m[3] * b.tau[0], m[1] * b.eta[1] - m[3] * b.tau[1])
        ga2 = (m[2] * b.tau[0] - m[0] * b.eta[0], m[2] * b.tau[1] - m[0] * b.eta[1])
        return KernelParams(m[3], -m[1], -m[2], m[0], xi2, ga2)
