"""Angle and Green functions on the upper half plane.

The propagator angle between two points z, w of the closed upper half
plane H is

    phi(z, w) = arg((z - w)(z - wbar))   reduced to [0, 2*pi),

the angle at z between the geodesics to w and to its mirror image wbar.
Its exterior differential d phi is a single-valued 1-form even though
phi itself jumps across the branch cut.  The companion Green function

    psi(z, w) =. log |z - w| - log |z - wbar|

vanishes when w sits on the real axis (Dirichlet), while d phi has no
normal component there (Neumann): moving a ground point vertically does
not change the angle to first order.

Since Q(z, w) = (z - w)(z - wbar) is holomorphic in z,

    dphi = Im(A) dx_z + Re(A) dy_z - Im(A) dx_w + 2 y_w Im(1/Q) dy_w,

with A = (2z - w - wbar)/Q.  The x_w coefficient is minus the x_z one
because phi is invariant under simultaneous real translation of both
points.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class UHPoint:
    """A point x + i y of the closed upper half plane."""

    x: float
    y: float

    def __post_init__(self):
        if self.y < 0:
            raise DomainError(f"point {self.x}+{self.y}i lies below the real axis")

    @property
    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    @property
    def interior(self) -> bool:
        return self.y > 0


@dataclass(frozen=True)
class AngleGradient:
    """Partial derivatives of phi(z, w) in (x_z, y_z, x_w, y_w)."""

    d_zx: float
    d_zy: float
    d_wx: float
    d_wy: float


def _as_complex(p) -> complex:
    if isinstance(p, UHPoint):
        return p.as_complex
    return complex(p)


def _check_pair(z: complex, w: complex, need_interior_z: bool = True):
    if z.imag < 0 or w.imag < 0:
        raise DomainError("points must lie in the closed upper half plane")
    if need_interior_z and z.imag <= 0:
        raise DomainError("z must be interior (Im z > 0)")
    if z == w:
        raise DomainError("phi is undefined at z = w")
    if z == w.conjugate():
        raise DomainError("phi is undefined at z = conj(w)")


def angle_phi(z, w) -> float:
    """Angle phi(z, w) in [0, 2*pi).

    z must be interior; w may sit anywhere in the closed half plane
    except at z or its mirror image.
    """
    zc, wc = _as_complex(z), _as_complex(w)
    _check_pair(zc, wc)
    val = cmath.phase((zc - wc) * (zc - wc.conjugate())) % TWO_PI
    # the mod of a tiny negative phase can round up to exactly 2*pi
    return 0.0 if val >= TWO_PI else val


def dphi(z, w) -> AngleGradient:
    """All four first derivatives of phi; exact rational expressions.

    w may be a boundary (ground) point: the y_w derivative then
    vanishes identically, which is the Neumann condition.
    """
    zc, wc = _as_complex(z), _as_complex(w)
    _check_pair(zc, wc)
    q = (zc - wc) * (zc - wc.conjugate())
    a = (2.0 * zc - wc - wc.conjugate()) / q
    d_wy = 2.0 * wc.imag * (1.0 / q).imag
    return AngleGradient(d_zx=a.imag, d_zy=a.real, d_wx=-a.imag, d_wy=d_wy)


def green_psi(z, w) -> float:
    """Dirichlet Green function log|z - w| - log|z - wbar| (<= 0)."""
    zc, wc = _as_complex(z), _as_complex(w)
    if zc.imag < 0 or wc.imag < 0:
        raise DomainError("points must lie in the closed upper half plane")
    if zc == wc:
        raise DomainError("psi is undefined at z = w")
    if zc.imag == 0 and wc.imag == 0:
        raise DomainError("psi needs at least one interior point")
    return math.log(abs(zc - wc)) - math.log(abs(zc - wc.conjugate()))


# ---------------------------------------------------------------------------
# Vectorized kernels used by the weight integrator.  z is always a batch of
# interior points; w may be a batch or a (possibly real) scalar.
# ---------------------------------------------------------------------------

def dphi_arrays(z: np.ndarray, w):
    """(d_zx, d_zy) arrays of phi(z, w) for complex array z."""
    q = (z - w) * (z - np.conjugate(w))
    a = (2.0 * z - w - np.conjugate(w)) / q
    return a.imag, a.real


def dphi_target_arrays(z: np.ndarray, w):
    """(d_wx, d_wy) arrays; w interior (aerial target)."""
    q = (z - w) * (z - np.conjugate(w))
    a = (2.0 * z - w - np.conjugate(w)) / q
    d_wy = 2.0 * np.imag(w) * (1.0 / q).imag
    return -a.imag, d_wy


def dphi_ground_x_array(z: np.ndarray, t):
    """d_wx array for a real target t (moving boundary point)."""
    q = (z - t) * (z - t)
    a = (2.0 * z - 2.0 * t) / q
    return -a.imag
