"""Jacobi elliptic kernel.

Evaluates the complete elliptic integral of the first kind and the Jacobi
functions sn, cn, dn by the arithmetic-geometric-mean (AGM) descending-Landen
recursion, to near machine precision for modulus parameter m <= 0.9999.
Beyond that the kernel switches to the hyperbolic closed forms with a
first-order (1 - m) correction, since the AGM phase unwinding degrades as the
quarter period diverges.

Conventions: the argument is always the elliptic argument u (never the
amplitude), and m is the *parameter* (the squared modulus), so
sn(x, 0) = sin x and sn(x, 1) = tanh x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentPeriod, ModulusError, NoBracket

_AGM_CAP = 32          # quadratic convergence; 32 is far beyond need
_AGM_TOL = 1e-15       # relative gap at which the AGM is declared converged
_HYPERBOLIC_M = 0.9999 # switch point to the m -> 1 closed forms


def validate_modulus(m: float, *, pulse_train: bool = False) -> float:
    """Check a modulus parameter and return it as a float.

    With ``pulse_train=True`` the endpoints are rejected as well, since
    m = 0 carries no pulse structure and m = 1 is the localized-pulse limit.
    """
    m = float(m)
    if math.isnan(m) or not 0.0 <= m <= 1.0:
        raise ModulusError(f"modulus parameter must lie in [0, 1], got {m}")
    if pulse_train and not 0.0 < m < 1.0:
        raise ModulusError(
            f"pulse trains require 0 < m < 1 strictly, got {m}")
    return m


@dataclass(frozen=True)
class Modulus:
    """Validated modulus parameter m of the elliptic functions."""

    m: float

    def __post_init__(self):
        object.__setattr__(self, "m", validate_modulus(self.m))

    def __float__(self) -> float:
        return self.m


def _as_m(m) -> float:
    return validate_modulus(float(m))


@dataclass(frozen=True)
class EllipticTriple:
    """Values of (sn, cn, dn) at one point, with the quarter period K(m)."""

    x: float
    m: float
    sn: float
    cn: float
    dn: float
    big_k: float


def complete_K(m) -> float:
    """Complete elliptic integral of the first kind, K(m), via the AGM.

    Converges quadratically; the result carries relative error at the
    1e-15 level for 0 <= m < 1.  K diverges logarithmically at m = 1,
    which is reported as an error rather than infinity.
    """
    m = _as_m(m)
    if m == 1.0:
        raise DivergentPeriod("K(m) diverges logarithmically as m -> 1")
    if m == 0.0:
        return math.pi / 2.0
    a, b = 1.0, math.sqrt(1.0 - m)
    for _ in range(_AGM_CAP):
        if abs(a - b) <= _AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def _jacobi_agm(x: np.ndarray, m: float):
    """sn, cn, dn on an array by the descending-Landen value recursion.

    The forward pass builds the AGM ladder of means; the backward pass
    rebuilds the function values level by level.  Unlike the textbook
    phase (arcsin) recursion this keeps dn well conditioned everywhere.
    """
    mc = 1.0 - m
    means, geoms = [], []
    a = 1.0
    c = 0.5 * (1.0 + math.sqrt(mc))
    for _ in range(_AGM_CAP):
        means.append(a)
        mc = math.sqrt(mc)
        geoms.append(mc)
        c = 0.5 * (a + mc)
        if abs(a - mc) <= _AGM_TOL * a:
            break
        mc = a * mc
        a = c
    u = c * x
    sn = np.sin(u)
    cn = np.cos(u)
    dn = np.ones_like(u)
    # cot-based backward sweep; |sn| below the cutoff is exactly the
    # dn = 1, cn = +-1 lattice point to double precision
    nz = np.abs(sn) > 1e-75
    safe_sn = np.where(nz, sn, 1.0)
    cot = np.where(nz, cn / safe_sn, 0.0)
    cs = cot * c
    for b_n, g_n in zip(reversed(means), reversed(geoms)):
        cot = cs * cot
        cs = cs * dn
        dn = np.where(nz, (g_n + cot) / (b_n + cot), dn)
        cot = np.where(nz, cs / b_n, cot)
    amp = 1.0 / np.sqrt(cs * cs + 1.0)
    sn_rec = np.where(sn >= 0.0, amp, -amp)
    cn_rec = cs * sn_rec
    sn = np.where(nz, sn_rec, sn)
    cn = np.where(nz, cn_rec, cn)
    return sn, cn, dn


def _jacobi_hyperbolic(x: np.ndarray, m: float):
    """m -> 1 closed forms with the first-order (1 - m) correction.

    Valid while (1 - m) * e^(2|x|) stays small; adequate for arguments up to
    about one quarter period at the m > 0.9999 switch point.
    """
    m1 = 1.0 - m
    xc = np.clip(x, -50.0, 50.0)
    t = np.tanh(xc)
    s = 1.0 / np.cosh(xc)
    sh, ch = np.sinh(xc), np.cosh(xc)
    sn = t + 0.25 * m1 * (sh * ch - xc) * s * s
    cn = s - 0.25 * m1 * (sh * ch - xc) * t * s
    dn = s + 0.25 * m1 * (sh * ch + xc) * t * s
    return sn, cn, dn


def jacobi_arrays(x, m):
    """Vectorized sn(x, m), cn(x, m), dn(x, m) for real arguments.

    Returns three arrays shaped like ``x``.  Identity residuals
    |sn^2 + cn^2 - 1| and |dn^2 + m sn^2 - 1| stay below 1e-12 for
    m <= 0.9999.
    """
    m = _as_m(m)
    x = np.asarray(x, dtype=float)
    if m == 0.0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    if m == 1.0:
        xc = np.clip(x, -350.0, 350.0)
        sech = 1.0 / np.cosh(xc)
        return np.tanh(xc), sech, sech
    if m > _HYPERBOLIC_M:
        return _jacobi_hyperbolic(x, m)
    return _jacobi_agm(x, m)


def jacobi(x: float, m) -> EllipticTriple:
    """Evaluate one point, returning the triple together with K(m)."""
    m = _as_m(m)
    xs = np.asarray([float(x)])
    sn, cn, dn = jacobi_arrays(xs, m)
    big_k = math.inf if m == 1.0 else complete_K(m)
    return EllipticTriple(x=float(x), m=m, sn=float(sn[0]), cn=float(cn[0]),
                          dn=float(dn[0]), big_k=big_k)


def qtilde(m) -> float:
    """dn evaluated two thirds of the way to the quarter period.

    Decreases continuously from 1 at m = 0 to 0 at m = 1 and solves the
    quartic checked by :func:`qtilde_quartic_root`.
    """
    m = _as_m(m)
    if m == 0.0:
        return 1.0
    if m == 1.0:
        return 0.0
    u = 2.0 * complete_K(m) / 3.0
    return float(jacobi_arrays(np.asarray([u]), m)[2][0])


def _quartic(q: float, m: float) -> float:
    return q ** 4 + 2.0 * q ** 3 - 2.0 * (1.0 - m) * q - (1.0 - m)


def qtilde_quartic_root(m, xtol: float = 1e-14) -> float:
    """Unique root in [0, 1] of q^4 + 2q^3 - 2(1-m)q - (1-m) = 0.

    Solved by plain bisection after asserting a sign change over [0, 1];
    a missing bracket indicates an internal bug, not a bad input.
    """
    m = _as_m(m)
    if m == 0.0:
        return 1.0
    if m == 1.0:
        return 0.0
    lo, hi = 0.0, 1.0
    f_lo, f_hi = _quartic(lo, m), _quartic(hi, m)
    if f_lo > 0.0 or f_hi < 0.0:
        raise NoBracket(
            f"quartic has no sign change over [0, 1] at m={m}: "
            f"f(0)={f_lo}, f(1)={f_hi}")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if _quartic(mid, m) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
