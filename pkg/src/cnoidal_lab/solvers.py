"""Constraint solvers mapping medium parameters to certified pulse-train families.

Every solver enforces the family's closed-form coefficient relations, the
probability-conservation constraint that pins the remaining free parameter,
and the positivity conditions on the field intensities.  Solutions are
certified against the reduced equations before being returned; a solver never
hands back an uncertified set.

Conventions: c = 1 and all propagation constants are dimensionless inputs.
Field amplitudes are taken real positive; the atomic coefficients inherit
their phases from the closed-form relations (b_e, b_v purely imaginary, b_f
real negative, up to the phase of b_i), which makes outputs reproducible
bit for bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from .config import get_precision
from .elliptic import complete_K, qtilde, validate_modulus
from .errors import (
    CertificationError,
    DegenerateModulus,
    DegenerateScheme,
    InfeasibleFraction,
    InvalidRatio,
    OrderingViolation,
    PulseLimit,
    SchemeMismatch,
    UnitOccupancy,
)

_REL_TOL = 1e-12       # tolerance for "equal" propagation constants
_M_CAP = 1.0 - 1e-12   # modulus ceiling used by window scans and inversion


class Scheme(Enum):
    TWO_LEVEL = "two-level"
    V = "v"
    LAMBDA = "lambda"
    N = "n"


class Variant(Enum):
    STANDARD = "standard"
    EXCHANGED = "exchanged"


@dataclass(frozen=True)
class MediumSpec:
    """Level scheme plus its positive propagation constants.

    ``mu_v`` is required for the N scheme, fixed to ``mu_e`` for the
    two-level and V schemes, and optional for the lambda scheme where it
    plays the role of the second lower-transition constant in the pure
    cnoidal reduction.
    """

    scheme: Scheme
    mu_e: float
    mu_f: float
    mu_v: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        for name in ("mu_e", "mu_f"):
            val = float(getattr(self, name))
            if not val > 0.0:
                raise ValueError(f"{name} must be positive, got {val}")
            object.__setattr__(self, name, val)
        mu_v = self.mu_v
        if mu_v is not None:
            mu_v = float(mu_v)
            if not mu_v > 0.0:
                raise ValueError(f"mu_v must be positive, got {mu_v}")
        if self.scheme is Scheme.TWO_LEVEL:
            if abs(self.mu_f - self.mu_e) > _REL_TOL * self.mu_e:
                raise SchemeMismatch("two-level scheme requires mu_e = mu_f")
            if mu_v is None:
                mu_v = self.mu_e
            elif abs(mu_v - self.mu_e) > _REL_TOL * self.mu_e:
                raise SchemeMismatch("two-level scheme requires mu_v = mu_e")
        elif self.scheme is Scheme.V:
            if mu_v is None:
                mu_v = self.mu_e
            elif abs(mu_v - self.mu_e) > _REL_TOL * self.mu_e:
                raise SchemeMismatch("V scheme requires mu_v = mu_e")
        elif self.scheme is Scheme.N and mu_v is None:
            raise ValueError("N scheme requires mu_v")
        object.__setattr__(self, "mu_v", mu_v)

    @classmethod
    def two_level(cls, mu: float) -> "MediumSpec":
        return cls(Scheme.TWO_LEVEL, mu, mu, mu)

    @classmethod
    def v_scheme(cls, mu_ev: float, mu_f: float) -> "MediumSpec":
        return cls(Scheme.V, mu_ev, mu_f, mu_ev)

    @classmethod
    def lambda_scheme(cls, mu_e: float, mu_f: float,
                      mu_v: float | None = None) -> "MediumSpec":
        return cls(Scheme.LAMBDA, mu_e, mu_f, mu_v)

    @classmethod
    def n_scheme(cls, mu_e: float, mu_f: float, mu_v: float) -> "MediumSpec":
        return cls(Scheme.N, mu_e, mu_f, mu_v)


class Family(Enum):
    """Solution family tags; exchanged variants swap the cn and dn channels."""

    LAMBDA_SUPERPOSED = "lambda-superposed"
    LAMBDA_SUPERPOSED_EXCHANGED = "lambda-superposed-exchanged"
    LAMBDA_P1 = "lambda-p1"
    LAMBDA_P1_EXCHANGED = "lambda-p1-exchanged"
    N_SUPERPOSED = "n-superposed"
    N_SUPERPOSED_EXCHANGED = "n-superposed-exchanged"
    N_PURE_CNOIDAL = "n-pure-cnoidal"
    N_PURE_CNOIDAL_EXCHANGED = "n-pure-cnoidal-exchanged"

    @property
    def is_superposed(self) -> bool:
        return "superposed" in self.value

    @property
    def is_lambda(self) -> bool:
        return self.value.startswith("lambda")

    @property
    def dn_excited(self) -> bool:
        """True when the excited-state channel rides the dn-type wave."""
        if self in (Family.LAMBDA_SUPERPOSED, Family.N_SUPERPOSED,
                    Family.LAMBDA_P1, Family.N_PURE_CNOIDAL_EXCHANGED):
            return True
        return False


# channel -> wave kind, per excited-channel assignment
_KINDS_DN_EXCITED = {"Ci": "sn", "Ce": "dn", "Cf": "cn", "Cv": "dn",
                     "OmegaE": "cn", "OmegaF": "sn", "OmegaV": "cn"}
_KINDS_CN_EXCITED = {"Ci": "sn", "Ce": "cn", "Cf": "dn", "Cv": "cn",
                     "OmegaE": "dn", "OmegaF": "sn", "OmegaV": "dn"}


def channel_kinds(family: Family) -> dict[str, str]:
    """Map each channel name to the Jacobi kind it rides for this family."""
    kinds = dict(_KINDS_DN_EXCITED if family.dn_excited else _KINDS_CN_EXCITED)
    if family.is_lambda:
        kinds.pop("Cv")
        kinds.pop("OmegaV")
    return kinds


@dataclass(frozen=True)
class SolutionCoefficients:
    """A fully determined family member: amplitudes, coefficients, rates."""

    family: Family
    p: int
    m: float
    gamma: float
    q: float
    x: float                  # conservation fraction (mu_e - mu_w)/mu_f
    mu: float | None          # auxiliary 2 q Gamma m, lambda families only
    a_e: complex
    a_f: complex
    a_v: complex | None
    b_i: complex
    b_e: complex
    b_f: complex
    b_v: complex | None
    medium: MediumSpec

    @property
    def has_v(self) -> bool:
        return self.a_v is not None

    def kinds(self) -> dict[str, str]:
        kinds = channel_kinds(self.family)
        if not self.has_v:
            kinds.pop("Cv", None)
            kinds.pop("OmegaV", None)
        return kinds


@dataclass(frozen=True)
class FeasibilityWindow:
    """Range of the conservation fraction over which pulse trains exist."""

    x_min: float
    x_max: float
    monotone: bool

    def __post_init__(self):
        if not 0.0 < self.x_min < self.x_max:
            raise ValueError("window must satisfy 0 < x_min < x_max")


@dataclass(frozen=True)
class ImpossibilityReport:
    """Certificate that a scheme admits no superposed pulse train."""

    scheme: Scheme
    no_solution: bool
    min_margin: float
    argmin_m: float
    n_grid: int


def fraction_x_of_m(m) -> float:
    """Conservation fraction x = (mu_e - mu_w)/mu_f pinned by the modulus.

    Probability conservation of the three-term superposed family forces

        x = [1/m - 1 + (4/m)(q^2 + q)]
            / [1/m - 1 + (2/m)((q+1)^2 - m/(q+1)^2)]

    with q = dn(2K(m)/3, m).  Decreases monotonically from 1 (m -> 0) to
    1/2 (m -> 1).
    """
    m = validate_modulus(float(m), pulse_train=True)
    q = qtilde(m)
    num = 1.0 / m - 1.0 + (4.0 / m) * (q * q + q)
    den = 1.0 / m - 1.0 + (2.0 / m) * ((q + 1.0) ** 2 - m / (q + 1.0) ** 2)
    return num / den


def fraction_x_exchanged(m) -> float:
    """Conservation fraction of the exchanged (cn-excited) superposed family.

    Substituting the single-wave dual forms into the probability sum gives
    x_exch = m (1 - beta^2) / (alpha^2 - m beta^2), which simplifies to
    1 - x through the amplitude identity m beta^2 = alpha^2 m_tilde.
    Increases from 0 (m -> 0) to 1/2 (m -> 1).
    """
    return 1.0 - fraction_x_of_m(m)


@lru_cache(maxsize=4)
def _monotone_tabulation(exchanged: bool) -> tuple[float, float]:
    """Assert monotonicity of the m -> x map on a 512-point grid.

    Returns the attainable (x at m cap, x near m = 0) bounds used to
    bracket inversions.
    """
    ms = np.linspace(1e-6, _M_CAP, 512)
    xs = np.array([fraction_x_of_m(mm) for mm in ms])
    if exchanged:
        xs = 1.0 - xs
        if not np.all(np.diff(xs) > 0):
            raise AssertionError("exchanged fraction map is not increasing")
        return float(xs[0]), float(xs[-1])
    if not np.all(np.diff(xs) < 0):
        raise AssertionError("fraction map is not decreasing")
    return float(xs[-1]), float(xs[0])


def m_of_fraction_x(x: float, *, exchanged: bool = False) -> float:
    """Invert the conservation fraction back to the modulus.

    Bisection on the monotone branch; monotonicity is asserted on a
    512-point tabulation first.  Raises InfeasibleFraction outside the
    attainable range (about (1/2, 1) for the standard family, (0, 1/2)
    for the exchanged one).
    """
    x = float(x)
    lo_x, hi_x = sorted(_monotone_tabulation(exchanged))
    if not lo_x <= x <= hi_x:
        side = "exchanged" if exchanged else "standard"
        raise InfeasibleFraction(
            f"fraction {x} outside the attainable {side} window "
            f"[{lo_x:.6f}, {hi_x:.6f})")
    frac = fraction_x_exchanged if exchanged else fraction_x_of_m
    sign = 1.0 if exchanged else -1.0
    lo_m, hi_m = 1e-9, _M_CAP
    xtol = get_precision().invert_xtol
    while hi_m - lo_m > xtol:
        mid = 0.5 * (lo_m + hi_m)
        if sign * (frac(mid) - x) < 0.0:
            lo_m = mid
        else:
            hi_m = mid
    return 0.5 * (lo_m + hi_m)


@lru_cache(maxsize=2)
def feasibility_window() -> FeasibilityWindow:
    """Attainable range of the standard conservation fraction.

    Scans a 10^4-point modulus grid; the map is monotone decreasing, so
    the minimum sits at the m -> 1 edge and the scan is refined
    geometrically toward that boundary instead of a golden-section step
    (which needs an interior minimum).  The infimum is 1/2, approached
    like 1/2 + (3/4)((1-m)/2)^(1/3), so the reported x_min depends on the
    modulus ceiling; x_max = 1 is approached as m -> 0 and is exclusive.
    """
    ms = np.linspace(1e-4, 0.9999, 10_000)
    xs = np.array([fraction_x_of_m(mm) for mm in ms])
    monotone = bool(np.all(np.diff(xs) < 0))
    x_min = float(xs.min())
    k = int(xs.argmin())
    if monotone or k == len(xs) - 1:
        gap = 1.0 - ms[-1]
        while gap > 1.0 - _M_CAP:
            gap /= 10.0
            x_min = min(x_min, fraction_x_of_m(1.0 - gap))
    else:  # interior dip: golden-section refinement around the grid argmin
        inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = ms[max(k - 1, 0)], ms[min(k + 1, len(ms) - 1)]
        c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
        for _ in range(80):
            if fraction_x_of_m(c) < fraction_x_of_m(d):
                b, d = d, c
                c = b - inv_phi * (b - a)
            else:
                a, c = c, d
                d = a + inv_phi * (b - a)
        x_min = min(x_min, fraction_x_of_m(0.5 * (a + b)))
    return FeasibilityWindow(x_min=x_min, x_max=1.0, monotone=monotone)


def _superposed_coefficients(exchanged: bool, m: float, gamma: float,
                             mu_e: float, mu_f: float, mu_w: float):
    """Amplitudes and atomic coefficients of a superposed family member."""
    q = mu_w / (2.0 * gamma * m)
    if mu_f < mu_e * (1.0 - _REL_TOL) or mu_e < mu_w * (1.0 - _REL_TOL):
        raise OrderingViolation(
            f"positivity needs mu_f >= mu_e >= coupling, got "
            f"mu_f={mu_f}, mu_e={mu_e}, coupling={mu_w}")
    ratio_v = max(1.0 - mu_e / mu_f, 0.0)
    ratio_f = max(mu_e / mu_w - 1.0, 0.0)
    if exchanged:
        a_e = 2.0 * gamma * math.sqrt(mu_e ** 2 / (mu_f * mu_w))
        a_v = 2.0 * gamma * math.sqrt(ratio_v)
        a_f = 2.0 * gamma * math.sqrt(m * ratio_f)
        b_e = 1j * q * m * a_e / mu_e
        b_v = 1j * q * m * a_v / mu_w
        b_f = -(a_f / a_e) * mu_e / (m * mu_f)
    else:
        a_e = 2.0 * gamma * math.sqrt(m * mu_e ** 2 / (mu_f * mu_w))
        a_v = 2.0 * gamma * math.sqrt(m * ratio_v)
        a_f = 2.0 * gamma * math.sqrt(m * ratio_f)
        b_e = 1j * q * a_e / mu_e
        b_v = 1j * q * a_v / mu_w
        b_f = -(a_f / a_e) * (mu_e / mu_f)
    return q, a_e, a_f, a_v, b_e, b_f, b_v


def _pure_coefficients(dn_excited: bool, m: float, gamma: float, b_i: complex,
                       mu_e: float, mu_f: float, mu_w: float):
    """Amplitudes and atomic coefficients of a single-wave (p=1) member."""
    b_sq = abs(b_i) ** 2
    q = mu_w * b_sq / (2.0 * gamma * m)
    if mu_f < mu_e * (1.0 - _REL_TOL) or mu_e < mu_w * (1.0 - _REL_TOL):
        raise OrderingViolation(
            f"positivity needs mu_f >= mu_e >= coupling, got "
            f"mu_f={mu_f}, mu_e={mu_e}, coupling={mu_w}")
    ratio_v = max(1.0 - mu_e / mu_f, 0.0)
    ratio_f = max(mu_e / mu_w - 1.0, 0.0)
    a_f = 2.0 * gamma * math.sqrt(m * ratio_f)
    if dn_excited:
        a_e = 2.0 * gamma * math.sqrt(m * mu_e ** 2 / (mu_f * mu_w))
        a_v = 2.0 * gamma * math.sqrt(m * ratio_v)
        b_e = 1j * mu_w * a_e * b_i / (2.0 * gamma * m * mu_e)
        b_v = 1j * a_v * b_i / (2.0 * gamma * m)
        b_f = -(a_f / a_e) * (mu_e / mu_f) * b_i
    else:
        a_e = 2.0 * gamma * math.sqrt(mu_e ** 2 / (mu_f * mu_w))
        a_v = 2.0 * gamma * math.sqrt(ratio_v)
        b_e = 1j * mu_w * a_e * b_i / (2.0 * gamma * mu_e)
        b_v = 1j * a_v * b_i / (2.0 * gamma)
        b_f = -(a_f / a_e) * mu_e * b_i / (m * mu_f)
    return q, a_e, a_f, a_v, b_e, b_f, b_v


def _certify(coeffs: SolutionCoefficients) -> SolutionCoefficients:
    """Run the residual certificate; raise if the set is not a solution."""
    from . import profiles  # deferred: profiles imports this module's types

    n = get_precision().certify_points
    report = profiles.ode_residual(coeffs, n=n, periods=1)
    prof = profiles.build_profile(coeffs, n=n, periods=1)
    dev = profiles.probability_deviation(prof)
    if report.relative_max > 1e-8 or dev > 1e-9:
        raise CertificationError(
            f"{coeffs.family.value} failed certification: "
            f"relative residual {report.relative_max:.3e}, "
            f"probability deviation {dev:.3e}")
    return coeffs


def _require_lambda(medium: MediumSpec) -> None:
    if medium.scheme is not Scheme.LAMBDA:
        raise SchemeMismatch(f"expected a lambda medium, got {medium.scheme}")
    if abs(medium.mu_e - medium.mu_f) > _REL_TOL * medium.mu_e:
        raise SchemeMismatch(
            f"lambda families require mu_e = mu_f, got "
            f"mu_e={medium.mu_e}, mu_f={medium.mu_f}")


def solve_lambda_superposed(m, gamma: float, medium: MediumSpec, p: int = 3,
                            variant: Variant = Variant.STANDARD,
                            mu: float | None = None,
                            certify: bool = True) -> SolutionCoefficients:
    """Superposed three-level family with free parameters m and Gamma.

    The coupling constant mu is derived from the conservation fraction;
    at m = 1 that constraint turns vacuous and mu must be supplied
    explicitly, yielding the localized-pulse limit (the superposition
    collapses to a single constituent, so p is returned as 1).
    """
    variant = Variant(variant)
    _require_lambda(medium)
    gamma = float(gamma)
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    m = validate_modulus(float(m))
    exchanged = variant is Variant.EXCHANGED
    if m == 1.0:
        if mu is None:
            raise DegenerateModulus(
                "m = 1 makes the conservation constraint vacuous; "
                "pass mu explicitly for the localized-pulse limit")
        if not 0.0 < mu < medium.mu_e:
            raise InvalidRatio(f"explicit mu must lie in (0, mu_e), got {mu}")
        x = 1.0 - mu / medium.mu_e
        p = 1
    else:
        if m == 0.0:
            raise DegenerateModulus("m = 0 carries no pulse structure")
        if mu is not None:
            raise ValueError("mu is derived for 0 < m < 1; do not pass it")
        x = fraction_x_exchanged(m) if exchanged else fraction_x_of_m(m)
        mu = medium.mu_e * (1.0 - x)
    q, a_e, a_f, _, b_e, b_f, _ = _superposed_coefficients(
        exchanged, m, gamma, medium.mu_e, medium.mu_e, mu)
    family = (Family.LAMBDA_SUPERPOSED_EXCHANGED if exchanged
              else Family.LAMBDA_SUPERPOSED)
    coeffs = SolutionCoefficients(
        family=family, p=int(p), m=m, gamma=gamma, q=q, x=x,
        mu=2.0 * q * gamma * m, a_e=a_e, a_f=a_f, a_v=None,
        b_i=1.0 + 0.0j, b_e=b_e, b_f=b_f, b_v=None, medium=medium)
    return _certify(coeffs) if certify else coeffs


def solve_lambda_p1(m, gamma: float, mu_ratio: float, medium: MediumSpec,
                    variant: Variant = Variant.STANDARD,
                    certify: bool = True) -> SolutionCoefficients:
    """Single-wave three-level family: free parameters Gamma, m and b_i.

    The ground-state occupancy follows from the coupling ratio u = mu/mu_e:
    1/|b_i|^2 = u (1/m - 1) + 1 for the standard channel assignment, and
    1/|b_i|^2 = (1 - u)/m for the exchanged one (which therefore needs
    u <= 1 - m).  The remaining coefficients are fixed so the reduced
    equations hold exactly; for the exchanged assignment this requires the
    internal coupling u/(1 - m) rather than u itself.
    """
    variant = Variant(variant)
    _require_lambda(medium)
    gamma = float(gamma)
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    m = validate_modulus(float(m), pulse_train=True)
    u = float(mu_ratio)
    if not 0.0 < u <= 1.0:
        raise InvalidRatio(f"mu_ratio must lie in (0, 1], got {u}")
    mu_e = medium.mu_e
    if variant is Variant.STANDARD:
        b_sq = 1.0 / (1.0 + u * (1.0 / m - 1.0))
        mu_w = u * mu_e
        dn_excited = True
        family = Family.LAMBDA_P1
    else:
        if u > 1.0 - m + _REL_TOL:
            raise InvalidRatio(
                f"exchanged family needs mu_ratio <= 1 - m "
                f"(occupancy would exceed one), got {u} at m = {m}")
        b_sq = m / (1.0 - u)
        mu_w = (u / (1.0 - m)) * mu_e
        dn_excited = False
        family = Family.LAMBDA_P1_EXCHANGED
    b_i = complex(math.sqrt(min(b_sq, 1.0)))
    q, a_e, a_f, _, b_e, b_f, _ = _pure_coefficients(
        dn_excited, m, gamma, b_i, mu_e, mu_e, mu_w)
    coeffs = SolutionCoefficients(
        family=family, p=1, m=m, gamma=gamma, q=q, x=1.0 - mu_w / mu_e,
        mu=2.0 * q * gamma * m, a_e=a_e, a_f=a_f, a_v=None,
        b_i=b_i, b_e=b_e, b_f=b_f, b_v=None, medium=medium)
    return _certify(coeffs) if certify else coeffs


def solve_n_superposed(gamma: float, medium: MediumSpec, p: int = 3,
                       variant: Variant = Variant.STANDARD,
                       certify: bool = True) -> SolutionCoefficients:
    """Superposed four-level family: one free parameter Gamma.

    The medium fixes everything else: the fraction (mu_e - mu_v)/mu_f
    determines the modulus through the conservation constraint, and mu_v
    sets 2 q Gamma m.
    """
    variant = Variant(variant)
    if medium.scheme is not Scheme.N:
        raise SchemeMismatch(f"expected an N medium, got {medium.scheme}")
    gamma = float(gamma)
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    mu_e, mu_f, mu_v = medium.mu_e, medium.mu_f, medium.mu_v
    if abs(mu_e - mu_v) <= _REL_TOL * mu_e:
        raise DegenerateScheme(
            "mu_e = mu_v degenerates to a two-level or V scheme; "
            "see check_impossibility")
    if not mu_f >= mu_e >= mu_v:
        raise OrderingViolation(
            f"positivity requires mu_f >= mu_e >= mu_v, got "
            f"({mu_e}, {mu_f}, {mu_v})")
    exchanged = variant is Variant.EXCHANGED
    x = (mu_e - mu_v) / mu_f
    m = m_of_fraction_x(x, exchanged=exchanged)
    q, a_e, a_f, a_v, b_e, b_f, b_v = _superposed_coefficients(
        exchanged, m, gamma, mu_e, mu_f, mu_v)
    family = (Family.N_SUPERPOSED_EXCHANGED if exchanged
              else Family.N_SUPERPOSED)
    coeffs = SolutionCoefficients(
        family=family, p=int(p), m=m, gamma=gamma, q=q, x=x, mu=None,
        a_e=a_e, a_f=a_f, a_v=a_v, b_i=1.0 + 0.0j, b_e=b_e, b_f=b_f, b_v=b_v,
        medium=medium)
    return _certify(coeffs) if certify else coeffs


def check_impossibility(medium: MediumSpec, n_grid: int = 999) -> ImpossibilityReport:
    """Certificate that two-level and V media admit no superposed train.

    Conservation would require m = 1 + 4(q^2 + q) with q = dn(2K/3, m) > 0
    for every m < 1, so the right side always exceeds one.  The report
    carries the minimum violation margin over an m grid.
    """
    if medium.scheme not in (Scheme.TWO_LEVEL, Scheme.V):
        raise ValueError(
            "impossibility check applies to two-level and V schemes only")
    margins = []
    ms = [(k + 1) / (n_grid + 1) for k in range(n_grid)]
    for m in ms:
        q = qtilde(m)
        margins.append(1.0 + 4.0 * (q * q + q) - m)
    k = int(np.argmin(margins))
    return ImpossibilityReport(scheme=medium.scheme, no_solution=True,
                               min_margin=float(margins[k]),
                               argmin_m=float(ms[k]), n_grid=n_grid)


def _resolve_pure_medium(medium: MediumSpec) -> tuple[float, float, float]:
    """(mu_e, mu_f, mu_w) triple seen by the single-wave solver."""
    scheme = medium.scheme
    if scheme is Scheme.N:
        return medium.mu_e, medium.mu_f, medium.mu_v
    if scheme is Scheme.LAMBDA:
        _require_lambda(medium)
        if medium.mu_v is None:
            raise ValueError(
                "lambda-limit single-wave solutions need mu_v (the second "
                "lower-transition constant) in the medium")
        return medium.mu_e, medium.mu_e, medium.mu_v
    # two-level and V fix mu_v = mu_e
    return medium.mu_e, medium.mu_f, medium.mu_e


def solve_n_pure_cnoidal(gamma: float, medium: MediumSpec, b_i: complex,
                         variant: Variant = Variant.STANDARD,
                         m: float | None = None,
                         certify: bool = True) -> SolutionCoefficients:
    """Single-wave four-level family and its two-level, V and lambda limits.

    The ground-state occupancy b_i is the free input; conservation then
    determines the modulus through 1/|b_i|^2 = 1 + ((1-m)/m) x for the
    standard channel assignment and 1/|b_i|^2 = x + (1-x)/m for the
    exchanged one, with x = (mu_e - mu_v)/mu_f.  When x = 0 (two-level
    and V media) the standard constraint is vacuous: it forces |b_i| = 1
    and the modulus becomes a free input, while the exchanged assignment
    reduces to |b_i|^2 = m.
    """
    variant = Variant(variant)
    gamma = float(gamma)
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    b_i = complex(b_i)
    b_abs = abs(b_i)
    if not 0.0 < b_abs <= 1.0 + _REL_TOL:
        raise UnitOccupancy(f"|b_i| must lie in (0, 1], got {b_abs}")
    mu_e, mu_f, mu_w = _resolve_pure_medium(medium)
    if not mu_f * (1.0 + _REL_TOL) >= mu_e >= mu_w * (1.0 - _REL_TOL):
        raise OrderingViolation(
            f"positivity requires mu_f >= mu_e >= mu_v, got "
            f"({mu_e}, {mu_f}, {mu_w})")
    x = (mu_e - mu_w) / mu_f
    at_unit = abs(b_abs - 1.0) <= _REL_TOL
    exchanged = variant is Variant.EXCHANGED
    if exchanged:
        if at_unit:
            raise PulseLimit(
                "|b_i| = 1 forces m = 1: localized pulses, not a train")
        m_solved = (1.0 - x) * b_abs ** 2 / (1.0 - x * b_abs ** 2)
        if m is not None and abs(m - m_solved) > 1e-10:
            raise ValueError(
                f"m is determined by b_i for this family (solved {m_solved})")
        m = m_solved
        dn_excited = True
        family = Family.N_PURE_CNOIDAL_EXCHANGED
    else:
        if x <= _REL_TOL:
            # degenerate schemes: constraint vacuous, m is a free input
            if not at_unit:
                raise UnitOccupancy(
                    "conservation forces |b_i| = 1 when mu_e = mu_v")
            if m is None:
                raise DegenerateModulus(
                    "m is a free input when the conservation constraint "
                    "is vacuous; pass it explicitly")
            m = validate_modulus(float(m), pulse_train=True)
        else:
            if at_unit:
                if medium.scheme is Scheme.N:
                    raise UnitOccupancy(
                        "|b_i| = 1 with mu_e > mu_v admits no pulse train")
                raise PulseLimit(
                    "|b_i| = 1 forces m = 1: localized pulses, not a train")
            m_solved = b_abs ** 2 * x / (b_abs ** 2 * x + 1.0 - b_abs ** 2)
            if m is not None and abs(m - m_solved) > 1e-10:
                raise ValueError(
                    f"m is determined by b_i for this family "
                    f"(solved {m_solved})")
            m = m_solved
        dn_excited = False
        family = Family.N_PURE_CNOIDAL
    q, a_e, a_f, a_v, b_e, b_f, b_v = _pure_coefficients(
        dn_excited, m, gamma, b_i, mu_e, mu_f, mu_w)
    if medium.scheme is Scheme.LAMBDA:
        a_v, b_v = None, None
    coeffs = SolutionCoefficients(
        family=family, p=1, m=m, gamma=gamma, q=q, x=x,
        mu=2.0 * q * gamma * m if medium.scheme is Scheme.LAMBDA else None,
        a_e=a_e, a_f=a_f, a_v=a_v, b_i=b_i, b_e=b_e, b_f=b_f, b_v=b_v,
        medium=medium)
    return _certify(coeffs) if certify else coeffs


def group_velocity(coeffs: SolutionCoefficients, host_speed: float = 1.0) -> float:
    """Uniform pulse-train velocity in the host medium.

    1/v = 1/c + mu_v/(2 Gamma^2 m) for the superposed four-level family,
    with mu_v |b_i|^2 for the single-wave one; lambda families use the
    auxiliary mu the same way.  All cases reduce to 1/v = 1/c + q/Gamma,
    which follows from the traveling coordinate X = q zeta - Gamma tau.
    """
    if host_speed <= 0.0:
        raise ValueError("host speed must be positive")
    gm2 = 2.0 * coeffs.gamma ** 2 * coeffs.m
    if coeffs.family in (Family.N_SUPERPOSED, Family.N_SUPERPOSED_EXCHANGED):
        delay = coeffs.medium.mu_v / gm2
    elif coeffs.family in (Family.N_PURE_CNOIDAL,
                           Family.N_PURE_CNOIDAL_EXCHANGED):
        mu_w = _resolve_pure_medium(coeffs.medium)[2]
        delay = mu_w * abs(coeffs.b_i) ** 2 / gm2
    else:
        delay = coeffs.mu / gm2
    return 1.0 / (1.0 / host_speed + delay)
