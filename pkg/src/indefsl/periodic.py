"""Periodic potentials: monodromy, discriminant, m-coefficients, band edge.

For a T-periodic q (weight == 1) the monodromy data at spectral
parameter lam is the fundamental pair at one period, with half-trace and
half-difference

    delta_plus  = (c(T) + s'(T)) / 2      (the discriminant),
    delta_minus = (c(T) - s'(T)) / 2.

The half-line m-coefficients are rational in these plus sqrt(dp^2 - 1):

    m_plus  = s(T) / (delta_minus - w),   m_minus = -s(T) / (delta_minus + w),

where w is the root of dp^2 - 1 for which rho = delta_plus + w is the
Floquet multiplier of modulus < 1 (the solution decaying to the right).
That choice is pointwise and unambiguous off the spectral bands, and it
is exactly the branch that makes both half-line m functions Herglotz;
on a band |rho| = 1 and BranchAmbiguous is raised.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .coeffs import Coefficient
from .errors import BranchAmbiguous, RootNotBracketed
from .sl_ode import HalfLineProblem, Side, solve_cs

__all__ = ["PeriodicData", "MonodromySample", "monodromy", "m_periodic",
           "lowest_band_edge", "BandEdge"]


@dataclass(frozen=True)
class PeriodicData:
    q: Coefficient
    period: float

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("period must be positive")

    def problem(self):
        return HalfLineProblem(Side.PLUS, self.q, Coefficient.constant(1.0),
                               X=2.0 * self.period)


@dataclass(frozen=True)
class MonodromySample:
    lam: complex
    cT: complex
    cT_prime: complex
    sT: complex
    sT_prime: complex

    @property
    def delta_plus(self):
        return 0.5 * (self.cT + self.sT_prime)

    @property
    def delta_minus(self):
        return 0.5 * (self.cT - self.sT_prime)

    def unimodularity(self):
        """c(T) s'(T) - c'(T) s(T); equals 1 for the exact flow."""
        return self.cT * self.sT_prime - self.cT_prime * self.sT

    def unimodularity_defect(self):
        """|det - 1| relative to the product scale (see wronskian_defect)."""
        scale = max(1.0, abs(self.cT) * abs(self.sT_prime)
                    + abs(self.cT_prime) * abs(self.sT))
        return abs(self.unimodularity() - 1.0) / scale


def monodromy(p, lam, rtol=1e-12, atol=1e-14):
    """Fundamental pair over one period at lam."""
    sample = solve_cs(p.problem(), lam, [p.period], rtol=rtol, atol=atol)[0]
    return MonodromySample(complex(lam), sample.c, sample.c_prime,
                           sample.s, sample.s_prime)


def _stable_root(dp, tol):
    """w with dp^2 - 1 = w^2 and |dp + w| < 1 (decaying multiplier)."""
    w = cmath.sqrt(dp * dp - 1.0)
    r1 = abs(dp + w)
    r2 = abs(dp - w)
    if abs(r1 - 1.0) < tol and abs(r2 - 1.0) < tol:
        raise BranchAmbiguous(
            f"both Floquet multipliers have modulus ~1 (lam on a band?): {r1}, {r2}")
    return w if r1 < r2 else -w


def m_periodic(p, lam, side, rtol=1e-12, atol=1e-14, branch_tol=1e-9):
    """Half-line m (Neumann) of the periodic problem at lam.

    Valid for Im lam != 0 or lam in a spectral gap; raises
    BranchAmbiguous on the bands.
    """
    mono = monodromy(p, lam, rtol=rtol, atol=atol)
    w = _stable_root(mono.delta_plus, branch_tol)
    if side in (Side.PLUS, "plus"):
        return complex(mono.sT / (mono.delta_minus - w))
    return complex(-mono.sT / (mono.delta_minus + w))


@dataclass(frozen=True)
class BandEdge:
    lam0: float
    discriminant_slope: float
    sT: float


def lowest_band_edge(p, scan_points=200, tol=1e-12):
    """Leftmost root of delta_plus(lam) = 1, with its certificates.

    Scans upward from below min q for the first sign change of
    delta_plus - 1, refines by Brent, and verifies delta_plus'(lam0) < 0
    and s(T, lam0) > 0 (first-order edge with positive period map).
    """
    qs = p.q(np.linspace(0.0, p.period, 4001))
    qmin, qmax = float(np.min(qs)), float(np.max(qs))

    def f(lam):
        return (monodromy(p, lam).delta_plus - 1.0).real

    lo = qmin - 1.0
    hi_cap = qmax + 10.0 * (2.0 * math.pi / p.period) ** 2 + 10.0
    grid = np.linspace(lo, hi_cap, scan_points)
    flo = f(grid[0])
    bracket = None
    for i in range(1, len(grid)):
        fhi = f(grid[i])
        if flo > 0.0 and fhi <= 0.0:
            bracket = (grid[i - 1], grid[i])
            break
        flo = fhi
    if bracket is None:
        raise RootNotBracketed(
            f"no sign change of delta_plus - 1 in [{lo:.3g}, {hi_cap:.3g}]")
    lam0 = brentq(f, bracket[0], bracket[1], xtol=tol)

    h = max(1e-6, 1e-6 * abs(lam0))
    slope = (f(lam0 + h) - f(lam0 - h)) / (2.0 * h)
    sT = monodromy(p, lam0).sT.real
    if not slope < 0.0:
        raise RootNotBracketed(f"discriminant slope at the edge is {slope} >= 0")
    if not sT > 0.0:
        raise RootNotBracketed(f"s(T, lam0) = {sT} <= 0 at the edge")
    return BandEdge(float(lam0), float(slope), float(sT))
