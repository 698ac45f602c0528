"""Catalog of half-line m-coefficient evaluators and whole-line pairs.

Every evaluator exposes ``m(lam)``, the Titchmarsh-Weyl coefficient of
its half-line Neumann problem, an R-function of lam.  The whole-line
(indefinite-weight) coefficients are assembled by :class:`MPair` as

    M_+(lam) = m_plus(lam),        M_-(lam) = -m_minus(-lam),

both Herglotz on the upper half-plane.  Closed forms:

* free:          m = i / sqrt(lam)
* power weight:  m = C_nu e^{i pi nu} lam^{-nu},  nu = 1/(alpha + 2),
                 C_nu = Gamma(1 + nu) / (nu^{2 nu} Gamma(1 - nu))
* rational helper m1 = (1 - i sqrt(lam)) / (1 - i sqrt(lam) - lam)
                 (the Neumann m of the potential 2/(1+x)^2)
* bump example:  m1 propagated through a -1 well on [0, pi/4]
                 (Neumann m of q = -chi_[0,pi/4] + 2/(1+x-pi/4)^2 on its tail)
* comparison example: the same propagation with the well removed
* periodic, finite-zone, truncated countable-zone: see their modules
* decaying a/b:  m = a(lam)/b(lam) with

      a = i/(2 sqrt lam) [1 + int_0^inf q e^{i sqrt(lam) x} s(x, lam) dx],
      b = 1/2 + i/(2 sqrt lam) int_0^inf q e^{i sqrt(lam) x} c(x, lam) dx,

  equivalently m = a~/(b~ - i sqrt lam) with a~, b~ the bracketed
  integrals; their lam = 0 values (a_plus, b_plus) drive the small-lam
  classification of decaying potentials.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coeffs import Coefficient
from .errors import EvaluationFailed, TailMassTooLarge
from .periodic import PeriodicData, m_periodic
from .sl_ode import HalfLineProblem, Side, m_numeric, solve_cs
from .special import gamma, power_cut, sqrt_cut
from .zones import ZonePolynomials, ZoneSequenceData, m_finitezone, m_infzone_truncated

__all__ = [
    "m_free", "m_power", "m1_helper", "m_example_q0", "m_example_A1",
    "m_decaying_ab", "ab_constants",
    "FreeM", "PowerWeightM", "ExampleQ0M", "ExampleA1M", "PeriodicM",
    "FiniteZoneM", "InfZoneTruncatedM", "DecayingABM", "NumericM", "MPair",
]


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def m_free(lam):
    """i/sqrt(lam): the weight-1, q = 0 half line."""
    return 1j / sqrt_cut(lam)


def m_power(alpha, lam):
    """Half-line m of -y'' = lam |x|^alpha y, y'(0) = 0, alpha > -1."""
    if alpha <= -1.0:
        raise ValueError(f"power weight needs alpha > -1, got {alpha}")
    if lam == 0:
        raise ValueError("m is not defined at lam = 0")
    nu = 1.0 / (alpha + 2.0)
    c_nu = gamma(1.0 + nu) / (nu ** (2.0 * nu) * gamma(1.0 - nu))
    return c_nu * cmath.exp(1j * math.pi * nu) / power_cut(lam, nu)


def m1_helper(lam):
    """(1 - i sqrt lam)/(1 - i sqrt lam - lam); Krein-Stieltjes on R_-."""
    t = 1j * sqrt_cut(lam)
    den = 1.0 - t - lam
    if abs(den) < 1e-300:
        raise EvaluationFailed(f"m1 pole at lam={lam}")
    return (1.0 - t) / den


def _cos_sqrt(w, a):
    """cos(a sqrt(w)), entire in w."""
    return cmath.cos(a * cmath.sqrt(w))


def _sinc_sqrt(w, a):
    """sin(a sqrt(w))/sqrt(w), entire in w (-> a at w = 0)."""
    r = cmath.sqrt(w)
    if abs(r) < 1e-8:
        return a * (1.0 - (a * a * w) / 6.0)
    return cmath.sin(a * r) / r


def _well_propagated(lam, wshift, pole_tol=1e-13):
    """m after transporting m1 through a constant well of depth 1.

    ``wshift`` = lam + 1 reproduces the -1 well on [0, pi/4]; wshift = lam
    removes the well (the comparison operator).  Poles of the resulting m
    (Neumann eigenvalues) are reported as EvaluationFailed.
    """
    a = math.pi / 4.0
    m1 = m1_helper(lam)
    ck = _cos_sqrt(wshift, a)
    sk = _sinc_sqrt(wshift, a)
    num = sk + m1 * ck
    den = ck - m1 * wshift * sk
    if abs(den) < pole_tol * max(1.0, abs(num)):
        raise EvaluationFailed(f"Neumann-eigenvalue pole at lam={lam}")
    return num / den


def m_example_q0(lam):
    """Half-line m of the well-plus-decaying-tail potential.

    q = -1 on [0, pi/4] and 2/(1 + x - pi/4)^2 beyond; the indefinite
    operator built from its even extension has a zero eigenvalue and an
    m blowing up like -2/lam there.
    """
    return _well_propagated(complex(lam), complex(lam) + 1.0)


def m_example_A1(lam):
    """Same tail without the well: m -> 1 + pi/4 at lam -> 0."""
    return _well_propagated(complex(lam), complex(lam))


def q0_coefficient():
    """Piecewise descriptor of the example potential on [0, inf)."""
    a = math.pi / 4.0
    return Coefficient.pieces(
        [(0.0, a, "const", (-1.0,)),
         (a, math.inf, "shifted_power", (2.0, 1.0 - a, 1.0, -2.0))])


def a1_coefficient():
    """The tail-only comparison potential on [0, inf)."""
    a = math.pi / 4.0
    return Coefficient.pieces(
        [(0.0, a, "const", (0.0,)),
         (a, math.inf, "shifted_power", (2.0, 1.0 - a, 1.0, -2.0))])


# ---------------------------------------------------------------------------
# decaying-potential a/b representation
# ---------------------------------------------------------------------------

def _q_support_end(q):
    for seg in reversed(q.segments):
        if not (seg.kind == 0 and seg.params[0] == 0.0):
            return seg.hi
    return 0.0


def _ab_quadrature(problem, lam, nodes_per_unit=6):
    """(a~, b~) = Jost-normalized integrals against the fundamental pair."""
    if problem.side is not Side.PLUS:
        problem = problem.reflected()
    end = _q_support_end(problem.q)
    if not math.isfinite(end):
        X = problem.X if problem.X is not None else 40.0
        end = 2.0 * X
        tail = problem.q.abs_first_moment(end, 4.0 * X)
        if tail > 1e-6:
            raise TailMassTooLarge(
                f"first-moment tail of q beyond {end} is {tail:.3e}")
    if end == 0.0:
        return 1.0 + 0.0j, 0.0 + 0.0j
    rt = sqrt_cut(lam) if lam != 0 else 0.0
    n_panels = max(4, int(end * max(1.0, abs(rt)) * nodes_per_unit / 4))
    gl_x, gl_w = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(0.0, end, n_panels + 1)
    # panel nodes ascend overall, matching solve_cs sample order
    xs = np.concatenate([0.5 * (b - a) * gl_x + 0.5 * (a + b)
                         for a, b in zip(edges[:-1], edges[1:])])
    ws = np.concatenate([0.5 * (b - a) * gl_w
                         for a, b in zip(edges[:-1], edges[1:])])
    samples = solve_cs(problem, lam, xs)
    svals = np.array([smp.s for smp in samples])
    cvals = np.array([smp.c for smp in samples])
    qs = problem.q(xs)
    phase = np.exp(1j * rt * xs)
    a_int = np.sum(ws * qs * phase * svals)
    b_int = np.sum(ws * qs * phase * cvals)
    return 1.0 + a_int, b_int


def m_decaying_ab(problem, lam):
    """m = a(lam)/b(lam) by quadrature of the Jost-normalized integrals.

    Needs weight == 1 and a potential with finite first moment on its
    half-line (TailMassTooLarge otherwise).
    """
    lam = complex(lam)
    at, bt = _ab_quadrature(problem, lam)
    return complex(1j * at / (sqrt_cut(lam) + 1j * bt))


def ab_constants(problem):
    """(a_plus, b_plus): the lam = 0 limits of the a/b integrals.

    a_plus = 1 + int q s(., 0), b_plus = int q c(., 0); a_plus = 0 is
    exactly the bounded-s(., 0) case.
    """
    at, bt = _ab_quadrature(problem, 0.0)
    return float(at.real), float(bt.real)


# ---------------------------------------------------------------------------
# evaluator objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeM:
    side: Side = Side.PLUS

    def m(self, lam):
        return m_free(lam)


@dataclass(frozen=True)
class PowerWeightM:
    alpha: float
    side: Side = Side.PLUS

    def __post_init__(self):
        if self.alpha <= -1.0:
            raise ValueError(f"power weight needs alpha > -1, got {self.alpha}")

    def m(self, lam):
        return m_power(self.alpha, lam)


@dataclass(frozen=True)
class ExampleQ0M:
    side: Side = Side.PLUS

    def m(self, lam):
        return m_example_q0(lam)


@dataclass(frozen=True)
class ExampleA1M:
    side: Side = Side.PLUS

    def m(self, lam):
        return m_example_A1(lam)


@dataclass(frozen=True)
class PeriodicM:
    data: PeriodicData
    side: Side = Side.PLUS

    def m(self, lam):
        return m_periodic(self.data, lam, self.side)


@dataclass(frozen=True)
class FiniteZoneM:
    polys: ZonePolynomials
    side: Side = Side.PLUS

    def m(self, lam):
        return m_finitezone(self.polys, lam, self.side)


@dataclass(frozen=True)
class InfZoneTruncatedM:
    data: ZoneSequenceData
    N: int
    side: Side = Side.PLUS

    def m(self, lam):
        return m_infzone_truncated(self.data, self.N, lam, self.side)

    def truncation_delta(self, lam):
        """|m_N - m_2N|: the reported truncation-error proxy."""
        m1 = m_infzone_truncated(self.data, self.N, lam, self.side)
        m2 = m_infzone_truncated(self.data, 2 * self.N, lam, self.side)
        return abs(m1 - m2)


class DecayingABM:
    """a/b-representation evaluator for a decaying potential."""

    def __init__(self, problem):
        self.problem = problem if problem.side is Side.PLUS else problem.reflected()
        self.side = problem.side

    def m(self, lam):
        return m_decaying_ab(self.problem, lam)

    def constants(self):
        return ab_constants(self.problem)


class NumericM:
    """Riccati/linear inward-integration evaluator with memoization."""

    def __init__(self, problem, rtol=1e-10, atol=1e-12):
        self.problem = problem
        self.side = problem.side
        self.rtol = rtol
        self.atol = atol
        self._cache = {}

    def m(self, lam):
        lam = complex(lam)
        hit = self._cache.get(lam)
        if hit is None:
            hit = m_numeric(self.problem, lam, rtol=self.rtol, atol=self.atol).m_value
            self._cache[lam] = hit
        return hit


class MPair:
    """Whole-line pair M_+ / M_- built from two half-line evaluators.

    ``plus`` evaluates the right half-line m at lam; ``minus`` the left
    half-line m, consumed at -lam with a sign flip.
    """

    def __init__(self, plus, minus):
        self.plus = plus
        self.minus = minus

    def M_plus(self, lam):
        return complex(self.plus.m(complex(lam)))

    def M_minus(self, lam):
        return -complex(self.minus.m(-complex(lam)))

    def F(self, lam, D=1.0, C=0.0):
        """M_-(lam) - D M_+(lam) - C: zero exactly at nonreal eigenvalues."""
        return self.M_minus(lam) - D * self.M_plus(lam) - C

    @staticmethod
    def mirror_even(plus_eval):
        """Pair for an even problem (the same evaluator on both sides)."""
        return MPair(plus_eval, plus_eval)


def mirrored_power_ratio_constant(alpha):
    """|(M_+ + M_-)/(M_+ - M_-)| for the two-sided power weight |x|^alpha.

    With M_+ = C_nu e^{i pi nu} lam^{-nu} and M_- = -C_nu lam^{-nu} (the
    cut branch turns e^{i pi nu} (-lam)^{-nu} into lam^{-nu}), the ratio
    is the constant (e^{i pi nu} - 1)/(e^{i pi nu} + 1) = i tan(pi nu /2).
    """
    nu = 1.0 / (alpha + 2.0)
    return abs(math.tan(0.5 * math.pi * nu))
