"""Half-line problems, the fundamental system, and numeric m-coefficients.

Conventions.  c(x, lam) and s(x, lam) solve -y'' + q y = lam |r| y with
c(0) = s'(0) = 1, c'(0) = s(0) = 0.  On the right half-line the
Titchmarsh-Weyl coefficient of the Neumann problem is

    m_plus(lam) = -f(0)/f'(0),

with f the solution square-integrable against |r| at +infinity; on the
left half-line m_minus(lam) = +f(-0)/f'(-0).  Half-line m functions are
Herglotz; the whole-line pair M_+(lam) = m_plus(lam),
M_-(lam) = -m_minus(-lam) is assembled in :mod:`indefsl.mcatalog`.

The Weyl solution is integrated inward from the truncation radius X with
the frozen-coefficient (WKB) start f'(X)/f(X) = i*sqrt_cut(lam*|r(X)|) on
the decaying branch, as a linear system with joint renormalization (the
log-derivative and the normalized quadrature are scale-free, and inward
integration keeps the wanted solution numerically dominant).  Every value
is re-computed at twice the radius; the difference is the reported error
estimate.  Cells of a power weight c|x|^alpha adjacent to the origin are
crossed with an exact Frobenius-series transfer matrix instead of RK
steps, which handles the singular-coefficient case alpha < 0 (the
potential must vanish on such a cell).
"""

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from ._kernels import (
    STATUS_OK,
    STATUS_STEP_UNDERFLOW,
    _propagate,
)
from .coeffs import KIND_CONST, KIND_POWER, Coefficient
from .errors import IntegrationFailure, NonDecayingTail, TruncationUnconverged
from .special import sqrt_cut

__all__ = [
    "Side",
    "Boundary",
    "HalfLineProblem",
    "FullLineProblem",
    "FundamentalSample",
    "WeylSolutionSample",
    "S0Verdict",
    "S0Result",
    "solve_cs",
    "m_numeric",
    "verify_psi_identity",
    "s0_boundedness",
]


class Side(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class Boundary(enum.Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class HalfLineProblem:
    """One half-line of -y'' + q y = lam |r| y.

    ``X`` is the truncation radius (None: chosen per spectral point).
    The limit-point hypothesis at the far end is the caller's
    responsibility; :meth:`limit_point_proxy` runs the documented
    integral check and the constructor warns when it fails.
    """

    side: Side
    q: Coefficient
    weight: Coefficient
    X: float | None = None
    boundary: Boundary = Boundary.NEUMANN

    def __post_init__(self):
        if self.X is not None and not self.X > 0:
            raise ValueError("truncation radius X must be positive")
        a, b = self.weight.domain
        if self.side is Side.PLUS and b <= 0:
            raise ValueError("plus-side problem needs a weight on [0, inf)")
        if self.side is Side.MINUS and a >= 0:
            raise ValueError("minus-side problem needs a weight on (-inf, 0]")
        probe = self._probe_range()
        vals = self.weight(np.linspace(*probe, 201))
        if np.any(vals <= 0):
            raise ValueError("weight |r| must be positive a.e. on the half-line")
        if not self.limit_point_proxy():
            warnings.warn("weight decays fast enough that the limit-point "
                          "proxy check fails; m may not be unique", stacklevel=2)

    def _probe_range(self):
        r = self.X if self.X is not None else 40.0
        lo, hi = (1e-9, r) if self.side is Side.PLUS else (-r, -1e-9)
        return lo, hi

    def limit_point_proxy(self):
        """Grid check that int_1^X x^2 |r| dx keeps growing with X."""
        r = self.X if self.X is not None else 40.0
        if r <= 2.0:
            return True
        xs = np.linspace(1.0, r, 4001) * (1 if self.side is Side.PLUS else -1)
        integrand = xs ** 2 * self.weight(xs)
        half = np.trapezoid(integrand[:2001], xs[:2001])
        full = np.trapezoid(integrand, xs)
        return abs(full) > 1.2 * abs(half)

    def reflected(self):
        """The mirror problem on the opposite half-line."""
        other = Side.MINUS if self.side is Side.PLUS else Side.PLUS
        return HalfLineProblem(other, self.q.reflected(), self.weight.reflected(),
                               self.X, self.boundary)

    def default_truncation(self, lam):
        """Per-point radius: 40-rule for sign-definite weights near 1,
        |lam| X^(alpha+2) = 1e3 for single power weights."""
        if self.X is not None:
            return self.X
        pw = self._single_power()
        if pw is not None:
            c, alpha = pw
            return max(5.0, (1e3 / (abs(lam) * c)) ** (1.0 / (alpha + 2.0)))
        return max(40.0, 40.0 / math.sqrt(abs(lam)))

    def _single_power(self):
        segs = self.weight.segments
        if len(segs) == 1 and segs[0].kind == KIND_POWER:
            return segs[0].params[0], segs[0].params[1]
        return None


@dataclass(frozen=True)
class FullLineProblem:
    plus: HalfLineProblem
    minus: HalfLineProblem

    def __post_init__(self):
        if self.plus.side is not Side.PLUS or self.minus.side is not Side.MINUS:
            raise ValueError("FullLineProblem needs (plus, minus) sides in order")

    @staticmethod
    def even_mirror(plus):
        """Whole-line problem with q(-x) = q(x), |r(-x)| = |r(x)|."""
        return FullLineProblem(plus, plus.reflected())


@dataclass(frozen=True)
class FundamentalSample:
    x: float
    lam: complex
    c: complex
    c_prime: complex
    s: complex
    s_prime: complex

    def wronskian(self):
        return self.c * self.s_prime - self.c_prime * self.s

    def wronskian_defect(self):
        """|W - 1| relative to the product scale at which W is formed.

        Once the pair has grown by e^K the constant Wronskian is the
        cancellation of O(e^{2K}) products, so only the scale-relative
        defect is meaningful in finite precision.
        """
        scale = max(1.0, abs(self.c) * abs(self.s_prime)
                    + abs(self.c_prime) * abs(self.s))
        return abs(self.wronskian() - 1.0) / scale


@dataclass(frozen=True)
class WeylSolutionSample:
    lam: complex
    m_value: complex
    psi_norm_sq: float
    err_estimate: float
    X_used: float


# ---------------------------------------------------------------------------
# packing and the Frobenius cell
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _CellPack:
    edges: np.ndarray
    qk: np.ndarray
    qp: np.ndarray
    wk: np.ndarray
    wp: np.ndarray


def _merged_pack(q, w, a, b):
    pts = sorted(set([a, b]) | set(q.breakpoints(a, b)) | set(w.breakpoints(a, b)))
    edges = np.asarray(pts, dtype=np.float64)
    n = len(edges) - 1
    qk = np.empty(n, dtype=np.int64)
    qp = np.empty((n, 6), dtype=np.float64)
    wk = np.empty(n, dtype=np.int64)
    wp = np.empty((n, 6), dtype=np.float64)
    for i in range(n):
        mid = 0.5 * (edges[i] + edges[i + 1])
        sq = q._segment_at(mid)
        sw = w._segment_at(mid)
        qk[i], qp[i] = sq.kind, sq.params
        wk[i], wp[i] = sw.kind, sw.params
    return _CellPack(edges, qk, qp, wk, wp)


def _frobenius_eval(z, beta, x, max_terms=80):
    """Fundamental pair of y'' = -z |t|^(beta-2) y at t = x > 0.

    Returns (y1, y1', y2, y2') with y1(0) = y2'(0) = 1, y1'(0) = y2(0) = 0.
    Series in powers of x^beta; fast for |z| x^beta <~ 30.
    """
    xb = x ** beta
    p = 1.0 + 0.0j
    y1, y1p = p, 0.0j
    qq = 1.0 + 0.0j
    y2s, y2p = qq, qq  # y2 = x * sum, y2' = sum of (k*beta+1)-weighted terms
    pk = p
    qk = qq
    for k in range(1, max_terms):
        kb = k * beta
        pk = -z * pk / (kb * (kb - 1.0)) * xb
        qk = -z * qk / ((kb + 1.0) * kb) * xb
        y1 += pk
        y1p += pk * kb
        y2s += qk
        y2p += qk * (kb + 1.0)
        if abs(pk) < 1e-18 * abs(y1) and abs(qk) < 1e-18 * abs(y2s):
            break
    return y1, y1p / x, x * y2s, y2p


def _frobenius_cell(problem, lam, pack):
    """Identify a power-weight cell adjacent to 0 for exact transfer.

    Returns (d, c, alpha) or None; d is the |x| extent handled by series.
    Requires q = 0 on the chosen cell.
    """
    plus = problem.side is Side.PLUS
    i = 0 if plus else len(pack.qk) - 1
    if len(pack.qk) == 0:
        return None
    if pack.wk[i] != KIND_POWER:
        return None
    c, alpha = pack.wp[i][0], pack.wp[i][1]
    if alpha == 0.0:
        return None
    qzero = pack.qk[i] == KIND_CONST and pack.qp[i][0] == 0.0
    if not qzero:
        if alpha < 0:
            raise IntegrationFailure(
                "singular power weight at 0 requires q = 0 on the first cell", 0.0)
        return None
    cell_extent = pack.edges[i + 1] if plus else -pack.edges[i]
    beta = alpha + 2.0
    d = min(cell_extent, (30.0 / max(abs(lam) * c, 1e-30)) ** (1.0 / beta))
    return d, c, alpha


def _run_kernel(pack, lam, x0, x1, y, rtol, atol, renorm, track_acc):
    status, bad_x, _ = _propagate(pack.edges, pack.qk, pack.qp, pack.wk, pack.wp,
                                  complex(lam), float(x0), float(x1), y,
                                  rtol, atol, renorm, track_acc)
    if status == STATUS_STEP_UNDERFLOW:
        raise IntegrationFailure("step size underflow", bad_x)
    if status != STATUS_OK:
        raise IntegrationFailure("step budget exhausted", bad_x)
    return y


# ---------------------------------------------------------------------------
# fundamental system
# ---------------------------------------------------------------------------

def solve_cs(problem, lam, x_targets, rtol=1e-10, atol=1e-12):
    """Samples of the fundamental system at ``x_targets`` (outward order).

    Targets must lie in [0, X] for the plus side, [-X, 0] for the minus
    side, and get visited outward from 0.
    """
    lam = complex(lam)
    plus = problem.side is Side.PLUS
    targets = sorted(float(t) for t in x_targets)
    if not plus:
        targets = targets[::-1]
    span = max(abs(t) for t in targets) if targets else 0.0
    if span == 0.0:
        return [FundamentalSample(t, lam, 1, 0, 0, 1) for t in targets]
    for t in targets:
        if (plus and t < 0) or (not plus and t > 0):
            raise ValueError(f"target {t} on the wrong side")
    a, b = (0.0, span) if plus else (-span, 0.0)
    pack = _merged_pack(problem.q, problem.weight, a, b)
    frob = _frobenius_cell(problem, lam, pack)

    out = []
    y = np.zeros(5, dtype=np.complex128)
    y[0] = 1.0  # c
    y[3] = 1.0  # s'
    x = 0.0
    d_f = 0.0
    if frob is not None:
        d_f, c_f, alpha_f = frob
        beta = alpha_f + 2.0
        z = lam * c_f
    for t in targets:
        if t == 0.0:
            out.append(FundamentalSample(0.0, lam, 1, 0, 0, 1))
            continue
        if frob is not None and abs(t) <= d_f and x == 0.0:
            y1, y1p, y2, y2p = _frobenius_eval(z, beta, abs(t))
            if plus:
                out.append(FundamentalSample(t, lam, y1, y1p, y2, y2p))
            else:
                out.append(FundamentalSample(t, lam, y1, -y1p, -y2, y2p))
            continue
        if frob is not None and x == 0.0:
            # cross the series cell first
            y1, y1p, y2, y2p = _frobenius_eval(z, beta, d_f)
            if plus:
                y[0], y[1], y[2], y[3] = y1, y1p, y2, y2p
                x = d_f
            else:
                y[0], y[1], y[2], y[3] = y1, -y1p, -y2, y2p
                x = -d_f
        _run_kernel(pack, lam, x, t, y, rtol, atol, False, False)
        x = t
        out.append(FundamentalSample(t, lam, y[0], y[1], y[2], y[3]))
    out.sort(key=lambda smp: smp.x)
    return out


# ---------------------------------------------------------------------------
# Weyl solution / numeric m
# ---------------------------------------------------------------------------

def _weyl_once(problem, lam, X, rtol, atol):
    plus = problem.side is Side.PLUS
    a, b = (0.0, X) if plus else (-X, 0.0)
    pack = _merged_pack(problem.q, problem.weight, a, b)
    frob = _frobenius_cell(problem, lam, pack)

    edge = b if plus else a
    w_edge = float(problem.weight(edge))
    u0 = 1j * sqrt_cut(lam * w_edge)
    if not plus:
        u0 = -u0
    y = np.zeros(5, dtype=np.complex128)
    y[0] = 1.0
    y[1] = u0

    x_stop = 0.0
    if frob is not None:
        d_f, c_f, alpha_f = frob
        x_stop = d_f if plus else -d_f
    _run_kernel(pack, lam, edge, x_stop, y, rtol, atol, True, True)
    acc = abs(y[4].real)

    if frob is not None:
        beta = alpha_f + 2.0
        z = lam * c_f
        y1, y1p, y2, y2p = _frobenius_eval(z, beta, d_f)
        fd, fpd = y[0], y[1]
        if plus:
            # inverse of [[y1, y2], [y1', y2']] (det = 1)
            f0 = y2p * fd - y2 * fpd
            fp0 = -y1p * fd + y1 * fpd
        else:
            # value map at -d is [[y1, -y2], [-y1', y2']]
            f0 = y2p * fd + y2 * fpd
            fp0 = y1p * fd + y1 * fpd
        # |f|^2 c|x|^alpha on the series cell, Gauss-Jacobi in (1+t)^alpha
        nodes, weights = roots_jacobi(12, 0.0, alpha_f)
        xs = d_f * (nodes + 1.0) / 2.0
        gsign = 1.0 if plus else -1.0
        cell = 0.0
        for t, wq in zip(xs, weights):
            y1t, _, y2t, _ = _frobenius_eval(z, beta, t)
            val = f0 * y1t + gsign * fp0 * y2t
            cell += wq * (val.real ** 2 + val.imag ** 2)
        acc += c_f * (d_f / 2.0) ** (alpha_f + 1.0) * cell
        y[0], y[1] = f0, fp0

    m = -y[0] / y[1] if plus else y[0] / y[1]
    psi = acc / abs(y[1]) ** 2
    return complex(m), float(psi)


def _check_real_lambda(problem, lam, X):
    if lam.imag != 0.0:
        return
    if lam.real >= 0.0:
        raise NonDecayingTail(
            "real lam >= 0 sits on the oscillatory branch; no decaying tail")
    sign = 1.0 if problem.side is Side.PLUS else -1.0
    xs = sign * np.linspace(0.55 * X, 2.0 * X, 64)
    tail = problem.q(xs) - lam.real * problem.weight(xs)
    if np.any(tail <= 0.0):
        raise NonDecayingTail(
            "q - lam |r| is not eventually positive; tail is not decaying")


def m_numeric(problem, lam, rtol=1e-10, atol=1e-12, trunc_rtol=1e-6):
    """Titchmarsh-Weyl m (Neumann convention) by inward integration.

    Computes at the truncation radius X and at 2X; returns the 2X value
    with |m_X - m_2X| as the error estimate.  Raises
    TruncationUnconverged when that difference exceeds 100x the requested
    truncation tolerance, NonDecayingTail for real lam without an
    exponentially decaying tail.
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("m is not defined at lam = 0")
    X = problem.default_truncation(lam)
    _check_real_lambda(problem, lam, X)
    m1, _ = _weyl_once(problem, lam, X, rtol, atol)
    m2, psi2 = _weyl_once(problem, lam, 2.0 * X, rtol, atol)
    err = abs(m1 - m2)
    if err > 100.0 * trunc_rtol * max(abs(m2), 1e-30):
        raise TruncationUnconverged(
            f"m changed by {err:.3e} between X={X:.3g} and 2X (|m|={abs(m2):.3e})")
    return WeylSolutionSample(lam, m2, psi2, err, 2.0 * X)


def verify_psi_identity(problem, lam, rtol=1e-10, atol=1e-12):
    """(lhs, rhs) of the normalized-Weyl-solution identity.

    lhs = int |psi|^2 |r| dx over the half-line window (psi normalized to
    psi'(0) = 1), rhs = Im m(lam) / Im lam; equality is the defining
    property connecting the Weyl solution to its m-coefficient.
    """
    lam = complex(lam)
    if lam.imag == 0.0:
        raise ValueError("the identity needs Im lam != 0")
    sample = m_numeric(problem, lam, rtol=rtol, atol=atol)
    lhs = sample.psi_norm_sq
    rhs = sample.m_value.imag / lam.imag
    return lhs, rhs


# ---------------------------------------------------------------------------
# boundedness of s(., 0)
# ---------------------------------------------------------------------------

class S0Verdict(enum.Enum):
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class S0Result:
    verdict: S0Verdict
    slope: float
    s_at_X: float
    tail_first_moment: float
    samples: tuple = field(repr=False, default=())


def s0_boundedness(q, X, rtol=1e-11, atol=1e-13):
    """Classify the lam = 0 solution s (s(0) = 0, s'(0) = 1) on [0, inf).

    Integrates to 2X and fits the slope of s against x on [X, 2X]:
    slope ~ 0 means a bounded s, a slope bounded away from 0 means the
    linearly growing branch.  The dead band between the two thresholds is
    reported INCONCLUSIVE.  The first-moment tail mass on [X, 2X] is
    measured and attached (the decay hypothesis itself is the caller's).
    """
    problem = HalfLineProblem(Side.PLUS, q, Coefficient.constant(1.0), X=2.0 * X)
    xs = np.linspace(X, 2.0 * X, 9)
    samples = solve_cs(problem, 0.0, xs, rtol=rtol, atol=atol)
    svals = np.array([smp.s.real for smp in samples])
    slope = np.polyfit(xs, svals, 1)[0]
    s_at_x = svals[0]
    scale = max(1.0, abs(s_at_x) / X)
    tail = q.abs_first_moment(X, 2.0 * X)
    if abs(slope) < 1e-3 * scale:
        verdict = S0Verdict.BOUNDED
    elif abs(slope) > 1e-2 * scale:
        verdict = S0Verdict.UNBOUNDED
    else:
        verdict = S0Verdict.INCONCLUSIVE
    return S0Result(verdict, float(slope), float(s_at_x), float(tail),
                    tuple(zip(xs, svals)))
