"""Band-data m-coefficients: spectral polynomials and truncated products.

Finite band data {mu_r0; (mu_l_j, mu_r_j); xi_j in [mu_l_j, mu_r_j];
eps_j = +-1} determines polynomials

    P = prod (lam - xi_j),
    R = (lam - mu_r0) prod (lam - mu_l_j)(lam - mu_r_j),
    Q = the interpolant of eps_j sqrt(-R(xi_j)) at the nodes xi_j,
    S = (Q^2 + R) / P          (exact division; remainder checked),

satisfying P S - Q^2 = R, with the roots of S interlacing the bands
(tau_0 <= mu_r0, tau_j in the j-th band).  The half-line coefficients are

    m_+- = +- P / (Q -+ i sqrt(R)),

where sqrt(R) is the product of cut-branch square roots over the roots of
R: that branch is analytic off the spectral bands and positive on the
band (mu_rN, inf) approached from above, which is exactly the Herglotz
normalization.

The countable-band variant uses the normalized truncated products

    g_N = prod (xi_j - lam)/mu_l_j,
    f_N = (lam - mu_r0) prod (lam - mu_l_j)(lam - mu_r_j)/mu_l_j^2,
    k_N = interpolant of eps_j sqrt(-f_N(xi_j)) on the xi-nodes,
    h_N = (f_N + k_N^2)/g_N,        h_N g_N - k_N^2 = f_N,

and m_+- = +- g_N / (k_N -+ i sqrt(f_N)).  Because g_N carries the factor
(xi_j - lam) (not (lam - xi_j)), the Herglotz branch of sqrt(f_N) is
(-1)^N times the same cut-branch product; the choice is asserted against
the Herglotz sign at an anchor point high on the imaginary axis.
Truncation error is reported by N -> 2N doubling, never bounded a priori.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import BranchAmbiguous, IdentityViolated, SummabilityFailed
from .special import sqrt_cut

__all__ = ["ZoneData", "ZonePolynomials", "finitezone_build", "m_finitezone",
           "ZoneSequenceData", "m_infzone_truncated", "infzone_functions"]


@dataclass(frozen=True)
class ZoneData:
    """Finite band data; bands are (mu_l_j, mu_r_j), j = 1..N."""

    mu_r0: float
    bands: tuple
    xi: tuple
    eps: tuple

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple((float(a), float(b)) for a, b in self.bands))
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        object.__setattr__(self, "eps", tuple(int(v) for v in self.eps))
        n = len(self.bands)
        if len(self.xi) != n or len(self.eps) != n:
            raise ValueError("bands, xi, eps must have equal length")
        prev = self.mu_r0
        for j, (lo, hi) in enumerate(self.bands):
            if not prev < lo < hi:
                raise ValueError(f"band ordering violated at j={j + 1}")
            if not lo <= self.xi[j] <= hi:
                raise ValueError(f"xi_{j + 1}={self.xi[j]} outside [{lo}, {hi}]")
            if self.eps[j] not in (-1, 1):
                raise ValueError("eps entries must be +-1")
            prev = hi

    @property
    def n_bands(self):
        return len(self.bands)

    def r_roots(self):
        roots = [self.mu_r0]
        for lo, hi in self.bands:
            roots += [lo, hi]
        return np.array(roots)


@dataclass(frozen=True)
class ZonePolynomials:
    """P, Q, R, S as ascending coefficient vectors, P S - Q^2 = R.

    Pointwise evaluation goes through the product forms (roots for P, R,
    S; barycentric interpolation for Q), which stay well-conditioned for
    widely spread band data where the coefficient vectors do not.
    """

    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    S: np.ndarray
    source: ZoneData
    residual: float
    taus: np.ndarray = field(default=None)
    q_values: np.ndarray = field(default=None, repr=False)

    def sqrt_R(self, lam):
        """Cut-branch square root of R, analytic off the bands."""
        w = 1.0 + 0.0j
        for root in self.source.r_roots():
            w *= sqrt_cut(lam - root)
        return w

    def P_at(self, lam):
        out = 1.0 + 0.0j
        for x in self.source.xi:
            out *= lam - x
        return out

    def R_at(self, lam):
        out = 1.0 + 0.0j
        for r in self.source.r_roots():
            out *= lam - r
        return out

    def S_at(self, lam):
        out = 1.0 + 0.0j
        for t in self.taus:
            out *= lam - t
        return out

    def Q_at(self, lam):
        nodes = self.source.xi
        n = len(nodes)
        if n == 0:
            return 0.0 + 0.0j
        total = 0.0 + 0.0j
        for j in range(n):
            basis = 1.0 + 0.0j
            for k in range(n):
                if k != j:
                    basis *= (lam - nodes[k]) / (nodes[j] - nodes[k])
            total += self.q_values[j] * basis
        return total


def _lagrange_interpolant(nodes, values):
    """Ascending-coefficient interpolating polynomial (degree < len(nodes))."""
    n = len(nodes)
    coeffs = np.zeros(max(n, 1))
    if n == 0:
        return coeffs
    for j in range(n):
        basis = np.array([1.0])
        denom = 1.0
        for k in range(n):
            if k == j:
                continue
            basis = npoly.polymul(basis, np.array([-nodes[k], 1.0]))
            denom *= nodes[j] - nodes[k]
        coeffs[: len(basis)] += values[j] * basis / denom
    return coeffs


def finitezone_build(z, residual_tol=1e-10):
    """Build the spectral polynomials from band data.

    P and R come from their roots, Q from Lagrange interpolation of
    eps_j sqrt(-R(xi_j)) (this removes the (lam - xi_j) singularity in
    its defining sum), and S by synthetic division of Q^2 + R by P.  The
    division remainder relative to ||R|| must stay below ``residual_tol``
    (IdentityViolated otherwise), and the roots of S are checked against
    their interlacing intervals.
    """
    P = npoly.polyfromroots(np.asarray(z.xi))
    R = npoly.polyfromroots(z.r_roots())
    vals = []
    for j, x in enumerate(z.xi):
        rx = npoly.polyval(x, R)
        if rx > 1e-12 * (1.0 + abs(rx)):
            raise IdentityViolated(f"-R(xi_{j + 1}) = {-rx} < 0; data inconsistent")
        vals.append(z.eps[j] * math.sqrt(max(-rx, 0.0)))
    Q = _lagrange_interpolant(np.asarray(z.xi), np.asarray(vals))
    num = npoly.polyadd(npoly.polymul(Q, Q), R)
    S, rem = npoly.polydiv(num, P)
    scale = float(np.max(np.abs(R)))
    residual = float(np.max(np.abs(rem)) / scale) if len(rem) else 0.0
    if residual > residual_tol:
        raise IdentityViolated(
            f"(Q^2 + R)/P leaves remainder {residual:.3e} of ||R||")
    # re-verify the identity itself on the full coefficient vectors
    lhs = npoly.polysub(npoly.polymul(P, S), npoly.polymul(Q, Q))
    ident = float(np.max(np.abs(npoly.polysub(lhs, R))) / scale)
    if ident > residual_tol:
        raise IdentityViolated(f"P S - Q^2 - R = {ident:.3e} of ||R||")

    taus = np.sort(np.real(npoly.polyroots(S))) if len(S) > 1 else np.array([])
    tol = 1e-7 * (1.0 + abs(z.mu_r0) + (abs(z.bands[-1][1]) if z.bands else 0.0))
    if len(taus):
        if taus[0] > z.mu_r0 + tol:
            raise IdentityViolated(f"tau_0 = {taus[0]} exceeds mu_r0 = {z.mu_r0}")
        for j, (lo, hi) in enumerate(z.bands):
            t = taus[j + 1]
            if not (lo - tol <= t <= hi + tol):
                raise IdentityViolated(f"tau_{j + 1} = {t} outside band [{lo}, {hi}]")
    return ZonePolynomials(P=P, Q=Q, R=R, S=S, source=z,
                           residual=max(residual, ident), taus=taus,
                           q_values=np.asarray(vals))


def m_finitezone(zp, lam, side, cross_tol=1e-9):
    """m_+- at lam from the band polynomials (lam off the bands).

    Both algebraic representations +-P/(Q -+ i sqrt R) and
    (Q +- i sqrt R)/S are evaluated and must agree to ``cross_tol``.
    """
    lam = complex(lam)
    sr = zp.sqrt_R(lam)
    P = zp.P_at(lam)
    Q = zp.Q_at(lam)
    S = zp.S_at(lam)
    from .sl_ode import Side
    plus = side in (Side.PLUS, "plus")
    if plus:
        first = P / (Q - 1j * sr)
        second = (Q + 1j * sr) / S
    else:
        first = -P / (Q + 1j * sr)
        second = -(Q - 1j * sr) / S
    # m itself may vanish (Dirichlet points); compare on the natural
    # magnitude of the second representation's ingredients as well
    scale = max(abs(first), abs(second),
                (abs(Q) + abs(sr)) / max(abs(S), 1e-300))
    if abs(first - second) > cross_tol * scale:
        raise IdentityViolated(
            f"the two band representations disagree at lam={lam}: "
            f"{first} vs {second}")
    return complex(first)


# ---------------------------------------------------------------------------
# countable band data, truncated
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZoneSequenceData:
    """Countable band data given by per-index rules (1-based j)."""

    mu_l: callable
    mu_r: callable
    xi: callable
    eps: callable
    mu_r0: float = 0.0

    @staticmethod
    def geometric_gaps(centers_scale=1.0, gap=0.25, mu_r0=0.0):
        """mu_l_j = scale j^2, mu_r_j = mu_l_j + gap^j, xi at midpoints."""
        def mu_l(j):
            return centers_scale * j * j

        def mu_r(j):
            return centers_scale * j * j + gap ** j

        def xi(j):
            return centers_scale * j * j + 0.5 * gap ** j

        def eps(j):
            return 1

        return ZoneSequenceData(mu_l, mu_r, xi, eps, mu_r0)

    def truncate(self, N):
        bands = [(self.mu_l(j), self.mu_r(j)) for j in range(1, N + 1)]
        return ZoneData(self.mu_r0, bands,
                        [self.xi(j) for j in range(1, N + 1)],
                        [self.eps(j) for j in range(1, N + 1)])

    def summability_report(self, N):
        """Partial sums of the two gap series and their last-quarter tails."""
        j = np.arange(1, N + 1)
        mur = np.array([self.mu_r(int(v)) for v in j])
        mul = np.array([self.mu_l(int(v)) for v in j])
        widths = mur * (mur - mul)
        inv = 1.0 / mul
        q = max(1, N // 4)
        return {
            "sum_width": float(widths.sum()),
            "tail_width": float(widths[-q:].sum()),
            "sum_inv": float(inv.sum()),
            "tail_inv": float(inv[-q:].sum()),
        }

    def check_summable(self, N, tol=0.1):
        """Cauchy-style gate: the last-quarter share of each partial sum
        must be below ``tol``.  A divergent width series keeps an O(1)
        share; slow (harmonic-type) divergence of the reciprocal series
        is not detectable from finitely many terms and stays the data
        supplier's responsibility."""
        rep = self.summability_report(N)
        ok_w = rep["tail_width"] <= tol * max(rep["sum_width"], 1e-30)
        ok_i = rep["tail_inv"] <= tol * max(rep["sum_inv"], 1e-30)
        if not (ok_w and ok_i):
            raise SummabilityFailed(
                f"band-series tails too large at N={N}: {rep}")
        return rep


def infzone_functions(zs, N, lam):
    """(g_N, f_N, k_N, h_N, sqrt_f_N) at lam for truncation N."""
    lam = complex(lam)
    mul = np.array([zs.mu_l(j) for j in range(1, N + 1)], dtype=float)
    mur = np.array([zs.mu_r(j) for j in range(1, N + 1)], dtype=float)
    xi = np.array([zs.xi(j) for j in range(1, N + 1)], dtype=float)
    eps = np.array([zs.eps(j) for j in range(1, N + 1)], dtype=float)

    def g_at(v):
        return np.prod((xi - v) / mul)

    def f_at(v):
        out = v - zs.mu_r0
        for a, b, c in zip(mul, mur, mul):
            out *= (v - a) * (v - b) / (c * c)
        return out

    # k_N: Lagrange interpolation of eps_j sqrt(-f_N(xi_j)) at the xi nodes
    fvals = np.array([f_at(x) for x in xi])
    if np.any(fvals.real > 1e-12):
        raise SummabilityFailed("-f_N(xi_j) < 0: xi outside its band?")
    kvals = eps * np.sqrt(np.maximum(-fvals.real, 0.0))

    def k_at(v):
        if N == 0:
            return 0.0 + 0.0j
        total = 0.0 + 0.0j
        for j in range(N):
            basis = 1.0 + 0.0j
            for kk in range(N):
                if kk != j:
                    basis *= (v - xi[kk]) / (xi[j] - xi[kk])
            total += kvals[j] * basis
        return total

    g = g_at(lam)
    f = f_at(lam)
    k = k_at(lam)
    h = (f + k * k) / g
    # Herglotz branch: (-1)^N times the cut-branch product over the roots
    roots = np.concatenate(([zs.mu_r0], mul, mur))
    sf = (-1.0) ** N / np.prod(mul)
    for root in roots:
        sf *= sqrt_cut(lam - root)
    return g, f, k, h, sf


def m_infzone_truncated(zs, N, lam, side, check_branch=True):
    """m_+- from the N-truncated countable band data.

    The summability report must pass at N; the Herglotz sign of the
    returned value is asserted (BranchAmbiguous on failure).  Callers
    wanting a truncation-error proxy evaluate again at 2N and difference.
    """
    zs.check_summable(N)
    lam = complex(lam)
    g, f, k, h, sf = infzone_functions(zs, N, lam)
    from .sl_ode import Side
    plus = side in (Side.PLUS, "plus")
    m = g / (k - 1j * sf) if plus else -g / (k + 1j * sf)
    if check_branch and lam.imag != 0.0:
        if m.imag * lam.imag < -1e-9 * abs(m):
            raise BranchAmbiguous(
                f"truncated band m violates the Herglotz sign at lam={lam}")
    return complex(m)
