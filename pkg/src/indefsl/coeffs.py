"""Piecewise coefficient descriptors for potentials q and weights |r|.

A :class:`Coefficient` is an ordered list of segments, each carrying one
of a small set of closed-form shapes that the compiled ODE kernels can
evaluate from packed parameter arrays:

* ``const``          c
* ``poly``           c0 + c1*t + c2*t^2 + c3*t^3 + c4*t^4,  t = x - x0
* ``power``          c * |x|**alpha
* ``shifted_power``  c * (a + b*x)**p      (a + b*x > 0 on the segment)
* ``cosine``         c * cos(omega*x + phase) + offset

Segments must tile an interval of the real line without overlap; gaps are
filled with a constant (0 for potentials).  Arbitrary Python callables are
supported by sampling them onto a piecewise-cubic interpolant at
construction time, which keeps a single integration path through the
packed kernels.
"""

import math
from dataclasses import dataclass

import numpy as np

KIND_CONST = 0
KIND_POLY = 1
KIND_POWER = 2
KIND_SHIFTED_POWER = 3
KIND_COSINE = 4

NPARAMS = 6

_KIND_NAMES = {
    KIND_CONST: "const",
    KIND_POLY: "poly",
    KIND_POWER: "power",
    KIND_SHIFTED_POWER: "shifted_power",
    KIND_COSINE: "cosine",
}


def _seg_value(kind, params, x):
    """Vectorized segment evaluation (mirrors the kernel-side scalar eval)."""
    x = np.asarray(x, dtype=float)
    p = params
    if kind == KIND_CONST:
        return np.full_like(x, p[0])
    if kind == KIND_POLY:
        t = x - p[5]
        return p[0] + t * (p[1] + t * (p[2] + t * (p[3] + t * p[4])))
    if kind == KIND_POWER:
        return p[0] * np.abs(x) ** p[1]
    if kind == KIND_SHIFTED_POWER:
        return p[0] * (p[1] + p[2] * x) ** p[3]
    if kind == KIND_COSINE:
        return p[0] * np.cos(p[1] * x + p[2]) + p[3]
    raise ValueError(f"unknown segment kind {kind}")


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    kind: int
    params: tuple

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty segment [{self.lo}, {self.hi}]")
        if len(self.params) != NPARAMS:
            object.__setattr__(self, "params",
                               tuple(self.params) + (0.0,) * (NPARAMS - len(self.params)))

    def value(self, x):
        return _seg_value(self.kind, self.params, x)

    def reflected(self):
        """Segment describing f(-x) on [-hi, -lo]."""
        p = list(self.params)
        if self.kind == KIND_POLY:
            p[5] = -p[5]
            p[1], p[3] = -p[1], -p[3]
        elif self.kind == KIND_SHIFTED_POWER:
            p[2] = -p[2]
        elif self.kind == KIND_COSINE:
            p[2] = -p[2]
        # const and power (|x|) are reflection-invariant
        return Segment(-self.hi, -self.lo, self.kind, tuple(p))


class Coefficient:
    """Piecewise closed-form function on an interval of the line.

    ``domain`` is the closed interval the coefficient is defined on; the
    outermost segments may extend to +-inf.  ``fill`` closes gaps between
    the provided segments.
    """

    def __init__(self, segments, domain=(0.0, math.inf), fill=0.0):
        lo, hi = float(domain[0]), float(domain[1])
        segs = sorted(segments, key=lambda s: s.lo)
        filled = []
        cursor = lo
        for s in segs:
            if s.lo < cursor - 1e-12:
                raise ValueError(f"overlapping segments at x={s.lo}")
            if s.lo > cursor + 1e-12:
                filled.append(Segment(cursor, s.lo, KIND_CONST, (fill,)))
            filled.append(s)
            cursor = s.hi
        if cursor < hi:
            filled.append(Segment(cursor, hi, KIND_CONST, (fill,)))
        if not filled:
            filled = [Segment(lo, hi, KIND_CONST, (fill,))]
        self.segments = tuple(filled)
        self.domain = (lo, hi)

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c, domain=(0.0, math.inf)):
        return Coefficient([Segment(domain[0], domain[1], KIND_CONST, (float(c),))],
                           domain=domain)

    @staticmethod
    def characteristic(c, a, b, domain=(0.0, math.inf), fill=0.0):
        """c * chi_[a, b] plus ``fill`` outside."""
        return Coefficient([Segment(a, b, KIND_CONST, (float(c),))],
                           domain=domain, fill=fill)

    @staticmethod
    def power(c, alpha, domain=(0.0, math.inf)):
        """c * |x|**alpha on the whole domain."""
        if alpha <= -1.0:
            raise ValueError(f"power weight needs alpha > -1, got {alpha}")
        return Coefficient([Segment(domain[0], domain[1], KIND_POWER,
                                    (float(c), float(alpha)))], domain=domain)

    @staticmethod
    def pieces(spec, domain=(0.0, math.inf), fill=0.0):
        """Build from [(lo, hi, kind_name, params), ...]."""
        name_to_kind = {v: k for k, v in _KIND_NAMES.items()}
        segs = [Segment(lo, hi, name_to_kind[name], tuple(map(float, params)))
                for (lo, hi, name, params) in spec]
        return Coefficient(segs, domain=domain, fill=fill)

    @staticmethod
    def from_callable(f, domain, n=512, fill=0.0):
        """Sample a Python callable onto a piecewise-cubic interpolant.

        The caller owns the interpolation error; ``n`` cubic cells over
        ``domain`` give O((len/n)^4) resolution for smooth f.
        """
        lo, hi = domain
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("from_callable needs a finite domain")
        edges = np.linspace(lo, hi, n + 1)
        segs = []
        for a, b in zip(edges[:-1], edges[1:]):
            xs = np.linspace(a, b, 4)
            ys = [float(f(x)) for x in xs]
            coeff = np.polynomial.polynomial.polyfit(xs - a, ys, 3)
            c = np.zeros(5)
            c[:len(coeff)] = coeff
            segs.append(Segment(a, b, KIND_POLY, (*c, a)))
        return Coefficient(segs, domain=(lo, hi), fill=fill)

    # -- evaluation and helpers ---------------------------------------

    def _lookup_order(self):
        # closed intervals; at a shared edge the segment nearer the
        # origin wins, which makes reflection an exact pointwise
        # symmetry (the choice is measure-zero for the ODE itself)
        return sorted(self.segments, key=lambda s: min(abs(s.lo), abs(s.hi)))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        done = np.zeros(x.shape, dtype=bool)
        for s in self._lookup_order():
            mask = (~done) & (x >= s.lo) & (x <= s.hi)
            if np.any(mask):
                out[mask] = s.value(x[mask])
                done |= mask
        if out.ndim == 0:
            return float(out)
        return out

    def reflected(self):
        lo, hi = self.domain
        return Coefficient([s.reflected() for s in self.segments],
                           domain=(-hi, -lo))

    def breakpoints(self, a, b):
        """Sorted interior segment boundaries within (a, b)."""
        pts = set()
        for s in self.segments:
            for e in (s.lo, s.hi):
                if a < e < b and math.isfinite(e):
                    pts.add(e)
        return sorted(pts)

    def pack(self, a, b):
        """(kinds, params) per cell for the cells split at [a, b] breakpoints.

        Returns (edges, kinds, params) with edges ascending from a to b.
        """
        if not b > a:
            raise ValueError("pack needs a < b")
        edges = [a] + self.breakpoints(a, b) + [b]
        kinds = np.empty(len(edges) - 1, dtype=np.int64)
        params = np.empty((len(edges) - 1, NPARAMS), dtype=np.float64)
        for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            mid = 0.5 * (lo + hi)
            seg = self._segment_at(mid)
            kinds[i] = seg.kind
            params[i] = seg.params
        return np.asarray(edges, dtype=np.float64), kinds, params

    def _segment_at(self, x):
        for s in self._lookup_order():
            if s.lo <= x <= s.hi:
                return s
        lo, hi = self.domain
        raise ValueError(f"x={x} outside coefficient domain [{lo}, {hi}]")

    def grid_min(self, a, b, n=4001):
        xs = np.linspace(a, b, n)
        return float(np.min(self(xs)))

    def abs_first_moment(self, a, b, n=20001):
        """Numerical int_a^b (1 + |x|) |f(x)| dx (tail-mass diagnostics)."""
        if not math.isfinite(b):
            b = max(10.0 * abs(a) + 10.0, 1e4)
        xs = np.linspace(a, b, n)
        return float(np.trapezoid((1.0 + np.abs(xs)) * np.abs(self(xs)), xs))

    def is_singular_power_at_zero(self):
        """(c, alpha, cell_hi) when the segment at 0 is c|x|^alpha, alpha != 0."""
        lo, hi = self.domain
        if lo < 0 < hi:
            return None  # descriptors are per half-line
        x0 = 0.0
        for s in self.segments:
            if s.lo <= x0 <= s.hi and s.kind == KIND_POWER and s.params[1] != 0.0:
                edge = s.hi if hi > 0 else s.lo
                return s.params[0], s.params[1], edge
        return None

    def describe(self):
        return [(s.lo, s.hi, _KIND_NAMES[s.kind], s.params) for s in self.segments]
