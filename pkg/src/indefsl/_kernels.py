"""Adaptive Dormand-Prince propagation kernels for -y'' + q y = lam w y.

One kernel drives everything: it advances the complex state

    y = (u, u', v, v', acc)

through the piecewise cells of the packed coefficients, where (u, v) are
two simultaneous solutions of y'' = (q(x) - lam*w(x)) y and ``acc``
optionally accumulates int |u|^2 w dx along the trajectory.  Steps never
cross cell boundaries, so coefficient discontinuities cost no accuracy.

In Weyl mode (renorm=True) the state is jointly rescaled when |u| grows
past 1e120; the quantities consumed downstream (u'/u and acc/|u'|^2) are
scale-invariant, and the accumulator is rescaled consistently.

Compiled with numba (nogil) when enabled; the same source runs
interpreted as the fallback backend (see indefsl._jit).
"""

import math

import numpy as np

from ._jit import njit_kernel

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                49.0 / 176.0, -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# b5 - b4 error weights (k2 weight is zero)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_TOO_MANY_STEPS = 2

_RENORM_THRESHOLD = 1e120
_MAX_STEPS = 50_000_000


def _coef_eval(kind, p, x):
    if kind == 0:
        return p[0]
    if kind == 1:
        t = x - p[5]
        return p[0] + t * (p[1] + t * (p[2] + t * (p[3] + t * p[4])))
    if kind == 2:
        return p[0] * abs(x) ** p[1]
    if kind == 3:
        return p[0] * (p[1] + p[2] * x) ** p[3]
    return p[0] * math.cos(p[1] * x + p[2]) + p[3]


_coef_eval = njit_kernel(_coef_eval)


def _propagate(edges, qkind, qpar, wkind, wpar, lam, x0, x1, y,
               rtol, atol, renorm, track_acc):
    """Advance y from x0 to x1 through the packed cells (either direction).

    Returns (status, bad_x, nsteps).  y is updated in place.
    """
    ncell = len(qkind)
    if x1 == x0:
        return STATUS_OK, x0, 0
    forward = x1 > x0

    # locate starting cell
    ci = 0
    for i in range(ncell):
        if edges[i] <= x0 <= edges[i + 1]:
            ci = i
            if forward and x0 == edges[i + 1] and i + 1 < ncell:
                ci = i + 1
            if (not forward) and x0 == edges[i] and i > 0:
                ci = i - 1
            break

    k1 = np.zeros(5, dtype=np.complex128)
    k2 = np.zeros(5, dtype=np.complex128)
    k3 = np.zeros(5, dtype=np.complex128)
    k4 = np.zeros(5, dtype=np.complex128)
    k5 = np.zeros(5, dtype=np.complex128)
    k6 = np.zeros(5, dtype=np.complex128)
    k7 = np.zeros(5, dtype=np.complex128)
    yt = np.zeros(5, dtype=np.complex128)
    y5 = np.zeros(5, dtype=np.complex128)

    x = x0
    nsteps = 0
    h = 0.0
    while True:
        # cell-local integration bounds
        if forward:
            cell_end = edges[ci + 1]
            if cell_end > x1:
                cell_end = x1
        else:
            cell_end = edges[ci]
            if cell_end < x1:
                cell_end = x1

        qk = qkind[ci]
        wk = wkind[ci]
        qp = qpar[ci]
        wp = wpar[ci]

        # fresh derivative at cell entry (coefficients jump across cells)
        gq = _coef_eval(qk, qp, x)
        gw = _coef_eval(wk, wp, x)
        g = gq - lam * gw
        k1[0] = y[1]
        k1[1] = g * y[0]
        k1[2] = y[3]
        k1[3] = g * y[2]
        if track_acc:
            k1[4] = (y[0].real * y[0].real + y[0].imag * y[0].imag) * gw
        else:
            k1[4] = 0.0j

        # initial step guess scaled to the local frequency
        freq = math.sqrt(abs(g)) + 1e-12
        hmag = 0.35 / freq
        if h != 0.0:
            hmag = abs(h)
        rem = abs(cell_end - x)
        if hmag > rem:
            hmag = rem

        while True:
            if (forward and x >= cell_end) or ((not forward) and x <= cell_end):
                break
            rem = abs(cell_end - x)
            hfree = hmag
            last = hmag >= rem
            if last:
                hmag = rem
            elif hmag < 1e-14 * (1.0 + abs(x)):
                return STATUS_STEP_UNDERFLOW, x, nsteps
            # land exactly on the cell edge to avoid un-steppable slivers
            hs = (cell_end - x) if last else (hmag if forward else -hmag)

            # stages 2..6
            for i in range(5):
                yt[i] = y[i] + hs * _A21 * k1[i]
            xs = x + _C2 * hs
            gq = _coef_eval(qk, qp, xs)
            gw = _coef_eval(wk, wp, xs)
            g = gq - lam * gw
            k2[0] = yt[1]
            k2[1] = g * yt[0]
            k2[2] = yt[3]
            k2[3] = g * yt[2]
            k2[4] = ((yt[0].real ** 2 + yt[0].imag ** 2) * gw) if track_acc else 0.0j

            for i in range(5):
                yt[i] = y[i] + hs * (_A31 * k1[i] + _A32 * k2[i])
            xs = x + _C3 * hs
            gq = _coef_eval(qk, qp, xs)
            gw = _coef_eval(wk, wp, xs)
            g = gq - lam * gw
            k3[0] = yt[1]
            k3[1] = g * yt[0]
            k3[2] = yt[3]
            k3[3] = g * yt[2]
            k3[4] = ((yt[0].real ** 2 + yt[0].imag ** 2) * gw) if track_acc else 0.0j

            for i in range(5):
                yt[i] = y[i] + hs * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
            xs = x + _C4 * hs
            gq = _coef_eval(qk, qp, xs)
            gw = _coef_eval(wk, wp, xs)
            g = gq - lam * gw
            k4[0] = yt[1]
            k4[1] = g * yt[0]
            k4[2] = yt[3]
            k4[3] = g * yt[2]
            k4[4] = ((yt[0].real ** 2 + yt[0].imag ** 2) * gw) if track_acc else 0.0j

            for i in range(5):
                yt[i] = y[i] + hs * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i]
                                     + _A54 * k4[i])
            xs = x + _C5 * hs
            gq = _coef_eval(qk, qp, xs)
            gw = _coef_eval(wk, wp, xs)
            g = gq - lam * gw
            k5[0] = yt[1]
            k5[1] = g * yt[0]
            k5[2] = yt[3]
            k5[3] = g * yt[2]
            k5[4] = ((yt[0].real ** 2 + yt[0].imag ** 2) * gw) if track_acc else 0.0j

            for i in range(5):
                yt[i] = y[i] + hs * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                                     + _A64 * k4[i] + _A65 * k5[i])
            xs = x + hs
            gq = _coef_eval(qk, qp, xs)
            gw = _coef_eval(wk, wp, xs)
            g = gq - lam * gw
            k6[0] = yt[1]
            k6[1] = g * yt[0]
            k6[2] = yt[3]
            k6[3] = g * yt[2]
            k6[4] = ((yt[0].real ** 2 + yt[0].imag ** 2) * gw) if track_acc else 0.0j

            # 5th order solution (k2 has zero weight)
            for i in range(5):
                y5[i] = y[i] + hs * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                                     + _B5 * k5[i] + _B6 * k6[i])
            # k7 = f(x+h, y5), reused as next k1 (FSAL)
            k7[0] = y5[1]
            k7[1] = g * y5[0]
            k7[2] = y5[3]
            k7[3] = g * y5[2]
            k7[4] = ((y5[0].real ** 2 + y5[0].imag ** 2) * gw) if track_acc else 0.0j

            errnorm = 0.0
            for i in range(5):
                e = hs * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i]
                          + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i])
                ay = abs(y[i])
                ay5 = abs(y5[i])
                sc = atol + rtol * (ay if ay > ay5 else ay5)
                q = abs(e) / sc
                if q > errnorm:
                    errnorm = q

            nsteps += 1
            if nsteps > _MAX_STEPS:
                return STATUS_TOO_MANY_STEPS, x, nsteps

            if errnorm <= 1.0:
                x = cell_end if last else x + hs
                for i in range(5):
                    y[i] = y5[i]
                    k1[i] = k7[i]
                if renorm:
                    m0 = abs(y[0])
                    m1 = abs(y[1])
                    mm = m0 if m0 > m1 else m1
                    if mm > _RENORM_THRESHOLD:
                        inv = 1.0 / mm
                        for i in range(4):
                            y[i] *= inv
                            k1[i] *= inv
                        y[4] *= inv * inv
                        k1[4] *= inv * inv
                fac = 5.0
                if errnorm > 1e-10:
                    fac = 0.9 * errnorm ** -0.2
                    if fac > 5.0:
                        fac = 5.0
                # a snapped boundary step must not shrink the carried h
                hmag = hfree if last else hmag * fac
            else:
                fac = 0.9 * errnorm ** -0.2
                if fac < 0.1:
                    fac = 0.1
                hmag = hmag * fac

        h = hmag if forward else -hmag
        if (forward and x >= x1) or ((not forward) and x <= x1):
            return STATUS_OK, x, nsteps
        ci = ci + 1 if forward else ci - 1
        if ci < 0 or ci >= ncell:
            return STATUS_OK, x, nsteps


_propagate_py = _propagate
_propagate = njit_kernel(_propagate)
