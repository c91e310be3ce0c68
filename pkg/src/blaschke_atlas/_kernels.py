"""Compiled scalar kernels shared by the orbit engine and the comparison families.

Every map is addressed by an integer family code so a single scan loop serves
all of them.  All kernels are pure and release the GIL.
"""

import numba
import numpy as np

FAM_BLASCHKE = 0
FAM_DEGENERATE = 1
FAM_CUBIC = 2
FAM_ANTI = 3
FAM_ANTI_SQUARED = 4
FAM_QUADRATIC = 5

TAG_UNDECIDED = 0
TAG_ESCAPE_ZERO = 1
TAG_ESCAPE_INF = 2
TAG_CYCLE = 3

_jit = numba.njit(cache=True, nogil=True)


@_jit
def step(fam, a, z):
    """One application of the map. Returns (value, hit_pole)."""
    if fam == FAM_BLASCHKE:
        den = 1.0 - a.conjugate() * z
        if den == 0:
            return 0j, True
        return z * z * z * (z - a) / den, False
    if fam == FAM_DEGENERATE:
        return -a * z * z * z, False
    if fam == FAM_CUBIC:
        return a * z * z * (z - 1.0), False
    if fam == FAM_ANTI:
        w = z.conjugate()
        return w * w + a, False
    if fam == FAM_ANTI_SQUARED:
        u = z * z + a.conjugate()
        return u * u + a, False
    return z * z + a, False


@_jit
def wirtinger(fam, a, z):
    """Partial derivatives (d/dz, d/dzbar) of one step at z."""
    if fam == FAM_BLASCHKE:
        ac = a.conjugate()
        den = 1.0 - ac * z
        num = -3.0 * ac * z * z + (4.0 + 2.0 * (a.real * a.real + a.imag * a.imag)) * z - 3.0 * a
        return z * z * num / (den * den), 0j
    if fam == FAM_DEGENERATE:
        return -3.0 * a * z * z, 0j
    if fam == FAM_CUBIC:
        return a * (3.0 * z * z - 2.0 * z), 0j
    if fam == FAM_ANTI:
        return 0j, 2.0 * z.conjugate()
    if fam == FAM_ANTI_SQUARED:
        return 4.0 * z * (z * z + a.conjugate()), 0j
    return 2.0 * z, 0j


@_jit
def iterate_with_jet(fam, a, z, n):
    """Apply the map n times, carrying the Wirtinger pair of the composite."""
    da = 1.0 + 0j
    dc = 0j
    for _ in range(n):
        sa, sc = wirtinger(fam, a, z)
        da, dc = sa * da + sc * dc.conjugate(), sa * dc + sc * da.conjugate()
        z, pole = step(fam, a, z)
        if pole:
            return z, da, dc, True
    return z, da, dc, False


@_jit
def scan(fam, a, z0, max_iter, eps_cycle, eps_circle, r_out, r_in, warmup, project, max_period):
    """Iterate z0 until escape, a confirmed near-return, or budget exhaustion.

    Returns (tag, iterations, entered_disk, left_disk, period, z_last).
    """
    z = z0
    r = abs(z)
    side = 0
    if r - 1.0 > eps_circle:
        side = 1
    elif r - 1.0 < -eps_circle:
        side = -1
    if r > r_out:
        return TAG_ESCAPE_INF, 0, 0, 0, 0, z
    if r < r_in:
        return TAG_ESCAPE_ZERO, 0, 0, 0, 0, z
    entered = 0
    left = 0
    base = z
    base_n = 0
    cand = 0
    for n in range(1, max_iter + 1):
        z, pole = step(fam, a, z)
        if pole:
            return TAG_ESCAPE_INF, n, entered, left, 0, z
        r = abs(z)
        if project and r > 0.0:
            z = z / r
            r = 1.0
        if r > r_out or not np.isfinite(r):
            return TAG_ESCAPE_INF, n, entered, left, 0, z
        if r < r_in:
            return TAG_ESCAPE_ZERO, n, entered, left, 0, z
        if r - 1.0 > eps_circle:
            if side == -1:
                left += 1
            side = 1
        elif r - 1.0 < -eps_circle:
            if side == 1:
                entered += 1
            side = -1
        if n < warmup:
            continue
        if n == warmup:
            base = z
            base_n = n
            continue
        k = n - base_n
        if abs(z - base) < eps_cycle * max(1.0, abs(base)):
            if cand == k:
                return TAG_CYCLE, n, entered, left, k, z
            cand = k
            base = z
            base_n = n
        elif k >= max_period:
            cand = 0
            base = z
            base_n = n
    return TAG_UNDECIDED, max_iter, entered, left, 0, z


@_jit
def polish(fam, a, z, period, max_steps):
    """Damped Newton on f^period(z) - z = 0. Returns (z, residual, converged)."""
    w, da, dc, pole = iterate_with_jet(fam, a, z, period)
    if pole:
        return z, np.inf, False
    g = w - z
    res = abs(g)
    for _ in range(max_steps):
        if res <= 1e-15 * max(1.0, abs(z)):
            return z, res, True
        # (da - 1) d + dc conj(d) = -g, solved as a real 2x2 system
        p_ = da - 1.0 + dc
        q_ = 1j * (da - 1.0 - dc)
        det = p_.real * q_.imag - q_.real * p_.imag
        if det == 0.0:
            return z, res, False
        u = (-g.real * q_.imag + q_.real * g.imag) / det
        v = (-p_.real * g.imag + p_.imag * g.real) / det
        delta = u + 1j * v
        t = 1.0
        accepted = False
        for _h in range(30):
            zn = z + t * delta
            wn, dan, dcn, pole = iterate_with_jet(fam, a, zn, period)
            if not pole:
                gn = wn - zn
                if abs(gn) < res:
                    z, g, res, da, dc = zn, gn, abs(gn), dan, dcn
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            return z, res, res <= 1e-12 * max(1.0, abs(z))
        if abs(t * delta) <= 1e-16 * max(1.0, abs(z)):
            return z, res, True
    return z, res, res <= 1e-12 * max(1.0, abs(z))


@_jit
def scan_many(fam, params, zs, max_iter, eps_cycle, eps_circle, r_out, r_in, warmup, project, max_period,
              tags, iters, entered, left, periods, zlast):
    """Vectorised scan over paired (parameter, start point) arrays, in place."""
    for i in range(zs.shape[0]):
        t, n, e, l, p, zl = scan(fam, params[i], zs[i], max_iter, eps_cycle, eps_circle, r_out[i], r_in[i],
                                 warmup, project, max_period)
        tags[i] = t
        iters[i] = n
        entered[i] = e
        left[i] = l
        periods[i] = p
        zlast[i] = zl


@_jit
def track(fam, a, z, n, project, pts, tol):
    """Iterate n times; also report the first step at which z came within tol of pts."""
    first = -1
    for k in range(n + 1):
        if first < 0:
            for j in range(pts.shape[0]):
                if abs(z - pts[j]) < tol * max(1.0, abs(pts[j])):
                    first = k
                    break
        if k == n:
            break
        z, pole = step(fam, a, z)
        if pole:
            break
        if project:
            r = abs(z)
            if r > 0.0:
                z = z / r
    return z, first
