"""Hot inner loops of the overdamped solvers.

Each kernel exists as a numba loop (``*_nb``) and a vectorized numpy twin
(``*_np``).  The public names at the bottom dispatch on ``USE_NUMBA``; the
test-suite checks that both paths agree.

Face convention: ``V[i]`` lives on the face between nodes i and i+1.  On a
no-flux grid the last face is the wall and carries zero velocity; on a
periodic grid it joins node n-1 to node 0.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

LINEAR, CUBIC, COMBINED, ACTIVATED = 0, 1, 2, 3

_EPS = np.finfo(float).eps
# gradients of mu below this multiple of its roundoff are treated as zero
DEADBAND = 8.0
_EXP_CLIP = 700.0


# ---------------------------------------------------------------- friction

@njit(cache=True)
def _solve_combined_nb(a, b1, b3):
    # unique v >= 0 with b3 v^3 + b1 v = a, a >= 0
    if a == 0.0:
        return 0.0
    if b3 == 0.0:
        return a / b1
    if b1 == 0.0:
        return np.cbrt(a / b3)
    lin = a / b1
    cub = np.cbrt(a / b3)
    v = lin if lin < cub else cub
    lo = 0.0
    hi = v
    for _ in range(200):
        f = (b3 * v * v + b1) * v - a
        if f > 0.0:
            hi = v
        elif f < 0.0:
            lo = v
        else:
            return v
        vn = v - f / (3.0 * b3 * v * v + b1)
        if not (lo < vn < hi):
            vn = 0.5 * (lo + hi)
        if abs(vn - v) <= 2.0 * _EPS * v:
            return vn
        v = vn
    return v


@njit(cache=True)
def invert_scalar_nb(g, kind, b1, b3, amp, g0):
    if kind == LINEAR:
        return -g / b1
    if kind == CUBIC:
        return -np.cbrt(g / b3)
    if kind == ACTIVATED:
        return -amp * math.sinh(g / g0)
    v = _solve_combined_nb(abs(g), b1, b3)
    return -v if g > 0.0 else v


@njit(cache=True)
def invert_array_nb(g, kind, b1, b3, amp, g0):
    out = np.empty_like(g)
    for i in range(g.size):
        out[i] = invert_scalar_nb(g[i], kind, b1[i], b3[i], amp, g0)
    return out


def _solve_combined_np(a, b1, b3):
    a = np.asarray(a, dtype=float)
    b1 = np.broadcast_to(np.asarray(b1, dtype=float), a.shape)
    b3 = np.broadcast_to(np.asarray(b3, dtype=float), a.shape)
    out = np.zeros_like(a)
    only3 = (b1 == 0.0) & (a > 0)
    only1 = (b3 == 0.0) & (a > 0)
    out[only1] = a[only1] / b1[only1]
    out[only3] = np.cbrt(a[only3] / b3[only3])
    both = (a > 0) & ~only1 & ~only3
    if not np.any(both):
        return out
    a_, b1_, b3_ = a[both], b1[both], b3[both]
    v = np.minimum(a_ / b1_, np.cbrt(a_ / b3_))
    lo = np.zeros_like(v)
    hi = v.copy()
    active = np.ones(v.shape, dtype=bool)
    for _ in range(200):
        f = (b3_ * v * v + b1_) * v - a_
        hi = np.where(active & (f > 0), v, hi)
        lo = np.where(active & (f < 0), v, lo)
        vn = v - f / (3.0 * b3_ * v * v + b1_)
        bad = ~((lo < vn) & (vn < hi))
        vn = np.where(bad, 0.5 * (lo + hi), vn)
        vn = np.where(f == 0, v, vn)
        done = np.abs(vn - v) <= 2.0 * _EPS * v
        v = np.where(active, vn, v)
        active &= ~done & (f != 0)
        if not active.any():
            break
    out[both] = v
    return out


def invert_array_np(g, kind, b1, b3, amp, g0):
    g = np.asarray(g, dtype=float)
    if kind == LINEAR:
        return -g / b1
    if kind == CUBIC:
        return -np.cbrt(g / b3)
    if kind == ACTIVATED:
        # overflow to +-inf, as in the loop version
        with np.errstate(over="ignore"):
            return -amp * np.sinh(g / g0)
    v = _solve_combined_np(np.abs(g), b1, b3)
    return np.where(g > 0, -v, v)


# ---------------------------------------------------------- face velocities

@njit(cache=True)
def _gi(j, n, periodic):
    if periodic:
        return j % n
    if j < 0:
        return -j
    if j > n - 1:
        return 2 * (n - 1) - j
    return j


@njit(cache=True)
def face_drive_mu_nb(L, U, periodic, dx, qcoef, theta, deadband):
    """Face gradient g = (mu_{i+1} - mu_i)/dx of mu = qcoef*S[rho] + theta*ln(rho) + U.

    qcoef = hbar^2/2m (0 disables the Bohm term); S is the sqrt-rho stencil
    (sqrt(rho)_{i+1} + sqrt(rho)_{i-1} - 2 sqrt(rho)_i)/(dx^2 sqrt(rho)_i) with
    the sign folded in so that Q = -qcoef*S.  With ``deadband`` gradients
    within a few ulps of the size of mu are set to zero.
    """
    n = L.size
    mu = np.empty(n + 1)
    scale = np.empty(n + 1)
    inv_dx2 = 1.0 / (dx * dx)
    for k in range(n + 1):
        i = _gi(k, n, periodic)
        val = U[i]
        sc = abs(U[i])
        if theta != 0.0:
            val += theta * L[i]
            sc += abs(theta * L[i])
        if qcoef != 0.0:
            li = L[i]
            ea = math.exp(min(0.5 * (L[_gi(k + 1, n, periodic)] - li), _EXP_CLIP))
            eb = math.exp(min(0.5 * (L[_gi(k - 1, n, periodic)] - li), _EXP_CLIP))
            val += -qcoef * (ea + eb - 2.0) * inv_dx2
            sc += qcoef * (ea + eb + 2.0) * inv_dx2
        mu[k] = val
        scale[k] = sc
    g = np.empty(n)
    for i in range(n):
        dmu = mu[i + 1] - mu[i]
        if deadband and abs(dmu) <= DEADBAND * _EPS * (scale[i] + scale[i + 1]):
            dmu = 0.0
        g[i] = dmu / dx
    if not periodic:
        g[n - 1] = 0.0
    return g


@njit(cache=True)
def face_velocity_mu_nb(L, U, periodic, dx, qcoef, theta, kind, b1f, b3f, amp, g0):
    """V = f^-1(g) on faces; V[i] sits between nodes i and i+1."""
    g = face_drive_mu_nb(L, U, periodic, dx, qcoef, theta, True)
    V = invert_array_nb(g, kind, b1f, b3f, amp, g0)
    if not periodic:
        V[L.size - 1] = 0.0
    return V


@njit(cache=True)
def face_drive_qcubic_nb(L, periodic, dx, coef, reg):
    """coef * (L' L'' + reg L''') on faces, L = ln(rho)."""
    n = L.size
    S = np.empty(n)
    for i in range(n):
        lm = L[_gi(i - 1, n, periodic)]
        l0 = L[i]
        l1 = L[_gi(i + 1, n, periodic)]
        l2 = L[_gi(i + 2, n, periodic)]
        d1 = (l1 - l0) / dx
        d2 = (l2 - l1 - l0 + lm) / (2.0 * dx * dx)
        s = d1 * d2
        if reg != 0.0:
            s += reg * (l2 - 3.0 * l1 + 3.0 * l0 - lm) / (dx * dx * dx)
        S[i] = coef[i] * s
    if not periodic:
        S[n - 1] = 0.0
    return S


@njit(cache=True)
def face_velocity_qcubic_nb(L, periodic, dx, coef, reg):
    """V = cbrt(coef * (L' L'' + reg L''')) on faces."""
    return np.cbrt(face_drive_qcubic_nb(L, periodic, dx, coef, reg))


def _ghost(L, periodic, width):
    return np.pad(L, width, mode="wrap" if periodic else "reflect")


def face_drive_mu_np(L, U, periodic, dx, qcoef, theta, deadband):
    n = L.size
    # nodes 0..n (node n is the ghost/wrap partner of the last face)
    Lp = _ghost(L, periodic, 2)
    Up = _ghost(U, periodic, 2)
    lc = Lp[2:n + 3]
    uc = Up[2:n + 3]
    mu = uc.copy()
    scale = np.abs(uc)
    if theta != 0.0:
        mu = mu + theta * lc
        scale = scale + np.abs(theta * lc)
    if qcoef != 0.0:
        ea = np.exp(np.minimum(0.5 * (Lp[3:n + 4] - lc), _EXP_CLIP))
        eb = np.exp(np.minimum(0.5 * (Lp[1:n + 2] - lc), _EXP_CLIP))
        mu = mu - qcoef * (ea + eb - 2.0) / dx**2
        scale = scale + qcoef * (ea + eb + 2.0) / dx**2
    dmu = mu[1:] - mu[:-1]
    if deadband:
        dmu = np.where(np.abs(dmu) <= DEADBAND * _EPS * (scale[1:] + scale[:-1]), 0.0, dmu)
    g = dmu / dx
    if not periodic:
        g[-1] = 0.0
    return g


def face_velocity_mu_np(L, U, periodic, dx, qcoef, theta, kind, b1f, b3f, amp, g0):
    g = face_drive_mu_np(L, U, periodic, dx, qcoef, theta, True)
    V = invert_array_np(g, kind, b1f, b3f, amp, g0)
    if not periodic:
        V[-1] = 0.0
    return V


def face_drive_qcubic_np(L, periodic, dx, coef, reg):
    n = L.size
    Lp = _ghost(L, periodic, 2)
    lm, l0, l1, l2 = Lp[1:n + 1], Lp[2:n + 2], Lp[3:n + 3], Lp[4:n + 4]
    s = (l1 - l0) / dx * (l2 - l1 - l0 + lm) / (2.0 * dx * dx)
    if reg != 0.0:
        s = s + reg * (l2 - 3.0 * l1 + 3.0 * l0 - lm) / dx**3
    S = coef * s
    if not periodic:
        S[-1] = 0.0
    return S


def face_velocity_qcubic_np(L, periodic, dx, coef, reg):
    return np.cbrt(face_drive_qcubic_np(L, periodic, dx, coef, reg))


# ------------------------------------------------------- fluxes / residuals

@njit(cache=True)
def flux_divergence_nb(rho, V, periodic, dx):
    """(F_{i+1/2} - F_{i-1/2}) / (w_i dx) with F = mean(rho) * V."""
    n = rho.size
    F = np.empty(n)
    for i in range(n):
        j = (i + 1) % n
        F[i] = 0.5 * (rho[i] + rho[j]) * V[i]
    if not periodic:
        F[n - 1] = 0.0
    out = np.empty(n)
    for i in range(n):
        left = F[i - 1] if (i > 0 or periodic) else 0.0
        w = 1.0
        if not periodic and (i == 0 or i == n - 1):
            w = 0.5
        out[i] = (F[i] - left) / (w * dx)
    return out


def flux_divergence_np(rho, V, periodic, dx):
    F = 0.5 * (rho + np.roll(rho, -1)) * V
    if not periodic:
        F[-1] = 0.0
    left = np.roll(F, 1)
    w = np.ones(rho.size)
    if not periodic:
        left[0] = 0.0
        w[0] = w[-1] = 0.5
    return (F - left) / (w * dx)


@njit(cache=True)
def scaled_residual_nb(L, H1, c1, H2, c2, V, periodic, dx, bdt):
    """Implicit residual divided by rho_i = exp(L_i).

    R_i = 1 - c1 exp(H1_i - L_i) - c2 exp(H2_i - L_i) + bdt * div(F)_i / rho_i;
    H1, H2 are log densities of the history levels.  Every term involves only
    differences of logs, so the residual is scale free and never underflows.
    """
    n = L.size
    R = np.empty(n)
    for i in range(n):
        li = L[i]
        right = 0.0
        if periodic or i < n - 1:
            d = L[(i + 1) % n] - li
            right = 0.5 * (1.0 + math.exp(min(d, _EXP_CLIP))) * V[i]
        left = 0.0
        if periodic or i > 0:
            d = L[i - 1] - li
            left = 0.5 * (1.0 + math.exp(min(d, _EXP_CLIP))) * V[i - 1]
        w = 1.0
        if not periodic and (i == 0 or i == n - 1):
            w = 0.5
        hist = c1 * math.exp(min(H1[i] - li, _EXP_CLIP))
        if c2 != 0.0:
            hist += c2 * math.exp(min(H2[i] - li, _EXP_CLIP))
        R[i] = 1.0 - hist + bdt * (right - left) / (w * dx)
    return R


def scaled_residual_np(L, H1, c1, H2, c2, V, periodic, dx, bdt):
    n = L.size
    Lr = np.roll(L, -1)
    Ll = np.roll(L, 1)
    right = 0.5 * (1.0 + np.exp(np.minimum(Lr - L, _EXP_CLIP))) * V
    left = 0.5 * (1.0 + np.exp(np.minimum(Ll - L, _EXP_CLIP))) * np.roll(V, 1)
    w = np.ones(n)
    if not periodic:
        right[-1] = 0.0
        left[0] = 0.0
        w[0] = w[-1] = 0.5
    hist = c1 * np.exp(np.minimum(H1 - L, _EXP_CLIP))
    if c2 != 0.0:
        hist = hist + c2 * np.exp(np.minimum(H2 - L, _EXP_CLIP))
    return 1.0 - hist + bdt * (right - left) / (w * dx)


if USE_NUMBA:
    invert_array = invert_array_nb
    face_velocity_mu = face_velocity_mu_nb
    face_drive_mu = face_drive_mu_nb
    face_drive_qcubic = face_drive_qcubic_nb
    face_velocity_qcubic = face_velocity_qcubic_nb
    flux_divergence = flux_divergence_nb
    scaled_residual = scaled_residual_nb
else:
    invert_array = invert_array_np
    face_velocity_mu = face_velocity_mu_np
    face_drive_mu = face_drive_mu_np
    face_drive_qcubic = face_drive_qcubic_np
    face_velocity_qcubic = face_velocity_qcubic_np
    flux_divergence = flux_divergence_np
    scaled_residual = scaled_residual_np

BACKEND = "numba" if USE_NUMBA else "numpy"
