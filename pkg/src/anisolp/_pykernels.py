"""Pure numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` one for one and are used whenever the
compiled module is unavailable (or ``ANISOLP_PURE_PYTHON=1``).
"""

import numpy as np

TINY = 1e-300
MAX_NEWTON = 80


def aniso_distance_many(x, a):
    """Anisotropic distance of each row of ``x`` (shape ``(m, n)``)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    ax = np.abs(x)
    out = np.zeros(x.shape[0])
    live = ax.max(axis=1) >= TINY
    if not live.any():
        return out
    ax = ax[live]
    with np.errstate(divide="ignore"):
        lx = np.log(ax)
    scaled = lx / a
    lo = scaled.max(axis=1)
    hi = np.log(np.exp(scaled - lo[:, None]).sum(axis=1)) + lo
    u = lo.copy()
    two_lx = 2.0 * lx
    active = np.ones(u.shape, dtype=bool)
    for _ in range(MAX_NEWTON):
        uu = u[active]
        e = np.exp(two_lx[active] - 2.0 * a * uu[:, None])
        g = e.sum(axis=1) - 1.0
        dg = -2.0 * (e * a).sum(axis=1)
        step = g / dg
        new = np.clip(uu - step, lo[active], hi[active])
        done = np.abs(new - uu) <= 1e-15 * np.maximum(1.0, np.abs(uu))
        u[active] = new
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    out[live] = np.exp(u)
    return out


def band_lq(absvals, weights, q):
    """Pointwise ``(sum_j (w_j |u_j|)**q)**(1/q)`` over the leading axis;
    ``q = inf`` gives the pointwise weighted maximum."""
    absvals = np.asarray(absvals, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64).reshape((-1,) + (1,) * (absvals.ndim - 1))
    stack = absvals * w
    if np.isinf(q):
        return stack.max(axis=0)
    top = stack.max(axis=0)
    safe = np.where(top > 0, top, 1.0)
    return top * ((stack / safe) ** q).sum(axis=0) ** (1.0 / q)
