"""Small numerical helpers shared by the physics modules."""

import numpy as np

EPS = np.finfo(float).eps
STEP_SCALE = EPS ** (1.0 / 3.0)


def fd_step(x):
    # relative step; an absolute floor of 1 would swamp small arguments
    ax = abs(x)
    return STEP_SCALE * (ax if ax > 0 else 1.0)


def central_diff(fn, x, h=None):
    """Second-order central difference of a scalar or array-valued ``fn`` at ``x``."""
    if h is None:
        h = fd_step(x)
    xp, xm = x + h, x - h
    return (np.asarray(fn(xp)) - np.asarray(fn(xm))) / (xp - xm)


def central_diff4(fn, x):
    """Fourth-order central difference of a scalar ``fn``; step ``~ eps**(1/5)``."""
    ax = abs(x)
    h = EPS**0.2 * (ax if ax > 0 else 1.0)
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


def jacobian_fd(fn, x):
    """Central-difference Jacobian ``J[i, j] = d fn_i / d x_j`` of a vector map."""
    x = np.asarray(x, dtype=float)
    cols = []
    # one step for all directions, scaled to the vector as a whole
    h = STEP_SCALE * float(np.max(np.abs(x)) or 1.0)
    for j in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        cols.append((np.asarray(fn(xp)) - np.asarray(fn(xm))) / (xp[j] - xm[j]))
    return np.stack(cols, axis=-1)


def rel_spread(values):
    """``(max - min) / |mean|`` of a sample."""
    v = np.asarray(values, dtype=float)
    return float((v.max() - v.min()) / abs(v.mean()))
