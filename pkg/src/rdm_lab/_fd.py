"""Finite-difference traces and derivatives on cell-centered grids.

Boundary faces sit half a spacing outside the first node layer, so values
and normal derivatives on a face are one-sided extrapolations.  Cubic
(4-point) stencils keep the trace error at O(h^3)/O(h^2), which the
boundary-form quadrature needs at desk resolutions.
"""

import numpy as np

# Lagrange weights on nodes at distances (1/2, 3/2, 5/2, 7/2) h inside a face
_VAL4 = np.array([2.1875, -2.1875, 1.3125, -0.3125])
_DER4 = np.array([-71.0 / 24.0, 47.0 / 8.0, -31.0 / 8.0, 23.0 / 24.0])


def axis_derivative(u, axis, h):
    """d/dx along one axis: 4th-order centered interior, 3rd-order ends."""
    w = np.moveaxis(u, axis, 0)
    out = np.empty_like(w)
    out[2:-2] = (w[:-4] - 8 * w[1:-3] + 8 * w[3:-1] - w[4:]) / (12 * h)
    out[0] = (-11 * w[0] + 18 * w[1] - 9 * w[2] + 2 * w[3]) / (6 * h)
    out[1] = (-2 * w[0] - 3 * w[1] + 6 * w[2] - w[3]) / (6 * h)
    out[-1] = (11 * w[-1] - 18 * w[-2] + 9 * w[-3] - 2 * w[-4]) / (6 * h)
    out[-2] = (2 * w[-1] + 3 * w[-2] - 6 * w[-3] + w[-4]) / (6 * h)
    return np.moveaxis(out, 0, axis)


def face_trace(u, axis, side, h):
    """(value, outward normal derivative) on an outer face.

    ``u`` is the grid-shaped array; ``side`` is 'lo' or 'hi'.  The returned
    arrays run over the transverse indices of the face.
    """
    w = np.moveaxis(u, axis, 0)
    if side == "hi":
        w = w[::-1]
    layers = w[:4]
    value = np.tensordot(_VAL4, layers, axes=(0, 0))
    inward = np.tensordot(_DER4, layers, axes=(0, 0)) / h
    return value, -inward


def boundary_form(u, v, h):
    """The antisymmetric boundary form (u, Delta v) - (Delta u, v).

    Computed as the surface integral of u d_n v - v d_n u over all outer
    faces with midpoint quadrature (weight h^{d-1} per transverse node).
    """
    d = u.ndim
    weight = h ** (d - 1)
    total = 0.0
    for axis in range(d):
        for side in ("lo", "hi"):
            uv, udn = face_trace(u, axis, side, h)
            vv, vdn = face_trace(v, axis, side, h)
            total += float(np.sum(uv * vdn - vv * udn)) * weight
    return total


def interface_normal_derivative(u, axis, layer, h):
    """One-sided normal derivative on the plane between node layers.

    ``layer`` is the index of the last node layer before the interface;
    estimates from both sides are returned as (from_below, from_above),
    each an array over the transverse indices.
    """
    w = np.moveaxis(u, axis, 0)
    below = w[layer::-1][:4]
    above = w[layer + 1:][:4]
    if below.shape[0] < 4 or above.shape[0] < 4:
        raise ValueError("need at least four node layers on each side")
    d_below = -np.tensordot(_DER4, below, axes=(0, 0)) / h
    d_above = np.tensordot(_DER4, above, axes=(0, 0)) / h
    return d_below, d_above
