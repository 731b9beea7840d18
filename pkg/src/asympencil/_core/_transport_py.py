import math

import numpy as np


def double_reflection(points, tangents, u0):
    """Transport ``u0`` along sampled points by two reflections per step.

    Args:
        points: (n, 3) curve samples.
        tangents: (n, 3) unit tangents at the samples.
        u0: unit vector normal to ``tangents[0]``.

    Returns:
        (n, 3) array of transported normal vectors.
    """
    x = np.asarray(points, dtype=float).tolist()
    tg = np.asarray(tangents, dtype=float).tolist()
    n = len(x)
    out = np.empty((n, 3))
    r0, r1, r2 = (float(c) for c in u0)
    out[0] = (r0, r1, r2)
    for i in range(n - 1):
        xa, xb = x[i], x[i + 1]
        ta, tb = tg[i], tg[i + 1]
        v0, v1, v2 = xb[0] - xa[0], xb[1] - xa[1], xb[2] - xa[2]
        c1 = v0 * v0 + v1 * v1 + v2 * v2
        if c1 == 0.0:
            out[i + 1] = (r0, r1, r2)
            continue
        k = 2.0 * (v0 * r0 + v1 * r1 + v2 * r2) / c1
        l0, l1, l2 = r0 - k * v0, r1 - k * v1, r2 - k * v2
        k = 2.0 * (v0 * ta[0] + v1 * ta[1] + v2 * ta[2]) / c1
        w0 = tb[0] - (ta[0] - k * v0)
        w1 = tb[1] - (ta[1] - k * v1)
        w2 = tb[2] - (ta[2] - k * v2)
        c2 = w0 * w0 + w1 * w1 + w2 * w2
        if c2 == 0.0:
            r0, r1, r2 = l0, l1, l2
        else:
            k = 2.0 * (w0 * l0 + w1 * l1 + w2 * l2) / c2
            r0, r1, r2 = l0 - k * w0, l1 - k * w1, l2 - k * w2
        norm = math.sqrt(r0 * r0 + r1 * r1 + r2 * r2)
        r0, r1, r2 = r0 / norm, r1 / norm, r2 / norm
        out[i + 1] = (r0, r1, r2)
    return out
