"""Pure numpy versions of the compiled kernels in ``_ckernels.pyx``."""
import numpy as np

_CHUNK = 256


def etendue_sum(px, py, pz, pw, nx, ny, nz, qx, qy, qz, qw):
    total = []
    for start in range(0, len(px), _CHUNK):
        sl = slice(start, start + _CHUNK)
        dx = qx[None, :] - px[sl, None]
        dy = qy[None, :] - py[sl, None]
        dz = qz - pz[sl, None]
        cs = nx * dx + ny * dy + nz * dz
        d2 = dx * dx + dy * dy + dz * dz
        term = np.where((cs > 0.0) & (dz > 0.0), qw[None, :] * cs * dz / (d2 * d2), 0.0)
        total.append(pw[sl] * term.sum(axis=1))
    return float(np.concatenate(total).sum())


def thermal_counts(uniforms, log_q):
    draws = np.floor(np.log1p(-uniforms) / log_q).astype(np.int64)
    return draws.sum(axis=1)


def power_sums(counts):
    c = np.asarray(counts, dtype=np.int64)
    c2 = c * c
    return int(c.sum()), int(c2.sum()), int((c2 * c).sum()), int((c2 * c2).sum())
