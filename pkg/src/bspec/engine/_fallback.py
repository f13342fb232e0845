"""Pure numpy implementations of the hot counting kernels.

Signatures mirror the compiled ``_kernels`` module exactly; every array
argument is a C-contiguous int64 array of residues in ``[0, q-1]``.
"""
import numpy as np

# keys per bincount call, keeps temporaries around 8-16 MB
_BATCH_KEYS = 1 << 20


def spectrum_dense(at, byz, czx, q, y_lo, y_hi, out):
    """Accumulate triangle counts for outer rows ``y_lo <= y < y_hi`` into ``out``.

    ``at[y, x] = B(x, y)``, ``byz[y, z] = B(y, z)``, ``czx[z, x] = B(z, x)``;
    ``out`` is the flat ``q**3`` tensor indexed ``l1*q*q + l2*q + l3``.
    """
    n3, n1 = czx.shape
    qq = q * q
    size = q * qq
    per_y = max(1, n1 * n3)
    step = max(1, _BATCH_KEYS // per_y)
    for lo in range(y_lo, y_hi, step):
        hi = min(lo + step, y_hi)
        keys = (at[lo:hi, None, :] * qq + byz[lo:hi, :, None] * q) + czx[None, :, :]
        out += np.bincount(keys.ravel(), minlength=size)


def pair_histogram(table, q):
    return np.bincount(table.ravel(), minlength=q).astype(np.int64)


def row_value_counts(table, q):
    """``counts[i, v] = #{j : table[i, j] == v}``."""
    n = table.shape[0]
    out = np.zeros((n, q), dtype=np.int64)
    if table.size:
        keys = table + (np.arange(n, dtype=np.int64) * q)[:, None]
        out += np.bincount(keys.ravel(), minlength=n * q).reshape(n, q)
    return out


def first_dependent(x, y, z, q):
    """First ``(i, j, k)`` in lexicographic index order with ``det[x_i; y_j; z_k] = 0``.

    Returns ``(-1, -1, -1)`` when every triple is linearly independent.
    """
    n2, n3 = len(y), len(z)
    if len(x) == 0 or n2 == 0 or n3 == 0:
        return (-1, -1, -1)
    yb = y[:, None, :]
    zb = z[None, :, :]
    cross = np.stack([
        yb[..., 1] * zb[..., 2] - yb[..., 2] * zb[..., 1],
        yb[..., 2] * zb[..., 0] - yb[..., 0] * zb[..., 2],
        yb[..., 0] * zb[..., 1] - yb[..., 1] * zb[..., 0],
    ], axis=-1).reshape(n2 * n3, 3) % q
    step = max(1, _BATCH_KEYS // (n2 * n3))
    for lo in range(0, len(x), step):
        dets = (x[lo:lo + step] @ cross.T) % q
        hits = np.flatnonzero(dets.ravel() == 0)
        if hits.size:
            flat = int(hits[0])
            i, jk = divmod(flat, n2 * n3)
            j, k = divmod(jk, n3)
            return (lo + i, j, k)
    return (-1, -1, -1)
