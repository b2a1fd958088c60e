"""Optional compiled SSIM kernel.

When numba is importable, ``ssim_mean`` fuses the Gaussian filtering of
``b``, ``b*b`` and ``a*b`` with the SSIM formula in one pass over the image;
otherwise it is ``None`` and callers use the scipy path.
"""

from __future__ import annotations

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

ssim_mean = None

if numba is not None:

    @numba.njit(cache=True)
    def _ssim_mean(a, b, mu_a, var_a, w, c1, c2):
        """Mean SSIM of float planes ``a``, ``b`` given the local mean and
        variance of ``a`` (valid-mode, separable window ``w``)."""
        rows, cols = a.shape
        n = w.shape[0]
        out_rows = rows - n + 1
        out_cols = cols - n + 1
        vb = np.empty(cols)
        vbb = np.empty(cols)
        vab = np.empty(cols)
        total = 0.0
        for i in range(out_rows):
            vb[:] = 0.0
            vbb[:] = 0.0
            vab[:] = 0.0
            # vertical pass for one output row
            for k in range(n):
                wk = w[k]
                for j in range(cols):
                    bv = b[i + k, j]
                    wb = wk * bv
                    vb[j] += wb
                    vbb[j] += wb * bv
                    vab[j] += wb * a[i + k, j]
            for j in range(out_cols):
                mb = 0.0
                ebb = 0.0
                eab = 0.0
                for k in range(n):
                    wk = w[k]
                    mb += wk * vb[j + k]
                    ebb += wk * vbb[j + k]
                    eab += wk * vab[j + k]
                ma = mu_a[i, j]
                num = (2.0 * ma * mb + c1) * (2.0 * (eab - ma * mb) + c2)
                den = (ma * ma + mb * mb + c1) * (var_a[i, j] + ebb - mb * mb + c2)
                total += num / den
        return total / (out_rows * out_cols)

    ssim_mean = _ssim_mean
