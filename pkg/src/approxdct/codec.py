"""Truncation-only JPEG-like block codec and image quality measures.

Each n x n block ``A`` goes to ``C A C^-1``; the first ``r`` coefficients in
zig-zag order are kept, and the block is rebuilt as ``C^-1 B C``.  There is
no quantization table or entropy coding.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.ndimage import correlate1d

from . import _ssim_kernel
from .orthogonalization import ScaledApproximation
from .pgm import read_pgm, write_pgm

log = logging.getLogger(__name__)

__all__ = [
    "CompressionReport",
    "ImagePlane",
    "SweepRow",
    "ZigZagOrder",
    "ape",
    "compress_plane",
    "corpus_sweep",
    "forward_block",
    "inverse_block",
    "load_corpus",
    "psnr",
    "retain",
    "ssim",
    "zigzag_order",
]

SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_SIGMA = 1.5
SSIM_WINDOW = 11
DYNAMIC_RANGE = 255.0


@dataclass(frozen=True, eq=False)
class ImagePlane:
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 2 or s.size == 0:
            raise ValueError("an image plane is a non-empty 2-D array")
        if s.dtype != np.uint8:
            if s.min() < 0 or s.max() > 255 or not np.all(s == np.round(s)):
                raise ValueError("samples must be integers in 0..255")
            s = s.astype(np.uint8)
        object.__setattr__(self, "samples", s)

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @classmethod
    def read(cls, path) -> ImagePlane:
        return cls(read_pgm(path))

    def write(self, path) -> None:
        write_pgm(path, self.samples)


@dataclass(frozen=True)
class ZigZagOrder:
    n: int

    @cached_property
    def positions(self) -> tuple[tuple[int, int], ...]:
        """Scan position -> (row, col), JPEG style: (0,0), (0,1), (1,0), (2,0), ..."""
        cells = [(i, j) for i in range(self.n) for j in range(self.n)]
        cells.sort(key=lambda p: (p[0] + p[1], -p[0] if (p[0] + p[1]) % 2 == 0 else p[0]))
        return tuple(cells)

    @cached_property
    def scan_index(self) -> np.ndarray:
        """(row, col) -> scan position; the inverse permutation."""
        idx = np.empty((self.n, self.n), dtype=np.int64)
        for k, (i, j) in enumerate(self.positions):
            idx[i, j] = k
        return idx

    def mask(self, r: int) -> np.ndarray:
        if not 1 <= r <= self.n * self.n:
            raise ValueError(f"retained count must be in 1..{self.n * self.n}, got {r}")
        return self.scan_index < r


def zigzag_order(n: int = 8) -> ZigZagOrder:
    return ZigZagOrder(n)


def forward_block(c: ScaledApproximation, a: np.ndarray) -> np.ndarray:
    """``C A C^-1`` on one block or a stack of blocks (leading axes broadcast)."""
    a = np.asarray(a, dtype=np.float64)
    if a.shape[-2:] != (c.size, c.size):
        raise ValueError(f"block shape {a.shape[-2:]} does not match transform size {c.size}")
    return c.approx @ a @ c.inverse_approx


def inverse_block(c: ScaledApproximation, b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=np.float64)
    if b.shape[-2:] != (c.size, c.size):
        raise ValueError(f"block shape {b.shape[-2:]} does not match transform size {c.size}")
    return c.inverse_approx @ b @ c.approx


def retain(b: np.ndarray, order: ZigZagOrder, r: int) -> np.ndarray:
    return np.where(order.mask(r), b, 0.0)


def _to_blocks(samples: np.ndarray, n: int) -> np.ndarray:
    h, w = samples.shape
    if h % n or w % n:
        raise ValueError(f"image {w}x{h} is not divisible into {n}x{n} blocks")
    return samples.reshape(h // n, n, w // n, n).swapaxes(1, 2).astype(np.float64)


def _from_blocks(blocks: np.ndarray) -> np.ndarray:
    bh, bw, n, _ = blocks.shape
    return blocks.swapaxes(1, 2).reshape(bh * n, bw * n)


def _to_pixels(x: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(x), 0, 255).astype(np.uint8)


def _as_samples(x) -> np.ndarray:
    return x.samples if isinstance(x, ImagePlane) else np.asarray(x)


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical planes."""
    a = _as_samples(a).astype(np.float64)
    b = _as_samples(b).astype(np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(DYNAMIC_RANGE**2 / mse)


def _gaussian_window() -> np.ndarray:
    x = np.arange(SSIM_WINDOW) - (SSIM_WINDOW - 1) / 2
    w = np.exp(-(x * x) / (2 * SSIM_SIGMA**2))
    return w / w.sum()


_WINDOW = _gaussian_window()
_HALF = SSIM_WINDOW // 2
_C1 = (SSIM_K1 * DYNAMIC_RANGE) ** 2
_C2 = (SSIM_K2 * DYNAMIC_RANGE) ** 2


def _local_mean(x: np.ndarray) -> np.ndarray:
    # separable filtering, cropped to the positions where the window fits
    y = correlate1d(x, _WINDOW, axis=0, mode="constant")
    y = correlate1d(y, _WINDOW, axis=1, mode="constant")
    return y[_HALF:-_HALF, _HALF:-_HALF]


class _SSIMReference:
    """Local statistics of one image, reused across many comparisons."""

    def __init__(self, a: np.ndarray):
        a = a.astype(np.float64)
        if min(a.shape) < SSIM_WINDOW:
            raise ValueError(f"SSIM needs both dimensions >= {SSIM_WINDOW}")
        self.a = a
        self.mu = _local_mean(a)
        self.var = _local_mean(a * a) - self.mu**2

    def against(self, b: np.ndarray) -> float:
        b = b.astype(np.float64)
        if b.shape != self.a.shape:
            raise ValueError(f"dimension mismatch {self.a.shape} vs {b.shape}")
        if _ssim_kernel.ssim_mean is not None:
            return float(_ssim_kernel.ssim_mean(self.a, b, self.mu, self.var, _WINDOW, _C1, _C2))
        return self._against_scipy(b)

    def _against_scipy(self, b: np.ndarray) -> float:
        b = b.astype(np.float64)
        c1, c2 = _C1, _C2
        mu_b = _local_mean(b)
        var_b = _local_mean(b * b) - mu_b**2
        cov = _local_mean(self.a * b) - self.mu * mu_b
        num = (2 * self.mu * mu_b + c1) * (2 * cov + c2)
        den = (self.mu**2 + mu_b**2 + c1) * (self.var + var_b + c2)
        return float(np.mean(num / den))


def ssim(a, b) -> float:
    """Mean SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, L = 255."""
    a = _as_samples(a)
    b = _as_samples(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    return _SSIMReference(a).against(b)


def ape(value: float, reference: float) -> float:
    """Absolute percentage error of ``value`` against ``reference``."""
    if math.isinf(value) and math.isinf(reference):
        return 0.0
    return 100.0 * abs(value - reference) / abs(reference)


@dataclass(frozen=True)
class CompressionReport:
    transform: str
    r: int
    psnr: float
    ssim: float
    ape_psnr: float | None = None
    ape_ssim: float | None = None


def _reconstructions(coeffs: np.ndarray, c: ScaledApproximation, r_values) -> dict[int, np.ndarray]:
    """Pixel planes for every ``r`` in ``r_values``, from block coefficients.

    Keeping one more coefficient adds one rank-one basis image per block, so
    the reconstructions are built up in a single pass over the zig-zag scan.
    """
    order = zigzag_order(c.size)
    wanted = set(r_values)
    for r in wanted:
        order.mask(r)
    inv, fwd = c.inverse_approx, c.approx
    acc = np.zeros_like(coeffs)
    out = {}
    for k, (i, j) in enumerate(order.positions[: max(wanted)], start=1):
        acc += coeffs[..., i, j, None, None] * np.outer(inv[:, i], fwd[j, :])
        if k in wanted:
            out[k] = _to_pixels(_from_blocks(acc))
    return out


def compress_plane(img, c: ScaledApproximation, r: int, reference: ScaledApproximation | None = None):
    """Compress one plane, keeping ``r`` coefficients per block.

    With a ``reference`` transform (normally the exact DCT) the report also
    carries APE values of PSNR and SSIM against it.
    """
    plane = img if isinstance(img, ImagePlane) else ImagePlane(img)
    zigzag_order(c.size).mask(r)
    blocks = _to_blocks(plane.samples, c.size)
    recon = _reconstructions(forward_block(c, blocks), c, [r])[r]
    ref = _SSIMReference(plane.samples)
    p, s = psnr(plane.samples, recon), ref.against(recon)
    ape_p = ape_s = None
    if reference is not None:
        ref_blocks = _to_blocks(plane.samples, reference.size)
        ref_recon = _reconstructions(forward_block(reference, ref_blocks), reference, [r])[r]
        ape_p = ape(p, psnr(plane.samples, ref_recon))
        ape_s = ape(s, ref.against(ref_recon))
    return ImagePlane(recon), CompressionReport(c.name, r, p, s, ape_p, ape_s)


def _image_scores(samples: np.ndarray, transforms: list[ScaledApproximation], r_values: list[int]):
    ref = _SSIMReference(samples)
    p = np.empty((len(transforms), len(r_values)))
    s = np.empty_like(p)
    for ti, c in enumerate(transforms):
        recons = _reconstructions(forward_block(c, _to_blocks(samples, c.size)), c, r_values)
        for ri, r in enumerate(r_values):
            p[ti, ri] = psnr(samples, recons[r])
            s[ti, ri] = ref.against(recons[r])
    return p, s


def _worker_count() -> int:
    raw = os.environ.get("APPROXDCT_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        log.warning("ignoring non-integer APPROXDCT_THREADS=%r", raw)
        n = 0
    if n < 0:
        n = 0
    return n or (os.cpu_count() or 1)


@dataclass(frozen=True)
class SweepRow:
    transform: str
    r: int
    psnr: float
    ssim: float
    ape_psnr: float
    ape_ssim: float


def _valid_plane(name: str, img, n: int):
    try:
        plane = img if isinstance(img, ImagePlane) else ImagePlane(img)
        if plane.height % n or plane.width % n:
            raise ValueError(f"{plane.width}x{plane.height} is not divisible by {n}")
        if min(plane.height, plane.width) < SSIM_WINDOW:
            raise ValueError("image too small for SSIM")
        return plane.samples
    except ValueError as exc:
        log.warning("skipping %s: %s", name, exc)
        return None


def corpus_sweep(images, transforms, r_values=range(1, 46), reference: str = "dct") -> list[SweepRow]:
    """Average PSNR/SSIM over a corpus for every (transform, r), with APE.

    ``images`` maps names to planes (or is a sequence of planes);
    ``transforms`` maps names to ``ScaledApproximation`` and must contain
    ``reference``.  Malformed images are logged and skipped.  Per-image work
    may run in worker processes (``APPROXDCT_THREADS``); totals are always
    accumulated in image order, so the result does not depend on the worker
    count.  Infinite PSNR values are left out of the PSNR average.
    """
    if isinstance(images, dict):
        named = list(images.items())
    else:
        named = [(f"image[{i}]", img) for i, img in enumerate(images)]
    if reference not in transforms:
        raise ValueError(f"transform set must include the reference {reference!r}")
    names = list(transforms)
    mats = [transforms[k] for k in names]
    r_values = list(r_values)
    n = max(c.size for c in mats)
    planes = [s for name, img in named if (s := _valid_plane(name, img, n)) is not None]
    if not planes:
        raise ValueError("no usable images in corpus")

    workers = min(_worker_count(), len(planes))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_image_scores, planes, [mats] * len(planes), [r_values] * len(planes)))
    else:
        results = [_image_scores(s, mats, r_values) for s in planes]

    p_sum = np.zeros((len(names), len(r_values)))
    p_cnt = np.zeros_like(p_sum)
    s_sum = np.zeros_like(p_sum)
    for p, s in results:
        finite = np.isfinite(p)
        p_sum += np.where(finite, p, 0.0)
        p_cnt += finite
        s_sum += s
    if np.any(p_cnt < len(planes)):
        log.warning("infinite PSNR (lossless reconstruction) left out of the averages")
    with np.errstate(invalid="ignore", divide="ignore"):
        p_avg = np.where(p_cnt > 0, p_sum / np.maximum(p_cnt, 1), math.inf)
    s_avg = s_sum / len(planes)

    ref = names.index(reference)
    rows = []
    for ti, name in enumerate(names):
        for ri, r in enumerate(r_values):
            rows.append(
                SweepRow(
                    name,
                    r,
                    float(p_avg[ti, ri]),
                    float(s_avg[ti, ri]),
                    ape(float(p_avg[ti, ri]), float(p_avg[ref, ri])),
                    ape(float(s_avg[ti, ri]), float(s_avg[ref, ri])),
                )
            )
    return rows


def load_corpus(directory) -> dict[str, ImagePlane]:
    """Read every ``*.pgm`` in a directory, skipping unreadable files with a warning."""
    out = {}
    for path in sorted(Path(directory).glob("*.pgm")):
        try:
            out[path.name] = ImagePlane.read(path)
        except (OSError, ValueError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
    return out
