"""Build a 512x512 grayscale PGM test corpus from images bundled with
scikit-image (public domain / CC0 sources).

    python scripts/make_corpus.py OUT_DIR            # all images
    python scripts/make_corpus.py OUT_DIR --bundled  # the three shipped in data/images

Classic test images such as Elaine, Lenna and Boat are not redistributable
here; place them in the corpus directory as 8-bit P5 PGM files by hand.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

SIZE = 512
BUNDLED = ("camera", "astronaut", "cell")


def _gray(img: np.ndarray) -> np.ndarray:
    from skimage.color import rgb2gray
    from skimage.util import img_as_ubyte

    if img.ndim == 3:
        img = rgb2gray(img[..., :3])
    return img_as_ubyte(img)


def _center_crop(img: np.ndarray, size: int = SIZE) -> np.ndarray:
    h, w = img.shape[:2]
    if h < size or w < size:
        raise ValueError(f"{w}x{h} is smaller than {size}x{size}")
    top, left = (h - size) // 2, (w - size) // 2
    return img[top : top + size, left : left + size]


def _resize(img: np.ndarray, size: int = SIZE) -> np.ndarray:
    from skimage.transform import resize

    side = min(img.shape[:2])
    img = _center_crop(img, side)
    return resize(img, (size, size), anti_aliasing=True)


def sources():
    """name -> loader returning a 512x512 uint8 plane."""
    from skimage import data

    return {
        "camera": lambda: _gray(data.camera()),
        "astronaut": lambda: _gray(data.astronaut()),
        "brick": lambda: _gray(data.brick()),
        "grass": lambda: _gray(data.grass()),
        "gravel": lambda: _gray(data.gravel()),
        "immunohistochemistry": lambda: _gray(data.immunohistochemistry()),
        "retina": lambda: _gray(_center_crop(data.retina())),
        "hubble": lambda: _gray(_center_crop(data.hubble_deep_field())),
        "cell": lambda: _gray(_center_crop(data.cell())),
        "coffee": lambda: _gray(_resize(data.coffee())),
        "rocket": lambda: _gray(_resize(data.rocket())),
    }


def build(out_dir: Path, names=None) -> list[Path]:
    from approxdct.pgm import write_pgm

    out_dir.mkdir(parents=True, exist_ok=True)
    table = sources()
    written = []
    for name in names or table:
        plane = table[name]()
        if plane.shape != (SIZE, SIZE):
            raise ValueError(f"{name}: got {plane.shape}, expected {SIZE}x{SIZE}")
        path = out_dir / f"{name}.pgm"
        write_pgm(path, plane)
        written.append(path)
    return written


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("out", type=Path)
    p.add_argument("--bundled", action="store_true", help="only the images shipped with the repository")
    args = p.parse_args(argv)
    for path in build(args.out, BUNDLED if args.bundled else None):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
