import importlib.util
from pathlib import Path

import numpy as np
import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def _make_corpus_module():
    spec = importlib.util.spec_from_file_location("make_corpus", SCRIPTS / "make_corpus.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def natural_corpus(tmp_path_factory):
    """The 11 CC0 images from scikit-image as 512x512 planes, keyed by name."""
    pytest.importorskip("skimage")
    from approxdct.codec import load_corpus

    out = tmp_path_factory.mktemp("corpus")
    _make_corpus_module().build(out)
    return {name: plane.samples for name, plane in load_corpus(out).items()}


@pytest.fixture(scope="session")
def thirty_image_corpus(natural_corpus):
    """natural_corpus padded to 30 images with transposed and mirrored copies."""
    images = dict(natural_corpus)
    for name, img in natural_corpus.items():
        images[f"{name}-t"] = np.ascontiguousarray(img.T)
    for name, img in list(natural_corpus.items())[: 30 - len(images)]:
        images[f"{name}-m"] = np.ascontiguousarray(img[:, ::-1])
    assert len(images) == 30
    return images
