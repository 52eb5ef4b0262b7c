"""Grayscale rendering of a nonnegative matrix as a PGM image (darker = larger entry)."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HeatmapConfig:
    gamma: float = 0.5
    ascii: bool = False

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def to_pixels(A, config=HeatmapConfig()):
    """``255 * (1 - min(1, a / a_max) ** gamma)`` rounded, as uint8."""
    a = np.asarray(A, dtype=float)
    if a.size and a.min() < 0:
        raise ValueError("heatmap needs a nonnegative matrix")
    top = a.max() if a.size else 0.0
    if top <= 0:
        return np.full(a.shape, 255, dtype=np.uint8)
    level = np.minimum(1.0, a / top) ** config.gamma
    return np.rint(255 * (1 - level)).astype(np.uint8)


def write_heatmap(A, path, config=HeatmapConfig()):
    """Write `A` as binary P5 (default) or ASCII P2 graymap, one pixel per entry."""
    px = to_pixels(A, config)
    h, w = px.shape
    if config.ascii:
        with open(path, "w") as fh:
            fh.write(f"P2\n{w} {h}\n255\n")
            for row in px:
                fh.write(" ".join(map(str, row)) + "\n")
    else:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(px.tobytes())


def read_pgm(path):
    """Read back a P2/P5 file written by :func:`write_heatmap`."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"{path}: not a PGM file")
    fields = []
    pos = 2
    while len(fields) < 3:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    w, h, _ = fields
    if magic == b"P5":
        px = np.frombuffer(data[pos + 1:pos + 1 + w * h], dtype=np.uint8)
    else:
        px = np.array(data[pos:].split(), dtype=np.uint8)
    return px.reshape(h, w)
