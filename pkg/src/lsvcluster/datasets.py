"""Small reference chains: the Courtois matrix and the Davis "Deep South" two-mode network."""

import numpy as np

from .matrix import as_stochastic, bipartite_embed, row_normalize

_COURTOIS = [
    [0.85, 0, 0.149, 0.0009, 0, 0.00005, 0, 0.00005],
    [0.1, 0.65, 0.249, 0, 0.0009, 0.00005, 0, 0.00005],
    [0.1, 0.8, 0.0996, 0.0003, 0, 0, 0.0001, 0],
    [0, 0.0004, 0, 0.7, 0.2995, 0, 0.0001, 0],
    [0.0005, 0, 0.0004, 0.399, 0.6, 0.0001, 0, 0],
    [0, 0.00005, 0, 0, 0.00005, 0.6, 0.2499, 0.15],
    [0.00003, 0, 0.00003, 0.00004, 0, 0.1, 0.8, 0.0999],
    [0, 0.00005, 0, 0, 0.00005, 0.1999, 0.25, 0.55],
]

# 18 women (rows) x 14 social events (columns)
_DEEP_SOUTH = """
11111101100000
11101111000000
01111111100000
10111111000000
00111010000000
00101101000000
00001111000000
00000101100000
00001011100000
00000011100100
00000001110100
00000001110111
00000011110111
00000110111111
00000011011100
00000001100000
00000000101000
00000000101000
"""


def courtois():
    """8-state nearly decoupled chain with three metastable groups."""
    return as_stochastic(_COURTOIS)


def deep_south_biadjacency():
    return np.array([[int(c) for c in row] for row in _DEEP_SOUTH.split()], dtype=float)


def deep_south_walk():
    """32-state random walk on the women/events bipartite graph (women first)."""
    return row_normalize(bipartite_embed(deep_south_biadjacency()))
