"""Text formats: dense matrices, edge lists, bipartite lists, cluster and coupling files.

All human-facing files use 1-based state indices.
"""

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .matrix import as_matrix


class FormatError(ValueError):
    """Malformed input file; the message carries the offending line number."""


def _lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def format_dense(A):
    a = np.asarray(A, dtype=float)
    rows = [f"{a.shape[0]} {a.shape[1]}"]
    rows += [" ".join(f"{x:.17g}" for x in r) for r in a]
    return "\n".join(rows) + "\n"


def write_dense(A, path):
    with open(path, "w") as fh:
        fh.write(format_dense(A))


def read_dense(path):
    it = _lines(path)
    try:
        lineno, header = next(it)
    except StopIteration:
        raise FormatError(f"{path}: empty file") from None
    try:
        n, m = (int(t) for t in header.split())
    except ValueError:
        raise FormatError(f"{path}:{lineno}: expected header 'n m', got {header!r}") from None
    rows = []
    for lineno, line in it:
        try:
            vals = [float(t) for t in line.split()]
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from None
        if len(vals) != m:
            raise FormatError(f"{path}:{lineno}: expected {m} values, got {len(vals)}")
        rows.append(vals)
    if len(rows) != n:
        raise FormatError(f"{path}: expected {n} rows, got {len(rows)}")
    return as_matrix(rows)


def _parse_triples(path, header_keys):
    header = {}
    edges = []
    for lineno, line in _lines(path):
        tok = line.split()
        if tok[0] in header_keys:
            if len(tok) % 2:
                raise FormatError(f"{path}:{lineno}: malformed header {line!r}")
            for key, val in zip(tok[::2], tok[1::2]):
                if key not in header_keys:
                    raise FormatError(f"{path}:{lineno}: unknown header key {key!r}")
                try:
                    header[key] = int(val)
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: bad count {val!r}") from None
            continue
        if len(tok) not in (2, 3):
            raise FormatError(f"{path}:{lineno}: expected 'i j [w]', got {line!r}")
        try:
            i, j = int(tok[0]), int(tok[1])
            w = float(tok[2]) if len(tok) == 3 else 1.0
        except ValueError:
            raise FormatError(f"{path}:{lineno}: cannot parse {line!r}") from None
        if i < 1 or j < 1:
            raise FormatError(f"{path}:{lineno}: indices are 1-based, got {i} {j}")
        if not np.isfinite(w) or w < 0:
            raise FormatError(f"{path}:{lineno}: weight must be finite and >= 0, got {w}")
        edges.append((lineno, i, j, w))
    return header, edges


def read_edgelist(path, directed=False):
    """Weighted adjacency matrix from ``i j [w]`` lines (optional ``n <count>`` header).

    Repeated edges add up. Undirected lists are symmetrized.
    """
    header, edges = _parse_triples(path, ("n",))
    n = header.get("n", max((max(i, j) for _, i, j, _ in edges), default=0))
    if n < 1:
        raise FormatError(f"{path}: no vertices")
    A = np.zeros((n, n))
    for lineno, i, j, w in edges:
        if i > n or j > n:
            raise FormatError(f"{path}:{lineno}: endpoint out of range 1..{n}")
        A[i - 1, j - 1] += w
        if not directed and i != j:
            A[j - 1, i - 1] += w
    return A


def read_bipartite(path):
    """``m x n`` biadjacency matrix from ``i j [w]`` lines (optional ``rows m cols n`` header)."""
    header, edges = _parse_triples(path, ("rows", "cols"))
    m = header.get("rows", max((i for _, i, _, _ in edges), default=0))
    n = header.get("cols", max((j for _, _, j, _ in edges), default=0))
    if m < 1 or n < 1:
        raise FormatError(f"{path}: empty bipartite network")
    D = np.zeros((m, n))
    for lineno, i, j, w in edges:
        if i > m or j > n:
            raise FormatError(f"{path}:{lineno}: entry ({i}, {j}) out of range {m}x{n}")
        D[i - 1, j - 1] += w
    return D


def write_bipartite(D, path):
    D = np.asarray(D)
    with open(path, "w") as fh:
        fh.write(f"rows {D.shape[0]} cols {D.shape[1]}\n")
        for i, j in zip(*np.nonzero(D)):
            fh.write(f"{i + 1} {j + 1} {D[i, j]:.17g}\n")


def read_network(path, kind="dense", directed=False):
    if kind == "dense":
        return read_dense(path)
    if kind == "edgelist":
        return read_edgelist(path, directed)
    if kind == "bipartite":
        return read_bipartite(path)
    raise ValueError(f"unknown network format {kind!r}")


def largest_scc(A):
    """Restrict a weighted digraph to its largest strongly connected component.

    Returns ``(sub, keep)`` with `keep` the retained 0-based vertices.
    """
    A = np.asarray(A)
    _, labels = connected_components(csr_matrix(A > 0), directed=True, connection="strong")
    counts = np.bincount(labels)
    keep = np.flatnonzero(labels == np.argmax(counts))
    return A[np.ix_(keep, keep)], keep


# --- clusters ---------------------------------------------------------------

def _ids(indices):
    idx = sorted(int(i) + 1 for i in indices)
    return " ".join(map(str, idx)) if idx else "-"


def format_clusters(clusters, unclustered=(), clustered=True):
    out = []
    for k, c in enumerate(clusters, 1):
        out.append(f"cluster {k} size={len(c)}: {_ids(c)}")
    out.append(f"unclustered: {_ids(unclustered)}")
    out.append(f"clustered: {'true' if clustered else 'false'}")
    return "\n".join(out) + "\n"


def format_result(result):
    return format_clusters(result.clusters, result.unclustered, result.clustered)


def parse_clusters(text, source="<clusters>"):
    """Inverse of :func:`format_clusters`: ``(clusters, unclustered, clustered)``, 0-based."""
    clusters, unclustered, clustered = [], [], True
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        head, _, body = line.partition(":")
        body = body.strip()
        try:
            ids = [] if body in ("", "-") else [int(t) - 1 for t in body.split()]
        except ValueError:
            ids = None
        if head.startswith("cluster ") and ids is not None:
            parts = head.split()
            if len(parts) != 3 or not parts[2].startswith("size="):
                raise FormatError(f"{source}:{lineno}: malformed cluster line")
            if int(parts[2][5:]) != len(ids):
                raise FormatError(f"{source}:{lineno}: size does not match index count")
            clusters.append(np.array(ids, dtype=np.int64))
        elif head == "unclustered" and ids is not None:
            unclustered = ids
        elif head == "clustered" and body in ("true", "false"):
            clustered = body == "true"
        else:
            raise FormatError(f"{source}:{lineno}: unrecognized line {line!r}")
    return clusters, np.array(unclustered, dtype=np.int64), clustered


def read_clusters(path):
    with open(path) as fh:
        return parse_clusters(fh.read(), path)


def write_clusters(path, clusters, unclustered=(), clustered=True):
    with open(path, "w") as fh:
        fh.write(format_clusters(clusters, unclustered, clustered))


def format_coupling(W):
    lines = [f"weights={W.kind}"]
    lines += [f"block {k}: {_ids(b)}" for k, b in enumerate(W.partition, 1)]
    return "\n".join(lines) + "\n" + format_dense(W.values)
