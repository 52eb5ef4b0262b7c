"""Command-line interface: ``lsvcluster <command> [options]``.

Exit status: 0 success, 1 usage error, 2 data error, 3 when ``bounds``
reports a failed check.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import bounds as bnd
from .cluster import lsv_cluster, permute_to_blocks
from .coupling import WEIGHT_KINDS, coupling_matrix, weight_vector
from .ensembles import KINDS, EnsembleSpec, generate
from .evaluation import bench, bench_header, count_errors, fully_recovered
from .heatmap import HeatmapConfig, write_heatmap
from .io import (FormatError, format_coupling, format_dense, format_result, largest_scc,
                 read_clusters, read_network, write_clusters)
from .matrix import MatrixError, bipartite_embed, row_normalize
from .svd import singular_values

EXIT_USAGE, EXIT_DATA, EXIT_BOUNDS = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sizes(text):
    try:
        sizes = [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes:
        raise argparse.ArgumentTypeError("empty size list")
    return sizes


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-t", "--tol", type=float, help="splitting tolerance tau")
    common.add_argument("--weight", choices=WEIGHT_KINDS, default="liwv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--format", dest="fmt", choices=("dense", "edgelist", "bipartite"),
                        default="dense", help="input file format")
    common.add_argument("--directed", action="store_true", help="edge list is directed")
    common.add_argument("--gamma", type=float, default=0.5, help="heatmap gamma")
    common.add_argument("--fix-zero-rows", action="store_true",
                        help="replace all-zero rows by the uniform distribution")
    common.add_argument("--largest-scc", action="store_true",
                        help="keep only the largest strongly connected component")
    common.add_argument("--max-depth", type=int, default=None)
    common.add_argument("-o", "--out", help="output path (default: stdout)")

    p = _Parser(prog="lsvcluster", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", parents=[common], help="singular values of I - T")
    s.add_argument("input")

    s = sub.add_parser("cluster", parents=[common], help="cluster a chain")
    s.add_argument("input")

    s = sub.add_parser("coupling", parents=[common], help="coupling matrix of a clustering")
    s.add_argument("input")
    s.add_argument("--clusters", help="cluster file to score instead of clustering with --tol")

    s = sub.add_parser("generate", parents=[common], help="sample a planted-cluster chain")
    _ensemble_args(s)
    s.add_argument("--truth", help="write the ground-truth clusters here")

    s = sub.add_parser("evaluate", parents=[common], help="score clusters against ground truth")
    s.add_argument("truth")
    s.add_argument("found")

    s = sub.add_parser("bench", parents=[common], help="random-ensemble benchmark row")
    _ensemble_args(s)
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("bounds", parents=[common], help="run the inequality checks")
    s.add_argument("input", nargs="?", help="matrix to check (default: built-in constructions)")

    s = sub.add_parser("heatmap", parents=[common], help="write a PGM heatmap")
    s.add_argument("input")
    s.add_argument("--ascii", action="store_true", help="write ASCII P2 instead of binary P5")
    return p


def _ensemble_args(s):
    s.add_argument("--kind", choices=KINDS, default="uniform")
    s.add_argument("--sizes", type=_sizes, default=[100, 100, 50, 25])
    s.add_argument("--p", type=float, default=0.95)
    s.add_argument("--q", type=float, default=0.0095)
    s.add_argument("--no-permute", action="store_true")


def _load_chain(args):
    """Transition matrix and original labels of its states."""
    A = read_network(args.input, args.fmt, args.directed)
    if args.fmt == "bipartite":
        A = bipartite_embed(A)
    labels = np.arange(A.shape[0])
    if args.largest_scc:
        A, labels = largest_scc(A)
    T = row_normalize(A, "uniform" if args.fix_zero_rows else "error")
    return T, labels


def _need_tol(args):
    if args.tol is None:
        raise UsageError("--tol is required for this command")
    if not args.tol >= 0:
        raise UsageError("--tol must be nonnegative")
    return args.tol


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _relabel(result, labels):
    result.clusters = [labels[c] for c in result.clusters]
    result.unclustered = labels[result.unclustered]
    return result


def cmd_spectrum(args):
    T, _ = _load_chain(args)
    s = singular_values(np.eye(T.shape[0]) - T)
    _emit(args, "".join(f"{x:.17g}\n" for x in s))


def cmd_cluster(args):
    T, labels = _load_chain(args)
    result = lsv_cluster(T, _need_tol(args), args.max_depth)
    _emit(args, format_result(_relabel(result, labels)))


def cmd_coupling(args):
    T, labels = _load_chain(args)
    if args.clusters:
        clusters, unclustered, _ = read_clusters(args.clusters)
        pos = {int(l): k for k, l in enumerate(labels)}
        try:
            blocks = [np.array([pos[int(i)] for i in c]) for c in clusters]
            blocks += [np.array([pos[int(i)]]) for i in unclustered]
        except KeyError as exc:
            raise MatrixError(f"cluster file refers to unknown state {int(exc.args[0]) + 1}") from None
        if args.weight == "liwv":
            raise UsageError("--weight liwv needs a clustering run; omit --clusters or pick "
                             "ones/stationary")
        w = weight_vector(T, None, args.weight)
    else:
        result = lsv_cluster(T, _need_tol(args), args.max_depth)
        blocks = result.partition(singletons=True)
        w = weight_vector(T, result, args.weight)
    W = coupling_matrix(T, blocks, w, kind=args.weight)
    W = replace(W, partition=[labels[b] for b in W.partition])
    _emit(args, format_coupling(W))


def _spec(args):
    return EnsembleSpec(tuple(args.sizes), args.p, args.q, args.kind, args.seed,
                        not args.no_permute)


def cmd_generate(args):
    T, truth = generate(_spec(args))
    _emit(args, format_dense(T))
    if args.truth:
        write_clusters(args.truth, truth.partition)


def cmd_evaluate(args):
    truth, _, _ = read_clusters(args.truth)
    found, _, _ = read_clusters(args.found)
    errors = count_errors(truth, found)
    ok = fully_recovered(truth, found)
    _emit(args, f"errors={errors:g}\nfully_recovered={'true' if ok else 'false'}\n")


def cmd_bench(args):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    row = bench(_spec(args), _need_tol(args), args.trials, seed=args.seed, workers=args.workers)
    _emit(args, bench_header() + "\n" + row.tsv() + "\n")


def cmd_bounds(args):
    if args.input:
        T, _ = _load_chain(args)
        tau = args.tol if args.tol is not None else 0.1
        reports = bnd.matrix_battery(T, tau=tau, seed=args.seed)
    else:
        reports = bnd.builtin_battery(seed=args.seed)
    _emit(args, "".join(r.line() + "\n" for r in reports))
    return EXIT_BOUNDS if any(not r.holds for r in reports) else 0


def cmd_heatmap(args):
    if not args.out:
        raise UsageError("heatmap needs --out")
    T, _ = _load_chain(args)
    if args.tol is not None:
        _, T = permute_to_blocks(T, lsv_cluster(T, args.tol, args.max_depth))
    write_heatmap(T, args.out, HeatmapConfig(args.gamma, args.ascii))


COMMANDS = {
    "spectrum": cmd_spectrum,
    "cluster": cmd_cluster,
    "coupling": cmd_coupling,
    "generate": cmd_generate,
    "evaluate": cmd_evaluate,
    "bench": cmd_bench,
    "bounds": cmd_bounds,
    "heatmap": cmd_heatmap,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args) or 0
    except UsageError as exc:
        print(f"lsvcluster: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MatrixError, FormatError, OSError, ValueError) as exc:
        print(f"lsvcluster: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
