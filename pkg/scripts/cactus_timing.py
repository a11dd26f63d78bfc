"""Time is_cactus on growing random cacti and check the cost per edge stays flat.

    python -m scripts.cactus_timing --max-edges 100000
"""
import argparse
import logging
import random
import sys
import time

import networkx as nx

import config
from cactus import is_cactus

logger = logging.getLogger("cactus_timing")


def random_cactus(edges: int, seed: int) -> nx.Graph:
    """Cycles of length 3..8 and bridges hung off random earlier vertices"""
    rng = random.Random(seed)
    graph = nx.Graph()
    graph.add_node(0)
    count = 1
    while graph.number_of_edges() < edges:
        anchor = rng.randrange(count)
        length = rng.choice([1, 3, 4, 5, 6, 7, 8])
        ring = [anchor] + list(range(count, count + max(length - 1, 1)))
        count = ring[-1] + 1
        nx.add_path(graph, ring)
        if length >= 3:
            graph.add_edge(ring[-1], anchor)
    return graph


def measure(graph: nx.Graph, repeats: int) -> float:
    best = None
    for _ in range(repeats):
        start = time.perf_counter()
        report = is_cactus(graph)
        elapsed = time.perf_counter() - start
        if not report.is_cactus:
            raise RuntimeError("generated graph is not a cactus")
        best = elapsed if best is None else min(best, elapsed)
    return best


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Linearity check for cactus recognition.")
    parser.add_argument("--min-edges", type=int, default=6250)
    parser.add_argument("--max-edges", type=int, default=100000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--band", type=float, default=2.0, help="allowed spread of the per-edge cost")
    parser.add_argument("--log-level", default=None)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    config.configure_logging(args.log_level)
    rows = []
    edges = args.min_edges
    while edges <= args.max_edges:
        graph = random_cactus(edges, args.seed)
        seconds = measure(graph, args.repeats)
        per_edge = seconds / graph.number_of_edges()
        rows.append((graph.number_of_edges(), seconds, per_edge))
        logger.info(f"{graph.number_of_edges()} edges: {seconds:.4f}s")
        edges *= 2
    for m, seconds, per_edge in rows:
        print(f"{m:>8} edges  {seconds:8.4f}s  {per_edge * 1e6:8.3f}us/edge")
    costs = [per_edge for _, _, per_edge in rows]
    spread = max(costs) / min(costs)
    print(f"per-edge spread {spread:.2f} (band {args.band})")
    return 0 if spread <= args.band else 1


if __name__ == "__main__":
    sys.exit(main())
