"""Full acceptance sweep over seeded random instances.

Run from the repository root:

    python -m scripts.run_acceptance --only alpha-trees wheatstone

Exits 0 when every selected criterion passes, 1 otherwise.
"""
import argparse
import logging
import sys
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, islice
from typing import Callable, Dict, List

import networkx as nx

import config
import degeneracy
from alpha import conforms, extract_alpha_tree, is_alpha_tree
from cactus import brute_force_is_cactus, is_cactus
from errors import DifferentialFlowError
from generator import BoundStyle, GeneratorConfig, Topology, generate, random_generalized_elasticity
from hardness import SubsetSumInstance, gadget_degenerate
from linalg import is_constant
from network import Network, admittance_matrix, elasticity_matrix, incidence_matrix
from polytope import enumerate_vertices, is_extremal

logger = logging.getLogger("acceptance")

SWEEP_TOPOLOGIES = (Topology.TREE, Topology.CYCLE, Topology.CACTUS, Topology.RANDOM, Topology.NON_CACTUS)


@dataclass
class CriterionResult:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        logger.warning(f"{self.name}: {message}")
        self.failures.append(message)


def _sweep_network(seed: int, max_vertices: int, topology: Topology) -> Network:
    low = 4 if topology is Topology.NON_CACTUS else 3
    return generate(
        GeneratorConfig(
            seed=seed,
            min_vertices=low,
            max_vertices=max(low, max_vertices),
            topology=topology,
            bound_style=BoundStyle.RANDOM_FINITE,
        )
    )


def check_alpha_trees(args) -> CriterionResult:
    """Every enumerated vertex has a conforming alpha-tree; certified sufficient conditions are extremal"""
    result = CriterionResult("alpha-trees")
    certified = 0
    for seed in range(args.seed, args.seed + args.networks):
        net = _sweep_network(seed, args.max_vertices, SWEEP_TOPOLOGIES[seed % len(SWEEP_TOPOLOGIES)])
        try:
            for f in enumerate_vertices(net):
                result.checked += 1
                F = extract_alpha_tree(net, f)
                if not (is_alpha_tree(net, F) and conforms(net, f, F)):
                    result.fail(f"seed {seed}: extracted alpha-tree does not conform")
                    continue
                for check in (degeneracy.check_suff_one_active_per_component, degeneracy.check_suff_small_degree):
                    if check(net, f, F) is degeneracy.Sufficiency.CERTIFIED:
                        certified += 1
        except DifferentialFlowError as e:
            result.fail(f"seed {seed}: {e}")
    logger.info(f"{result.name}: {result.checked} vertices, {certified} certified sufficient-condition verdicts")
    return result


def check_rank_identities(args) -> CriterionResult:
    result = CriterionResult("rank-identities")
    for seed in range(args.seed, args.seed + args.networks):
        net = _sweep_network(seed, args.max_vertices, SWEEP_TOPOLOGIES[seed % len(SWEEP_TOPOLOGIES)])
        result.checked += 1
        for name, matrix in (
            ("A^T", incidence_matrix(net).transpose()),
            ("B^T", elasticity_matrix(net).transpose()),
            ("A B^T", admittance_matrix(net)),
        ):
            kernel = matrix.kernel_basis()
            if len(kernel) != 1 or not is_constant(kernel[0]):
                result.fail(f"seed {seed}: kernel of {name} is not spanned by the all-ones vector")
    return result


def check_cactus_equivalence(args) -> CriterionResult:
    """No counterexample on cacti; a valid witness on every non-cactus"""
    result = CriterionResult("cactus-equivalence")
    for seed in range(args.seed, args.seed + args.cactus_networks):
        net = _sweep_network(seed, args.max_vertices, Topology.CACTUS)
        result.checked += 1
        try:
            for mode in degeneracy.SearchMode:
                verdict = degeneracy.test_nondegeneracy(net, mode=mode)
                if verdict.degenerate:
                    result.fail(f"cactus seed {seed}: {mode.value} search found a counterexample")
        except DifferentialFlowError as e:
            result.fail(f"cactus seed {seed}: {e}")
    for seed in range(args.seed, args.seed + args.non_cactus_networks):
        net = _sweep_network(seed, args.max_vertices + 2, Topology.NON_CACTUS)
        result.checked += 1
        witness = degeneracy.build_degeneracy_witness(net)
        failures = ["no witness"] if witness is None else degeneracy.verify_degeneracy_witness(witness)
        for failure in failures:
            result.fail(f"non-cactus seed {seed}: {failure}")
    return result


def check_wheatstone(args) -> CriterionResult:
    result = CriterionResult("wheatstone")
    for b_wt, extremal in ((1, False), (2, True)):
        net = Network.from_arcs(
            ["w", "v", "s", "t"],
            [("w", "v"), ("w", "s"), ("v", "s"), ("w", "t"), ("v", "t")],
            b=[1, 1, 1, b_wt, 1],
            edge_ids=["w-v", "w-s", "v-s", "w-t", "v-t"],
            vertex_bounds={"w": (0, 0), "v": (0, 0)},
            edge_bounds={"w-v": (0, 0)},
        )
        result.checked += 1
        if is_extremal(net, [0] * net.m).is_extremal is not extremal:
            result.fail(f"b_wt = {b_wt}: expected extremal={extremal}")
    return result


def _connected_graphs(n: int):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(p for k, p in enumerate(pairs) if mask >> k & 1)
        if nx.is_connected(graph):
            yield graph


def check_cactus_recognition(args) -> CriterionResult:
    result = CriterionResult("cactus-recognition")
    graphs = [g for n in range(1, args.oracle_max_vertices + 1) for g in _connected_graphs(n)]
    for seed in range(args.seed, args.seed + args.oracle_samples):
        graph = nx.gnp_random_graph(args.oracle_max_vertices + 1, 0.35, seed=seed)
        graphs.append(nx.compose(graph, nx.path_graph(args.oracle_max_vertices + 1)))
    for graph in graphs:
        result.checked += 1
        if is_cactus(graph).is_cactus != brute_force_is_cactus(graph):
            result.fail(f"disagreement on edges {sorted(graph.edges)}")
    return result


def check_gadget(args) -> CriterionResult:
    result = CriterionResult("gadget")
    for n in range(1, args.gadget_max_n + 1):
        for sizes in combinations_with_replacement(range(1, args.gadget_max_size + 1), n):
            for target in range(1, args.gadget_max_target + 1):
                result.checked += 1
                try:
                    gadget_degenerate(SubsetSumInstance(sizes, target))
                except DifferentialFlowError as e:
                    result.fail(f"sizes {list(sizes)}, target {target}: {e}")
        logger.info(f"{result.name}: n = {n} done, {result.checked} instances so far")
    return result


def check_generalized_flows(args) -> CriterionResult:
    result = CriterionResult("generalized-flows")
    for seed in range(args.seed, args.seed + args.elasticities):
        b_prime = random_generalized_elasticity(seed, size=3 + seed % 6)
        rooted, _ = degeneracy.has_spanning_anti_arborescence(b_prime.support_digraph())
        if not rooted:
            result.fail(f"seed {seed}: generator produced no anti-arborescence")
            continue
        result.checked += 1
        kernel = b_prime.constraint_matrix().kernel_basis()
        if len(kernel) != 1 or not is_constant(kernel[0]):
            result.fail(f"seed {seed}: kernel is not the constant potentials")
    return result


CRITERIA: Dict[str, Callable] = {
    "alpha-trees": check_alpha_trees,
    "cactus-equivalence": check_cactus_equivalence,
    "wheatstone": check_wheatstone,
    "cactus-recognition": check_cactus_recognition,
    "gadget": check_gadget,
    "rank-identities": check_rank_identities,
    "generalized-flows": check_generalized_flows,
}


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Run the acceptance sweep.")
    parser.add_argument("--only", nargs="+", choices=sorted(CRITERIA), default=None)
    parser.add_argument("--seed", type=int, default=0, help="first seed of every sweep")
    parser.add_argument("--networks", type=int, default=200)
    parser.add_argument("--max-vertices", type=int, default=6)
    parser.add_argument("--cactus-networks", type=int, default=100)
    parser.add_argument("--non-cactus-networks", type=int, default=50)
    parser.add_argument("--oracle-max-vertices", type=int, default=6)
    parser.add_argument("--oracle-samples", type=int, default=200)
    parser.add_argument("--gadget-max-n", type=int, default=6)
    parser.add_argument("--gadget-max-size", type=int, default=10)
    parser.add_argument("--gadget-max-target", type=int, default=20)
    parser.add_argument("--elasticities", type=int, default=100)
    parser.add_argument("--log-level", default=None)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    config.configure_logging(args.log_level)
    names = args.only or list(CRITERIA)
    results = [CRITERIA[name](args) for name in names]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.checked} checked, {len(result.failures)} failures")
        for failure in islice(result.failures, 10):
            print(f"    {failure}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
