"""Seeded random networks for tests and acceptance sweeps."""
import logging
import random
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, validator

from errors import GeneratorConfigError
from degeneracy import GeneralizedElasticity
from network import Edge, Network, Vertex

logger = logging.getLogger(__name__)


class Topology(str, Enum):
    TREE = "tree"
    CYCLE = "cycle"
    CACTUS = "cactus"
    RANDOM = "random"
    NON_CACTUS = "non-cactus"


class BoundStyle(str, Enum):
    FREE = "free"
    SYMMETRIC = "symmetric"
    RANDOM_FINITE = "random-finite"


class GeneratorConfig(BaseModel):
    seed: int = Field(0, ge=0, lt=2 ** 64, description="64-bit seed; same seed, same network")
    min_vertices: int = Field(4, ge=1)
    max_vertices: int = Field(6, ge=1)
    topology: Topology = Topology.RANDOM
    bound_style: BoundStyle = BoundStyle.FREE
    magnitude_cap: int = Field(5, ge=1, description="numerators and denominators are drawn from 1..cap")
    cycle_count: Optional[int] = Field(None, ge=0, description="number of cycles for the cactus topology")
    extra_edge_probability: float = Field(0.3, ge=0.0, le=1.0)

    class Config:
        extra = "forbid"

    @validator("max_vertices")
    def check_vertex_range(cls, v, values):
        if "min_vertices" in values and v < values["min_vertices"]:
            raise ValueError("max_vertices must be at least min_vertices")
        return v


def _rational(rng: random.Random, cap: int) -> Fraction:
    return Fraction(rng.randint(1, cap), rng.randint(1, cap))


def _tree_pairs(rng: random.Random, n: int, offset: int = 0) -> List[Tuple[int, int]]:
    return [(rng.randrange(offset, i), i) for i in range(offset + 1, n)]


def _cactus_pairs(rng: random.Random, n: int, cycle_count: int) -> List[Tuple[int, int]]:
    """Blocks are bridges or cycles glued at existing vertices; each cycle takes at least two new vertices"""
    cycles = [2] * cycle_count
    bridges = 0
    for _ in range(n - 1 - 2 * cycle_count):
        if cycles and rng.random() < 0.5:
            cycles[rng.randrange(len(cycles))] += 1
        else:
            bridges += 1
    blocks = cycles + [1] * bridges
    rng.shuffle(blocks)
    pairs = []
    count = 1
    for size in blocks:
        anchor = rng.randrange(count)
        ring = [anchor] + list(range(count, count + size))
        count += size
        pairs.extend(zip(ring, ring[1:]))
        if size >= 2:
            pairs.append((ring[-1], anchor))
    return pairs


def _pairs(rng: random.Random, n: int, config: GeneratorConfig) -> List[Tuple[int, int]]:
    topology = config.topology
    if topology is Topology.TREE:
        return _tree_pairs(rng, n)
    if topology is Topology.CYCLE:
        if n < 3:
            raise GeneratorConfigError("a cycle needs at least 3 vertices")
        return [(i, (i + 1) % n) for i in range(n)]
    if topology is Topology.CACTUS:
        limit = (n - 1) // 2
        if config.cycle_count is not None and config.cycle_count > limit:
            raise GeneratorConfigError(f"a cactus on {n} vertices has at most {limit} cycles, asked for {config.cycle_count}")
        cycle_count = rng.randint(0, limit) if config.cycle_count is None else config.cycle_count
        return _cactus_pairs(rng, n, cycle_count)
    if topology is Topology.NON_CACTUS:
        if n < 4:
            raise GeneratorConfigError("a graph with a diamond minor needs at least 4 vertices")
        pairs = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]
        pairs += [(rng.randrange(i), i) for i in range(4, n)]
    else:
        pairs = _tree_pairs(rng, n)
    present = {frozenset(p) for p in pairs}
    for i in range(n):
        for j in range(i + 1, n):
            if frozenset((i, j)) not in present and rng.random() < config.extra_edge_probability:
                pairs.append((i, j))
                present.add(frozenset((i, j)))
    return pairs


def _bounds(rng: random.Random, style: BoundStyle, cap: int):
    """Bounds around zero so the zero flow stays feasible"""
    if style is BoundStyle.FREE:
        return None, None
    if style is BoundStyle.SYMMETRIC:
        c = _rational(rng, cap)
        return -c, c
    lower = Fraction(0) if rng.random() < 0.2 else -_rational(rng, cap)
    upper = Fraction(0) if rng.random() < 0.2 and lower != 0 else _rational(rng, cap)
    return lower, upper


def generate(config: GeneratorConfig) -> Network:
    if config.min_vertices > config.max_vertices:
        raise GeneratorConfigError("min_vertices exceeds max_vertices")
    rng = random.Random(config.seed)
    n = rng.randint(config.min_vertices, config.max_vertices)
    pairs = _pairs(rng, n, config)
    vertices = []
    for i in range(n):
        lo, hi = _bounds(rng, config.bound_style, config.magnitude_cap)
        vertices.append(Vertex(f"v{i}", lo, hi))
    edges = []
    for k, (a, b) in enumerate(pairs):
        tail, head = (a, b) if rng.random() < 0.5 else (b, a)
        lo, hi = _bounds(rng, config.bound_style, config.magnitude_cap)
        edges.append(Edge(f"e{k}", f"v{tail}", f"v{head}", _rational(rng, config.magnitude_cap), lo, hi))
    logger.debug(f"generated {config.topology.value} network with {n} vertices and {len(edges)} edges")
    return Network(tuple(vertices), tuple(edges))


def join_at_vertex(first: Network, second: Network, at_first: str, at_second: str, prefix: str = "b_") -> Network:
    """Glue ``second`` onto ``first`` by identifying two vertices; ids of ``second`` get ``prefix``"""
    first.require_vertices([at_first])
    second.require_vertices([at_second])

    def rename(vid: str) -> str:
        return at_first if vid == at_second else prefix + vid

    vertices = list(first.vertices)
    vertices += [Vertex(rename(v.id), v.p_lo, v.p_hi) for v in second.vertices if v.id != at_second]
    edges = list(first.edges)
    edges += [Edge(prefix + e.id, rename(e.tail), rename(e.head), e.b, e.f_lo, e.f_hi) for e in second.edges]
    return Network(tuple(vertices), tuple(edges))


def random_generalized_elasticity(seed: int, size: int, cap: int = 5, density: float = 0.3, rooted: bool = True) -> GeneralizedElasticity:
    """Random nonnegative weights; with ``rooted`` every element reaches the last one along positive pairs"""
    rng = random.Random(seed)
    ground = tuple(f"x{i}" for i in range(size))
    weights = {}
    order = list(range(size))
    rng.shuffle(order)
    if rooted:
        # each element points at one placed later in the shuffled order
        for k in range(size - 1):
            successor = order[rng.randint(k + 1, size - 1)]
            weights[(ground[order[k]], ground[successor])] = _rational(rng, cap)
    for i in range(size):
        for j in range(size):
            if i != j and (ground[i], ground[j]) not in weights and rng.random() < density:
                weights[(ground[i], ground[j])] = _rational(rng, cap) if rng.random() < 0.8 else Fraction(0)
    return GeneralizedElasticity(ground, weights)
