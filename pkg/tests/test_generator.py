import pytest
from pydantic import ValidationError

from cactus import find_diamond_minor, is_cactus
from errors import GeneratorConfigError
from generator import BoundStyle, GeneratorConfig, Topology, generate, join_at_vertex, random_generalized_elasticity


def _fixed(n, **kwargs):
    return GeneratorConfig(min_vertices=n, max_vertices=n, **kwargs)


def test_tree_and_cycle_sizes():
    tree = generate(_fixed(5, topology=Topology.TREE))
    assert (tree.n, tree.m) == (5, 4)
    assert tree.vertex_ids == ("v0", "v1", "v2", "v3", "v4")
    cycle = generate(_fixed(5, topology=Topology.CYCLE))
    assert cycle.m == 5


@pytest.mark.parametrize("seed", range(6))
def test_cactus_cycle_count(seed):
    net = generate(_fixed(9, seed=seed, topology=Topology.CACTUS, cycle_count=3))
    assert is_cactus(net).is_cactus
    assert net.m == net.n - 1 + 3


@pytest.mark.parametrize("seed", range(6))
def test_non_cactus_has_a_minor(seed):
    net = generate(_fixed(7, seed=seed, topology=Topology.NON_CACTUS))
    assert find_diamond_minor(net) is not None


def test_same_seed_same_network():
    config = GeneratorConfig(seed=42, bound_style=BoundStyle.RANDOM_FINITE)
    assert generate(config) == generate(config)
    assert generate(config) != generate(config.copy(update={"seed": 43}))


@pytest.mark.parametrize("seed", range(4))
def test_bound_styles(seed):
    free = generate(GeneratorConfig(seed=seed))
    assert all(e.f_lo is None and e.f_hi is None for e in free.edges)
    symmetric = generate(GeneratorConfig(seed=seed, bound_style=BoundStyle.SYMMETRIC))
    assert all(e.f_lo == -e.f_hi for e in symmetric.edges)
    finite = generate(GeneratorConfig(seed=seed, bound_style=BoundStyle.RANDOM_FINITE, magnitude_cap=3))
    for e in finite.edges:
        assert e.f_lo <= 0 <= e.f_hi
        assert e.b.numerator <= 3 and e.b.denominator <= 3
    for v in finite.vertices:
        assert v.p_lo <= 0 <= v.p_hi


def test_invalid_configurations():
    with pytest.raises(ValidationError):
        GeneratorConfig(min_vertices=5, max_vertices=4)
    with pytest.raises(ValidationError):
        GeneratorConfig(colour="red")
    with pytest.raises(GeneratorConfigError):
        generate(_fixed(5, topology=Topology.CACTUS, cycle_count=3))
    with pytest.raises(GeneratorConfigError):
        generate(_fixed(3, topology=Topology.NON_CACTUS))
    with pytest.raises(GeneratorConfigError):
        generate(_fixed(2, topology=Topology.CYCLE))


def test_join_at_vertex(triangle):
    joined = join_at_vertex(triangle, triangle, "x", "v")
    assert (joined.n, joined.m) == (5, 6)
    assert "b_e0" in joined.edge_ids
    assert joined.degree("x") == 4


def test_random_generalized_elasticity_is_seeded():
    first = random_generalized_elasticity(7, size=5)
    assert first == random_generalized_elasticity(7, size=5)
    assert first.weights == random_generalized_elasticity(7, size=5).weights
    assert first.ground == ("x0", "x1", "x2", "x3", "x4")
