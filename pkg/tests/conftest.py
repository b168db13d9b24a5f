import random

import pytest

from gtbench.gtf import GTFModel
from gtbench.gtff import GTFFModel
from gtbench.gtn import GTNModel
from gtbench.topology import GenTopology, WorldSet, close_under_unions, example_space


class Rand:
    """Random source, pulled out into fixture with repr so the seed is
    displayed on failing tests"""

    def __init__(self, seed=0):
        self.seed = seed or random.randint(0, 2**32 - 1)
        self.rand = random.Random(self.seed)

    def __repr__(self):
        return f"Rand({self.seed})"

    def randint(self, a, b):
        return self.rand.randint(a, b)

    def subset(self, size):
        """random world set over `size` worlds"""
        return WorldSet(self.rand.getrandbits(size), size)

    def valuation(self, size, variables=("p", "q")):
        return {name: self.subset(size) for name in variables}


@pytest.fixture
def rand():
    yield Rand()


def ws(t, *names):
    """World set of a topology by world names."""
    return t.world_set(names)


@pytest.fixture
def ex1():
    """{∅,{a},{b},{a,b}} on {a,b,c}; c is orphaned."""
    return example_space("ex1")


@pytest.fixture
def ex1_model(ex1):
    """Example-1 model with F_c = ∅ and V(p) = {a,b}."""
    return GTFModel.build(ex1, valuation={"p": ws(ex1, "a", "b")})


@pytest.fixture
def overlap():
    """{∅,{a,b},{b,c},{a,b,c}} on {a,b,c}."""
    return close_under_unions(
        3, [WorldSet.of([0, 1], 3), WorldSet.of([1, 2], 3)], ("a", "b", "c")
    )


@pytest.fixture
def point():
    """One-world strong model with V(p) = {x}."""
    t = GenTopology.build(1, [WorldSet(0, 1), WorldSet(1, 1)], ("x",))
    return GTFModel.build(t, valuation={"p": WorldSet(1, 1)})


@pytest.fixture
def two_world_gtn():
    """N_a = {{a},{a,b}}, N_b = {{a,b}}."""
    a, ab = WorldSet.of([0], 2), WorldSet.of([0, 1], 2)
    return GTNModel.build(("a", "b"), {0: [a, ab], 1: [ab]}, {"p": a})


@pytest.fixture
def gtfi_model():
    """μ = {∅,{a}}, Y1 = {a,b}, f = {a↦a, b↦a}, Y2 = {c}, N_c = {{a,b}}, V(p) = {a}."""
    t = GenTopology.build(3, [WorldSet(0, 3), WorldSet.of([0], 3)], ("a", "b", "c"))
    return GTFFModel.build(
        t,
        WorldSet.of([0, 1], 3),
        {0: 0, 1: 0},
        {2: [WorldSet.of([0, 1], 3)]},
        {"p": WorldSet.of([0], 3)},
    )
