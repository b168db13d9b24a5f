import pytest

from gtbench.exceptions import InvalidModelError, UniverseMismatchError, UnknownExampleError
from gtbench.topology import (
    GenTopology,
    WorldSet,
    all_subsets,
    close_under_unions,
    closure,
    enumerate_topologies,
    example_space,
    find_density_witness,
    interior,
    is_nowhere_dense,
    is_strong,
    is_strongly_nowhere_dense,
    validate_topology,
)


def S(*indices, size=3):
    return WorldSet.of(indices, size)


def opens_of(t):
    return {x.bits for x in t.opens}


def test_world_set_bits():
    x = S(0, 2)
    assert list(x) == [0, 2]
    assert len(x) == 2
    assert 2 in x and 1 not in x
    assert x.complement() == S(1)
    assert x.describe(("a", "b", "c")) == "{a,c}"


def test_world_set_rejects_foreign_universe():
    with pytest.raises(UniverseMismatchError):
        S(0) | WorldSet.of([0], 2)
    with pytest.raises(UniverseMismatchError):
        WorldSet(8, 3)


@pytest.mark.parametrize(
    "family, valid, rules",
    [
        ([S(), S(0), S(1), S(0, 1)], True, ()),
        ([S(), S(0), S(1)], False, ("union-closure",)),
        ([S(0)], False, ("empty-set",)),
    ],
)
def test_validate_topology(family, valid, rules):
    report = validate_topology(3, family)
    assert report.valid is valid
    assert report.rules == rules


def test_validate_topology_witness_names_the_union():
    report = validate_topology(3, [S(), S(0), S(1)])
    assert "{w0} ∪ {w1}" in report.violations[0].witness


def test_validate_topology_size_mismatch_is_an_error():
    with pytest.raises(UniverseMismatchError):
        validate_topology(3, [WorldSet(0, 2)])


def test_empty_universe_is_reported():
    assert validate_topology(0, [WorldSet(0, 0)]).rules == ("nonempty-universe",)


def test_build_raises_on_invalid_family():
    with pytest.raises(InvalidModelError):
        GenTopology.build(3, [S(), S(0), S(1)])


def test_opens_are_canonically_ordered():
    t = GenTopology.build(3, [S(0, 1), S(1), S(), S(0)])
    assert [x.bits for x in t.opens] == [0, 1, 2, 3]


@pytest.mark.parametrize(
    "base, expected",
    [
        ([S(0), S(1)], {0, 1, 2, 3}),
        ([], {0}),
        ([S(0, 1), S(1, 2)], {0, 3, 6, 7}),
    ],
)
def test_close_under_unions(base, expected):
    t = close_under_unions(3, base)
    assert opens_of(t) == expected
    assert validate_topology(3, t.opens).valid
    assert close_under_unions(3, t.opens) == t


def test_is_strong():
    assert not is_strong(example_space("ex1"))
    assert is_strong(example_space("ex2"))
    assert not is_strong(GenTopology.build(2, [WorldSet(0, 2)]))


def test_interior_on_example_one(ex1):
    assert interior(ex1, ex1.world_set(["a", "c"])) == ex1.world_set(["a"])
    assert interior(ex1, S()) == S()
    assert interior(ex1, ex1.universe) == ex1.world_set(["a", "b"])


def test_closure(ex1, overlap):
    assert closure(ex1, ex1.world_set(["c"])) == ex1.world_set(["c"])
    assert closure(ex1, ex1.universe) == ex1.universe
    assert closure(overlap, overlap.world_set(["a"])) == overlap.world_set(["a"])


def test_density_examples(ex1, overlap):
    c = ex1.world_set(["c"])
    assert is_nowhere_dense(ex1, c)
    assert is_strongly_nowhere_dense(ex1, c)
    assert is_nowhere_dense(ex1, S())
    assert is_strongly_nowhere_dense(ex1, S())

    a = overlap.world_set(["a"])
    assert is_nowhere_dense(overlap, a)
    assert not is_strongly_nowhere_dense(overlap, a)


def test_density_witness_exists_on_three_worlds():
    found = find_density_witness(3)
    assert found is not None
    t, a = found
    assert t.size <= 3
    assert is_nowhere_dense(t, a) and not is_strongly_nowhere_dense(t, a)


def test_strongly_nowhere_dense_implies_nowhere_dense():
    for size in range(1, 5):
        for t in enumerate_topologies(size):
            for a in all_subsets(t.universe):
                if is_strongly_nowhere_dense(t, a):
                    assert is_nowhere_dense(t, a), (t, a)


def test_enumerate_topologies_small_counts():
    assert len(list(enumerate_topologies(1))) == 2
    # {∅}, {∅,a}, {∅,b}, {∅,ab}, {∅,a,ab}, {∅,b,ab}, {∅,a,b,ab}
    assert len(list(enumerate_topologies(2))) == 7
    for t in enumerate_topologies(3):
        assert validate_topology(3, t.opens).valid


def test_interior_and_closure_laws():
    for size in range(1, 4):
        for t in enumerate_topologies(size):
            subsets = list(all_subsets(t.universe))
            for x in subsets:
                inside = interior(t, x)
                assert inside <= x
                assert inside in t
                assert interior(t, inside) == inside
                shut = closure(t, x)
                assert x <= shut
                assert closure(t, shut) == shut
                assert t.orphans <= shut
                for y in subsets:
                    if x <= y:
                        assert inside <= interior(t, y)
                        assert shut <= closure(t, y)


def test_example_spaces():
    assert opens_of(example_space("ex1")) == {0, 1, 2, 3}
    assert opens_of(example_space("ex2")) == {0, 1, 4, 3, 5, 6, 7}

    forbidden = example_space("ex4", worlds=["a", "b", "c"], forbidden=["c"])
    assert opens_of(forbidden) == {0, 1, 2, 3}

    chain = example_space("ex5", length=3)
    assert opens_of(chain) == {0, 1, 3, 7}
    assert chain.worlds == ("w0", "w1", "w2")

    padded = example_space("ex5", length=2, extra=1)
    assert padded.orphans == WorldSet.of([2], 3)


@pytest.mark.parametrize(
    "example_id, params",
    [
        ("ex3", {}),
        ("ex4", {"worlds": ["a", "b"], "forbidden": ["z"]}),
        ("ex4", {"worlds": ["a", "a"], "forbidden": ["a"]}),
        ("ex5", {"length": 0}),
    ],
)
def test_example_space_errors(example_id, params):
    with pytest.raises(UnknownExampleError):
        example_space(example_id, **params)
