import random

import pytest

from gtbench.bisimulation import (
    KIND_LANGUAGES,
    ModelMap,
    WorldRelation,
    bisim_from_map,
    bisimulation_report,
    is_bisimulation,
    largest_bisimulation,
    map_properties,
    modal_equivalence,
    refine,
)
from gtbench.exceptions import InputError, PreconditionError
from gtbench.formulas import LANGUAGES, enumerate_formulas
from gtbench.gtf import GTFModel
from gtbench.search import iter_gtf_frames, random_gtf
from gtbench.topology import GenTopology, WorldSet

A, B, C = 0, 1, 2


def S(*indices):
    return WorldSet.of(indices, 3)


@pytest.fixture
def discrete():
    """Every subset of {u,v} is open."""
    t = GenTopology.build(2, [WorldSet(bits, 2) for bits in range(4)], ("u", "v"))
    return GTFModel.build(t)


@pytest.mark.parametrize("kind", [0, 1, 2])
def test_identity_is_a_bisimulation(ex1, kind):
    m = GTFModel.build(ex1, {C: [S(A)]}, {"p": S(A, C)})
    assert is_bisimulation(kind, m, m, WorldRelation.identity(3)).valid


def test_collapsing_onto_a_point(ex1_model, point):
    rel = WorldRelation.of([(A, 0), (B, 0)])
    assert is_bisimulation(0, ex1_model, point, rel).valid

    report = is_bisimulation(0, ex1_model, point, WorldRelation.of([(A, 0), (B, 0), (C, 0)]))
    assert "atoms" in report.rules
    assert "back" in report.rules
    assert rel.to_names(ex1_model, point) == [["a", "x"], ["b", "x"]]


def test_empty_relation():
    t = GenTopology.build(1, [WorldSet(0, 1)], ("x",))
    m = GTFModel.build(t)
    assert is_bisimulation(0, m, m, WorldRelation.of([])).rules == ("nonempty",)


def test_bad_kind_and_pairs(ex1_model, point):
    with pytest.raises(InputError):
        is_bisimulation(3, ex1_model, point, WorldRelation.of([(A, 0)]))
    with pytest.raises(InputError):
        is_bisimulation(0, ex1_model, point, WorldRelation.of([(A, 1)]))
    with pytest.raises(InputError):
        WorldRelation.from_names(ex1_model, point, [["a", "y"]])


def test_largest_bisimulation(ex1_model, point):
    largest = largest_bisimulation(0, ex1_model, point)
    assert largest == WorldRelation.of([(A, 0), (B, 0)])
    assert refine(0, ex1_model, point, largest.pairs) == largest.pairs


def test_largest_bisimulation_may_not_exist(ex1_model, point):
    assert largest_bisimulation(0, ex1_model, point.with_valuation({"p": WorldSet(0, 1)})) is None


@pytest.mark.parametrize("kind", [0, 1, 2])
def test_largest_is_a_fixpoint(rand, kind):
    for _ in range(10):
        m1 = random_gtf(rand.rand, rand.randint(1, 3), 3, ("p",))
        m2 = random_gtf(rand.rand, rand.randint(1, 3), 3, ("p",))
        largest = largest_bisimulation(kind, m1, m2)
        if largest is None:
            continue
        assert refine(kind, m1, m2, largest.pairs) == largest.pairs
        assert is_bisimulation(kind, m1, m2, largest).valid


def test_map_properties(ex1_model, point):
    identity = ModelMap((A, B, C))
    assert all(map_properties(identity, ex1_model, ex1_model).to_dict().values())

    constant = ModelMap((0, 0, 0))
    properties = map_properties(constant, ex1_model, point)
    assert not properties.continuous
    assert properties.open
    assert not properties.F_continuous

    with pytest.raises(InputError):
        map_properties(ModelMap((0, 0)), ex1_model, point)


def test_map_from_names(ex1_model, point):
    assert ModelMap.from_names(ex1_model, point, {"a": "x", "b": "x", "c": "x"}).images == (0, 0, 0)
    with pytest.raises(InputError):
        ModelMap.from_names(ex1_model, point, {"a": "x", "b": "x"})
    with pytest.raises(InputError):
        ModelMap.from_names(ex1_model, point, {"a": "x", "b": "x", "c": "x", "d": "x"})


def test_bisimulation_from_a_map(discrete, point):
    f = ModelMap((0, 0))
    left, rel = bisim_from_map(0, f, discrete, point)
    assert left.valuation["p"] == WorldSet(3, 2)
    assert rel == WorldRelation.of([(0, 0), (1, 0)])
    assert is_bisimulation(0, left, point, rel).valid
    assert modal_equivalence(left, 1, point, 0, ["p"], 4).equivalent


@pytest.mark.parametrize("kind", [0, 1])
def test_map_preconditions(ex1_model, point, kind):
    with pytest.raises(PreconditionError):
        bisim_from_map(kind, ModelMap((0, 0, 0)), ex1_model, point)


def test_maps_do_not_induce_kind_two(discrete, point):
    with pytest.raises(InputError):
        bisim_from_map(2, ModelMap((0, 0)), discrete, point)


def test_modal_equivalence(ex1_model, point):
    assert modal_equivalence(ex1_model, A, point, 0, ["p"], 4).equivalent
    report = modal_equivalence(ex1_model, C, point, 0, ["p"], 4)
    assert not report.equivalent
    assert report.formula == "p"
    assert report.to_dict()["formulas"] == 1


def test_report_skips_orphans_for_kind_zero(ex1_model):
    report = bisimulation_report(
        0, ex1_model, ex1_model, WorldRelation.identity(3), equiv=True, max_nodes=3
    )
    assert report.valid
    assert report.skipped == [(C, C)]
    assert set(report.equivalence) == {(A, A), (B, B)}


def test_report_warns_about_inconsistent_models(ex1):
    m = GTFModel.build(ex1, {C: [S()]}, {"p": S(A)})
    report = bisimulation_report(1, m, m, WorldRelation.identity(3), equiv=True, max_nodes=3)
    assert len(report.warnings) == 1
    assert report.valid


def test_report_without_a_bisimulation(ex1_model, point):
    report = bisimulation_report(0, ex1_model, point.with_valuation({}), equiv=True)
    assert report.relation is None
    assert report.validation.rules == ("nonempty",)
    assert not report.valid


@pytest.mark.parametrize("kind", [0, 1, 2])
def test_bisimilar_worlds_are_equivalent(rand, kind):
    for _ in range(12):
        m1 = random_gtf(rand.rand, rand.randint(1, 3), 3, ("p",), consistent=True)
        m2 = random_gtf(rand.rand, rand.randint(1, 3), 3, ("p",), consistent=True)
        for right in (m1, m2):
            report = bisimulation_report(kind, m1, right, equiv=True, variables=("p",), max_nodes=4)
            assert not report.warnings
            if report.relation is not None:
                assert report.valid, (m1, right, report.equivalence)


def small_models(max_worlds):
    """Every consistent GTF-frame up to `max_worlds` worlds under every valuation of p."""
    for frame in iter_gtf_frames(max_worlds, consistent=True):
        for bits in range(1 << frame.size):
            yield frame.with_valuation({"p": WorldSet(bits, frame.size)})


def language(kind):
    return list(enumerate_formulas(["p"], 5, LANGUAGES[KIND_LANGUAGES[kind]]))


def profile(m, formulas):
    table = m.truth_table()
    return [table.bits(f) for f in formulas]


def assert_related_worlds_agree(kind, m1, m2, rel, formulas, profiles=None):
    left, right = profiles or (profile(m1, formulas), profile(m2, formulas))
    for w, v in rel:
        if kind == 0 and not (w in m1.topology.union and v in m2.topology.union):
            continue
        for f, x, y in zip(formulas, left, right):
            assert (x >> w & 1) == (y >> v & 1), (kind, m1, m2, (w, v), f)


@pytest.mark.parametrize("kind", [0, 1, 2])
def test_seeded_pairs_of_bisimilar_worlds_agree(kind):
    formulas = language(kind)
    related = 0
    for seed in range(200):
        rng = random.Random(seed)
        consistent = kind != 0 or seed % 2 == 0
        m1 = random_gtf(rng, rng.randint(1, 4), 4, ("p",), consistent=consistent)
        m2 = random_gtf(rng, rng.randint(1, 4), 4, ("p",), consistent=consistent)
        for right in (m1, m2):
            rel = largest_bisimulation(kind, m1, right)
            if rel is not None:
                related += 1
                assert_related_worlds_agree(kind, m1, right, rel, formulas)
    assert related >= 200


@pytest.mark.slow
@pytest.mark.parametrize("kind", [0, 1, 2])
def test_exhaustive_pairs_of_bisimilar_worlds_agree(kind):
    formulas = language(kind)
    small = list(small_models(2))
    profiles = [profile(m, formulas) for m in small]
    for i, m1 in enumerate(small):
        for j, m2 in enumerate(small):
            rel = largest_bisimulation(kind, m1, m2)
            if rel is not None:
                assert_related_worlds_agree(
                    kind, m1, m2, rel, formulas, (profiles[i], profiles[j])
                )
    for m in small_models(3):
        rel = largest_bisimulation(kind, m, m)
        assert rel is not None and WorldRelation.identity(m.size).pairs <= rel.pairs
        assert_related_worlds_agree(kind, m, m, rel, formulas)


def relations(m1, m2):
    pairs = [(w, v) for w in range(m1.size) for v in range(m2.size)]
    for selector in range(1, 1 << len(pairs)):
        yield WorldRelation.of(p for i, p in enumerate(pairs) if selector >> i & 1)


@pytest.mark.parametrize("kind", [0, 1, 2])
def test_largest_bisimulation_is_the_union_of_all(kind):
    models = list(small_models(2))
    rng = random.Random(kind)
    for _ in range(150):
        m1, m2 = rng.choice(models), rng.choice(models)
        valid = [r for r in relations(m1, m2) if is_bisimulation(kind, m1, m2, r).valid]
        largest = largest_bisimulation(kind, m1, m2)
        if not valid:
            assert largest is None
            continue
        union = frozenset().union(*(r.pairs for r in valid))
        assert largest is not None and largest.pairs == union, (m1, m2)
        for r1, r2 in zip(valid, valid[1:]):
            assert is_bisimulation(kind, m1, m2, WorldRelation(r1.pairs | r2.pairs)).valid


def test_continuous_open_maps_give_bisimulations():
    found = {0: 0, 1: 0}
    for seed in range(500):
        rng = random.Random(seed)
        m2 = random_gtf(rng, rng.randint(1, 3), 3, ("p",))
        if rng.random() < 0.25:
            frame1, f = m2, ModelMap(tuple(range(m2.size)))
        else:
            frame1 = random_gtf(rng, rng.randint(1, 4), 4, ("p",))
            f = ModelMap(tuple(rng.randrange(m2.size) for _ in range(frame1.size)))
        properties = map_properties(f, frame1, m2)
        for kind, needed in ((0, ("continuous", "open")), (1, ("F_continuous", "F_open"))):
            if all(getattr(properties, name) for name in needed):
                left, rel = bisim_from_map(kind, f, frame1, m2)
                assert is_bisimulation(kind, left, m2, rel).valid, (kind, frame1, m2, f)
                found[kind] += 1
    assert found[0] > 0 and found[1] > 0
