import random

import pytest

from gtbench.exceptions import InputError, UnsupportedOperatorError
from gtbench.formulas import SCHEMAS
from gtbench.gtf import GTFModel, validate_gtf
from gtbench.gtff import GTFFModel, validate_gtff, validate_gtfi
from gtbench.gtn import validate_gtn
from gtbench.ifs import validate_sgt
from gtbench.parsers import parse
from gtbench.search import (
    SearchConfig,
    check_class,
    iter_gtf_frames,
    random_gtf,
    random_model,
    random_topology,
    search_countermodel,
)
from gtbench.validity import frame_counterexample


def quick(**overrides):
    settings = dict(budget=20, jobs=1, exhaustive_max_worlds=2, progress=False)
    settings.update(overrides)
    return SearchConfig(**settings)


def test_t_fails_at_an_orphan():
    result = search_countermodel("T", "gtf", quick())
    assert result.found
    assert result.phase == "exhaustive"
    assert result.model.size == 1
    assert result.world in result.model.topology.orphans
    assert not result.model.truth_table().forces(result.world, parse(result.instance))


def test_m_has_no_countermodel():
    result = search_countermodel("M", "gtf", quick())
    assert not result.found
    assert result.phase is None
    assert result.checked == sum(1 for _ in iter_gtf_frames(2)) + 20


def test_bridge_axiom():
    assert search_countermodel("GJ", "gtff", quick()).found
    assert not search_countermodel("GJ", "gtfi", quick()).found


def test_strong_frames_satisfy_t():
    assert not search_countermodel("T", "strong", quick()).found


def test_random_phase_does_not_depend_on_jobs():
    single = search_countermodel("T", "gtf", quick(exhaustive_max_worlds=0, budget=60))
    pooled = search_countermodel(
        "T", "gtf", quick(exhaustive_max_worlds=0, budget=60, jobs=2)
    )
    assert single.found and single.phase == "random"
    assert (single.iteration, single.world, single.instance) == (
        pooled.iteration,
        pooled.world,
        pooled.instance,
    )
    assert single.model == pooled.model
    assert single.checked == single.iteration + 1


def test_search_errors():
    with pytest.raises(InputError):
        search_countermodel("S5", "gtf", quick())
    with pytest.raises(InputError):
        search_countermodel("T", "kripke", quick())
    with pytest.raises(UnsupportedOperatorError):
        search_countermodel("GJ", "gtf", quick())
    with pytest.raises(UnsupportedOperatorError):
        check_class(SCHEMAS["BulletT"], "gtfi")


@pytest.mark.parametrize(
    "settings",
    [{"max_worlds": 0}, {"jobs": 0}, {"budget": -1}, {"variables": ()}],
)
def test_config_errors(settings):
    with pytest.raises(InputError):
        SearchConfig(**settings)


def test_seeded_generators_are_reproducible():
    config = SearchConfig(seed=7)
    assert config.rng(3).random() == SearchConfig(seed=7).rng(3).random()
    assert config.rng(3).random() != config.rng(4).random()


@pytest.mark.parametrize(
    "kind, validate",
    [
        ("gtf", validate_gtf),
        ("gtn", validate_gtn),
        ("gtff", validate_gtff),
        ("gtfi", validate_gtfi),
        ("sgt", validate_sgt),
    ],
)
def test_random_models(kind, validate):
    for seed in range(10):
        config = SearchConfig(seed=seed, max_worlds=4)
        m = random_model(kind, config)
        assert m == random_model(kind, config)
        assert validate(m).valid, m


def test_random_model_kind():
    assert isinstance(random_model("gtfi", SearchConfig()), GTFFModel)
    with pytest.raises(InputError):
        random_model("kripke", SearchConfig())


def test_random_gtf_options(rand):
    for _ in range(20):
        m = random_gtf(rand.rand, rand.randint(1, 4), 4, consistent=True, strong=True)
        assert isinstance(m, GTFModel)
        assert validate_gtf(m).valid
        assert not m.topology.orphans
        assert all(x for family in m.families for x in family)


def test_max_opens_bounds_the_base_sets_not_the_opens():
    for seed in range(20):
        assert len(random_topology(random.Random(seed), 4, 2)) <= 4
    assert any(
        len(random_topology(random.Random(seed), 5, 3)) > 4 for seed in range(50)
    )


@pytest.mark.parametrize("schema_id", ["T", "C", "K", "D", "N"])
def test_countermodels_outside_the_union_of_opens(schema_id):
    config = quick(exhaustive_max_worlds=3, orphans_only=True)
    result = search_countermodel(schema_id, "gtf", config)
    assert result.found
    m = result.model
    assert result.world in m.topology.orphans
    assert not m.truth_table().forces(result.world, parse(result.instance))
    assert frame_counterexample(m, SCHEMAS["T"], m.topology.union) is None


def test_some_countermodels_to_k_fail_inside_the_union_of_opens(overlap):
    m = GTFModel.build(overlap)
    assert frame_counterexample(m, SCHEMAS["K"], m.topology.union) is not None
    assert frame_counterexample(m, SCHEMAS["K"], m.topology.orphans) is None


def test_orphan_countermodels_need_orphans():
    config = quick(orphans_only=True, budget=30)
    assert not search_countermodel("K", "strong", config).found
