import random

import pytest

from gtbench.exceptions import UnsupportedOperatorError
from gtbench.formulas import SCHEMAS, BlackBox, BlackDiamond, Box, Bullet, Not, Var
from gtbench.gtff import (
    GTFFModel,
    axiom_report,
    forces_gtff,
    rule_admissibility,
    truth_set_gtff,
    validate_gtff,
    validate_gtfi,
    world_properties,
)
from gtbench.search import iter_gtff_frames, random_gtff
from gtbench.topology import GenTopology, WorldSet
from gtbench.validity import frame_counterexample

p = Var("p")
A, B, C = 0, 1, 2


def S(*indices):
    return WorldSet.of(indices, 3)


@pytest.fixture
def space():
    """μ = {∅,{a}} on {a,b,c}."""
    return GenTopology.build(3, [S(), S(A)], ("a", "b", "c"))


def test_gtfi_model_is_valid(gtfi_model):
    assert validate_gtff(gtfi_model).valid
    assert validate_gtfi(gtfi_model).valid
    assert gtfi_model.neighbourhoods == {C: (S(A, B),)}


@pytest.mark.parametrize(
    "y1, link, neighbourhoods, y2, gtff_rules, gtfi_rules",
    [
        (S(A, B), {A: A, B: A}, {}, S(B, C), ("partition",), ("partition",)),
        (S(A, B), {B: A}, {}, None, ("link-domain",), ("link-domain", "gtfi-identity")),
        (S(A, B), {A: A, B: B}, {}, None, ("link-range",), ("link-range",)),
        (S(B), {B: A}, {}, None, (), ("gtfi-union", "gtfi-identity")),
        (S(A), {A: A}, {A: [S(A)]}, None, ("N-domain",), ("N-domain",)),
        (S(A), {A: A, C: A}, {}, None, ("link-domain",), ("link-domain",)),
    ],
)
def test_validation(space, y1, link, neighbourhoods, y2, gtff_rules, gtfi_rules):
    m = GTFFModel.build(space, y1, link, neighbourhoods, y2=y2)
    assert validate_gtff(m).rules == gtff_rules
    assert validate_gtfi(m).rules == gtfi_rules


def test_forcing(gtfi_model):
    assert forces_gtff(gtfi_model, A, BlackBox(p))
    assert forces_gtff(gtfi_model, B, BlackBox(p))
    assert not forces_gtff(gtfi_model, C, BlackBox(p))
    assert forces_gtff(gtfi_model, A, Box(p))
    assert not forces_gtff(gtfi_model, B, Box(p))
    # ■p holds exactly on {a,b}, the neighbourhood of c
    assert truth_set_gtff(gtfi_model, BlackBox(p)) == S(A, B)
    assert forces_gtff(gtfi_model, C, BlackBox(BlackBox(p)))
    assert not forces_gtff(gtfi_model, C, BlackDiamond(Not(BlackBox(p))))


def test_bullet_is_not_interpreted(gtfi_model):
    with pytest.raises(UnsupportedOperatorError):
        forces_gtff(gtfi_model, A, Bullet(p))


def test_axiom_report(gtfi_model):
    report = axiom_report(gtfi_model, variables=("p",), max_nodes=3)
    for schema_id in ("M", "T", "Four", "GJ", "C"):
        assert report.result(schema_id).valid, schema_id
    assert not report.result("M_b").valid
    assert report.result("M_b").world == "c"
    assert not report.result("N").valid
    assert report.result("N").world == "b"


@pytest.mark.parametrize("schema_id", ["M", "T", "Four"])
def test_box_schemas_on_every_small_gtff_frame(schema_id):
    # the box reads only the topology, so neighbourhood families can stay empty
    for m in iter_gtff_frames(3, max_family=0):
        assert frame_counterexample(m, SCHEMAS[schema_id]) is None, m


@pytest.mark.slow
@pytest.mark.parametrize("schema_id", ["T", "Four"])
def test_box_schemas_on_every_gtff_frame_with_neighbourhoods(schema_id):
    for m in iter_gtff_frames(3):
        assert frame_counterexample(m, SCHEMAS[schema_id]) is None, m


def test_bridge_axiom_needs_identity_links():
    checked = 0
    for m in iter_gtff_frames(3, gtfi=True):
        assert validate_gtfi(m).valid
        assert frame_counterexample(m, SCHEMAS["GJ"]) is None, m
        checked += 1
    assert checked > 0
    assert any(
        frame_counterexample(m, SCHEMAS["GJ"]) is not None for m in iter_gtff_frames(2)
    )


@pytest.mark.slow
def test_schemas_on_seeded_gtff_models():
    for seed in range(500):
        rng = random.Random(seed)
        gtfi = seed % 2 == 1
        m = random_gtff(rng, rng.randint(1, 4), 4, gtfi=gtfi)
        assert (validate_gtfi if gtfi else validate_gtff)(m).valid, m
        for schema_id in ("M", "T", "Four"):
            assert frame_counterexample(m, SCHEMAS[schema_id]) is None, (schema_id, m)
        if gtfi:
            assert frame_counterexample(m, SCHEMAS["GJ"]) is None, m


@pytest.mark.parametrize("rule", ["RE_box", "RE_blackbox"])
def test_extensionality(rule):
    for seed in range(100):
        rng = random.Random(seed)
        m = random_gtff(rng, rng.randint(1, 4), 4, gtfi=seed % 2 == 1)
        assert validate_gtff(m).valid
        assert rule_admissibility(m, rule, max_nodes=3).valid, m


def test_blackbox_is_not_monotone(gtfi_model):
    report = rule_admissibility(gtfi_model, "RM_blackbox", ("p",), 3)
    assert not report.valid
    assert rule_admissibility(gtfi_model, "RM_box", ("p",), 3).valid


def test_world_properties(gtfi_model):
    report = world_properties(gtfi_model, ("p",), 3)
    assert report.valid
    for name in ("blackbox-to-box", "y1-blackbox-consistent", "orphan-blackbox"):
        assert report.get(name).holds
        assert report.get(name).world is None
    # ◇ holds everywhere outside the union of opens
    assert not report.get("y1-orphan-gap").holds
    assert not report.get("y2-blackbox-inconsistent").holds
    assert len(report.to_dict()["properties"]) == 5


def test_inconsistent_neighbourhood_world(space):
    m = GTFFModel.build(
        space, S(A, B), {A: A, B: A}, {C: [S(A, B), S(C)]}, {"p": S(A)}
    )
    prop = world_properties(m, ("p",), 3).get("y2-blackbox-inconsistent")
    assert prop.holds
    assert prop.world == "c"


def test_expected_properties_on_random_gtfi_models(rand):
    for _ in range(10):
        m = random_gtff(rand.rand, rand.randint(1, 4), 4, gtfi=True)
        assert validate_gtfi(m).valid
        assert world_properties(m, ("p",), 3).valid, m
