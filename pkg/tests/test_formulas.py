import pytest

from gtbench.exceptions import UnboundMetavariableError
from gtbench.formulas import (
    LANGUAGES,
    PHI,
    SCHEMAS,
    And,
    BlackBox,
    Bottom,
    Box,
    Bullet,
    Diamond,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    Var,
    count_formulas,
    enumerate_formulas,
    expand,
    in_mod_fragment,
    instantiate,
    modal_depth,
    modalities,
    replace_modality,
    size,
    substitute,
    to_text,
    variables,
)

p, q, r = Var("p"), Var("q"), Var("r")


@pytest.mark.parametrize(
    "formula, text",
    [
        (Implies(Box(And(p, q)), And(Box(p), Box(q))), "[](p & q) -> []p & []q"),
        (Implies(p, Implies(q, r)), "p -> q -> r"),
        (Implies(Implies(p, q), r), "(p -> q) -> r"),
        (And(And(p, q), r), "p & q & r"),
        (And(p, And(q, r)), "p & (q & r)"),
        (Or(And(p, q), r), "p & q | r"),
        (Not(Diamond(Bullet(p))), "~<>*p"),
        (Iff(BlackBox(p), Top()), "[b]p <-> true"),
        (Box(Bottom()), "[]false"),
    ],
)
def test_to_text(formula, text):
    assert to_text(formula) == text
    assert str(formula) == text


def test_size_depth_and_variables():
    f = Implies(Box(And(p, q)), Box(Box(p)))
    assert size(f) == 8
    assert modal_depth(f) == 2
    assert variables(f) == ("p", "q")
    assert modal_depth(p) == 0


def test_modalities_map_possibilities_to_necessities():
    assert modalities(Diamond(Bullet(p))) == (Box, Bullet)
    assert modalities(And(p, q)) == ()


def test_expand_removes_abbreviations():
    assert expand(Diamond(p)) == Not(Box(Not(p)))
    assert expand(Top()) == Not(Bottom())
    assert expand(Iff(p, q)) == And(Implies(p, q), Implies(q, p))
    assert expand(Box(Diamond(p))) == Box(Not(Box(Not(p))))


def test_modal_depth_is_stable_under_expansion():
    for f in enumerate_formulas(["p"], 4):
        assert modal_depth(expand(f)) == modal_depth(f)
    f = Diamond(Diamond(p))
    assert modal_depth(expand(f)) == modal_depth(f) == 2


def test_substitute_and_replace_modality():
    assert substitute(Box(And(p, q)), {"p": Not(q)}) == Box(And(Not(q), q))
    assert replace_modality(Implies(Bullet(p), Bullet(Bullet(q))), Bullet, Box) == Implies(
        Box(p), Box(Box(q))
    )


def test_mod_fragment():
    assert in_mod_fragment(Implies(Box(p), Or(Box(q), Box(Not(p)))))
    assert not in_mod_fragment(And(Box(p), p))
    assert not in_mod_fragment(Not(Box(p)))


def test_instantiate_schemas():
    m = instantiate(SCHEMAS["M"], {"phi": p, "psi": q})
    assert str(m) == "[](p & q) -> []p & []q"
    assert instantiate(SCHEMAS["T"], {"phi": Box(p)}) == Implies(Box(Box(p)), Box(p))
    assert str(SCHEMAS["D"].instantiate({"phi": p})) == "[]p -> ~[]~p"
    assert str(SCHEMAS["GJ"].instantiate({"phi": p})) == "[]p -> [b]p"


def test_instantiate_requires_every_metavariable():
    with pytest.raises(UnboundMetavariableError):
        instantiate(SCHEMAS["K"], {"phi": p})


def test_schema_catalogue():
    for base in ("M", "C", "T", "D", "K", "Four", "N"):
        assert base in SCHEMAS
        assert base + "_b" in SCHEMAS
        assert modalities(SCHEMAS[base + "_b"].template) == (BlackBox,)
    assert SCHEMAS["K"].metavariables == ("phi", "psi")
    assert SCHEMAS["N"].metavariables == ()
    assert SCHEMAS["BulletT"].template == Implies(Bullet(PHI), PHI)


def test_enumerate_small_layers():
    assert list(enumerate_formulas(["p"], 1)) == [p, Bottom()]
    second = list(enumerate_formulas(["p"], 2))[2:]
    assert set(second) == {Not(p), Box(p), Bullet(p), BlackBox(p), Not(Bottom()),
                           Box(Bottom()), Bullet(Bottom()), BlackBox(Bottom())}


def test_enumeration_matches_counting_oracle():
    formulas = list(enumerate_formulas(["p", "q"], 4))
    assert count_formulas(2, 4, 4, 1) == 372
    assert len(formulas) == 372
    assert len(set(formulas)) == len(formulas)


@pytest.mark.parametrize("language", ["box", "bullet", "gtf", "gtff", "full"])
def test_enumeration_counts_per_language(language):
    operators = LANGUAGES[language]
    formulas = list(enumerate_formulas(["p", "q"], 5, operators))
    assert len(formulas) == count_formulas(2, 5, 1 + len(operators), 1)
    assert all(size(f) <= 5 for f in formulas)


def test_enumeration_grows_monotonically():
    smaller = set(enumerate_formulas(["p"], 3))
    larger = set(enumerate_formulas(["p"], 4))
    assert smaller < larger


def test_enumeration_is_deterministic():
    assert list(enumerate_formulas(["q", "p"], 4)) == list(enumerate_formulas(["q", "p"], 4))
