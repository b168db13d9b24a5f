"""
Modal formula AST, text rendering, axiom schemas and bounded enumeration.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Type

from .exceptions import InputError, UnboundMetavariableError

# Words of the text syntax that cannot name variables
RESERVED_NAMES = ("true", "false")


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str

    def __post_init__(self):
        if self.name in RESERVED_NAMES:
            raise InputError(f"{self.name!r} is a constant, not a variable name")


@dataclass(frozen=True)
class MetaVar(Formula):
    """Placeholder of an axiom schema, replaced on instantiation."""

    name: str


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class Box(Formula):
    operand: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    operand: Formula


@dataclass(frozen=True)
class Bullet(Formula):
    operand: Formula


@dataclass(frozen=True)
class BlackBox(Formula):
    operand: Formula


@dataclass(frozen=True)
class BlackDiamond(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


UNARY = (Not, Box, Diamond, Bullet, BlackBox, BlackDiamond)
BINARY = (And, Or, Implies, Iff)
MODALITIES = (Box, Diamond, Bullet, BlackBox, BlackDiamond)

# Possibility operators and the necessity they abbreviate
DUALS: Dict[type, type] = {Diamond: Box, BlackDiamond: BlackBox}

# Modal languages used by enumeration and equivalence checks
LANGUAGES: Dict[str, Tuple[type, ...]] = {
    "box": (Box,),
    "bullet": (Bullet,),
    "gtf": (Box, Bullet),
    "gtff": (Box, BlackBox),
    "full": (Box, Bullet, BlackBox),
}

# ASCII rendering
SYMBOLS: Dict[type, str] = {
    Not: "~",
    Box: "[]",
    Diamond: "<>",
    Bullet: "*",
    BlackBox: "[b]",
    BlackDiamond: "<b>",
    And: "&",
    Or: "|",
    Implies: "->",
    Iff: "<->",
}

# Binding strength; higher binds tighter
PRECEDENCE: Dict[type, int] = {Iff: 1, Implies: 2, Or: 3, And: 4}
UNARY_PRECEDENCE = 5
ATOM_PRECEDENCE = 6


def _precedence(f: Formula) -> int:
    if isinstance(f, UNARY):
        return UNARY_PRECEDENCE
    return PRECEDENCE.get(type(f), ATOM_PRECEDENCE)


def _render(f: Formula, minimum: int) -> str:
    if isinstance(f, (Var, MetaVar)):
        text = f.name
    elif isinstance(f, Bottom):
        text = "false"
    elif isinstance(f, Top):
        text = "true"
    elif isinstance(f, UNARY):
        text = SYMBOLS[type(f)] + _render(f.operand, UNARY_PRECEDENCE)
    else:
        own = PRECEDENCE[type(f)]
        # -> associates to the right, the other binary connectives to the left
        if isinstance(f, Implies):
            left, right = own + 1, own
        else:
            left, right = own, own + 1
        text = (
            f"{_render(f.left, left)} {SYMBOLS[type(f)]} {_render(f.right, right)}"
        )
    if _precedence(f) < minimum:
        return f"({text})"
    return text


def to_text(f: Formula) -> str:
    """Render a formula in the ASCII grammar with minimal parentheses."""
    return _render(f, 0)


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.operand,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def size(f: Formula) -> int:
    """Number of AST nodes."""
    return 1 + sum(size(child) for child in children(f))


def modal_depth(f: Formula) -> int:
    """Maximal nesting of modal operators."""
    inner = max((modal_depth(child) for child in children(f)), default=0)
    return inner + 1 if isinstance(f, MODALITIES) else inner


def variables(f: Formula) -> Tuple[str, ...]:
    """Propositional variables in order of first occurrence."""
    found: Dict[str, None] = {}

    def visit(node: Formula) -> None:
        if isinstance(node, Var):
            found.setdefault(node.name)
        for child in children(node):
            visit(child)

    visit(f)
    return tuple(found)


def modalities(f: Formula) -> Tuple[type, ...]:
    """Necessity operators the formula relies on, possibilities mapped to their duals."""
    found: Dict[type, None] = {}

    def visit(node: Formula) -> None:
        if isinstance(node, MODALITIES):
            found.setdefault(DUALS.get(type(node), type(node)))
        for child in children(node):
            visit(child)

    visit(f)
    return tuple(found)


def _rebuild(f: Formula, visit: Callable[[Formula], Formula]) -> Formula:
    if isinstance(f, UNARY):
        return type(f)(visit(f.operand))
    if isinstance(f, BINARY):
        return type(f)(visit(f.left), visit(f.right))
    return f


def expand(f: Formula) -> Formula:
    """
    Remove abbreviations: ◇φ = ¬□¬φ, ◆φ = ¬■¬φ, ⊤ = ¬⊥ and
    φ ↔ ψ = (φ → ψ) ∧ (ψ → φ).
    """
    if isinstance(f, Top):
        return Not(Bottom())
    if isinstance(f, Diamond):
        return Not(Box(Not(expand(f.operand))))
    if isinstance(f, BlackDiamond):
        return Not(BlackBox(Not(expand(f.operand))))
    if isinstance(f, Iff):
        left, right = expand(f.left), expand(f.right)
        return And(Implies(left, right), Implies(right, left))
    return _rebuild(f, expand)


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Uniformly replace propositional variables."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    return _rebuild(f, lambda child: substitute(child, mapping))


def replace_modality(f: Formula, source: Type[Formula], target: Type[Formula]) -> Formula:
    """Replace every `source` modality node by a `target` node."""
    if isinstance(f, source):
        return target(replace_modality(f.operand, source, target))
    return _rebuild(f, lambda child: replace_modality(child, source, target))


def in_mod_fragment(f: Formula) -> bool:
    """
    Boxed formulas and their closure under ∧, ∨ and →.
    """
    if isinstance(f, Box):
        return True
    if isinstance(f, (And, Or, Implies)):
        return in_mod_fragment(f.left) and in_mod_fragment(f.right)
    return False


PHI = MetaVar("phi")
PSI = MetaVar("psi")


@dataclass(frozen=True)
class AxiomSchema:
    """An axiom template over the metavariables φ and ψ."""

    schema_id: str
    template: Formula
    description: str = ""

    @property
    def metavariables(self) -> Tuple[str, ...]:
        found: Dict[str, None] = {}

        def visit(node: Formula) -> None:
            if isinstance(node, MetaVar):
                found.setdefault(node.name)
            for child in children(node):
                visit(child)

        visit(self.template)
        return tuple(sorted(found))

    def instantiate(self, subst: Mapping[str, Formula]) -> Formula:
        return instantiate(self, subst)


def _fill(f: Formula, subst: Mapping[str, Formula]) -> Formula:
    if isinstance(f, MetaVar):
        if f.name not in subst:
            raise UnboundMetavariableError(f"metavariable {f.name} is not bound")
        return subst[f.name]
    return _rebuild(f, lambda child: _fill(child, subst))


def instantiate(schema: AxiomSchema, subst: Mapping[str, Formula]) -> Formula:
    """
    Uniform substitution of formulas for the metavariables of a schema.

    Raises:
        UnboundMetavariableError: a metavariable of the schema has no binding
    """
    return _fill(schema.template, subst)


def _modal_schemas(box: Callable[[Formula], Formula], suffix: str) -> List[AxiomSchema]:
    return [
        AxiomSchema(
            "M" + suffix,
            Implies(box(And(PHI, PSI)), And(box(PHI), box(PSI))),
            "monotonicity",
        ),
        AxiomSchema(
            "C" + suffix,
            Implies(And(box(PHI), box(PSI)), box(And(PHI, PSI))),
            "closure under conjunction",
        ),
        AxiomSchema("T" + suffix, Implies(box(PHI), PHI), "reflexivity"),
        AxiomSchema(
            "D" + suffix, Implies(box(PHI), Not(box(Not(PHI)))), "seriality"
        ),
        AxiomSchema(
            "K" + suffix,
            Implies(box(Implies(PHI, PSI)), Implies(box(PHI), box(PSI))),
            "distribution",
        ),
        AxiomSchema("Four" + suffix, Implies(box(PHI), box(box(PHI))), "transitivity"),
        AxiomSchema("N" + suffix, box(Top()), "truth axiom"),
    ]


SCHEMAS: Dict[str, AxiomSchema] = {
    schema.schema_id: schema
    for schema in (
        _modal_schemas(Box, "")
        + _modal_schemas(BlackBox, "_b")
        + [
            AxiomSchema("BulletT", Implies(Bullet(PHI), PHI), "bullet reflexivity"),
            AxiomSchema("GJ", Implies(Box(PHI), BlackBox(PHI)), "bridge axiom"),
        ]
    )
}


def enumerate_formulas(
    variables: Sequence[str],
    max_nodes: int,
    operators: Iterable[type] = LANGUAGES["full"],
) -> Iterator[Formula]:
    """
    Every formula over {Var, ⊥, ¬, ∧} plus the given modalities with at most
    `max_nodes` AST nodes, without duplicates.

    Formulas come in increasing size; within a size atoms come first, then
    unary nodes in operator order, then conjunctions by left-operand size.

    Args:
        variables: Propositional variable names
        max_nodes: Largest AST size to produce
        operators: Modal operators allowed besides negation

    Returns:
        Iterator over formulas
    """
    unary = (Not,) + tuple(operators)
    atoms: List[Formula] = [Var(name) for name in dict.fromkeys(variables)]
    atoms.append(Bottom())
    by_size: Dict[int, List[Formula]] = {}
    for n in range(1, max_nodes + 1):
        if n == 1:
            layer = list(atoms)
        else:
            layer = [op(f) for op in unary for f in by_size[n - 1]]
            for left_size in range(1, n - 1):
                right_size = n - 1 - left_size
                layer.extend(
                    And(left, right)
                    for left in by_size[left_size]
                    for right in by_size[right_size]
                )
        by_size[n] = layer
        yield from layer


def count_formulas(n_vars: int, max_nodes: int, n_unary: int, n_binary: int) -> int:
    """
    Number of ASTs with at most `max_nodes` nodes over `n_vars` variables plus ⊥,
    `n_unary` unary and `n_binary` binary connectives.
    """
    counts = [0] * (max_nodes + 1)
    for n in range(1, max_nodes + 1):
        if n == 1:
            counts[n] = n_vars + 1
            continue
        binary = sum(counts[k] * counts[n - 1 - k] for k in range(1, n - 1))
        counts[n] = n_unary * counts[n - 1] + n_binary * binary
    return sum(counts)
