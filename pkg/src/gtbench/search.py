"""
Seeded random and exhaustive generation of models, and the countermodel
search for axiom schemas over frame classes.
"""

import logging
import multiprocessing
import random
from dataclasses import dataclass
from functools import partial
from itertools import combinations, product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from .config import (
    DEFAULT_BUDGET,
    DEFAULT_JOBS,
    DEFAULT_MAX_NODES,
    DEFAULT_MAX_OPENS,
    DEFAULT_MAX_WORLDS,
    DEFAULT_SEED,
    DEFAULT_VARS,
    EXHAUSTIVE_MAX_WORLDS,
    FRAME_CLASSES,
    MAX_ORPHAN_OPENS,
    SEARCH_CHUNK_SIZE,
)
from .exceptions import InputError, UnsupportedOperatorError
from .formulas import SCHEMAS, SYMBOLS, AxiomSchema, BlackBox, Box, Bullet, modalities
from .gtf import GTFModel, orphan_assignments
from .gtff import GTFFModel
from .gtn import GTNModel, validate_gtn
from .ifs import SGTModel
from .topology import (
    GenTopology,
    WorldSet,
    all_subsets,
    close_under_unions,
    default_world_names,
    enumerate_topologies,
    is_strong,
)
from .utils.bits import full_mask, iter_bits
from .validity import FrameCounterexample, frame_counterexample

AnyModel = Union[GTFModel, GTNModel, GTFFModel, SGTModel]

# Modalities interpreted by each frame class
CLASS_OPERATORS: Dict[str, Tuple[type, ...]] = {
    "gtf": (Box, Bullet),
    "gtf-consistent": (Box, Bullet),
    "strong": (Box, Bullet),
    "gtff": (Box, BlackBox),
    "gtfi": (Box, BlackBox),
}

# Family size bound for Y2 worlds in exhaustive sweeps
EXHAUSTIVE_MAX_NEIGHBOURHOODS = 1

# Draws of a random GTN-model before falling back to a fixed one
GTN_ATTEMPTS = 100


@dataclass(frozen=True)
class SearchConfig:
    """
    Knobs of random generation and countermodel search.

    Attributes:
        max_worlds: Largest universe of a random model
        max_opens: Largest number of random base sets drawn for a topology;
            the union closure of k base sets may hold up to 2^k opens
        exhaustive_max_worlds: Largest universe of the exhaustive sweep
        orphans_only: Accept only countermodels failing outside the union of
            opens
    """

    seed: int = DEFAULT_SEED
    max_worlds: int = DEFAULT_MAX_WORLDS
    max_opens: int = DEFAULT_MAX_OPENS
    variables: Tuple[str, ...] = DEFAULT_VARS
    max_nodes: int = DEFAULT_MAX_NODES
    budget: int = DEFAULT_BUDGET
    jobs: int = DEFAULT_JOBS
    exhaustive_max_worlds: int = EXHAUSTIVE_MAX_WORLDS
    orphans_only: bool = False
    progress: bool = True

    def __post_init__(self):
        for name in ("max_worlds", "max_opens", "max_nodes", "jobs"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")
        if self.budget < 0 or self.exhaustive_max_worlds < 0:
            raise InputError("budget and exhaustive bound must not be negative")
        if not self.variables:
            raise InputError("at least one variable is needed")

    def rng(self, iteration: int) -> random.Random:
        """Independent generator for one search iteration."""
        return random.Random(self.seed * 1_000_003 + iteration)


def random_subset(rng: random.Random, size: int, nonempty: bool = False) -> WorldSet:
    low = 1 if nonempty else 0
    return WorldSet(rng.randint(low, full_mask(size)), size)


def random_topology(
    rng: random.Random, size: int, max_opens: int, strong: bool = False
) -> GenTopology:
    """Union closure of up to `max_opens` random non-empty base sets."""
    base = [random_subset(rng, size, True) for _ in range(rng.randint(0, max_opens))]
    if strong:
        base.append(WorldSet.full(size))
    return close_under_unions(size, base)


def random_valuation(
    rng: random.Random, size: int, variables: Sequence[str]
) -> Dict[str, WorldSet]:
    return {name: random_subset(rng, size) for name in variables}


def random_gtf(
    rng: random.Random,
    size: int,
    max_opens: int,
    variables: Sequence[str] = DEFAULT_VARS,
    consistent: bool = False,
    strong: bool = False,
) -> GTFModel:
    """
    Random GTF-model. Each orphan receives up to MAX_ORPHAN_OPENS opens,
    never the empty set when `consistent`.
    """
    t = random_topology(rng, size, max_opens, strong)
    choices = [x for x in t.opens if x or not consistent]
    families = {}
    for w in t.orphans:
        k = rng.randint(0, min(MAX_ORPHAN_OPENS, len(choices)))
        families[w] = rng.sample(choices, k)
    return GTFModel.build(t, families, random_valuation(rng, size, variables))


def random_gtn(
    rng: random.Random,
    size: int,
    variables: Sequence[str] = DEFAULT_VARS,
    max_family: int = MAX_ORPHAN_OPENS,
) -> GTNModel:
    """
    Random GTN-model drawn in antichain form.

    A random support splits the worlds. Each world of the support gets one to
    `max_family` sets of the support containing it, every other world up to
    `max_family` sets of the support. Draws that `validate_gtn` rejects are
    redrawn; after GTN_ATTEMPTS rejections each world of the last support
    gets that support as its only minimal neighbourhood.
    """
    worlds = default_world_names(size)
    valuation = random_valuation(rng, size, variables)
    support = WorldSet.empty(size)
    for attempt in range(GTN_ATTEMPTS):
        support = random_subset(rng, size)
        u = support.bits
        neighbourhoods = {}
        for w in range(size):
            if w in support:
                members = [
                    u & rng.getrandbits(size) & rng.getrandbits(size) | 1 << w
                    for _ in range(rng.randint(1, max_family))
                ]
            else:
                members = [
                    u & rng.getrandbits(size) for _ in range(rng.randint(0, max_family))
                ]
            neighbourhoods[w] = [WorldSet(x, size) for x in members]
        m = GTNModel.build(worlds, neighbourhoods, valuation)
        if validate_gtn(m).valid:
            logging.debug(f"Random GTN-model accepted after {attempt + 1} draws")
            return m
    logging.debug(f"No GTN-model in {GTN_ATTEMPTS} draws, using the support as neighbourhood")
    return GTNModel.build(worlds, {w: [support] for w in support}, valuation)


def random_sgt(
    rng: random.Random, size: int, max_opens: int, variables: Sequence[str] = DEFAULT_VARS
) -> SGTModel:
    t = random_topology(rng, size, max_opens, strong=True)
    return SGTModel.build(t, random_valuation(rng, size, variables))


def random_gtff(
    rng: random.Random,
    size: int,
    max_opens: int,
    variables: Sequence[str] = DEFAULT_VARS,
    gtfi: bool = False,
) -> GTFFModel:
    """
    Random GTFF-model, or GTFI-model when `gtfi`. Without open worlds every
    world goes to Y2, since Y1 worlds need a linked world.
    """
    t = random_topology(rng, size, max_opens)
    targets = list(t.union)
    y1 = 0
    link = {}
    for w in range(size):
        forced = gtfi and w in t.union
        if targets and (forced or rng.random() < 0.5):
            y1 |= 1 << w
            link[w] = w if forced else rng.choice(targets)
    y1_set = WorldSet(y1, size)
    neighbourhoods = {
        w: [random_subset(rng, size) for _ in range(rng.randint(0, MAX_ORPHAN_OPENS))]
        for w in y1_set.complement()
    }
    return GTFFModel.build(
        t, y1_set, link, neighbourhoods, random_valuation(rng, size, variables)
    )


def random_frame(frame_class: str, rng: random.Random, config: SearchConfig) -> AnyModel:
    """A random model of the class; its valuation is irrelevant to frame checks."""
    size = rng.randint(1, config.max_worlds)
    if frame_class in ("gtff", "gtfi"):
        return random_gtff(rng, size, config.max_opens, config.variables, frame_class == "gtfi")
    return random_gtf(
        rng,
        size,
        config.max_opens,
        config.variables,
        consistent=frame_class == "gtf-consistent",
        strong=frame_class == "strong",
    )


def iter_gtf_frames(
    max_worlds: int,
    max_family: int = MAX_ORPHAN_OPENS,
    consistent: bool = False,
    strong: bool = False,
) -> Iterator[GTFModel]:
    """
    Every GTF-frame with up to `max_worlds` worlds whose orphans carry at most
    `max_family` opens, smallest universes first.
    """
    for size in range(1, max_worlds + 1):
        for t in enumerate_topologies(size):
            if strong and not is_strong(t):
                continue
            for assignment in orphan_assignments(t, max_family):
                if consistent and any(not x for f in assignment.values() for x in f):
                    continue
                yield GTFModel.build(t, assignment)


def _families(size: int, max_family: int) -> List[Tuple[WorldSet, ...]]:
    subsets = list(all_subsets(WorldSet.full(size)))
    options: List[Tuple[WorldSet, ...]] = []
    for k in range(max_family + 1):
        options.extend(combinations(subsets, k))
    return options


def iter_gtff_frames(
    max_worlds: int,
    gtfi: bool = False,
    max_family: int = EXHAUSTIVE_MAX_NEIGHBOURHOODS,
) -> Iterator[GTFFModel]:
    """
    Every GTFF-frame (or GTFI-frame) with up to `max_worlds` worlds whose Y2
    worlds carry at most `max_family` sets.
    """
    for size in range(1, max_worlds + 1):
        families = _families(size, max_family)
        for t in enumerate_topologies(size):
            targets = list(t.union)
            for y1 in range(1 << size):
                if not targets and y1:
                    continue
                if gtfi and t.union.bits & ~y1:
                    continue
                y1_worlds = list(iter_bits(y1))
                free = [w for w in y1_worlds if not (gtfi and w in t.union)]
                y2_worlds = [w for w in range(size) if not y1 >> w & 1]
                for images in product(targets, repeat=len(free)):
                    link = {w: w for w in y1_worlds}
                    link.update(zip(free, images))
                    for chosen in product(families, repeat=len(y2_worlds)):
                        yield GTFFModel.build(
                            t, WorldSet(y1, size), link, dict(zip(y2_worlds, chosen))
                        )


def iter_frames(frame_class: str, max_worlds: int) -> Iterator[AnyModel]:
    if frame_class in ("gtff", "gtfi"):
        return iter_gtff_frames(max_worlds, frame_class == "gtfi")
    return iter_gtf_frames(
        max_worlds,
        consistent=frame_class == "gtf-consistent",
        strong=frame_class == "strong",
    )


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a countermodel search."""

    schema_id: str
    frame_class: str
    phase: Optional[str]
    iteration: Optional[int]
    checked: int
    model: Optional[AnyModel] = None
    world: Optional[int] = None
    instance: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.model is not None


def check_class(schema: AxiomSchema, frame_class: str) -> None:
    """
    Raises:
        InputError: unknown frame class
        UnsupportedOperatorError: the schema uses a modality the class lacks
    """
    if frame_class not in FRAME_CLASSES:
        raise InputError(f"unknown frame class {frame_class}")
    for operator in modalities(schema.template):
        if operator not in CLASS_OPERATORS[frame_class]:
            raise UnsupportedOperatorError(SYMBOLS[operator], frame_class)


def _witness(model: AnyModel, hit: FrameCounterexample) -> AnyModel:
    return model.with_valuation(hit.valuation)


def _counterexample(
    model: AnyModel, schema: AxiomSchema, config: SearchConfig
) -> Optional[FrameCounterexample]:
    within = model.topology.orphans if config.orphans_only else None
    return frame_counterexample(model, schema, within)


def random_trial(
    schema_id: str, frame_class: str, config: SearchConfig, iteration: int
) -> Optional[Tuple[AnyModel, int, str]]:
    """One seeded random frame checked against the schema."""
    model = random_frame(frame_class, config.rng(iteration), config)
    hit = _counterexample(model, SCHEMAS[schema_id], config)
    if hit is None:
        return None
    return _witness(model, hit), hit.world, str(hit.instance)


def search_countermodel(
    schema_id: str, frame_class: str, config: SearchConfig = SearchConfig()
) -> SearchResult:
    """
    Look for a frame of the class on which the schema fails.

    All frames with at most `config.exhaustive_max_worlds` worlds are checked
    first, smallest first; then `config.budget` seeded random frames are drawn.
    Random iterations run in batches on a process pool and the lowest
    failing iteration wins, so results do not depend on `config.jobs`.

    Args:
        schema_id: Key of SCHEMAS
        frame_class: One of FRAME_CLASSES
        config: Search knobs

    Returns:
        The first countermodel found, with the valuation falsifying the schema
    """
    if schema_id not in SCHEMAS:
        raise InputError(f"unknown schema {schema_id}")
    schema = SCHEMAS[schema_id]
    check_class(schema, frame_class)

    checked = 0
    bound = min(config.exhaustive_max_worlds, config.max_worlds)
    logging.info(f"Exhaustive sweep of {frame_class} frames up to {bound} worlds")
    for model in iter_frames(frame_class, bound):
        checked += 1
        hit = _counterexample(model, schema, config)
        if hit is not None:
            logging.info(f"Countermodel found after {checked} exhaustive frames")
            return SearchResult(
                schema_id,
                frame_class,
                "exhaustive",
                checked,
                checked,
                _witness(model, hit),
                hit.world,
                str(hit.instance),
            )

    logging.info(f"Drawing {config.budget} random frames with seed {config.seed}")
    trial = partial(random_trial, schema_id, frame_class, config)
    batches = [
        range(start, min(start + SEARCH_CHUNK_SIZE, config.budget))
        for start in range(0, config.budget, SEARCH_CHUNK_SIZE)
    ]
    pool = multiprocessing.Pool(processes=config.jobs) if config.jobs > 1 else None
    try:
        for batch in tqdm(batches, desc="Searching", disable=not config.progress):
            results = pool.map(trial, batch) if pool else [trial(i) for i in batch]
            for iteration, result in zip(batch, results):
                if result is not None:
                    model, world, instance = result
                    logging.info(f"Countermodel found at random iteration {iteration}")
                    return SearchResult(
                        schema_id,
                        frame_class,
                        "random",
                        iteration,
                        checked + iteration + 1,
                        model,
                        world,
                        instance,
                    )
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    logging.info("No countermodel found")
    return SearchResult(schema_id, frame_class, None, None, checked + config.budget)


def random_model(kind: str, config: SearchConfig) -> AnyModel:
    """
    Seeded random model of a file kind, drawn from iteration 0 of the seed.
    """
    rng = config.rng(0)
    size = rng.randint(1, config.max_worlds)
    generators: Dict[str, Callable[[], AnyModel]] = {
        "gtf": lambda: random_gtf(rng, size, config.max_opens, config.variables),
        "gtn": lambda: random_gtn(rng, size, config.variables),
        "gtff": lambda: random_gtff(rng, size, config.max_opens, config.variables),
        "gtfi": lambda: random_gtff(rng, size, config.max_opens, config.variables, True),
        "sgt": lambda: random_sgt(rng, size, config.max_opens, config.variables),
    }
    if kind not in generators:
        raise InputError(f"unknown model kind {kind}")
    return generators[kind]()
