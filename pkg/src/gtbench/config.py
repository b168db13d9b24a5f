"""
Constants and configuration for the workbench.
"""

import multiprocessing

# Exit codes shared by every subcommand
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2

# Formula enumeration and certificate defaults
DEFAULT_VARS = ("p", "q")
DEFAULT_MAX_NODES = 5

# Search defaults
DEFAULT_SEED = 0
DEFAULT_BUDGET = 10000
DEFAULT_MAX_WORLDS = 5
DEFAULT_MAX_OPENS = 6
DEFAULT_JOBS = multiprocessing.cpu_count()
EXHAUSTIVE_MAX_WORLDS = 3
MAX_ORPHAN_OPENS = 2
SEARCH_CHUNK_SIZE = 250

# Subfamily enumeration for the union partition condition is 2^|mu|
MAX_PARTITION_OPENS = 16

# Generated world names when none are given
WORLD_PREFIX = "w"

# Model file kinds
MODEL_KINDS = ("gtf", "gtn", "gtff", "gtfi", "sgt")

# Frame classes understood by the countermodel search
FRAME_CLASSES = ("gtf", "gtf-consistent", "strong", "gtff", "gtfi")

# Transformation targets per source kind
TRANSFORMS = {
    ("gtn", "gtf"): "gtn_to_gtf",
    ("gtf", "gtn"): "gtf_to_gtn",
    ("gtf", "strong"): "ifs_to_strong",
    ("sgt", "ifs"): "strong_to_ifs",
}

# Example spaces of the generalized topology literature
EXAMPLE_IDS = ("ex1", "ex2", "ex4", "ex5")

# Schemas checked by default on two-modality models
GTFF_SCHEMAS = ("M", "T", "Four", "GJ", "M_b", "C", "K", "N", "D")

# Accepted spellings of schema ids on the command line
SCHEMA_ALIASES = {
    "4": "Four",
    "4_b": "Four_b",
    "*T": "BulletT",
    "BT": "BulletT",
}
