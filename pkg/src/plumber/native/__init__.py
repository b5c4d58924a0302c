from .coref import Substitution, resolve_coreferences
from .extract import extract_triples
from .lexicon import Lexicon, default_lexicon, load_word_list
from .link import link_terms, verb_stem
from .runtime import NativeRuntime, UnknownBuiltin
from .snapshot import (
    InvariantViolation,
    KGRecord,
    KGSnapshot,
    ParseError,
    SnapshotMissing,
    SnapshotStore,
    load_snapshot,
)

__all__ = [
    "Substitution",
    "resolve_coreferences",
    "extract_triples",
    "Lexicon",
    "default_lexicon",
    "load_word_list",
    "link_terms",
    "verb_stem",
    "NativeRuntime",
    "UnknownBuiltin",
    "InvariantViolation",
    "KGRecord",
    "KGSnapshot",
    "ParseError",
    "SnapshotMissing",
    "SnapshotStore",
    "load_snapshot",
]
