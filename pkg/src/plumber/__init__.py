"""plumber: composable information-extraction pipelines.

Chains coreference resolution, triple extraction, and entity/relation
linking against a knowledge graph; pipelines are picked by hand or by a
trained scorer, and user feedback on produced triples adjusts future
selections.
"""

from .errors import PlumberError
from .model import (
    AlignedTriple,
    Document,
    KGRef,
    LinkedTerm,
    Mention,
    Span,
    TextTriple,
    char_trigrams,
    jaccard,
    normalize_surface,
)
from .registry import (
    ComponentDescriptor,
    Pipeline,
    PoolStats,
    Registry,
    TaskKind,
    Target,
    load_registry,
)

__version__ = "0.1.0"

__all__ = [
    "PlumberError",
    "AlignedTriple",
    "Document",
    "KGRef",
    "LinkedTerm",
    "Mention",
    "Span",
    "TextTriple",
    "char_trigrams",
    "jaccard",
    "normalize_surface",
    "ComponentDescriptor",
    "Pipeline",
    "PoolStats",
    "Registry",
    "TaskKind",
    "Target",
    "load_registry",
    "__version__",
]
