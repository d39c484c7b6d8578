"""rpnkit: recursive Petri net decision toolkit.

Thin wrapper over the native module; see the project README for the .rpn
format and the operation catalogue.
"""

from ._core import (
    Document,
    RpnError,
    abstract_graph,
    abstraction_key,
    build,
    decide,
    explore,
    fire,
    leq,
    member,
    parse,
    print_document,
    returning,
    sample,
    validate,
)

__all__ = [
    "Document",
    "RpnError",
    "abstract_graph",
    "abstraction_key",
    "build",
    "decide",
    "explore",
    "fire",
    "leq",
    "member",
    "parse",
    "print_document",
    "returning",
    "sample",
    "validate",
]

__version__ = "0.1.0"
