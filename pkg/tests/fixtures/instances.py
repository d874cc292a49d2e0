"""
Instances and query patterns over the graph schema.
"""

from tests.fixtures.categories import COLLAPSE_FUNCTOR, GRAPH_SCHEMA

# v1 -e1-> v2 -e2-> v1
TWO_CYCLE = {
    "schema": GRAPH_SCHEMA,
    "tables": {"E": ["e1", "e2"], "V": ["v1", "v2"]},
    "actions": {
        "src": {"e1": "v1", "e2": "v2"},
        "tgt": {"e1": "v2", "e2": "v1"},
    },
}

# a -e1-> b <-e2- c
COLLIDER = {
    "schema": GRAPH_SCHEMA,
    "tables": {"E": ["e1", "e2"], "V": ["a", "b", "c"]},
    "actions": {
        "src": {"e1": "a", "e2": "c"},
        "tgt": {"e1": "b", "e2": "b"},
    },
}

EDGELESS = {
    "schema": GRAPH_SCHEMA,
    "tables": {"E": [], "V": ["a", "b", "c"]},
    "actions": {"src": {}, "tgt": {}},
}

# A -x-> B <-y- C
COLLIDER_PATTERN = {
    "tables": {"E": ["x", "y"], "V": ["A", "B", "C"]},
    "actions": {
        "src": {"x": "A", "y": "C"},
        "tgt": {"x": "B", "y": "B"},
    },
}

# "which vertices are the source of some edge", answered on (V,s)
SOURCE_PATTERN = {
    "tables": {"E": ["x"], "V": ["s", "t"]},
    "actions": {"src": {"x": "s"}, "tgt": {"x": "t"}},
    "window": ["(V,s)"],
}

COLLAPSE_SOURCE_INSTANCE = {
    "schema": COLLAPSE_FUNCTOR["source"],
    "tables": {"a": ["1", "2"], "b": ["3"]},
}
