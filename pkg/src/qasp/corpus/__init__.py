"""Encodings of three polynomial-hierarchy problems with exhaustive oracles."""

from .encodings import (
    encode_minmax_clique,
    encode_pebbling,
    encode_vc_dimension,
    minmax_clique_text,
    non_fact_rules,
    pebbling_text,
    set_system_text,
    vc_dimension_text,
)
from .generators import PROBLEMS, generate, random_minmax, random_pebbling, random_set_system
from .instances import GraphInstance, SetSystemInstance
from .oracles import oracle_minmax, oracle_pebbling, oracle_vc

__all__ = [
    "GraphInstance",
    "PROBLEMS",
    "SetSystemInstance",
    "encode_minmax_clique",
    "encode_pebbling",
    "encode_vc_dimension",
    "generate",
    "minmax_clique_text",
    "non_fact_rules",
    "oracle_minmax",
    "oracle_pebbling",
    "oracle_vc",
    "pebbling_text",
    "random_minmax",
    "random_pebbling",
    "random_set_system",
    "set_system_text",
    "vc_dimension_text",
]
