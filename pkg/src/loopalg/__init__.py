"""Exact rational models of free loop spaces and their string operations."""

from .algebra import Copy, Derivation, Element, FreeAlgebra, Generator, check_differential
from .dsl import DSLError, load_model, parse_model, render_model
from .models import (
    LoopModel,
    ModelClass,
    PathModel,
    SullivanModel,
    build_loop_model,
    build_path_model,
    classify,
    formal_dimension,
)
from .modules import ModuleMap, Scaffold
from .operations import (
    LoopOpsContext,
    check_associativity,
    check_coassociativity,
    check_frobenius,
    dual_loop_coproduct,
    dual_loop_product,
    iterate_coproduct,
    triviality_scan,
)
from .shriek import build_shriek, verify_shriek_cocycle, verify_shriek_nonboundary

__version__ = "0.1.0"
