"""Synthesis of recursive compositions from libraries of components
against nested-word temporal specifications."""
from .nested_word import Letter, NestedWord, build_nested_word, summary_path, validate_matching
from .nwtl import Formula, evaluate, negate, parse
from .nwba import Nwba, accepts_finite, spec_automaton, translate_nwtl
from .rlc import Composition, Element, Library, RlcComponent, simulate
from .oracle import brute_force_realizable, model_check
from .solver import synthesize

__all__ = [
    "Letter", "NestedWord", "build_nested_word", "summary_path", "validate_matching",
    "Formula", "evaluate", "negate", "parse",
    "Nwba", "accepts_finite", "spec_automaton", "translate_nwtl",
    "Composition", "Element", "Library", "RlcComponent", "simulate",
    "brute_force_realizable", "model_check", "synthesize",
]
