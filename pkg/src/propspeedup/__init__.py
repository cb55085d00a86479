"""Proof-length speed-up experiments over enumerated propositional theories."""

from .audit import NormalityAudit, audit, summarize
from .enumeration import GenerationParams, count, enumerate_formulas, formula_at, index_of
from .experiment import ExperimentConfig, build_cases, run_cases, speedup_matrix
from .formula import FALSUM, And, Iff, Implies, Not, Or, Var, parse, render
from .theory import SampleSpec, Theory, sample_objectives, sample_theories

__version__ = "0.1.0"

__all__ = [
    "FALSUM", "And", "ExperimentConfig", "GenerationParams", "Iff", "Implies",
    "Not", "NormalityAudit", "Or", "SampleSpec", "Theory", "Var", "audit",
    "build_cases", "count", "enumerate_formulas", "formula_at", "index_of",
    "parse", "render", "run_cases", "sample_objectives", "sample_theories",
    "speedup_matrix", "summarize",
]
