from .natded import min_proof_bfs
from .oracle import ExactDeltaOracle, OracleResult, oracle_guided_search
from .proof import (
    DeductionMode,
    Line,
    Proof,
    ProverBudget,
    ProverOutcome,
    Rule,
    Status,
    check_proof,
    delta,
    find_violation,
)
from .resolution import Refutation, check_refutation, clausify, resolution_prove

__all__ = [
    "DeductionMode",
    "ExactDeltaOracle",
    "Line",
    "OracleResult",
    "Proof",
    "ProverBudget",
    "ProverOutcome",
    "Refutation",
    "Rule",
    "Status",
    "check_proof",
    "check_refutation",
    "clausify",
    "delta",
    "find_violation",
    "min_proof_bfs",
    "oracle_guided_search",
    "resolution_prove",
]
