"""Swarm packet-ferrying simulator and rule-evolution harness.

Thin re-export of the compiled extension. The heavy lifting (simulation,
evolution, archive) lives in C++; this layer exists so experiment scripts and
notebooks can drive seeded runs and crunch the results without the CLI.
"""

from _slcs2 import (
    RankTest,
    RunResult,
    Summary,
    __version__,
    behavior_distance,
    canonical_config,
    decode_rule,
    random_solution_text,
    rank_test,
    run_instance,
    solution_fitness,
    spec_hash,
    summarize,
)

__all__ = [
    "RankTest",
    "RunResult",
    "Summary",
    "__version__",
    "behavior_distance",
    "canonical_config",
    "decode_rule",
    "random_solution_text",
    "rank_test",
    "run_instance",
    "solution_fitness",
    "spec_hash",
    "summarize",
]
