"""Prompt-driven controller refinement loop."""

from .extraction import Extraction, extract_program, find_last_block
from .prompts import (
    OUTPUT_FORMAT_INSTRUCTION,
    build_feedback_prompt,
    build_initial_prompt,
    build_problem_statement,
    build_repair_prompt,
)
from .providers import (
    DEFAULT_API_BASE,
    DEFAULT_MODEL,
    ENV_API_BASE,
    ENV_API_KEY,
    HttpProvider,
    Provider,
    ReplayProvider,
    load_replay_script,
)
from .runner import (
    OUTCOME_ACCEPTED,
    OUTCOME_BELOW_THRESHOLD,
    OUTCOME_PARSE_FAILED,
    STATUS_BUDGET_EXHAUSTED,
    STATUS_PROVIDER_FAILURE,
    STATUS_THRESHOLD_MET,
    IterationRecord,
    LoopConfig,
    Transcript,
    load_calibration,
    parse_transcript,
    run_loop,
    simulation_evaluator,
    stub_evaluator,
)

__all__ = [
    "build_feedback_prompt",
    "build_initial_prompt",
    "build_problem_statement",
    "build_repair_prompt",
    "DEFAULT_API_BASE",
    "DEFAULT_MODEL",
    "ENV_API_BASE",
    "ENV_API_KEY",
    "Extraction",
    "extract_program",
    "find_last_block",
    "HttpProvider",
    "IterationRecord",
    "load_calibration",
    "load_replay_script",
    "LoopConfig",
    "OUTCOME_ACCEPTED",
    "OUTCOME_BELOW_THRESHOLD",
    "OUTCOME_PARSE_FAILED",
    "OUTPUT_FORMAT_INSTRUCTION",
    "parse_transcript",
    "Provider",
    "ReplayProvider",
    "run_loop",
    "simulation_evaluator",
    "STATUS_BUDGET_EXHAUSTED",
    "STATUS_PROVIDER_FAILURE",
    "STATUS_THRESHOLD_MET",
    "stub_evaluator",
    "Transcript",
]
