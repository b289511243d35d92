"""Fitness scores for labeled transition systems via recurrence matrix powers."""

from .aggregate import AggregateError, AggregateExpr, evaluate_aggregate
from .analysis import (
    ConvergenceReport,
    FitnessEvaluator,
    Score,
    Status,
    Verdict,
    compare_scores,
    convergence_report,
    format_decimal,
    g_value,
    k_approximation,
    mat_pow,
    series,
    shifted_ratio_score,
)
from .model import (
    Alphabet,
    Dfa,
    FitnessTuple,
    Lts,
    ModelError,
    ProcessLts,
    ProductAutomaton,
    build_product,
    compose,
    make_label_counter,
    make_length_counter,
    make_sequence_counter,
)
from .modelio import FileFormatError, parse_fitness_file, parse_model_file
from .recurrence import (
    RecurrenceSystem,
    accepting_matrix,
    initial_vector,
    predecessor_matrix,
    recurrence_matrix,
    recurrence_system,
)

__version__ = "0.1.0"
