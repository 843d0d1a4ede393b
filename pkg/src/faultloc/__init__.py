"""Fault localization with suspiciousness formulas, dependence slicing and a
hybrid of both, plus the metrics used to compare them."""

from .errors import FormulaUnavailable, InputError
from .hybrid import HybridConfig, hybrid_ranking
from .metrics import (
    cumulative_frequency,
    expense_and_mult_score,
    mann_whitney_u,
    odds_ratio,
    score_from_ranking,
)
from .sbfl import FORMULAS, Policy, Ranking, get_formula, rank, score_spectrum, suspiciousness, top_n
from .slicing import (
    DependenceGraph,
    SliceRequest,
    approx_dynamic_slice,
    parse_graph,
    slice_ranking,
    static_slice,
)
from .spectra import CoverageSpectrum, StatementId, StatementStats, parse_spectrum, stats

__version__ = "0.1.0"
