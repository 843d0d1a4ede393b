"""Hybrid localization: top-N suspicious statements, then the dynamic slice."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .sbfl import Ranking, rank_spectrum, top_n
from .slicing import DependenceGraph, SliceRequest, approx_dynamic_slice, slice_ranking
from .spectra import CoverageSpectrum

DEFAULT_N = 2
DEFAULT_FORMULA = "Kulczynski2"


@dataclass(frozen=True)
class HybridConfig:
    n: int = DEFAULT_N
    formula: str = DEFAULT_FORMULA

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise InputError(f"hybrid N must be a non-negative integer, got {self.n!r}")


def hybrid_ranking(cfg: HybridConfig, spectrum: CoverageSpectrum,
                   g: DependenceGraph, req: SliceRequest) -> Ranking:
    """Phase 1 reports the formula's top N; phase 2 walks the approximate
    dynamic slice skipping anything already reported; unreached statements
    come last in line order.
    """
    head = top_n(rank_spectrum(cfg.formula, spectrum), cfg.n)
    slc = approx_dynamic_slice(g, req)
    return slice_ranking(slc, spectrum.statements, reported=head)
