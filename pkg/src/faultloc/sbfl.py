"""Statistical fault localization: suspiciousness formulas and ordinal ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import FormulaUnavailable, InputError
from .spectra import CoverageSpectrum, StatementStats, all_stats, line_key

EPSILON = 1e-9


def safe_div(num: float, den: float) -> float:
    """Division that never yields inf/nan: 0/0 -> 0, x/0 -> x/epsilon."""
    if den == 0:
        return 0.0 if num == 0 else num / EPSILON
    return num / den


class Family(Enum):
    POPULAR = "popular"
    HUMAN = "human-generated"
    GP = "gp-evolved"
    SINGLE_BUG = "single-bug-optimal"


@dataclass(frozen=True)
class Formula:
    name: str
    family: Family
    fn: Callable | None

    @property
    def available(self) -> bool:
        return self.fn is not None

    def __call__(self, st: StatementStats, totals: tuple[int, int]):
        if self.fn is None:
            raise FormulaUnavailable(self.name)
        return self.fn(st.ef, st.ep, st.nf, st.np, totals[0], totals[1])


def _tarantula(ef, ep, nf, np_, F, P):
    fail = safe_div(ef, F)
    return safe_div(fail, fail + safe_div(ep, P))


def _ochiai(ef, ep, nf, np_, F, P):
    return safe_div(ef, math.sqrt(F * (ef + ep)))


def _jaccard(ef, ep, nf, np_, F, P):
    return safe_div(ef, F + ep)


def _naish1(ef, ep, nf, np_, F, P):
    return float(np_) if nf == 0 else -1.0


def _naish2(ef, ep, nf, np_, F, P):
    return ef - safe_div(ep, ep + np_ + 1)


def _russel_rao(ef, ep, nf, np_, F, P):
    return safe_div(ef, ef + nf + ep + np_)


def _binary(ef, ep, nf, np_, F, P):
    return 1.0 if nf == 0 else 0.0


def _wong1(ef, ep, nf, np_, F, P):
    return float(ef)


def _dstar(star):
    def dstar(ef, ep, nf, np_, F, P):
        return safe_div(float(ef) ** star, ep + nf)
    return dstar


def _gp02(ef, ep, nf, np_, F, P):
    return 2 * (ef + math.sqrt(np_)) + math.sqrt(ep)


def _gp03(ef, ep, nf, np_, F, P):
    return math.sqrt(abs(ef * ef - math.sqrt(ep)))


def _gp13(ef, ep, nf, np_, F, P):
    return ef * (1 + safe_div(1, 2 * ep + ef))


def _gp19(ef, ep, nf, np_, F, P):
    return ef * math.sqrt(abs(ep - ef + nf - np_))


def _kulczynski2(ef, ep, nf, np_, F, P):
    return 0.5 * (safe_div(ef, ef + nf) + safe_div(ef, ef + ep))


def _lex_ochiai(ef, ep, nf, np_, F, P):
    # compared lexicographically: failing coverage first, Ochiai second
    return (float(ef), _ochiai(ef, ep, nf, np_, F, P))


FORMULAS = {
    f.name: f
    for f in [
        Formula("Tarantula", Family.POPULAR, _tarantula),
        Formula("Ochiai", Family.POPULAR, _ochiai),
        Formula("Jaccard", Family.POPULAR, _jaccard),
        Formula("Naish1", Family.HUMAN, _naish1),
        Formula("Naish2", Family.HUMAN, _naish2),
        Formula("RusselRao", Family.HUMAN, _russel_rao),
        Formula("Binary", Family.HUMAN, _binary),
        Formula("Wong1", Family.HUMAN, _wong1),
        Formula("DStar2", Family.HUMAN, _dstar(2)),
        Formula("DStar3", Family.HUMAN, _dstar(3)),
        Formula("GP02", Family.GP, _gp02),
        Formula("GP03", Family.GP, _gp03),
        Formula("GP13", Family.GP, _gp13),
        Formula("GP19", Family.GP, _gp19),
        # no agreed-upon closed form; registered so callers get a clear error
        Formula("PattSim2", Family.SINGLE_BUG, None),
        Formula("LexOchiai", Family.SINGLE_BUG, _lex_ochiai),
        Formula("M9185", Family.SINGLE_BUG, None),
        Formula("Kulczynski2", Family.SINGLE_BUG, _kulczynski2),
    ]
}

_ALIASES = {"d2": "DStar2", "d3": "DStar3", "dstar*2": "DStar2", "patternsimilarity": "PattSim2"}


def _norm(name: str) -> str:
    return "".join(c for c in name.lower() if c not in "_- ")


_BY_KEY = {_norm(n): n for n in FORMULAS}
_BY_KEY.update(_ALIASES)


def get_formula(name) -> Formula:
    """Look up a formula by name, case- and separator-insensitively."""
    if isinstance(name, Formula):
        return name
    key = _BY_KEY.get(_norm(name))
    if key is None:
        raise InputError(f"unknown formula {name!r}")
    return FORMULAS[key]


def available_formulas() -> list:
    return [f.name for f in FORMULAS.values() if f.available]


def suspiciousness(formula, st: StatementStats, totals: tuple[int, int]):
    """Score one statement. Raises FormulaUnavailable for undefined formulas."""
    return get_formula(formula)(st, totals)


@dataclass(frozen=True)
class SuspiciousnessVector:
    formula: str
    scores: dict


def score_spectrum(formula, spectrum: CoverageSpectrum) -> SuspiciousnessVector:
    f = get_formula(formula)
    if not f.available:
        raise FormulaUnavailable(f.name)
    totals = spectrum.totals
    scores = {s: f(st, totals) for s, st in all_stats(spectrum).items()}
    return SuspiciousnessVector(f.name, scores)


class Policy(Enum):
    ORDINAL = "ordinal"
    MODIFIED_COMPETITION = "modified-competition"


@dataclass(frozen=True)
class Ranking:
    """Inspection order over the universe plus a rank value per statement.

    Under ORDINAL ranks are 1..|P| following `order`. Under
    MODIFIED_COMPETITION statements in a tier share one rank, and the rank is
    the inspection cost of reaching that tier.
    """

    order: tuple
    rank: dict
    policy: Policy

    def __len__(self) -> int:
        return len(self.order)

    def position(self, s) -> int:
        return self.order.index(s) + 1


def _descending(score):
    if isinstance(score, tuple):
        return tuple(-x for x in score)
    return (-score,)


def rank(vector: SuspiciousnessVector) -> Ranking:
    """Ordinal ranking: descending score, ties broken by ascending line."""
    order = tuple(sorted(vector.scores, key=lambda s: (_descending(vector.scores[s]), line_key(s))))
    return Ranking(order, {s: i for i, s in enumerate(order, 1)}, Policy.ORDINAL)


def top_n(ranking: Ranking, n: int) -> list:
    if n < 0:
        raise InputError("n must be non-negative")
    return list(ranking.order[:n])


def rank_spectrum(formula, spectrum: CoverageSpectrum) -> Ranking:
    return rank(score_spectrum(formula, spectrum))
