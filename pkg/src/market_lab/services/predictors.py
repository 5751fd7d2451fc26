"""
Next-day movement prediction.

``predict_exact`` is the ground-truth oracle: it weighs every population that reproduces the
history and reads off the sign of the next day's net order flow. The limit predictor works
for FI markets with a multinomial population as m grows: it classifies the history rows by
the sign of A_i p and, when the target row is balanced (c . p = 0), reduces the question to a
ratio of Gaussian cone probabilities.
"""

from collections.abc import Iterator, Sequence
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, prod

import numpy as np

from market_lab.config.settings import LabSettings, get_lab_settings
from market_lab.exceptions import EnumerationCapError, HistoryLimitInfeasibleError, ProbabilityZeroError
from market_lab.models.market import BernoulliSubset, MarketModel, Multinomial, PriceRule, PriceSeries
from market_lab.models.prediction import (
    BoundedVerdict,
    ConditionalFrequency,
    LimitClassification,
    LimitPrediction,
    LimitVerdict,
    Prediction,
)
from market_lab.models.system import LinearSystem, Row
from market_lab.services.cone import estimate_cone_ratio
from market_lab.services.linear_bridge import fi_market_to_system, market_to_system
from market_lab.services.solutions import tally_solutions
from market_lab.utils.logging import get_market_lab_logger
from market_lab.utils.rational import dot, sign

logger = get_market_lab_logger("services.predictors")

UP_LIKELY_THRESHOLD = Fraction(2, 3)
DOWN_NOT_UP_THRESHOLD = Fraction(1, 3)


def compositions(m: int, h: int) -> Iterator[tuple[int, ...]]:
    """Every way of writing m as an ordered sum of h non-negative counts."""
    for bars in combinations(range(m + h - 1), h - 1):
        edges = (-1, *bars, m + h - 1)
        yield tuple(edges[i + 1] - edges[i] - 1 for i in range(h))


def multinomial_pmf(counts: Sequence[int], p: Sequence[Fraction]) -> Fraction:
    coefficient = factorial(sum(counts)) // prod(factorial(x) for x in counts)
    return coefficient * prod((pi**x for pi, x in zip(p, counts, strict=True)), start=Fraction(1))


def _target_row(system: LinearSystem, target_actions: Row | None) -> Row:
    if target_actions is None:
        return system.c
    if len(target_actions) != system.columns:
        raise ValueError(f"target actions have {len(target_actions)} entries for {system.columns} strategies")
    if any(a not in (-1, 0, 1) for a in target_actions):
        raise ValueError("target actions must be in {-1, 0, +1}")
    return tuple(target_actions)


def _predict_bernoulli(system: LinearSystem, target: Row, settings: LabSettings) -> Prediction:
    tally = tally_solutions(system, target=target, settings=settings)
    if tally.total == 0:
        raise ProbabilityZeroError("no population subset reproduces the history")
    return Prediction(
        p_up=Fraction(tally.up, tally.total),
        p_down=Fraction(tally.down, tally.total),
        p_same=Fraction(tally.flat, tally.total),
        consistent_assignments=tally.total,
    )


def _predict_multinomial(
    system: LinearSystem, target: Row, population: Multinomial, m: int, settings: LabSettings
) -> Prediction:
    h = system.columns
    size = comb(m + h - 1, h - 1)
    if size > settings.multinomial_composition_cap:
        raise EnumerationCapError("multinomial", size, settings.multinomial_composition_cap)

    weights = {1: Fraction(0), -1: Fraction(0), 0: Fraction(0)}
    consistent = 0
    for counts in compositions(m, h):
        if system.is_satisfied_by(counts):
            consistent += 1
            movement = sign(sum(a * x for a, x in zip(target, counts, strict=True)))
            weights[movement] += multinomial_pmf(counts, population.p)

    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise ProbabilityZeroError(f"no population of {m} traders reproduces the history")
    return Prediction(
        p_up=weights[1] / total,
        p_down=weights[-1] / total,
        p_same=weights[0] / total,
        consistent_assignments=consistent,
    )


def predict_exact(
    model: MarketModel,
    history: PriceSeries,
    target_actions: Row | None = None,
    settings: LabSettings | None = None,
) -> Prediction:
    """
    Exact conditional distribution of the next day's movement given the history.

    Args:
        model: Market, either population mode, either rule
        history: Observed prices
        target_actions: Action row of the predicted day; defaults to the strategies' own actions
        settings: Enumeration caps (defaults to the cached lab settings)

    Returns:
        p_up, p_down and p_same as exact rationals

    Raises:
        InfeasibleHistoryError: If the history breaks the rule's step-size invariant
        ProbabilityZeroError: If no population reproduces the history
        EnumerationCapError: If the enumeration exceeds its cap
    """
    settings = settings or get_lab_settings()
    system, _ = market_to_system(model, history)
    target = _target_row(system, target_actions)

    if isinstance(model.population, Multinomial):
        prediction = _predict_multinomial(system, target, model.population, model.trader_count, settings)
    else:
        prediction = _predict_bernoulli(system, target, settings)
    logger.info(f"Exact prediction over {model.h} strategies: {prediction.as_line()}")
    return prediction


def _require_bernoulli(model: MarketModel) -> None:
    if not isinstance(model.population, BernoulliSubset):
        raise ValueError("market prediction decisions are defined for bernoulli-subset populations")


def decide_bounded(
    model: MarketModel, history: PriceSeries, settings: LabSettings | None = None
) -> BoundedVerdict:
    """UpLikely if p_up > 2/3, DownNotUp if p_up < 1/3, Indeterminate when the promise fails."""
    _require_bernoulli(model)
    p_up = predict_exact(model, history, settings=settings).p_up
    if p_up > UP_LIKELY_THRESHOLD:
        return BoundedVerdict.UP_LIKELY
    if p_up < DOWN_NOT_UP_THRESHOLD:
        return BoundedVerdict.DOWN_NOT_UP
    logger.warning(f"Bounded prediction promise violated: p_up = {p_up}")
    return BoundedVerdict.INDETERMINATE


def decide_unbounded(model: MarketModel, history: PriceSeries, settings: LabSettings | None = None) -> bool:
    """True iff the exact conditional p_up is strictly above 1/2."""
    _require_bernoulli(model)
    return predict_exact(model, history, settings=settings).p_up > Fraction(1, 2)


def _check_probability_vector(p: Sequence[Fraction], h: int) -> None:
    if len(p) != h:
        raise ValueError(f"probability vector has {len(p)} entries for {h} columns")
    if any(pi <= 0 for pi in p) or sum(p) != 1:
        raise ValueError("probabilities must be positive and sum to 1")


def gaussian_covariance(p: Sequence[Fraction]) -> tuple[tuple[Fraction, ...], ...]:
    """
    Covariance of a single trader's strategy indicator over the first h-1 coordinates.

    Raises:
        ValueError: If h < 2 or p is not a positive probability vector
    """
    if len(p) < 2:
        raise ValueError("the limit covariance needs at least two strategies")
    _check_probability_vector(p, len(p))
    size = len(p) - 1
    return tuple(
        tuple(p[i] - p[i] ** 2 if i == j else -p[i] * p[j] for j in range(size)) for i in range(size)
    )


def _reduce(row: Row) -> Row:
    return tuple(a - row[-1] for a in row[:-1])


def classify_limit_constraints(system: LinearSystem, p: Sequence[Fraction]) -> LimitClassification:
    """
    Sort history rows by the exact sign of A_i p and classify the target row.

    Rows with A_i p > 0 hold with probability tending to 1 and are dropped. Rows with
    A_i p = 0 are kept, reduced to h-1 coordinates as A'_i = (A_i1 - A_ih, ..., A_i,h-1 - A_ih).
    Any non-zero equation row, any row with A_i p < 0 and any all-zero inequality row makes
    the history vanish in the limit.
    """
    _check_probability_vector(p, system.columns)

    # Equation rows must all be zero
    for index, row in enumerate(system.B):
        if any(row):
            return LimitClassification(
                verdict=LimitVerdict.HISTORY_LIMIT_INFEASIBLE,
                reason=f"equation row {index} is not identically zero",
            )

    # Keep only inequality rows on the boundary A_i p = 0
    retained: list[int] = []
    for index, row in enumerate(system.A):
        if not any(row):
            return LimitClassification(
                verdict=LimitVerdict.HISTORY_LIMIT_INFEASIBLE, reason=f"inequality row {index} is all zero"
            )
        value = dot(row, p)
        if value < 0:
            return LimitClassification(
                verdict=LimitVerdict.HISTORY_LIMIT_INFEASIBLE,
                reason=f"inequality row {index} has A_i p = {value} < 0",
            )
        if value == 0:
            retained.append(index)

    # Classify the target row
    target_value = dot(system.c, p)
    if not any(system.c):
        return LimitClassification(
            verdict=LimitVerdict.ALWAYS_DOWN, retained_rows=tuple(retained), reason="target row is zero"
        )
    if target_value < 0:
        return LimitClassification(verdict=LimitVerdict.ALWAYS_DOWN, retained_rows=tuple(retained))
    if target_value > 0:
        return LimitClassification(verdict=LimitVerdict.ALWAYS_UP, retained_rows=tuple(retained))
    return LimitClassification(
        verdict=LimitVerdict.RATIO,
        D=tuple(_reduce(system.A[index]) for index in retained),
        c_prime=_reduce(system.c),
        covariance=gaussian_covariance(p),
        retained_rows=tuple(retained),
    )


def _limit_system(model: MarketModel, history: PriceSeries) -> tuple[LinearSystem, Multinomial]:
    if model.rule is not PriceRule.FI:
        raise ValueError("the limit predictor applies to FI markets only")
    if not isinstance(model.population, Multinomial):
        raise ValueError("the limit predictor needs a multinomial population")
    system, _ = fi_market_to_system(model, history)
    return system, model.population


def predict_limit_distribution(
    model: MarketModel,
    history: PriceSeries,
    epsilon: float,
    eta: float,
    seed: int,
    settings: LabSettings | None = None,
) -> LimitPrediction:
    """
    Limit (m -> infinity) distribution of the next day's movement.

    AlwaysUp and AlwaysDown verdicts are exact; a Ratio verdict gives p_up from the cone
    estimator and p_same = 0. The half-width is epsilon * p_up with probability at least
    1 - eta, or an absolute Hoeffding bound when the ratio falls below the settings floor.

    Raises:
        HistoryLimitInfeasibleError: If the history's probability vanishes as m grows
        VanishingConeError: If the conditioning cone is too thin to sample
    """
    system, population = _limit_system(model, history)
    classification = classify_limit_constraints(system, population.p)
    logger.info(f"Limit classification: {classification.verdict}")

    match classification.verdict:
        case LimitVerdict.HISTORY_LIMIT_INFEASIBLE:
            logger.error(f"History has vanishing limit probability: {classification.reason}")
            raise HistoryLimitInfeasibleError(classification.reason)
        case LimitVerdict.ALWAYS_UP:
            return LimitPrediction(p_up=1.0, p_down=0.0, p_same=0.0, verdict=classification.verdict)
        case LimitVerdict.ALWAYS_DOWN:
            if not any(system.c):
                return LimitPrediction(p_up=0.0, p_down=0.0, p_same=1.0, verdict=classification.verdict)
            return LimitPrediction(p_up=0.0, p_down=1.0, p_same=0.0, verdict=classification.verdict)

    # Ratio verdict
    estimate = estimate_cone_ratio(
        classification.D, classification.c_prime, classification.covariance, epsilon, eta, seed, settings
    )
    return LimitPrediction(
        p_up=estimate.ratio,
        p_down=1.0 - estimate.ratio,
        p_same=0.0,
        half_width=estimate.half_width,
        verdict=classification.verdict,
        estimate=estimate,
    )


def predict_limit(
    model: MarketModel,
    history: PriceSeries,
    epsilon: float,
    eta: float,
    seed: int,
    settings: LabSettings | None = None,
) -> float:
    """The limit of Pr_m[P_t > P_{t-1} | history]: 0, 1 or the estimated cone ratio."""
    return predict_limit_distribution(model, history, epsilon, eta, seed, settings).p_up


def sample_conditional_frequency(
    model: MarketModel,
    history: PriceSeries,
    m: int,
    trials: int,
    seed: int,
    settings: LabSettings | None = None,
) -> ConditionalFrequency:
    """
    Empirical up-frequency among sampled m-trader populations that reproduce the history.

    Populations are drawn in fixed-size batches, batch b from its own PCG64 stream keyed by
    ``SeedSequence(seed, spawn_key=(b,))``.

    Raises:
        ProbabilityZeroError: If no sampled population reproduces the history
    """
    settings = settings or get_lab_settings()
    if not isinstance(model.population, Multinomial):
        raise ValueError("finite-m sampling needs a multinomial population")
    if m < 0 or trials < 1:
        raise ValueError("m must be non-negative and trials positive")

    system, _ = market_to_system(model, history)
    a, b_matrix, b = system.a_matrix(), system.b_matrix(), system.b_vector()
    target = system.c_vector()
    p = np.array([float(pi) for pi in model.population.p])
    p = p / p.sum()

    conditioned = hits = 0
    for batch, start in enumerate(range(0, trials, settings.cone_batch_size)):
        size = min(settings.cone_batch_size, trials - start)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(batch,))))
        counts = rng.multinomial(m, p, size=size)
        # Mask the populations that reproduce the history
        keep = np.ones(size, dtype=bool)
        if len(a):
            keep &= np.all(counts @ a.T > 0, axis=1)
        if len(b_matrix):
            keep &= np.all(counts @ b_matrix.T == b, axis=1)
        conditioned += int(np.count_nonzero(keep))
        hits += int(np.count_nonzero(keep & (counts @ target > 0)))

    if conditioned == 0:
        raise ProbabilityZeroError(f"none of {trials} sampled populations reproduced the history")
    frequency = hits / conditioned
    logger.info(f"Finite-m frequency at m={m}: {hits}/{conditioned} = {frequency:.6f}")
    return ConditionalFrequency(trials=trials, conditioned=conditioned, hits=hits, frequency=frequency)
