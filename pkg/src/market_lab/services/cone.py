"""
Monte Carlo estimate of the Gaussian cone ratio Pr[DY > 0 and c'Y > 0] / Pr[DY > 0].

Y is zero-mean Gaussian with covariance C, sampled as L z with C = L L^T (Cholesky) and z
standard normal. Draws come in fixed-size batches; batch b uses its own PCG64 stream keyed
by ``SeedSequence(seed, spawn_key=(b,))``, so the estimate depends only on the inputs and
the seed.
"""

import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from market_lab.config.settings import LabSettings, get_lab_settings
from market_lab.exceptions import VanishingConeError
from market_lab.models.prediction import ConeEstimate
from market_lab.utils.logging import get_market_lab_logger

logger = get_market_lab_logger("services.cone")


def stopping_threshold(epsilon: float, eta: float) -> int:
    """
    Number of in-cone hits after which hits / conditioned is within relative error ``epsilon``
    of the ratio with probability at least ``1 - eta``.

    This is the zero-one stopping rule 1 + (1 + epsilon) * 4 (e - 2) ln(2 / eta) / epsilon^2,
    rounded up to a whole number of hits.
    """
    upsilon = 4 * (math.e - 2) * math.log(2 / eta) / epsilon**2
    return math.ceil(1 + (1 + epsilon) * upsilon)


def hoeffding_half_width(samples: int, eta: float) -> float:
    return math.sqrt(math.log(2 / eta) / (2 * samples))


def _batch_generator(seed: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(batch,))))


def _as_matrix(rows: Sequence[Sequence[int | Fraction | float]], width: int) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in rows], dtype=np.float64).reshape(len(rows), width)


def estimate_cone_ratio(
    D: Sequence[Sequence[int]],
    c_prime: Sequence[int],
    covariance: Sequence[Sequence[Fraction | float]],
    epsilon: float,
    eta: float,
    seed: int,
    settings: LabSettings | None = None,
) -> ConeEstimate:
    """
    Estimate the conditional probability that c'Y > 0 given DY > 0.

    Sampling stops at the draw that brings the number of hits (draws in the cone {DY > 0}
    with c'Y > 0) to ``stopping_threshold(epsilon, eta)``. The estimate hits / conditioned is
    then within relative error ``epsilon`` with probability at least ``1 - eta``, and the
    reported half-width is ``epsilon * ratio``.

    A ratio below ``settings.cone_min_ratio`` would need unboundedly many draws, so sampling
    also stops once ``threshold / cone_min_ratio`` draws are conditioned. The estimate is
    then flagged ``relative=False`` and carries the Hoeffding half-width instead.

    Args:
        D: Conditioning rows (may be empty)
        c_prime: Target row
        covariance: Positive definite covariance of Y
        epsilon: Relative error bound on the ratio, in (0, 1)
        eta: Failure probability, in (0, 1)
        seed: Seed of the sample streams
        settings: Batch size, cone floor and ratio floor (defaults to the cached lab settings)

    Returns:
        The ratio estimate with its half-width and sample counts

    Raises:
        ValueError: On bad tolerances, mismatched dimensions or a covariance that is not positive definite
        VanishingConeError: If the fraction of draws inside the cone stays below the floor
    """
    settings = settings or get_lab_settings()
    if not (0 < epsilon < 1 and 0 < eta < 1):
        raise ValueError("epsilon and eta must lie in (0, 1)")

    dim = len(c_prime)
    if dim == 0:
        raise ValueError("the target row must have at least one coordinate")
    if any(len(row) != dim for row in D):
        raise ValueError(f"every conditioning row must have {dim} entries")
    cov = _as_matrix(covariance, dim)
    if cov.shape != (dim, dim):
        raise ValueError(f"covariance must be {dim}x{dim}, got {cov.shape[0]}x{cov.shape[1]}")
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as e:
        raise ValueError("covariance is not positive definite") from e

    d_matrix = _as_matrix(D, dim)
    target = np.array([float(v) for v in c_prime], dtype=np.float64)
    threshold = stopping_threshold(epsilon, eta)
    max_conditioned = math.ceil(threshold / settings.cone_min_ratio)
    max_draws = math.ceil(threshold / settings.cone_min_conditioned_fraction)
    batch_size = settings.cone_batch_size

    draws = conditioned = hits = 0
    batch = 0
    while hits < threshold and conditioned < max_conditioned:
        if draws >= max_draws and conditioned < threshold:
            fraction = conditioned / draws
            logger.error(f"Cone sampling stopped after {draws} draws with {conditioned} conditioned")
            raise VanishingConeError(fraction, settings.cone_min_conditioned_fraction)
        rng = _batch_generator(seed, batch)
        samples = rng.standard_normal((batch_size, dim)) @ factor.T
        inside = np.ones(batch_size, dtype=bool)
        if len(d_matrix):
            inside = np.all(samples @ d_matrix.T > 0, axis=1)
        hit = inside & (samples @ target > 0)

        # Cut the batch at the draw that reaches a stopping count
        if hits + int(np.count_nonzero(hit)) >= threshold:
            stop = int(np.argmax(np.cumsum(hit) >= threshold - hits)) + 1
        elif conditioned + int(np.count_nonzero(inside)) >= max_conditioned:
            stop = int(np.argmax(np.cumsum(inside) >= max_conditioned - conditioned)) + 1
        else:
            stop = batch_size
        conditioned += int(np.count_nonzero(inside[:stop]))
        hits += int(np.count_nonzero(hit[:stop]))
        draws += stop
        batch += 1
        logger.debug(f"Cone batch {batch}: {hits}/{threshold} hits, {conditioned} conditioned, {draws} draws")

    relative = hits >= threshold
    ratio = hits / conditioned
    if not relative:
        logger.warning(
            f"Cone ratio below {settings.cone_min_ratio}: {hits} hits in {conditioned} conditioned draws, "
            f"reporting an absolute half-width"
        )
    estimate = ConeEstimate(
        ratio=ratio,
        half_width=epsilon * ratio if relative else hoeffding_half_width(conditioned, eta),
        samples=draws,
        conditioned=conditioned,
        hits=hits,
        relative=relative,
    )
    logger.info(
        f"Cone ratio {estimate.ratio:.6f} +/- {estimate.half_width:.6f} "
        f"({conditioned} of {draws} draws conditioned)"
    )
    return estimate
