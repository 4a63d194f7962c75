"""Effort estimation: measured intervals and imputation of unobserved work."""

import logging
from collections.abc import Sequence

from ._constants import ERROR_NON_POSITIVE_RHO, SECONDS_PER_HOUR
from ._errors import ContractViolation, CrimError, DomainError
from ._models import EffortEstimate, EffortSource, ObservationClass, RateSample
from ._types import RateProvider

logger = logging.getLogger(__name__)


def impute_time(delta_l: float, rho: float) -> float:
    """Return estimated hours for a contribution: size divided by rate.

    Args:
        delta_l: Contribution size in metric units.
        rho: Model contribution rate in metric units per hour.

    Returns:
        Hours.

    Raises:
        DomainError: If ``rho`` is not positive.

    Example:
        >>> impute_time(100, 50)
        2.0
    """
    if rho <= 0:
        raise DomainError(ERROR_NON_POSITIVE_RHO)
    return delta_l / rho


def estimate_commit_effort(
    sample: RateSample,
    model: RateProvider,
    min_support: int,
    cap_enabled: bool = True,
) -> EffortEstimate:
    """Estimate the person-hours behind one commit.

    Observed and degenerate intervals are taken as fully worked. Unobserved
    intervals are imputed from the contribution size and capped at the
    elapsed interval when one exists.

    Args:
        sample: Classified sample.
        model: Rate provider fitted on the same metric.
        min_support: Minimum observed samples for an author-specific rate.
        cap_enabled: Cap imputed hours at the interval length.

    Returns:
        The effort estimate.

    Raises:
        ContractViolation: If the sample and model metrics differ.
    """
    if sample.metric is not model.metric:
        raise ContractViolation(f"sample metric '{sample.metric.value}' does not match model '{model.metric.value}'")

    if sample.observation is not ObservationClass.UNOBSERVED and sample.ctd_seconds is not None:
        return EffortEstimate(
            commit_id=sample.commit_id,
            author_id=sample.author_id,
            delta_t_hours=sample.ctd_seconds / SECONDS_PER_HOUR,
            source=EffortSource.MEASURED,
            capped=False,
            rho_used=None,
            delta_l=sample.delta_l,
        )

    rho = model.rho_for(sample.author_id, min_support)
    hours = impute_time(sample.delta_l, rho)
    capped = False
    if cap_enabled and sample.ctd_seconds is not None:
        ceiling = sample.ctd_seconds / SECONDS_PER_HOUR
        if hours > ceiling:
            hours, capped = ceiling, True
    return EffortEstimate(
        commit_id=sample.commit_id,
        author_id=sample.author_id,
        delta_t_hours=hours,
        source=EffortSource.IMPUTED,
        capped=capped,
        rho_used=rho,
        delta_l=sample.delta_l,
    )


def estimate_history(
    samples: Sequence[RateSample],
    model: RateProvider,
    min_support: int,
    cap_enabled: bool = True,
) -> list[EffortEstimate]:
    """Estimate effort for every sample of a history, in order.

    Raises:
        CrimError: Any per-commit failure, with the commit id prefixed.
    """
    estimates = []
    for sample in samples:
        try:
            estimates.append(estimate_commit_effort(sample, model, min_support, cap_enabled))
        except CrimError as e:
            raise type(e)(f"commit {sample.commit_id}: {e}", stage=e.stage) from e
    imputed = sum(1 for e in estimates if e.source is EffortSource.IMPUTED)
    logger.info("estimated %d commits (%d imputed)", len(estimates), imputed)
    return estimates


def forecast(delta_l: float, model: RateProvider, author_id: str | None = None, min_support: int = 0) -> float:
    """Forecast hours for planned work of a given size.

    Args:
        delta_l: Planned contribution size in the model's metric units.
        model: Rate provider.
        author_id: Author expected to do the work; None uses the global rate.
        min_support: Minimum observed samples for an author-specific rate.

    Returns:
        Estimated hours.
    """
    if delta_l < 0:
        raise DomainError("contribution size must be non-negative")
    return impute_time(delta_l, model.rho_for(author_id or "", min_support))
