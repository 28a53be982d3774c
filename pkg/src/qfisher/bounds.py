"""Cramer-Rao bound evaluation and Heisenberg-scaling verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import ChannelFamily
from .fisher_channel import rld_fisher_channel, rld_value_channel
from .fisher_state import FisherValue

BOUND_KINDS = (
    "state_sld",
    "state_rld",
    "cq_channel",
    "channel_sld_heisenberg",
    "channel_rld",
    "multi_scalar",
)

_SCALING = {kind: "1/n" for kind in BOUND_KINDS}
_SCALING["channel_sld_heisenberg"] = "1/n^2"


@dataclass(frozen=True)
class BoundReport:
    """Lower bound on estimator variance (or on Tr[W Cov]) from a Fisher value.

    A vacuous report (bound 0) arises exactly from an infinite Fisher value;
    a zero Fisher value yields an infinite bound and is flagged ``degenerate``.
    """

    bound: float
    n: int
    kind: str
    fisher_used: FisherValue
    scaling: str
    convention_note: str = ""
    vacuous: bool = False
    degenerate: bool = False


def _as_fisher(fisher) -> FisherValue:
    if isinstance(fisher, FisherValue):
        return fisher
    value = float(fisher)
    if math.isinf(value):
        return FisherValue(value=math.inf, finite=False, support_residual=math.inf)
    return FisherValue(value=value, finite=True, support_residual=0.0)


def crb(fisher, n: int, kind: str, convention_note: str = "") -> BoundReport:
    """Cramer-Rao bound 1/(n I), or 1/(n^2 I) for the Heisenberg kind."""
    if kind not in BOUND_KINDS:
        raise ValueError(f"kind must be one of {BOUND_KINDS}, got {kind!r}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    fisher = _as_fisher(fisher)
    scaling = _SCALING[kind]
    denominator = n * n if kind == "channel_sld_heisenberg" else n
    if not fisher.finite:
        return BoundReport(
            bound=0.0, n=n, kind=kind, fisher_used=fisher, scaling=scaling,
            convention_note=convention_note, vacuous=True,
        )
    if fisher.value == 0.0:
        return BoundReport(
            bound=math.inf, n=n, kind=kind, fisher_used=fisher, scaling=scaling,
            convention_note=convention_note, degenerate=True,
        )
    return BoundReport(
        bound=1.0 / (denominator * fisher.value), n=n, kind=kind,
        fisher_used=fisher, scaling=scaling, convention_note=convention_note,
    )


@dataclass(frozen=True)
class HeisenbergVerdict:
    """Whether Heisenberg scaling is ruled out by a finite RLD value."""

    attainable: bool
    message: str
    fisher: FisherValue
    support_residual: float
    vacuous: bool = False


def heisenberg_verdict(
    chan: ChannelFamily,
    theta,
    w: np.ndarray | None = None,
    conv: str = "output",
) -> HeisenbergVerdict:
    """No-go verdict: finite RLD channel value forbids 1/n^2 error scaling.

    With a weight matrix the multiparameter RLD value is used; otherwise the
    single-parameter channel value.  A finite value means shot-noise-limited;
    a failed finiteness condition leaves Heisenberg scaling possible.
    """
    if w is None:
        fisher = rld_fisher_channel(chan, theta, conv=conv)
    else:
        fisher = rld_value_channel(chan, theta, w, conv=conv)
    if fisher.finite:
        vacuous = fisher.value == 0.0
        msg = "no-go (shot-noise limited)"
        if vacuous:
            msg += "; Fisher value 0, bound vacuous"
        return HeisenbergVerdict(
            attainable=False, message=msg, fisher=fisher,
            support_residual=fisher.support_residual, vacuous=vacuous,
        )
    return HeisenbergVerdict(
        attainable=True,
        message="Heisenberg possibly attainable (finiteness condition fails)",
        fisher=fisher,
        support_residual=fisher.support_residual,
    )
