"""Linear power model for transponders and IP/WDM ports.

Every wavelength channel of capacity B Gbps costs one transponder and one
router port at each end of a lightpath hop, so carrying V Gbps over one hop
draws (p_port + p_transponder) * V / B watts.  Total network power is the sum
over demands of volume x (working hops + protection hops), minus the traffic
that XOR-coded protection removes from shared links.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .errors import ContractError, DomainError

if TYPE_CHECKING:  # imported only for annotations; model imports us at runtime
    from .coding import CodingAssignment
    from .model import Instance
    from .routing import PathPair


@dataclass(frozen=True)
class PowerParams:
    """Device power draw and channel capacity.

    Defaults model a 1000 W IP router port plus a 73 W WDM transponder on
    40 Gbps channels, i.e. a slope of 26.825 W per Gbps per hop.
    """

    port_w: float = 1000.0
    transponder_w: float = 73.0
    channel_gbps: float = 40.0

    def __post_init__(self):
        if self.port_w < 0 or self.transponder_w < 0:
            raise DomainError("device powers must be non-negative")
        if self.channel_gbps <= 0:
            raise DomainError("channel capacity must be positive")

    @property
    def slope_w_per_gbps(self) -> float:
        """Watts drawn per Gbps carried over one link."""
        return (self.port_w + self.transponder_w) / self.channel_gbps


@dataclass(frozen=True)
class PowerReport:
    """Evaluated power of one routed, optionally coded, configuration."""

    p_total: float
    p_conventional: float  # power with plain 1+1 duplication
    p_reduction: float  # power removed by coded sharing
    savings_fraction: float  # p_reduction / p_conventional (0 when idle)


def eval_conventional(instance: Instance, routing: Iterable[PathPair]) -> float:
    """Power of plain 1+1 protection: k * sum_d V_d * (working + protection hops)."""
    from .routing import index_routing  # deferred: model->power->routing would cycle

    by_demand = index_routing(instance, routing)
    k = instance.power.slope_w_per_gbps
    return k * sum(d.volume * by_demand[d].total_hops for d in instance.demands)


def eval_with_coding(
    instance: Instance,
    routing: Iterable[PathPair],
    assignment: CodingAssignment,
) -> PowerReport:
    """Power after XOR-coding the assigned pairs on their shared links.

    Each coded pair removes min(V1, V2) Gbps from every link its two encoded
    paths share, because the XOR stream replaces the smaller flow there.  The
    assignment must be consistent with ``routing``: shared links must actually
    lie on the recorded paths and benefits must match the power parameters.
    """
    from .routing import index_routing

    by_demand = index_routing(instance, routing)
    k = instance.power.slope_w_per_gbps
    p1 = eval_conventional(instance, routing)

    reduction = 0.0
    for coded in assignment.pairs:
        for demand, kind in ((coded.first, coded.first_kind), (coded.second, coded.second_kind)):
            if demand not in by_demand:
                raise ContractError(f"coded pair references unrouted demand {demand}")
            path = by_demand[demand].path(kind)
            if not coded.shared_links <= path.link_set:
                raise ContractError(
                    f"shared links {sorted(coded.shared_links)} not on the "
                    f"{kind.value} path of {demand}"
                )
        expected = k * min(coded.first.volume, coded.second.volume) * len(coded.shared_links)
        if abs(expected - coded.benefit) > 1e-9 * max(1.0, abs(expected)):
            raise ContractError(
                f"pair benefit {coded.benefit} inconsistent with power model ({expected})"
            )
        reduction += coded.benefit

    total = p1 - reduction
    savings = reduction / p1 if p1 > 0 else 0.0
    return PowerReport(
        p_total=total,
        p_conventional=p1,
        p_reduction=reduction,
        savings_fraction=savings,
    )
