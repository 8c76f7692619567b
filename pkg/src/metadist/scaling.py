"""Power scaling law from the second-moment Markov bound.

For a [0,1]-valued coverage probability C, P(C >= x) >= mu_2 - x^2, so a
reliability constraint P(C > x) >= 1 - eps is guaranteed once
mu_2 >= 1 - eps + x^2.  Solving the closed-form second-moment approximation
for the transmit power gives

    p = c lambda^(-gamma/2),

i.e. the minimum power that holds the QoS constant falls off as the -gamma/2
power of the base-station density.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .moments import SystemParams, rho_n
from .specfun import ln_gamma

__all__ = ["QosSpec", "InfeasibleQosError", "markov_lower_bound", "min_power"]


class InfeasibleQosError(ValueError):
    """No transmit power can satisfy the requested reliability constraint."""


@dataclass(frozen=True)
class QosSpec:
    """Reliability target: P(C > x_rel) >= 1 - epsilon."""

    x_rel: float
    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 < self.x_rel < 1.0:
            raise ValueError(f"x_rel must lie in (0, 1), got {self.x_rel}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


def markov_lower_bound(mu2: float, x: float) -> float:
    """Lower Markov bound P(C >= x) >= mu_2 - x^2 for C supported on [0, 1].

    Vacuous (negative) when mu_2 < x^2; the raw value is returned either way.
    """
    if not 0.0 <= mu2 <= 1.0:
        raise ValueError(f"mu2 must lie in [0, 1], got {mu2}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return mu2 - x * x


def min_power(params: SystemParams, qos: QosSpec) -> float:
    """Minimum transmit power (mW) meeting the QoS via the Markov bound.

    params.power is ignored; the returned power is the value that makes the
    approximate second moment hit 1 - eps + x^2 exactly.  Returns 0.0 when
    theta = 0 or noise = 0 (no noise term: the moment is power-independent,
    so any positive power works whenever the QoS is feasible at all).

    Raises:
        InfeasibleQosError: the target 1 - eps + x^2 exceeds 1 (the Markov
            bound can never certify it) or exceeds the p -> inf moment limit
            1 / (1 + rho_2).
    """
    target = 1.0 - qos.epsilon + qos.x_rel**2
    if target > 1.0:
        raise InfeasibleQosError(
            f"x_rel^2 = {qos.x_rel ** 2:.6g} exceeds epsilon = {qos.epsilon:.6g}: "
            "mu_2 - x^2 >= 1 - eps is unreachable for a [0,1] variable"
        )
    rho2 = rho_n(params, 2)
    bracket = 1.0 - target * (1.0 + rho2)
    if bracket <= 0.0:
        raise InfeasibleQosError(
            f"required mu_2 = {target:.6g} exceeds the infinite-power limit "
            f"1/(1+rho_2) = {1.0 / (1.0 + rho2):.6g}"
        )
    if params.theta == 0.0 or params.noise == 0.0:
        return 0.0
    g = params.gamma_pl
    gamma_2g = math.exp(ln_gamma(2.0 / g))
    c = (
        2.0
        * math.pi
        * bracket
        * gamma_2g
        / (g * target * (2.0 * params.theta * params.noise) ** (2.0 / g))
    ) ** (-g / 2.0)
    return c * params.lambda_bs ** (-g / 2.0)
