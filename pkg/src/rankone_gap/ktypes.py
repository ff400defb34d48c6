"""Witness K-types over SO(d+1) for a given SO(d)-type, ranked by the exact
minimality functional used to single out lowest K-types.

The functional assigns to a K-type tau the sum of (tau_j + (d+1-2j)/2)^2 over
all entries; it is computed in exact rational arithmetic so ties and
minimality claims never depend on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .weights import (
    HighestWeight,
    branches_to,
    dual,
    enumerate_ktypes_containing,
)


def minimality_norm(tau: HighestWeight, d: int) -> Fraction:
    """Exact value of sum_j (tau_j + (d+1-2j)/2)^2 for a K-type over SO(d+1)."""
    if tau.n != d + 1:
        raise ValueError(f"expected an SO({d + 1}) weight, got SO({tau.n})")
    total = Fraction(0)
    for j, entry in enumerate(tau.entries, start=1):
        term = Fraction(entry) + Fraction(d + 1 - 2 * j, 2)
        total += term * term
    return total


def witness_ktype(sigma: HighestWeight, d: int) -> HighestWeight:
    """The explicit K-type over SO(d+1) containing sigma and its dual.

    Even d keeps the first d/2 - 1 entries of sigma and takes the absolute
    value of the last; odd d keeps all (d-1)/2 entries and appends a zero.
    """
    if sigma.n != d:
        raise ValueError(f"expected an SO({d}) weight, got SO({sigma.n})")
    s = sigma.entries
    if d % 2 == 0:
        entries = s[:-1] + (abs(s[-1]),) if s else ()
    else:
        entries = s + (0,)
    return HighestWeight(d + 1, entries)


@dataclass(frozen=True)
class WitnessReport:
    sigma: HighestWeight
    tau: HighestWeight
    lambda_value: Fraction
    contains_sigma: bool
    contains_sigma_dual: bool
    is_minimal_over_bound: bool
    search_bound: int

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma.to_json(),
            "tau": self.tau.to_json(),
            "lambda": str(self.lambda_value),
            "lambda_float": float(self.lambda_value),
            "contains_sigma": self.contains_sigma,
            "contains_sigma_dual": self.contains_sigma_dual,
            "is_minimal_over_bound": self.is_minimal_over_bound,
            "search_bound": self.search_bound,
        }


def default_search_bound(sigma: HighestWeight) -> int:
    """Largest entry magnitude plus a safety margin of 3."""
    return max((abs(e) for e in sigma.entries), default=0) + 3


def minimal_ktypes(
    sigma: HighestWeight, d: int, bound: int | None = None
) -> tuple[list[HighestWeight], WitnessReport]:
    """Brute-force minimizers of the minimality norm among K-types over
    SO(d+1) that contain both sigma and its dual, with first entry capped by
    ``bound``.

    Returns every minimizer (lexicographic order) plus a report confirming
    that the constructed witness K-type attains the minimum.
    """
    if sigma.n != d:
        raise ValueError(f"expected an SO({d}) weight, got SO({sigma.n})")
    if bound is None:
        bound = default_search_bound(sigma)
    sigma_dual = dual(sigma)
    candidates = [
        tau
        for tau in enumerate_ktypes_containing(sigma, bound)
        if branches_to(tau, sigma_dual)
    ]
    if not candidates:
        raise ValueError(f"empty candidate set: bound {bound} is too small")
    norms = [minimality_norm(tau, d) for tau in candidates]
    best = min(norms)
    minimizers = [tau for tau, v in zip(candidates, norms) if v == best]

    tau_star = witness_ktype(sigma, d)
    lam = minimality_norm(tau_star, d)
    report = WitnessReport(
        sigma=sigma,
        tau=tau_star,
        lambda_value=lam,
        contains_sigma=branches_to(tau_star, sigma),
        contains_sigma_dual=branches_to(tau_star, sigma_dual),
        is_minimal_over_bound=(lam == best),
        search_bound=bound,
    )
    return minimizers, report
