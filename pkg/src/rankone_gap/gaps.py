"""Scalar rate arithmetic for spectral-gap bookkeeping: parameter intervals,
error-rate exponents, mixing rates, decay envelopes, and the gap verdict on a
synthetic spectrum.

All verdict comparisons against the right endpoint use exact endpoint
bookkeeping on atoms and interval flags on density pieces; no epsilon fuzz
enters the verdict itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .measures import RealLineMeasure
from .weights import HighestWeight


@dataclass(frozen=True)
class Interval:
    """Half-open interval (lo, hi]; empty when hi <= lo."""

    lo: float
    hi: float

    @property
    def is_empty(self) -> bool:
        return self.hi <= self.lo

    def contains(self, x: float) -> bool:
        return self.lo < x <= self.hi

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "empty": self.is_empty}


def last_positive_index(sigma: HighestWeight) -> int:
    """Largest 1-based index with a positive coordinate; 0 for the trivial type.

    Read literally: a negative final coordinate does not count as positive.
    """
    out = 0
    for j, e in enumerate(sigma.entries, start=1):
        if e > 0:
            out = j
    return out


def parameter_interval(sigma: HighestWeight, d: int) -> Interval:
    """(d/2, d - ell(sigma)], the unitarity parameter range attached to sigma."""
    if sigma.n != d:
        raise ValueError(f"expected an SO({d}) weight, got SO({sigma.n})")
    return Interval(d / 2, d - last_positive_index(sigma))


def error_rate_gain(s: float, d: int) -> float:
    """min{2s - d, 1}: extra decay exponent of expansion error terms."""
    if not s > d / 2:
        raise ValueError(f"s must exceed d/2 = {d / 2}, got {s}")
    return min(2 * s - d, 1.0)


def continuation_width(delta: float, d: int) -> float:
    """min{delta - d/2, 1}: width of the holomorphic continuation strip."""
    if not delta > d / 2:
        raise ValueError(f"delta must exceed d/2 = {d / 2}, got {delta}")
    return min(delta - d / 2, 1.0)


def haar_decay_rate(kappa_gamma: float) -> float:
    """min{kappa_gamma, 1}: error rate for Haar-correlation decay."""
    if not kappa_gamma > 0:
        raise ValueError(f"kappa_gamma must be positive, got {kappa_gamma}")
    return min(kappa_gamma, 1.0)


def bms_decay_rate(kappa0: float, d: int) -> float:
    """kappa0 / (2 (d + 3 + kappa0)): error rate for BMS-correlation decay."""
    if not 0 < kappa0 <= 1:
        raise ValueError(f"kappa0 must lie in (0, 1], got {kappa0}")
    return kappa0 / (2 * (d + 3 + kappa0))


def decay_envelope(s_star: float, d: int, t: float) -> float:
    """(1 + t) * exp(-(d - s_star) t): matrix-coefficient decay envelope."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if not d / 2 <= s_star < d:
        raise ValueError(f"s_star must lie in [d/2, d), got {s_star}")
    return (1 + t) * math.exp(-(d - s_star) * t)


@dataclass(frozen=True)
class GapParameters:
    d: int
    delta: float | None
    kappa_gamma: float
    kappa0: float
    kappa1: float

    def __post_init__(self):
        if self.delta is not None and not self.d / 2 < self.delta <= self.d:
            raise ValueError(f"delta must lie in (d/2, d], got {self.delta}")
        if not self.kappa_gamma > 0:
            raise ValueError("kappa_gamma must be positive")
        if self.delta is not None and self.kappa_gamma > self.delta - self.d / 2:
            raise ValueError("kappa_gamma cannot exceed delta - d/2")
        if not self.kappa1 < self.kappa0 <= 1:
            raise ValueError("expected kappa1 < kappa0 <= 1")

    @classmethod
    def from_gap(cls, kappa_gamma: float, d: int, delta: float | None = None):
        k0 = haar_decay_rate(kappa_gamma)
        return cls(
            d=d,
            delta=delta,
            kappa_gamma=kappa_gamma,
            kappa0=k0,
            kappa1=bms_decay_rate(k0, d),
        )

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "delta": self.delta,
            "kappa_gamma": self.kappa_gamma,
            "kappa0": self.kappa0,
            "kappa1": self.kappa1,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GapParameters":
        return cls(
            d=int(data["d"]),
            delta=None if data.get("delta") is None else float(data["delta"]),
            kappa_gamma=float(data["kappa_gamma"]),
            kappa0=float(data["kappa0"]),
            kappa1=float(data["kappa1"]),
        )


@dataclass(frozen=True)
class SpectralGapReport:
    verdict: bool
    atom_condition_ok: bool  # no non-trivial type carries an atom at delta
    gap_condition_ok: bool  # some eta > 0 clears (delta - eta, delta) of support
    params: GapParameters | None
    sup_support_below_delta: float | None
    offenders: tuple[str, ...]
    flagged_sigmas: tuple[HighestWeight, ...]  # negative entries: literal ell() caveat

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "atom_condition_ok": self.atom_condition_ok,
            "gap_condition_ok": self.gap_condition_ok,
            "params": None if self.params is None else self.params.to_json(),
            "sup_support_below_delta": self.sup_support_below_delta,
            "offenders": list(self.offenders),
            "flagged_sigmas": [w.to_json() for w in self.flagged_sigmas],
        }


def spectral_gap_verdict(
    spectrum, delta: float, d: int
) -> SpectralGapReport:
    """Decide the strong-gap conditions for a finite synthetic spectrum.

    ``spectrum`` is an iterable of (sigma, measure) pairs whose measures must
    be supported inside the parameter interval of sigma.  The verdict holds
    iff (1) no non-trivial sigma carries an atom exactly at delta and (2) the
    union of supports misses (delta - eta, delta) for some eta > 0; the gap
    parameter is then min{delta - sup(support below delta), delta - d/2}.
    """
    if not d / 2 < delta <= d:
        raise ValueError(f"delta must lie in (d/2, d], got {delta}")
    atom_ok = True
    gap_ok = True
    offenders: list[str] = []
    flagged: list[HighestWeight] = []
    sup_below: float | None = None

    for sigma, measure in spectrum:
        if not isinstance(measure, RealLineMeasure):
            raise TypeError("spectrum entries must carry RealLineMeasure values")
        box = parameter_interval(sigma, d)
        if any(e < 0 for e in sigma.entries):
            flagged.append(sigma)
        for atom in measure.atoms:
            if not box.contains(atom.location):
                raise ValueError(
                    f"atom at {atom.location} outside parameter interval "
                    f"({box.lo}, {box.hi}] of {sigma}"
                )
            if atom.location == delta:
                if not sigma.is_trivial():
                    atom_ok = False
                    offenders.append(f"atom at delta for non-trivial {sigma}")
            elif atom.location < delta:
                sup_below = atom.location if sup_below is None else max(sup_below, atom.location)
        for piece in measure.pieces:
            if piece.lo < box.lo or piece.hi > box.hi:
                raise ValueError(
                    f"density [{piece.lo}, {piece.hi}] outside parameter interval "
                    f"({box.lo}, {box.hi}] of {sigma}"
                )
            if piece.lo < delta:
                if piece.hi >= delta:
                    gap_ok = False
                    offenders.append(
                        f"density of {sigma} touches delta from below on "
                        f"[{piece.lo}, {piece.hi}]"
                    )
                else:
                    sup_below = piece.hi if sup_below is None else max(sup_below, piece.hi)

    verdict = atom_ok and gap_ok
    params = None
    if verdict:
        if sup_below is None:
            kappa_gamma = delta - d / 2
        else:
            kappa_gamma = min(delta - sup_below, delta - d / 2)
        params = GapParameters.from_gap(kappa_gamma, d, delta)
    return SpectralGapReport(
        verdict=verdict,
        atom_condition_ok=atom_ok,
        gap_condition_ok=gap_ok,
        params=params,
        sup_support_below_delta=sup_below,
        offenders=tuple(offenders),
        flagged_sigmas=tuple(flagged),
    )
