"""Guaranteed cost bounds per algorithm, checked against an exact optimum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import PageSetSequence, RequestSequence
from .errors import InvariantViolation


@dataclass(frozen=True)
class Bound:
    label: str
    cost: Fraction
    limit: Fraction

    @property
    def holds(self) -> bool:
        return self.cost <= self.limit


def height(seq) -> int | None:
    if isinstance(seq, PageSetSequence):
        return seq.forest().height
    return seq.family.forest().height if seq.family.laminar else None


def bounds_for(alg: str, seq, result, opt) -> list[Bound]:
    """Upper bounds on ``result.cost`` that must hold for algorithm ``alg``."""
    cost, opt = Fraction(result.cost), Fraction(opt)
    k = seq.k
    out: list[Bound] = []
    if alg == "belady":
        out.append(Bound("belady = opt", cost, opt))
    elif alg in ("lru", "fifo", "marker"):
        out.append(Bound("k*opt + k", cost, k * opt + k))
    elif alg == "ref":
        bound = result.details.get("phase_bound")
        out.append(Bound("phase_bound*(opt+1)", cost, bound * (opt + 1)))
    elif alg == "waoo":
        phi = Fraction(result.details["phi"])
        out.append(Bound("6*phi + 3*opt", cost, 6 * phi + 3 * opt))
        out.append(Bound("(24k+3)*opt", cost, (24 * k + 3) * opt))
    elif alg.startswith("pl:"):
        h = height(seq)
        if alg == "pl:belady":
            out.append(Bound("h*opt", cost, h * opt))
        else:
            out.append(Bound("h*k*opt + h*k", cost, h * k * opt + h * k))
    elif alg.startswith("sl:pl:") and isinstance(seq, RequestSequence):
        h = height(seq)
        size = len(seq.family)
        if alg == "sl:pl:belady":
            out.append(Bound("3h^2*opt", cost, 3 * h * h * opt))
        out.append(Bound("3h^2k*opt + 3|F|hk", cost, 3 * h * h * k * opt + 3 * size * h * k))
    return out


def enforce(alg: str, seq, result, opt) -> list[Bound]:
    checked = bounds_for(alg, seq, result, opt)
    for b in checked:
        if not b.holds:
            raise InvariantViolation(f"{alg}: cost {b.cost} exceeds {b.label} = {b.limit}")
    return checked
