"""Algorithm lookup by name, as used on the command line."""

from __future__ import annotations

from ..errors import ParameterError
from .baselines import STANDARD_POLICIES, LazyLRU, make_policy
from .exhsearch import ExhSearch
from .pagelaminar import PageLaminarReduction
from .refsearch import RefSearch
from .slotlaminar import SlotLaminarReduction
from .weighted import WeightedAllOrOne

# what each algorithm consumes: slot requests, page-set requests, whole-cache
# requests only, or All-or-One requests with weights
INPUT_KIND = {"exh": "slot", "ref": "laminar", "waoo": "aoo", "lru-aoo": "slot"}
INPUT_KIND.update({name: "standard" for name in STANDARD_POLICIES})

DETERMINISTIC = {"exh", "ref", "waoo", "lru-aoo", "lru", "fifo", "belady"}


def algorithm_names() -> list[str]:
    inner = sorted(STANDARD_POLICIES)
    return (["exh", "ref", "waoo", "lru-aoo"] + inner + [f"pl:{x}" for x in inner]
            + [f"sl:pl:{x}" for x in inner])


def input_kind(name: str) -> str:
    if name.startswith("sl:"):
        return "laminar"
    if name.startswith("pl:"):
        return "pageset"
    try:
        return INPUT_KIND[name]
    except KeyError:
        raise ParameterError(f"unknown algorithm {name!r}") from None


def make_algorithm(name: str, seed: int = 0, debug: bool = False):
    """Instantiate an algorithm; every result exposes ``run(seq, weights)``."""
    if name == "exh":
        return ExhSearch()
    if name == "ref":
        return RefSearch()
    if name == "waoo":
        return WeightedAllOrOne()
    if name == "lru-aoo":
        return LazyLRU()
    if name in STANDARD_POLICIES:
        return make_policy(name, seed)
    if name.startswith("pl:"):
        return PageLaminarReduction(make_policy(name[3:], seed))
    if name.startswith("sl:pl:"):
        return SlotLaminarReduction(PageLaminarReduction(make_policy(name[6:], seed)), debug=debug)
    raise ParameterError(f"unknown algorithm {name!r}; known: {', '.join(algorithm_names())}")
