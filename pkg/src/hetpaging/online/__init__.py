from .base import OnlineAlgorithm, RunResult
from .baselines import FIFO, LRU, Belady, LazyLRU, Marker, make_policy
from .exhsearch import ExhSearch
from .pagelaminar import PageLaminarReduction
from .refsearch import RefSearch
from .slotlaminar import SlotLaminarReduction
from .weighted import WeightedAllOrOne

__all__ = ["Belady", "ExhSearch", "FIFO", "LRU", "LazyLRU", "Marker", "OnlineAlgorithm",
           "PageLaminarReduction", "RefSearch", "RunResult", "SlotLaminarReduction", "WeightedAllOrOne",
           "make_policy"]
