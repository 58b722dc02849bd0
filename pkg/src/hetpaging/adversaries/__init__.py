from .aoo import all_or_one_adversary
from .forcing import forcing_sequence, greedy_code, is_forcing
from .gz import GZFamilies, check_gz, family_theorem1i, family_theorem1ii
from .lemma2 import lemma2_adversary

__all__ = ["GZFamilies", "all_or_one_adversary", "check_gz", "family_theorem1i", "family_theorem1ii",
           "forcing_sequence", "greedy_code", "is_forcing", "lemma2_adversary"]
