from .audit import primal_dual_audit
from .oracle import OracleCaps, opt_bruteforce
from .relax import relax_to_page_laminar
from .repair import repair_phases
from .vc import VCInstance, vc_reduce, vc_solution_from_cover

__all__ = ["OracleCaps", "VCInstance", "opt_bruteforce", "primal_dual_audit", "relax_to_page_laminar",
           "repair_phases", "vc_reduce", "vc_solution_from_cover"]
