from src.nahm.lattice import chi0, f_series, f_tilde, nahm_sum, rogers_sum
from src.nahm.triples import NahmTriple, dual_triple, tadpole, tadpole_inverse

__all__ = [
    "NahmTriple",
    "chi0",
    "dual_triple",
    "f_series",
    "f_tilde",
    "nahm_sum",
    "rogers_sum",
    "tadpole",
    "tadpole_inverse",
]
