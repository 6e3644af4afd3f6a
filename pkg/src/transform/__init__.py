from src.transform.checks import check_S, check_T, check_theta_S, closure_check, fixed_point_check
from src.transform.descriptors import DESCRIPTORS, VVMFDescriptor, get_descriptor, rho_tilde_matrix
from src.transform.evaluate import evaluate

__all__ = [
    "DESCRIPTORS",
    "VVMFDescriptor",
    "check_S",
    "check_T",
    "check_theta_S",
    "closure_check",
    "evaluate",
    "fixed_point_check",
    "get_descriptor",
    "rho_tilde_matrix",
]
