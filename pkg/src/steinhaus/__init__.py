"""Sharp negative-moment Khinchin constants for Steinhaus sums, with validated numerics."""
__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, RangeError, VarianceWarning
from .interval import Enclosure, enclose_arith
from .specfun import BesselOrder, bessel_enclosure, bessel_j, gamma_enclosure, j0_envelope
from .constants import (
    KhinchinConstants,
    PhiPair,
    c_p,
    d_func,
    find_pstar,
    kappa_p,
    khinchin_constants,
    phi_cap,
    phi_small,
    psi_2,
)
from .moments import (
    CoefficientVector,
    MomentEstimate,
    f_p_integral,
    mc_negative_moment,
    pair_moment,
    pair_series_moment,
    psi_func,
    quad_negative_moment,
)
from .verifier import LemmaId, Margin, Verdict, VerificationReport
from .entropy import GridSpec, RadialDensity, radial_density, renyi_gaussian, renyi_steinhaus

__all__ = [
    "ConvergenceError",
    "DomainError",
    "RangeError",
    "VarianceWarning",
    "Enclosure",
    "enclose_arith",
    "BesselOrder",
    "bessel_enclosure",
    "bessel_j",
    "gamma_enclosure",
    "j0_envelope",
    "KhinchinConstants",
    "PhiPair",
    "c_p",
    "d_func",
    "find_pstar",
    "kappa_p",
    "khinchin_constants",
    "phi_cap",
    "phi_small",
    "psi_2",
    "CoefficientVector",
    "MomentEstimate",
    "f_p_integral",
    "mc_negative_moment",
    "pair_moment",
    "pair_series_moment",
    "psi_func",
    "quad_negative_moment",
    "LemmaId",
    "Margin",
    "Verdict",
    "VerificationReport",
    "GridSpec",
    "RadialDensity",
    "radial_density",
    "renyi_gaussian",
    "renyi_steinhaus",
    "__version__",
]
