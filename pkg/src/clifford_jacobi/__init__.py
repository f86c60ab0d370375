"""Two-parameter Clifford-Jacobi polynomials and the monogenic wavelets built from them."""

from .clifford import Multivector, blade_product, conjugate, embed, mv_mul
from .cwt import CwtField, GridSignal, cwt_forward, plancherel_ratio, reconstruct, wavelet_copy
from .families import (
    WaveletSpec,
    chebyshev_clifford,
    gegenbauer,
    gegenbauer_rodrigues,
    jacobi_Z,
    jacobi_Z_rodrigues,
    legendre_clifford,
    moment_integral,
    orthogonality_integral,
)
from .quadrature import RadialQuadrature
from .spectral import admissibility, bessel_j, direct_ft, sphere_plane_wave, wavelet_hat
from .vecpoly import VecPoly, WeightExpansion, WeightParams, dirac, dirac_weight, factor_common_weight, gamma, weight_eval

__version__ = "0.1.0"

__all__ = [
    "CwtField",
    "GridSignal",
    "Multivector",
    "RadialQuadrature",
    "VecPoly",
    "WaveletSpec",
    "WeightExpansion",
    "WeightParams",
    "admissibility",
    "bessel_j",
    "blade_product",
    "chebyshev_clifford",
    "conjugate",
    "cwt_forward",
    "dirac",
    "dirac_weight",
    "direct_ft",
    "embed",
    "factor_common_weight",
    "gamma",
    "gegenbauer",
    "gegenbauer_rodrigues",
    "jacobi_Z",
    "jacobi_Z_rodrigues",
    "legendre_clifford",
    "moment_integral",
    "mv_mul",
    "orthogonality_integral",
    "plancherel_ratio",
    "reconstruct",
    "sphere_plane_wave",
    "wavelet_copy",
    "wavelet_hat",
    "weight_eval",
]
