"""Package configuration, particularly for logging.

Package-scope constants may reside here, but more importantly, some setup here
will provide a logging infrastructure for all of the package's modules.
Individual modules may provide separate configuration on a more local level,
but this will at least provide a foundation.

"""

from ._version import __version__
from .affine_opt import AffineModulusResult, affine_modulus, phi_lower
from .canonical import (
    Annulus,
    DoubleTeichmuller,
    DoubleTeichmullerUnit,
    Grotzsch,
    ModulusEstimate,
    Teichmuller,
)
from .condenser import CondenserOptions, modulus
from .const import *
from .exceptions import *
from .geometry import (
    AffineMap,
    BoundaryComponent,
    DoublyConnectedDomain,
    Ray,
    UnboundedComponent,
)
from .harmonic import MapVerificationReport, verify_map
from .parsers import read_domain

__classes__ = [
    "AffineMap",
    "AffineModulusResult",
    "Annulus",
    "BoundaryComponent",
    "CondenserOptions",
    "DoubleTeichmuller",
    "DoubleTeichmullerUnit",
    "DoublyConnectedDomain",
    "Grotzsch",
    "MapVerificationReport",
    "ModulusEstimate",
    "Ray",
    "Teichmuller",
    "UnboundedComponent",
]
__functions__ = ["affine_modulus", "modulus", "phi_lower", "read_domain", "verify_map"]
__all__ = __classes__ + __functions__ + ["RingmodError"]

LOGGING_LEVEL = "INFO"
