"""linkhom: exact linkage theory for finitely presented graded modules.

Computes Auslander transposes, the linkage operator, semidualizing
certification, relative Ext, and graded local cohomology over quotients of
polynomial rings, and mechanically verifies the package's registry of
homological identities on concrete instances.
"""

from .errors import (
    InputError,
    LinkhomError,
    ParseError,
    PreconditionError,
    PushforwardObstructed,
    ShapeError,
)
from .fields import GF, QQ
from .hilbert import HilbertTable
from .ideals import Ideal, colon_ideal, krull_dimension, quotient_by_ideal, zero_ideal
from .rings import GradedRing, Poly, PolyRing

__version__ = "0.1.0"
