"""Relative tangent cones of curve branches and joins of projective curves."""
from .branch import Branch, StandardBranch, degree, normalize_pair, tangent_direction
from .cone import LinearCone, cone_membership, cone_pair, cone_sets
from .cyclo import CyclotomicNumber, root_of_unity, to_complex
from .errors import (FieldExtensionRequired, PrecisionExhausted, RelconeError)
from .join import (JoinReport, PointData, ProjectivePoint, join_report, lift_cone,
                   plucker_line)
from .series import TruncatedSeries, ZeroSoFar

__version__ = "0.1.0"

__all__ = [
    "Branch", "StandardBranch", "degree", "normalize_pair", "tangent_direction",
    "LinearCone", "cone_membership", "cone_pair", "cone_sets",
    "CyclotomicNumber", "root_of_unity", "to_complex",
    "FieldExtensionRequired", "PrecisionExhausted", "RelconeError",
    "JoinReport", "PointData", "ProjectivePoint", "join_report", "lift_cone", "plucker_line",
    "TruncatedSeries", "ZeroSoFar",
]
