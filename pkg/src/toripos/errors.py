"""Exception hierarchy.

Every error carries a machine-readable ``code``; the CLI maps
:class:`InternalInconsistency` and :class:`TheoremViolation` to exit status 2
and everything else to exit status 1.
"""

from __future__ import annotations


class ToriposError(Exception):
    code = "error"
    internal = False


class ZeroVector(ToriposError, ValueError):
    code = "zero_vector"


class RankMismatch(ToriposError, ValueError):
    code = "rank_mismatch"


class DimensionMismatch(ToriposError, ValueError):
    code = "dimension_mismatch"


class RaysNotSpanning(ToriposError, ValueError):
    code = "rays_not_spanning"


class Inconsistent(ToriposError, ValueError):
    code = "inconsistent"


class NonIntegral(ToriposError, ValueError):
    code = "non_integral"

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class NotAFan(ToriposError, ValueError):
    code = "not_a_fan"


class IncompleteSupport(ToriposError, ValueError):
    code = "incomplete_support"


class NotSmoothCone(ToriposError, ValueError):
    code = "not_smooth_cone"


class NotSmooth(ToriposError, ValueError):
    code = "not_smooth"


class EmptyInput(ToriposError, ValueError):
    code = "empty_input"


class NotFullDimensional(ToriposError, ValueError):
    code = "not_full_dimensional"


class IncompatibleLocalData(ToriposError, ValueError):
    code = "incompatible_local_data"


class InvalidKlyachkoData(ToriposError, ValueError):
    code = "invalid_klyachko_data"


class PointOutsideSupport(ToriposError, ValueError):
    code = "point_outside_support"


class NotARefinement(ToriposError, ValueError):
    code = "not_a_refinement"


class NotASection(ToriposError, ValueError):
    code = "not_a_section"


class NotNef(ToriposError, ValueError):
    code = "not_nef"


class NotAmple(ToriposError, ValueError):
    code = "not_ample"


class NotGloballyGeneratedInput(ToriposError, ValueError):
    code = "not_globally_generated_input"


class MalformedInput(ToriposError, ValueError):
    code = "malformed_input"


class InternalInconsistency(ToriposError, RuntimeError):
    code = "internal_inconsistency"
    internal = True


class TheoremViolation(ToriposError, RuntimeError):
    code = "theorem_violation"
    internal = True
