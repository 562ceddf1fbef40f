"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`SurfcalcError`, which is itself a :class:`ValueError`.
"""


class SurfcalcError(ValueError):
    pass


# exact linear algebra
class SingularMatrix(SurfcalcError):
    pass


class NotSymmetric(SurfcalcError):
    pass


# dual graphs
class InvalidGraph(SurfcalcError):
    pass


class DuplicateId(InvalidGraph):
    pass


class SelfLoop(InvalidGraph):
    pass


class UnknownVertex(InvalidGraph):
    pass


class PreconditionViolated(SurfcalcError):
    pass


class NotContractible(PreconditionViolated):
    pass


class NonRationalVertex(PreconditionViolated):
    pass


class NonIntegralCycle(PreconditionViolated):
    pass


class InvalidParameters(SurfcalcError):
    pass


# surfaces
class UnknownCurve(SurfcalcError):
    pass


class NegativeGenus(SurfcalcError):
    pass


class AdjunctionError(SurfcalcError):
    pass


class NotNegativeDefinite(SurfcalcError):
    pass


class Disconnected(SurfcalcError):
    pass


class OverlappingGroups(SurfcalcError):
    pass


class NonIntegralClasses(SurfcalcError):
    pass


class CurveContracted(SurfcalcError):
    pass


class RankNotOne(SurfcalcError):
    pass


class DegenerateCurve(SurfcalcError):
    pass


# front end
class ParseError(SurfcalcError):
    pass
