"""Exception hierarchy.

Every error raised on purpose by the library derives from ``GradcatError``.
Errors that carry a counterexample keep it in ``witness``.
"""


class GradcatError(Exception):
    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


# linear categories
class NotPrime(GradcatError):
    pass


class NonAdmissible(GradcatError):
    pass


class BadBound(GradcatError):
    pass


class NotComposable(GradcatError):
    pass


class NotFunctorial(GradcatError):
    pass


class DimensionMismatch(GradcatError):
    pass


# gradings and walks
class InvalidGrading(GradcatError):
    pass


class NotConcatenable(GradcatError):
    pass


class NotHomogeneous(GradcatError):
    pass


class Disconnected(GradcatError):
    pass


class NotSurjective(GradcatError):
    pass


class DegreeOutsideImage(GradcatError):
    pass


# Schurian analysis
class TooManyPaths(GradcatError):
    pass


class NotSG(GradcatError):
    pass


class NotConstricted(GradcatError):
    pass


class NotConnectedResult(GradcatError):
    pass


# smash products
class InfiniteGroup(GradcatError):
    pass


class DiagramFails(GradcatError):
    pass


class NotEquivariant(GradcatError):
    pass


# grading morphisms
class NotHomogeneousWitness(GradcatError):
    pass


class SquareFails(GradcatError):
    pass


class NotThin(GradcatError):
    pass


class GroupTooLarge(GradcatError):
    pass


# model files
class SchemaError(GradcatError):
    pass


class UnresolvedReference(GradcatError):
    pass


class ParseError(GradcatError):
    pass
