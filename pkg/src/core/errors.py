"""
Errors - Exception hierarchy for geocube

Every failure raised by the library derives from GeocubeError. The
command line front end maps the ``exit_code`` attribute to the process
exit status.
"""


class GeocubeError(Exception):
    """Base exception for geocube errors"""
    exit_code = 1


# Linear algebra

class NonSquareError(GeocubeError):
    """Raised when a determinant is requested for a non-square matrix"""
    pass


class InconsistentSystemError(GeocubeError):
    """Raised when an exact linear system has no solution"""
    pass


# Orientation calculus

class CodomainMismatchError(GeocubeError):
    """Raised when two maps that should share a codomain do not"""
    pass


class NotTransverseError(GeocubeError):
    """Raised when the images of two maps do not span their common codomain"""
    pass


# Cubical complexes

class ComplexValidationError(GeocubeError):
    """Base exception for invalid cubical complex data"""
    pass


class PosetCycleError(ComplexValidationError):
    """Raised when the order relations of the cubes are inconsistent"""
    pass


class DuplicateVertexSetError(ComplexValidationError):
    """Raised when two distinct cubes share a vertex set"""
    pass


class MalformedSpecError(ComplexValidationError):
    """Raised when a cube spec has a bad length, repeated vertices or an invalid vertex name"""
    pass


class IntervalClosureError(ComplexValidationError):
    """Raised when a face of a cube is missing or disagrees with the cube"""
    pass


class UnknownFaceError(GeocubeError):
    """Raised when a vertex set does not name a face of the complex"""
    pass


class ParamTooSmallError(GeocubeError):
    """Raised when a generator parameter is below its minimum"""
    exit_code = 2


# Chains, products and duality

class NotClosedError(GeocubeError):
    """Raised when a complex is not a closed pseudomanifold"""
    pass


class NonOrientableError(GeocubeError):
    """Raised when no fundamental class exists over the integers"""
    pass


class WrongDegreeError(GeocubeError):
    """Raised when a chain of the wrong degree is supplied"""
    pass


class ComplexMismatchError(GeocubeError):
    """Raised when operands live on different complexes"""
    pass


class DegreeMismatchError(GeocubeError):
    """Raised when operand degrees are incompatible"""
    pass


class NotInDualBasisError(GeocubeError):
    """Raised when a dual chain is not a combination of dual blocks"""
    pass


class NotCocycleError(GeocubeError):
    """Raised when a cochain has nonzero coboundary"""
    pass


class NotCycleError(GeocubeError):
    """Raised when a chain has nonzero boundary"""
    pass


# Documents and corpus

class DocumentError(GeocubeError):
    """Base exception for unreadable input documents"""
    pass


class DocumentSyntaxError(DocumentError):
    """Raised when a document is not valid JSON"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DocumentSemanticError(DocumentError):
    """Raised when a document parses but does not describe valid data"""
    pass


class UnknownCorpusEntryError(GeocubeError):
    """Raised when a corpus name is not known"""
    exit_code = 2
