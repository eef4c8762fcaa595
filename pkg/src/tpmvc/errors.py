"""Exception types raised across the package."""

import numpy as np


class InvalidP(ValueError):
    pass


class InvalidTau(ValueError):
    pass


class ConjugateSymmetryViolation(ValueError):
    """Inverse DFT of a supposedly conjugate-symmetric tensor is not real."""


class DimMismatch(ValueError):
    pass


class InvalidM(ValueError):
    pass


class InvalidK(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class TooFewAnchors(ValueError):
    pass


class SingularSystem(np.linalg.LinAlgError):
    pass


class DegenerateB(RuntimeWarning):
    """The Procrustes target has rank below the number of clusters."""


class EmptyVector(ValueError):
    pass


class EmptyTable(ValueError):
    pass


class DatasetError(Exception):
    """Base class for dataset loading failures; always names the file."""

    def __init__(self, path, message):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")


class ParseError(DatasetError):
    pass


class RowCountMismatch(DatasetError):
    pass


class MissingFile(DatasetError, FileNotFoundError):
    pass


class IoError(OSError):
    pass
