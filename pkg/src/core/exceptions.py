"""Custom exceptions for Poly Lab"""


class LabError(Exception):
    """Base exception for Poly Lab"""
    pass


class ConfigError(LabError):
    """Error related to configuration"""
    pass


class ArgumentError(LabError):
    """Invalid command-line or instance parameters"""
    pass


class IndexSetError(LabError):
    """Malformed index set or multi-index input"""
    pass


class CapacityError(LabError):
    """A configured enumeration or desk-scale cap was exceeded"""
    pass


class LatticeError(LabError):
    """Invalid lattice parameters or family mismatch"""
    pass


class DimensionMismatchError(LabError):
    """Vector, polynomial or index set dimensions do not agree"""
    pass


class PolynomialError(LabError):
    """Invalid polynomial input (NaN coefficients, wrong homogeneity)"""
    pass


class VerificationError(LabError):
    """One or more verification checks failed"""
    pass
