"""Core modules for Poly Lab"""

from .config import LabConfig, BudgetConfig, CapsConfig, OutputConfig
from .exceptions import *
from .bracket import Bracket
from .multiindex import MultiIndex, IndexSetSpec, Generator
from .lattice import LatticeSpec, LatticeFamily
from .polynomials import Polynomial, sup_norm
from .utils import get_system_info
