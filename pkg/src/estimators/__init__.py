"""Estimators for characteristics, projection constants and Bohr radii"""

from .characteristics import CharacteristicTable, characteristic
from .constants import ConstantReport, lambda_hat, chi_mon_bracket, K_m_bracket
from .bohr import bohr_bracket
from .lorentz_suite import lorentz_bound_suite
