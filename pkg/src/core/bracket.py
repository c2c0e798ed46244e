"""Certified numeric intervals"""

import math
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple, Dict, Any

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bracket:
    """A certified interval [lo, hi]

    lo is attained (the witness, when recorded, reproduces it); hi is a
    proven bound. ``method`` names how each end was obtained.
    """
    lo: float
    hi: float
    method: str = ""
    evaluations: int = 0
    witness: Optional[Tuple[complex, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError(f"NaN bracket end ({self.method})")
        if self.lo > self.hi:
            # Rounding in closed forms can flip ends by a few ulps
            if self.lo - self.hi <= 1e-12 * max(1.0, abs(self.hi)):
                object.__setattr__(self, "lo", self.hi)
            else:
                raise ValueError(f"inverted bracket [{self.lo}, {self.hi}] ({self.method})")

    @classmethod
    def exact(cls, value: float, method: str = "closed-form") -> "Bracket":
        return cls(value, value, method)

    @classmethod
    def from_search(cls, lo: float, hi: float, method: str, evaluations: int = 0,
                    witness: Optional[Tuple[complex, ...]] = None, context: str = "",
                    tol: float = 1e-9) -> "Bracket":
        """Searched lo against certified hi; a lo above hi is cut to hi and marked /clipped"""
        if lo > hi * (1 + tol):
            logger.warning(f"Search value {lo:.12g} above certified bound {hi:.12g} {context}".rstrip())
            return cls(hi, hi, f"{method}/clipped", evaluations, witness)
        return cls(min(lo, hi), hi, method, evaluations, witness)

    @property
    def clipped(self) -> bool:
        return self.method.endswith("/clipped")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def power(self, exponent: float) -> "Bracket":
        """Apply t -> t**exponent; negative exponents swap the ends"""
        lo, hi = self.lo ** exponent, self.hi ** exponent
        if exponent < 0:
            lo, hi = hi, lo
        return Bracket(lo, hi, self.method, self.evaluations)

    def scaled(self, factor: float) -> "Bracket":
        return Bracket(self.lo * factor, self.hi * factor, self.method, self.evaluations, self.witness)

    def to_dict(self) -> Dict[str, Any]:
        data = {"lo": self.lo, "hi": self.hi, "method": self.method, "evaluations": self.evaluations}
        if self.witness is not None:
            data["witness"] = [[w.real, w.imag] for w in self.witness]
        return data
