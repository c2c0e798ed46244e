"""Utility functions for Poly Lab"""

import os
import re
import math
import platform
import logging
from typing import Any, Dict, List

import numpy as np
import psutil

from .exceptions import ArgumentError

logger = logging.getLogger(__name__)

_RANGE_RE = re.compile(r"^\s*(-?[\d.]+)\s*\.\.\s*(-?[\d.]+)\s*(?:x\s*([\d.]+))?\s*$")


def default_worker_count() -> int:
    """Physical core count, falling back to logical cores"""
    count = psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True) or 1
    return max(1, int(count))


def resolve_worker_count(requested: int) -> int:
    """Worker pool size: explicit request, else BPL_THREADS, else host cores"""
    if requested and requested > 0:
        return requested
    env_value = os.environ.get("BPL_THREADS")
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            logger.warning(f"Ignoring non-integer BPL_THREADS={env_value!r}")
    return default_worker_count()


def get_system_info() -> Dict[str, Any]:
    """Host facts embedded in JSON run documents"""
    return {
        "python": platform.python_version(),
        "platform": platform.platform(),
        "cpu_physical": psutil.cpu_count(logical=False),
        "cpu_logical": psutil.cpu_count(logical=True),
        "memory_gb": round(psutil.virtual_memory().total / (1024**3), 2),
    }


def spawn_seeds(seed: int, count: int) -> List[int]:
    """Independent per-instance seeds; the stream depends only on (seed, index)"""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def parse_number(text: str) -> float:
    """Parse a real, accepting inf/infinity"""
    token = text.strip().lower()
    if token in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return float(token)
    except ValueError as e:
        raise ArgumentError(f"not a number: {text!r}") from e


def parse_grid_values(text: str, integer: bool = False) -> List[float]:
    """Parse sweep syntax: '1.5,2,3', '2..16' (inclusive) or '2..16x2' (geometric)

    Returns:
        Values in the order written; ranges expand ascending.
    """
    values: List[float] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        match = _RANGE_RE.match(part)
        if match:
            start, stop = float(match.group(1)), float(match.group(2))
            factor = match.group(3)
            if stop < start:
                raise ArgumentError(f"empty range {part!r}")
            if factor:
                ratio = float(factor)
                if ratio <= 1 or start <= 0:
                    raise ArgumentError(f"geometric range needs factor > 1 and start > 0: {part!r}")
                value = start
                while value <= stop * (1 + 1e-12):
                    values.append(value)
                    value *= ratio
            else:
                value = start
                while value <= stop + 1e-12:
                    values.append(value)
                    value += 1
        else:
            values.append(parse_number(part))

    if not values:
        raise ArgumentError(f"no values in {text!r}")
    if integer:
        if any(not float(v).is_integer() for v in values):
            raise ArgumentError(f"integer values expected in {text!r}")
        return [int(v) for v in values]
    return values


def dual_exponent(p: float) -> float:
    """Conjugate exponent p' with 1/p + 1/p' = 1"""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def inverse(p: float) -> float:
    """1/p with 1/inf = 0"""
    return 0.0 if math.isinf(p) else 1.0 / p
