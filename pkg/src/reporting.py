"""CSV and JSON writers for run results"""

import io
import csv
import json
import math
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

import numpy as np

from .core.utils import get_system_info

logger = logging.getLogger(__name__)

CONSTANT_COLUMNS = ("quantity", "n", "m", "family", "p", "q", "J_generator", "lo", "hi", "method",
                    "chain", "seed", "evals", "wall_ms")


def format_cell(value: Any) -> str:
    """Floats with 12 significant digits, infinities as inf"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{float(value):.12g}"
    if value is None:
        return ""
    return str(value)


def make_json_safe(obj: Any) -> Any:
    """Nested values as plain JSON types; non-finite floats become strings"""
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return make_json_safe(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else format_cell(value)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    return obj


def columns_for(rows: Sequence[dict]) -> List[str]:
    """Constant rows use the fixed schema; other rows keep their key order"""
    if not rows:
        return list(CONSTANT_COLUMNS)
    keys = list(rows[0].keys())
    if set(keys) == set(CONSTANT_COLUMNS):
        return list(CONSTANT_COLUMNS)
    return keys


def render_csv(rows: Sequence[dict], config: Dict[str, Any], header: Optional[Dict[str, Any]] = None) -> str:
    """CSV text: '# key: value' comment lines, then the header row and body"""
    buffer = io.StringIO()
    buffer.write(f"# config: {json.dumps(make_json_safe(config), sort_keys=True)}\n")
    for key, value in (header or {}).items():
        rendered = value if isinstance(value, (int, str)) else json.dumps(make_json_safe(value))
        buffer.write(f"# {key}: {rendered}\n")
    columns = columns_for(rows)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c, "")) for c in columns])
    return buffer.getvalue()


def render_json(rows: Sequence[dict], config: Dict[str, Any], failures: Sequence[dict] = (),
                header: Optional[Dict[str, Any]] = None, extra: Optional[Dict[str, Any]] = None) -> str:
    document = {
        "config": config,
        "system": get_system_info(),
        "rows": list(rows),
        "failures": list(failures),
    }
    if header:
        document["header"] = header
    if extra:
        document.update(extra)
    return json.dumps(make_json_safe(document), indent=2)


def write_output(text: str, path: Optional[Path] = None, stream: Optional[TextIO] = None):
    """Write to a file when a path is given, else to the stream (stdout)"""
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Results written to {path}")
    elif stream is not None:
        stream.write(text)
