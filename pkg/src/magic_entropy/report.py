"""JSON documents for entropy reports.

Floats are written with 17 significant digits so a document read back
reproduces every value bit for bit.  Entropies can be emitted in nats; the
integer ``area_bits`` is always kept so d_chi = 2^area_bits survives the
unit change.
"""

from __future__ import annotations

import json
import math
from importlib import resources

from .entropy import EntropyReport

__all__ = [
    "SCHEMA_VERSION",
    "report_to_document",
    "document_to_report",
    "dumps",
    "loads",
    "load_schema",
]

SCHEMA_VERSION = "1.0"
LN2 = math.log(2.0)
_SCALES = {"bits": 1.0, "nats": LN2}


def _alpha_key(alpha: float) -> str:
    if math.isinf(alpha):
        return "inf"
    return repr(float(alpha))


def report_to_document(rep: EntropyReport, units: str = "bits", input_sha256: str | None = None,
                       seed: int | None = None, options: dict | None = None) -> dict:
    if units not in _SCALES:
        raise ValueError(f"units must be one of {sorted(_SCALES)}")
    k = _SCALES[units]
    return {
        "schema_version": SCHEMA_VERSION,
        "units": units,
        "n": rep.n,
        "region": list(rep.region),
        "nullity": rep.nullity,
        "area": rep.area_bits * k,
        "area_bits": rep.area_bits,
        "logical_entropy": rep.logical_entropy_bits * k,
        "von_neumann": rep.von_neumann_bits * k,
        "renyi": {_alpha_key(a): v * k for a, v in rep.renyi_bits.items()},
        "spectrum": [[float(lam), int(mult)] for lam, mult in rep.spectrum],
        "branch_count": rep.branch_count,
        "diagnostics": dict(rep.diagnostics),
        "provenance": {"input_sha256": input_sha256, "seed": seed, "options": dict(options or {})},
    }


def document_to_report(doc: dict) -> EntropyReport:
    k = _SCALES[doc["units"]]
    return EntropyReport(
        n=doc["n"],
        region=tuple(doc["region"]),
        nullity=doc["nullity"],
        area_bits=doc["area_bits"],
        logical_entropy_bits=doc["logical_entropy"] / k,
        von_neumann_bits=doc["von_neumann"] / k,
        renyi_bits={float(a): v / k for a, v in doc["renyi"].items()},
        spectrum=[(float(lam), int(mult)) for lam, mult in doc["spectrum"]],
        branch_count=doc["branch_count"],
        diagnostics=dict(doc["diagnostics"]),
    )


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + ("" if indent else " ")
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("non-finite value in report")
        text = "%.17g" % obj
        if not any(c in text for c in ".en"):
            text += ".0"
        return text
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, 0, 0) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict, indent: int = 2) -> str:
    return _encode(doc, indent, 0) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def load_schema() -> dict:
    return json.loads(resources.files("magic_entropy").joinpath("schema/report.schema.json").read_text())
