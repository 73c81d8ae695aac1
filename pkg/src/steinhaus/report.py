"""Serialization of verification and computation records: JSON and CSV.

Every record has the fields ``id, params, margins, verdict, provenance,
runtime_ms, version``; verification records add ``paper_checks``,
``counterexample``, ``notes`` and ``extra``.  A document is

    {"schema": "steinhaus-report", "version": SCHEMA_VERSION, "records": [...]}

JSON is written with sorted keys and no NaN so identical inputs give
byte-identical output.  Non-finite numbers are encoded as the strings
``"inf"`` / ``"-inf"``.  CSV files have a header row, UTF-8 encoding and LF
line endings; floats are written with ``repr`` so they re-parse exactly.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from . import __version__
from .verifier import LemmaId, VerificationReport, _jsonable

SCHEMA_VERSION = "1.0.0"
SCHEMA_NAME = "steinhaus-report"
VERDICTS = ("verified", "violated", "inconclusive", "computed")
PROVENANCE = ("paper", "derived")

# Lemmas whose statement appears in the source; the interpolation chain is a
# derived re-statement of the proof's assembly step.
_LEMMA_PROVENANCE = {lid: "paper" for lid in LemmaId}
_LEMMA_PROVENANCE[LemmaId.HOLDER_CHAIN] = "derived"

_NUMBER = {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": f"https://steinhaus.invalid/schema/{SCHEMA_NAME}/{SCHEMA_VERSION}",
    "title": "Steinhaus validated-numerics report",
    "type": "object",
    "required": ["schema", "version", "records"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_NAME},
        "version": {"const": SCHEMA_VERSION},
        "records": {"type": "array", "items": {"$ref": "#/$defs/record"}},
    },
    "$defs": {
        "number": _NUMBER,
        "margin": {
            "type": "object",
            "required": ["label", "params", "lo", "hi", "kind", "slack", "provenance", "status"],
            "additionalProperties": False,
            "properties": {
                "label": {"type": "string"},
                "params": {"type": "object"},
                "lo": {"$ref": "#/$defs/number"},
                "hi": {"$ref": "#/$defs/number"},
                "kind": {"enum": ["positive", "equality"]},
                "slack": {"type": "number", "minimum": 0},
                "provenance": {"enum": list(PROVENANCE)},
                "status": {"enum": ["pass", "fail", "undecided"]},
            },
        },
        "paper_check": {
            "type": "object",
            "required": ["label", "paper_value", "lo", "hi", "relation", "slack", "holds"],
            "additionalProperties": False,
            "properties": {
                "label": {"type": "string"},
                "paper_value": {"type": "number"},
                "lo": {"$ref": "#/$defs/number"},
                "hi": {"$ref": "#/$defs/number"},
                "relation": {"enum": ["ge", "le"]},
                "slack": {"type": "number", "minimum": 0},
                "holds": {"type": "boolean"},
            },
        },
        "record": {
            "type": "object",
            "required": ["id", "params", "margins", "verdict", "provenance", "runtime_ms", "version"],
            "properties": {
                "id": {"type": "string", "minLength": 1},
                "params": {"type": "object"},
                "margins": {"type": "array", "items": {"$ref": "#/$defs/margin"}},
                "verdict": {"enum": list(VERDICTS)},
                "provenance": {"enum": list(PROVENANCE)},
                "runtime_ms": {"oneOf": [{"type": "null"}, {"type": "number", "minimum": 0}]},
                "version": {"type": "string"},
                "paper_checks": {"type": "array", "items": {"$ref": "#/$defs/paper_check"}},
                "paper_agreement": {"type": "boolean"},
                "counterexample": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/margin"}]},
                "notes": {"type": "array", "items": {"type": "string"}},
                "extra": {"type": "object"},
                "values": {"type": "object"},
            },
        },
    },
}


def verification_record(report: VerificationReport) -> dict:
    """Record for one :class:`VerificationReport`."""
    rec = report.to_dict()
    rec["provenance"] = _LEMMA_PROVENANCE[report.lemma_id]
    rec["paper_agreement"] = report.paper_agreement
    rec["version"] = __version__
    return rec


def computation_record(rid: str, params: dict, values: dict, *, provenance: str = "derived", runtime_ms=None) -> dict:
    """Record for a plain computation (constant, moment, table)."""
    if provenance not in PROVENANCE:
        raise ValueError(f"provenance must be one of {PROVENANCE}")
    return {
        "id": str(rid),
        "params": _jsonable(params),
        "margins": [],
        "verdict": "computed",
        "provenance": provenance,
        "runtime_ms": runtime_ms,
        "version": __version__,
        "values": _jsonable(values),
    }


def document(records) -> dict:
    return {"schema": SCHEMA_NAME, "version": SCHEMA_VERSION, "records": list(records)}


def dumps(records) -> str:
    """Deterministic JSON text of a document holding ``records``."""
    return json.dumps(document(records), sort_keys=True, indent=2, allow_nan=False) + "\n"


def schema_text() -> str:
    return json.dumps(SCHEMA, sort_keys=True, indent=2) + "\n"


def write_schema(path) -> Path:
    """Write the JSON schema to ``path`` (used to refresh ``docs/report_schema.json``)."""
    path = Path(path)
    path.write_text(schema_text(), encoding="utf-8", newline="\n")
    return path


def validate(doc: dict) -> None:
    """Validate a parsed document against :data:`SCHEMA`; raises ``jsonschema.ValidationError``."""
    import jsonschema

    jsonschema.validate(doc, SCHEMA)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(header, rows) -> str:
    """CSV text with a header row and LF line endings."""
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for row in rows:
        if len(row) != len(header):
            raise ValueError("row length does not match the header")
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _parse(v: str):
    if v in ("true", "false"):
        return v == "true"
    for kind in (int, float):
        try:
            return kind(v)
        except ValueError:
            pass
    return v


def from_csv(text: str):
    """Inverse of :func:`to_csv`: ``(header, rows)`` with numbers and booleans parsed."""
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader)
    return header, [[_parse(v) for v in row] for row in reader]
