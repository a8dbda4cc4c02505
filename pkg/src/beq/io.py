"""JSON problem documents and CSV output.

A document is ``{"kind": ..., "payload": {...}, "metadata": {...}}`` with complex
numbers written as ``[re, im]`` pairs and angles in radians. Kinds:

- ``blaschke``: ``{"zeros": [[re, im], ...], "leading_coefficient": [re, im]}``
- ``configuration``: ``{"domain": "circle", "angles": [...]}`` or
  ``{"domain": "line", "points": [t, ..., "inf"]}``
- ``measure``: ``{"atoms": [{"location": [re, im], "weight": w}, ...]}``
- ``points``: ``{"points": [[re, im], ...]}`` or ``{"angles": [...]}``
"""

from dataclasses import dataclass, field
import csv
import io
import json
import math

import numpy as np

from .blaschke import BlaschkeProduct
from .cayley import SignedAtomicMeasure
from .energy import LineConfiguration
from .errors import SchemaError
from .level import CircleConfiguration

KINDS = ("blaschke", "configuration", "measure", "points")


@dataclass
class ProblemDocument:
    kind: str
    payload: dict
    metadata: dict = field(default_factory=dict)

    def to_json(self):
        return {"kind": self.kind, "payload": self.payload, "metadata": self.metadata}


def complex_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _real(value, where):
    if isinstance(value, str) and value.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _complex(value, where):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SchemaError(f"{where}: expected an [re, im] pair, got {value!r}")
    re, im = (_real(v, f"{where}[{i}]") for i, v in enumerate(value))
    return complex(re, im)


def _list(payload, key, where="payload"):
    if key not in payload:
        raise SchemaError(f"{where}.{key}: missing")
    value = payload[key]
    if not isinstance(value, list):
        raise SchemaError(f"{where}.{key}: expected a list")
    return value


def to_document(obj, metadata=None):
    """Serialize a library object into a ProblemDocument."""
    meta = dict(metadata or {})
    if isinstance(obj, BlaschkeProduct):
        return ProblemDocument("blaschke", {
            "zeros": [complex_pair(a) for a in obj.zeros],
            "leading_coefficient": complex_pair(obj.leading_coefficient),
        }, meta)
    if isinstance(obj, CircleConfiguration):
        return ProblemDocument("configuration", {"domain": "circle", "angles": obj.angles.tolist()}, meta)
    if isinstance(obj, LineConfiguration):
        pts = ["inf" if math.isinf(p) else float(p) for p in obj.points]
        return ProblemDocument("configuration", {"domain": "line", "points": pts}, meta)
    if isinstance(obj, SignedAtomicMeasure):
        atoms = [{"location": complex_pair(z), "weight": float(w)} for z, w in zip(obj.locations, obj.weights)]
        return ProblemDocument("measure", {"atoms": atoms}, meta)
    arr = np.asarray(obj)
    if np.iscomplexobj(arr) and arr.ndim == 1:
        return ProblemDocument("points", {"points": [complex_pair(z) for z in arr]}, meta)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_document(data):
    """Validate a decoded JSON mapping and return a ProblemDocument."""
    if not isinstance(data, dict):
        raise SchemaError("document: expected a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    payload = data.get("payload")
    if not isinstance(payload, dict):
        raise SchemaError("payload: expected a JSON object")
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise SchemaError("metadata: expected a JSON object")
    doc = ProblemDocument(kind, payload, {str(k): str(v) for k, v in metadata.items()})
    from_document(doc)  # full payload validation
    return doc


def from_document(doc):
    """Build the library object described by ``doc``."""
    p = doc.payload
    try:
        if doc.kind == "blaschke":
            zeros = [_complex(v, f"payload.zeros[{i}]") for i, v in enumerate(_list(p, "zeros"))]
            chi = _complex(p["leading_coefficient"], "payload.leading_coefficient") if "leading_coefficient" in p else 1.0
            if not zeros:
                raise SchemaError("payload.zeros: need at least one zero")
            for i, z in enumerate(zeros):
                if abs(z) >= 1 - 1e-12:
                    raise SchemaError(f"payload.zeros[{i}]: zero must lie strictly inside the unit disk")
            chi = complex(chi)
            if abs(abs(chi) - 1) > 1e-14:
                raise SchemaError("payload.leading_coefficient: must be unimodular")
            return BlaschkeProduct(zeros, chi)
        if doc.kind == "configuration":
            domain = p.get("domain", "circle")
            if domain == "circle":
                vals = [_real(v, f"payload.angles[{i}]") for i, v in enumerate(_list(p, "angles"))]
                if any(math.isinf(v) for v in vals):
                    raise SchemaError("payload.angles: angles must be finite")
                return CircleConfiguration(vals)
            if domain == "line":
                return LineConfiguration([_real(v, f"payload.points[{i}]") for i, v in enumerate(_list(p, "points"))])
            raise SchemaError(f"payload.domain: expected 'circle' or 'line', got {domain!r}")
        if doc.kind == "measure":
            locs, weights = [], []
            for i, atom in enumerate(_list(p, "atoms")):
                if not isinstance(atom, dict):
                    raise SchemaError(f"payload.atoms[{i}]: expected an object")
                if "location" not in atom or "weight" not in atom:
                    raise SchemaError(f"payload.atoms[{i}]: needs 'location' and 'weight'")
                locs.append(_complex(atom["location"], f"payload.atoms[{i}].location"))
                weights.append(_real(atom["weight"], f"payload.atoms[{i}].weight"))
            return SignedAtomicMeasure(np.array(locs, dtype=complex), np.array(weights, dtype=float))
        if doc.kind == "points":
            if "points" in p:
                return np.array([_complex(v, f"payload.points[{i}]") for i, v in enumerate(_list(p, "points"))])
            angles = [_real(v, f"payload.angles[{i}]") for i, v in enumerate(_list(p, "angles"))]
            return np.exp(1j * np.array(angles, dtype=float))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(f"payload: {exc}") from exc
    raise SchemaError(f"kind: unsupported {doc.kind!r}")


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return parse_document(data)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(doc):
    return json.dumps(doc.to_json(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def to_jsonable(obj):
    """Recursively convert numpy values and complex numbers for json.dumps."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_pair(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else ("inf" if f > 0 else "-inf" if f < 0 else "nan")
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def format_number(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_number(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    text = csv_text(header, rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, np.array(rows)
