"""Model files and numeric text formatting.

A model file is a UTF-8 JSON document with integer fields ``n`` and ``m``
and row-major nested arrays ``A``, ``B``, ``C``, ``D``; port-Hamiltonian
files additionally carry ``J``, ``R``, ``Q``, ``G``, ``P``, ``N``, ``S``.
Non-finite numbers are rejected on both read and write.  CSV output uses
12 significant digits with ``.`` as the decimal point.
"""

import json

import numpy as np

from .model import PortHamiltonianModel, StateSpaceModel

__all__ = ["format_sig", "save_model", "load_model", "model_to_json", "model_from_json"]

PH_KEYS = ("J", "R", "Q", "G", "P", "N", "S")


def format_sig(x, digits=12):
    """Format a float with the given number of significant decimal digits."""
    return f"{float(x):.{digits - 1}e}"


def _reject_constant(token):
    raise ValueError(f"non-finite number {token!r} in model file")


def _grid(a):
    return [[float(x) for x in row] for row in np.atleast_2d(a)]


def model_to_json(model, ph=None):
    """Serialize a model (and optional port-Hamiltonian block) to a JSON string."""
    payload = {
        "n": int(model.n),
        "m": int(model.m),
        "A": _grid(model.A),
        "B": _grid(model.B),
        "C": _grid(model.C),
        "D": _grid(model.D),
    }
    if ph is not None:
        for key in PH_KEYS:
            payload[key] = _grid(getattr(ph, key))
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def model_from_json(text):
    """Parse a model file; returns ``(model, ph_or_None)``."""
    data = json.loads(text, parse_constant=_reject_constant)
    for key in ("n", "m", "A", "B", "C", "D"):
        if key not in data:
            raise ValueError(f"model file is missing field {key!r}")
    n, m = int(data["n"]), int(data["m"])
    shapes = {"A": (n, n), "B": (n, m), "C": (m, n), "D": (m, m)}
    arrays = {}
    for key, shape in shapes.items():
        arr = np.asarray(data[key], dtype=float)
        if arr.size == 0:
            arr = np.zeros(shape)
        if arr.shape != shape:
            raise ValueError(f"field {key!r} has shape {arr.shape}, expected {shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"field {key!r} contains non-finite entries")
        arrays[key] = arr
    model = StateSpaceModel(**arrays)
    ph = None
    if any(key in data for key in PH_KEYS):
        missing = [key for key in PH_KEYS if key not in data]
        if missing:
            raise ValueError(f"incomplete port-Hamiltonian block, missing {missing}")
        ph = PortHamiltonianModel(**{key: np.asarray(data[key], dtype=float) for key in PH_KEYS})
    return model, ph


def save_model(path, model, ph=None):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(model_to_json(model, ph))


def load_model(path):
    with open(path, encoding="utf-8") as handle:
        return model_from_json(handle.read())
