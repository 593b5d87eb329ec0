"""JSON documents for states and channels.

Complex numbers are stored as ``[re, im]`` pairs; floats go through Python's
shortest round-trip decimal repr (at most 17 significant digits), so writing
and re-reading reproduces every entry bit-exactly. Documents are plain JSON
objects with the fields ``kind``/``dim``/``data`` for states and
``dim``/``kraus`` for channels.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import STRUCTURAL_TOL, as_state_vector, validate_density
from .channels import IncoherentChannel, validate_channel


class FileFormatError(ValueError):
    """Document structure does not match the expected schema."""


def vector_to_data(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def matrix_to_data(M) -> list[list[list[float]]]:
    return [vector_to_data(row) for row in np.asarray(M, dtype=complex)]


def _pair_to_complex(pair, where: str) -> complex:
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
    ):
        raise FileFormatError(f"{where}: expected a [re, im] number pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def data_to_vector(data, dim: int, where: str = "data") -> np.ndarray:
    if not isinstance(data, list) or len(data) != dim:
        raise FileFormatError(f"{where}: expected {dim} entries")
    return np.array([_pair_to_complex(p, where) for p in data], dtype=complex)


def data_to_matrix(data, dim: int, where: str = "data") -> np.ndarray:
    if not isinstance(data, list) or len(data) != dim:
        raise FileFormatError(f"{where}: expected {dim} rows")
    return np.array(
        [data_to_vector(row, dim, f"{where}[{i}]") for i, row in enumerate(data)], dtype=complex
    )


def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: expected a JSON object at top level")
    return doc


def _require_dim(doc, path) -> int:
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FileFormatError(f"{path}: 'dim' must be a positive integer")
    return dim


def write_pure_state(path, psi) -> None:
    v = np.asarray(psi, dtype=complex)
    doc = {"kind": "pure", "dim": int(v.size), "data": vector_to_data(v)}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def write_density(path, rho) -> None:
    A = np.asarray(rho, dtype=complex)
    doc = {"kind": "density", "dim": int(A.shape[0]), "data": matrix_to_data(A)}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def read_state(path, tol: float = STRUCTURAL_TOL) -> tuple[str, np.ndarray]:
    """Load and validate a state file; returns ``(kind, array)``.

    Format problems raise :class:`FileFormatError`; a well-formed document
    holding an invalid state raises the corresponding validation error.
    """
    doc = _load_json(path)
    kind = doc.get("kind")
    if kind not in ("pure", "density"):
        raise FileFormatError(f"{path}: 'kind' must be 'pure' or 'density', got {kind!r}")
    dim = _require_dim(doc, path)
    if "data" not in doc:
        raise FileFormatError(f"{path}: missing 'data'")
    if kind == "pure":
        return "pure", as_state_vector(data_to_vector(doc["data"], dim), tol)
    return "density", validate_density(data_to_matrix(doc["data"], dim), tol)


def write_channel(path, channel: IncoherentChannel) -> None:
    doc = {
        "dim": channel.dim,
        "kraus": [matrix_to_data(K) for K in channel.kraus_ops],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def read_channel_raw(path) -> list[np.ndarray]:
    """Parse a channel file without validating the channel conditions."""
    doc = _load_json(path)
    dim = _require_dim(doc, path)
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise FileFormatError(f"{path}: 'kraus' must be a nonempty list")
    return [data_to_matrix(K, dim, f"kraus[{n}]") for n, K in enumerate(kraus)]


def read_channel(path, tol: float = STRUCTURAL_TOL) -> IncoherentChannel:
    """Load a channel file and validate it as an incoherent channel."""
    return validate_channel(read_channel_raw(path), tol)
