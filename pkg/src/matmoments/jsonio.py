"""JSON exchange formats.

Complex numbers are ``[re, im]`` pairs and matrices nested lists of them.
A measure file looks like::

    {"kind": "circle", "p": 2, "atoms": [{"pos": 0.5, "weight": [[[1, 0], [0, 0]], ...]}]}

where ``pos`` is the angle (circle) or abscissa (interval).
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvalidInput, ParseError
from .measures import CircleMeasure, IntervalMeasure, MomentSequence


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(obj, p: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed matrix: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ParseError(f"matrix must be a square array of [re, im] pairs, got shape {arr.shape}")
    if p is not None and arr.shape[0] != p:
        raise ParseError(f"matrix is {arr.shape[0]} x {arr.shape[0]}, expected p = {p}")
    if not np.all(np.isfinite(arr)):
        raise ParseError("matrix has non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def measure_to_json(mu) -> dict:
    if isinstance(mu, CircleMeasure):
        kind, pos = "circle", mu.thetas
    elif isinstance(mu, IntervalMeasure):
        kind, pos = "interval", mu.xs
    else:
        raise TypeError(f"not a measure: {type(mu).__name__}")
    return {
        "kind": kind,
        "p": mu.p,
        "atoms": [{"pos": float(x), "weight": matrix_to_json(w)} for x, w in zip(pos, mu.weights)],
    }


def measure_from_json(obj):
    if not isinstance(obj, dict):
        raise ParseError("measure must be a JSON object")
    try:
        kind, p, atoms = obj["kind"], obj["p"], obj["atoms"]
    except KeyError as exc:
        raise ParseError(f"measure is missing key {exc}") from None
    if kind not in ("circle", "interval"):
        raise ParseError(f"unknown measure kind {kind!r}")
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise ParseError("p must be a positive integer")
    if not isinstance(atoms, list) or not atoms:
        raise ParseError("atoms must be a non-empty list")
    pos, weights = [], []
    for atom in atoms:
        try:
            pos.append(float(atom["pos"]))
            weights.append(matrix_from_json(atom["weight"], p))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed atom: {exc}") from None
    cls = CircleMeasure if kind == "circle" else IntervalMeasure
    try:
        return cls.from_atoms(pos, np.array(weights))
    except InvalidInput as exc:
        raise ParseError(str(exc)) from None


def moments_to_json(kind: str, mats) -> dict:
    mats = list(mats)
    return {"kind": kind, "p": len(mats[0]), "moments": [matrix_to_json(M) for M in mats]}


def polynomial_to_json(P) -> list:
    """Coefficient matrices, lowest degree first."""
    return [matrix_to_json(c) for c in P.coeffs]


def canonical_to_json(cs) -> dict:
    return {
        "kind": "circle",
        "p": cs.p,
        "A": [matrix_to_json(a) for a in cs.A],
        "n_mu": cs.n_mu if cs.n_mu is not None else "unbounded",
        "trigger": cs.trigger,
    }


def verblunsky_from_json(obj):
    """Parse ``{"p": p, "gamma0": M, "A": [M, ...]}``."""
    if not isinstance(obj, dict):
        raise ParseError("Verblunsky file must be a JSON object")
    try:
        p = obj["p"]
        g0 = matrix_from_json(obj["gamma0"], p)
        A = [matrix_from_json(a, p) for a in obj["A"]]
    except KeyError as exc:
        raise ParseError(f"Verblunsky file is missing key {exc}") from None
    return g0, A


def moment_sequence_from_json(obj) -> MomentSequence:
    if not isinstance(obj, dict) or obj.get("kind") != "circle":
        raise ParseError("expected circle moments")
    p = obj.get("p")
    try:
        return MomentSequence.from_gammas([matrix_from_json(M, p) for M in obj["moments"]])
    except KeyError as exc:
        raise ParseError(f"moment file is missing key {exc}") from None


def dumps(obj) -> str:
    # repr-based float output is shortest round-trip exact, hence byte stable
    return json.dumps(obj, allow_nan=False) + "\n"


def load(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


def interval_canonical_to_json(cu, p: int) -> dict:
    return {
        "kind": "interval",
        "p": p,
        "U": [matrix_to_json(u) for u in cu.U],
        "U_bar": [matrix_to_json(u) for u in cu.U_bar],
        "n_mu": cu.n_mu if cu.n_mu is not None else "unbounded",
        "trigger": cu.trigger,
    }
