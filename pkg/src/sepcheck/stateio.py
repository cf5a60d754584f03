"""JSON state files and ket specifications.

A state file is a JSON object with mandatory ``kind`` and ``dims``::

    {"kind": "pure_vector", "dims": [2, 2], "data": [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]]}
    {"kind": "density_matrix", "dims": [2, 2], "data": [[[0.25, 0], ...], ...]}
    {"kind": "named", "dims": [2, 2], "name": "werner", "params": {"psi": "phi_minus", "x": 0.5}}

Complex entries are ``[re, im]`` pairs; density matrices are nested row-major
lists. ``"renormalize": true`` opts in to dividing by the norm or trace.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from sepcheck.errors import InputError, SepcheckError
from sepcheck.linalg import BipartiteLayout, DensityMatrix
from sepcheck.states import (
    BELL_STATES,
    WernerFamily,
    bell_state,
    maximally_mixed,
    pure_density,
    pure_state,
    superposition_00_11,
    superposition_01_10,
    werner,
)

KINDS = ("pure_vector", "density_matrix", "named")
NAMED = (*BELL_STATES, "singlet", "maximally_mixed", "product_00", "werner")
FIXTURES = (
    "bell_phi_plus",
    "bell_phi_minus",
    "singlet",
    "maximally_mixed",
    "product_00",
    "werner_x0.5",
)


class StateFileError(InputError):
    pass


def _complex(entry: Any, where: str) -> complex:
    if (
        not isinstance(entry, list)
        or len(entry) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
    ):
        raise StateFileError(f"{where}: expected a [re, im] pair of numbers, got {json.dumps(entry)}")
    return complex(entry[0], entry[1])


def parse_psi(spec: str) -> tuple[str, np.ndarray]:
    """Parse a two-qubit ket spec into ``(label, ket)``.

    Accepted forms: a Bell name (``phi_plus``, ``phi_minus``, ``psi_plus``,
    ``psi_minus``, ``singlet``), ``00_11:ALPHA,BETA`` for
    ``alpha|00> - beta|11>`` and ``01_10:ALPHA,BETA`` for
    ``alpha|01> - beta|10>``. Coefficients use Python complex syntax
    (``0.6``, ``0.6+0.1j``).
    """
    spec = spec.strip()
    if spec == "singlet":
        spec = "psi_minus"
    if spec in BELL_STATES:
        return spec, bell_state(spec)
    family, sep, coeffs = spec.partition(":")
    builders = {"00_11": superposition_00_11, "01_10": superposition_01_10}
    if not sep or family not in builders:
        raise InputError(
            f"unknown psi spec {spec!r}; use a Bell name or 00_11:ALPHA,BETA / 01_10:ALPHA,BETA"
        )
    try:
        alpha, beta = (complex(c.replace(" ", "")) for c in coeffs.split(","))
    except ValueError:
        raise InputError(f"cannot parse coefficients in psi spec {spec!r}") from None
    return spec, builders[family](alpha, beta)


def _named(name: str, params: dict[str, Any], layout: BipartiteLayout, where: str) -> DensityMatrix:
    if name not in NAMED:
        raise StateFileError(f"{where}: unknown named state {name!r}; choose from {', '.join(NAMED)}")
    if tuple(layout) != (2, 2):
        raise StateFileError(f"{where}: named states are two-qubit, dims must be [2, 2]")
    if name == "maximally_mixed":
        return maximally_mixed(layout)
    if name == "product_00":
        return pure_density([1, 0, 0, 0], layout)
    if name == "werner":
        if "x" not in params:
            raise StateFileError(f"{where}: werner needs params.x")
        label, psi = parse_psi(str(params.get("psi", "phi_minus")))
        return werner(WernerFamily(psi, label), float(params["x"]))
    return pure_density(parse_psi(name)[1], layout)


def state_from_dict(doc: Any, source: str = "<state>") -> DensityMatrix:
    if not isinstance(doc, dict):
        raise StateFileError(f"{source}: top level must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise StateFileError(f"{source}: field 'kind' must be one of {', '.join(KINDS)}, got {kind!r}")
    dims = doc.get("dims")
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) for d in dims)):
        raise StateFileError(f"{source}: field 'dims' must be a two-integer list, got {dims!r}")
    layout = BipartiteLayout.checked(*dims)
    renormalize = bool(doc.get("renormalize", False))

    if kind == "named":
        return _named(str(doc.get("name")), doc.get("params") or {}, layout, source)

    data = doc.get("data")
    if not isinstance(data, list):
        raise StateFileError(f"{source}: field 'data' must be a list")
    if kind == "pure_vector":
        if len(data) != layout.dim:
            raise StateFileError(f"{source}: 'data' has {len(data)} amplitudes, dims imply {layout.dim}")
        psi = np.array([_complex(v, f"{source}: data[{k}]") for k, v in enumerate(data)])
        return pure_density(pure_state(psi, renormalize=renormalize), layout)

    if len(data) != layout.dim:
        raise StateFileError(f"{source}: 'data' has {len(data)} rows, dims imply {layout.dim}")
    rows = []
    for r, row in enumerate(data):
        if not isinstance(row, list) or len(row) != layout.dim:
            raise StateFileError(f"{source}: data[{r}] must be a row of {layout.dim} [re, im] pairs")
        rows.append([_complex(v, f"{source}: data[{r}][{c}]") for c, v in enumerate(row)])
    return DensityMatrix.from_array(rows, layout, renormalize=renormalize)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("sepcheck") / "fixtures" / f"{name}.json"))


def load_state(path_or_fixture: str | Path) -> DensityMatrix:
    """Load a state file, falling back to a bundled fixture name."""
    path = Path(path_or_fixture)
    if not path.exists():
        stem = str(path_or_fixture).removesuffix(".json")
        if stem in FIXTURES:
            path = fixture_path(stem)
        else:
            raise StateFileError(f"{path_or_fixture}: no such file or bundled fixture")
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return state_from_dict(doc, str(path))
    except StateFileError:
        raise
    except SepcheckError as exc:
        raise StateFileError(f"{path}: {exc}") from None


def state_to_dict(rho: DensityMatrix) -> dict[str, Any]:
    layout = rho.require_layout()
    return {
        "kind": "density_matrix",
        "dims": list(layout),
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in rho.matrix],
    }
