"""Standard fixtures, seeded random instances and the JSON instance format.

Instance file (UTF-8 JSON)::

    {
      "dimension": 2,
      "energies": [0.0, 1.0],              # ascending, first entry exactly 0
      "rho": [[[0.75, 0.0], [0.0, 0.0]],   # row-major, each entry [re, im]
              [[0.0, 0.0], [0.25, 0.0]]],
      "seed": 1,                           # optional
      "description": "..."                 # optional
    }

Random instances use NumPy's ``PCG64`` bit generator seeded with the integer
seed, so a seed reproduces the same file on any platform with the same NumPy
float formatting.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvalidArgument, InvalidState
from .spectra import SingleSiteSystem, decompose_state
from .thermo import HamiltonianSpectrum

MODES = ("diagonal", "rotated")


def fix_q() -> SingleSiteSystem:
    return SingleSiteSystem.diagonal([0.0, 1.0], [0.75, 0.25])


def fix_qi() -> SingleSiteSystem:
    return SingleSiteSystem.diagonal([0.0, 1.0], [0.25, 0.75])


def fix_4() -> SingleSiteSystem:
    return SingleSiteSystem.diagonal([0.0, 1.0, 2.0, 3.0], [0.4, 0.3, 0.2, 0.1])


def fix_3() -> SingleSiteSystem:
    return SingleSiteSystem.diagonal([0.0, 1.0, 2.0], [0.2, 0.5, 0.3])


FIXTURES = {"FIX-Q": fix_q, "FIX-QI": fix_qi, "FIX-4": fix_4, "FIX-3": fix_3}


def fixture(name: str) -> SingleSiteSystem:
    try:
        return FIXTURES[name.upper()]()
    except KeyError:
        raise InvalidArgument(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar unitary: QR of a complex Gaussian matrix with the phases of R divided out."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_instance(seed: int, d: int, mode: str = "diagonal") -> dict:
    """Instance dictionary for ``seed`` and dimension ``d``.

    Energies are ``d-1`` draws from ``(0, 1]`` sorted behind a zero ground
    level; the spectrum of ``rho`` is a normalised vector of squared standard
    normals. ``rotated`` mode then conjugates by a Haar unitary drawn after the
    spectrum, so both modes share energies and spectrum.
    """
    if d < 2:
        raise InvalidArgument(f"dimension must be >= 2, got {d}")
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}")
    rng = np.random.Generator(np.random.PCG64(seed))
    energies = np.concatenate([[0.0], np.sort(1.0 - rng.random(d - 1))])
    w = rng.standard_normal(d) ** 2
    w /= w.sum()
    rho = np.diag(w).astype(complex)
    if mode == "rotated":
        u = random_unitary(rng, d)
        rho = u @ rho @ u.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        rho /= np.trace(rho).real
    return {
        "dimension": d,
        "energies": energies.tolist(),
        "rho": [[[float(z.real), float(z.imag)] for z in row] for row in rho],
        "seed": seed,
        "description": f"random {mode} instance, d={d}, PCG64 seed {seed}",
    }


def random_system(seed: int, d: int, mode: str = "diagonal") -> SingleSiteSystem:
    return system_from_instance(random_instance(seed, d, mode))


def instance_from_system(sys: SingleSiteSystem, seed=None, description: str | None = None) -> dict:
    out = {
        "dimension": sys.d,
        "energies": sys.h.levels.tolist(),
        "rho": [[[float(z.real), float(z.imag)] for z in row] for row in sys.rho],
    }
    if seed is not None:
        out["seed"] = seed
    if description:
        out["description"] = description
    return out


def system_from_instance(inst: dict) -> SingleSiteSystem:
    """Validate an instance dictionary and build its :class:`SingleSiteSystem`."""
    for key in ("dimension", "energies", "rho"):
        if key not in inst:
            raise InvalidArgument(f"instance is missing field '{key}'")
    d = inst["dimension"]
    if not isinstance(d, int) or d < 2:
        raise InvalidArgument(f"field 'dimension': expected an integer >= 2, got {d!r}")
    try:
        energies = np.asarray(inst["energies"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidArgument(f"field 'energies': {exc}") from None
    if energies.shape != (d,):
        raise InvalidArgument(f"field 'energies': expected {d} values, got shape {energies.shape}")
    try:
        h = HamiltonianSpectrum(energies)
    except InvalidArgument as exc:
        raise InvalidArgument(f"field 'energies': {exc}") from None
    try:
        pairs = np.asarray(inst["rho"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidArgument(f"field 'rho': {exc}") from None
    if pairs.shape != (d, d, 2):
        raise InvalidArgument(f"field 'rho': expected shape ({d}, {d}, 2) of [re, im] pairs, got {pairs.shape}")
    rho = pairs[..., 0] + 1j * pairs[..., 1]
    try:
        return decompose_state(h, rho)
    except InvalidState as exc:
        raise InvalidState(exc.check, exc.residual, f"field 'rho': {exc}") from None


def dumps_instance(inst: dict) -> str:
    """JSON text with one matrix row per line; floats use ``repr`` so they round-trip."""
    parts = []
    for key, val in inst.items():
        if key == "rho":
            rows = ",\n    ".join(json.dumps(row) for row in val)
            parts.append(f'  "rho": [\n    {rows}\n  ]')
        else:
            parts.append(f"  {json.dumps(key)}: {json.dumps(val)}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def write_instance(path, inst: dict):
    Path(path).write_text(dumps_instance(inst), encoding="utf-8")


def read_instance(path) -> SingleSiteSystem:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InvalidArgument(f"{path}: top level must be an object")
    return system_from_instance(data)


def load_system(ref: str) -> SingleSiteSystem:
    """``fixture:NAME`` or a path to an instance file."""
    if ref.lower().startswith("fixture:"):
        return fixture(ref.split(":", 1)[1])
    return read_instance(ref)
