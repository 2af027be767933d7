"""Experiment configuration: a single versioned JSON document with hard
validation.  Unknown keys are errors, every bound is checked before any
computation, and the canonical serialization feeds the config hash recorded
in every report.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import ConfigurationError

SCHEMA_VERSION = 1
DEFAULT_SEED = 0xC0FFEE

SUITE_NAMES = (
    "car-relations",
    "real-structure",
    "cs-gradient",
    "rotate-square",
    "ym-sectors",
    "field-commutators",
    "spectral-invariant",
    "kernel-degeneracy",
)

_SCHEMA = {
    "schema_version": None,
    "seed": None,
    "lattice": {"n": None, "spacing": None},
    "modes": {"count": None, "inner_product": None, "sobolev_p": None},
    "fermion": {"count": None},
    "boson": {"cutoff": None},
    "rotation": {"k": None},
    "frame": None,
    "suites": None,
    "caps": {"max_hilbert_dim": None, "max_dense_dim": None},
}


def default_config_dict() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": DEFAULT_SEED,
        "lattice": {"n": 3, "spacing": 1.0},
        "modes": {"count": 3, "inner_product": "l2", "sobolev_p": 1},
        "fermion": {"count": 6},
        "boson": {"cutoff": 8},
        "rotation": {"k": 5e-5},
        "frame": "flat",
        "suites": ["all"],
        "caps": {"max_hilbert_dim": 2**24, "max_dense_dim": 2000},
    }


@dataclass
class ExperimentConfig:
    lattice_n: int
    lattice_spacing: float
    mode_count: int
    inner_product: str
    sobolev_p: int
    fermion_count: int
    boson_cutoff: int
    rotation_k: float
    frame: str
    suites: list
    seed: int
    max_hilbert_dim: int
    max_dense_dim: int
    raw: dict = field(repr=False, default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        errors: list[str] = []
        _reject_unknown(data, _SCHEMA, "", errors)

        def get(path, default=None):
            node = data
            for part in path.split("."):
                if not isinstance(node, dict) or part not in node:
                    return default
                node = node[part]
            return node

        version = get("schema_version")
        if version != SCHEMA_VERSION:
            errors.append(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")

        n = _as_int(get("lattice.n"), "lattice.n", errors, low=2)
        spacing = _as_float(get("lattice.spacing"), "lattice.spacing", errors, positive=True)
        count = _as_int(get("modes.count"), "modes.count", errors, low=1)
        ip = get("modes.inner_product")
        if ip not in ("l2", "sobolev"):
            errors.append(f"modes.inner_product: must be 'l2' or 'sobolev', got {ip!r}")
        sp = _as_int(get("modes.sobolev_p", 0), "modes.sobolev_p", errors, low=0)
        fermion = _as_int(get("fermion.count"), "fermion.count", errors, low=1, high=14)
        cutoff = _as_int(get("boson.cutoff"), "boson.cutoff", errors, low=1, high=16)
        k = _as_float(get("rotation.k"), "rotation.k", errors)
        if k == 0.0:
            errors.append("rotation.k: must be nonzero")
        frame = get("frame")
        if frame not in ("flat", "linear-x"):
            errors.append(f"frame: must be 'flat' or 'linear-x', got {frame!r}")
        suites = get("suites")
        if not isinstance(suites, list) or not suites:
            errors.append("suites: must be a nonempty list")
            suites = ["all"]
        else:
            for s in suites:
                if s != "all" and s not in SUITE_NAMES:
                    errors.append(f"suites: unknown suite {s!r}")
        seed = _as_int(get("seed"), "seed", errors, low=0)
        max_h = _as_int(get("caps.max_hilbert_dim"), "caps.max_hilbert_dim", errors, low=16)
        max_d = _as_int(get("caps.max_dense_dim"), "caps.max_dense_dim", errors, low=16)

        if n is not None and count is not None and count > 9 * n**3:
            errors.append(
                f"modes.count: {count} exceeds the tangent dimension 9*n^3 = {9 * n**3}"
            )
        if errors:
            raise ConfigurationError("invalid configuration:\n  " + "\n  ".join(errors))

        cfg = cls(
            lattice_n=n, lattice_spacing=spacing, mode_count=count,
            inner_product=ip, sobolev_p=sp, fermion_count=fermion,
            boson_cutoff=cutoff, rotation_k=k, frame=frame,
            suites=list(suites), seed=seed,
            max_hilbert_dim=max_h, max_dense_dim=max_d, raw=data,
        )
        cfg.check_caps()
        return cfg

    @classmethod
    def default(cls) -> "ExperimentConfig":
        return cls.from_dict(default_config_dict())

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}")
        if not isinstance(data, dict):
            raise ConfigurationError("config root must be a JSON object")
        return cls.from_dict(data)

    def check_caps(self):
        """Refuse oversized builds before any allocation happens."""
        d = self.boson_cutoff + 1
        planned = {
            "fermion Fock space": 2**self.fermion_count,
            "rotation composite": 2 * d**2 * 4,
            "sector-connection composite": 2 * min(d, 7) ** 3 * 16,
        }
        for label, dim in planned.items():
            if dim > self.max_hilbert_dim:
                raise ConfigurationError(
                    f"caps: {label} dimension {dim} exceeds max_hilbert_dim {self.max_hilbert_dim}"
                )
        if d**2 > self.max_dense_dim:
            raise ConfigurationError(
                f"caps: dense phase matrix dimension {d**2} exceeds max_dense_dim {self.max_dense_dim}"
            )

    def selected_suites(self) -> list[str]:
        if "all" in self.suites:
            return list(SUITE_NAMES)
        return [s for s in SUITE_NAMES if s in self.suites]

    def canonical_json(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _reject_unknown(data, schema, prefix, errors):
    if not isinstance(data, dict):
        errors.append(f"{prefix or 'config'}: must be an object")
        return
    for key, value in data.items():
        path = f"{prefix}.{key}" if prefix else key
        if key not in schema:
            errors.append(f"{path}: unknown key")
            continue
        sub = schema[key]
        if isinstance(sub, dict):
            _reject_unknown(value, sub, path, errors)


def _as_int(value, path, errors, low=None, high=None):
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{path}: must be an integer, got {value!r}")
        return None
    if low is not None and value < low:
        errors.append(f"{path}: must be >= {low}, got {value}")
        return None
    if high is not None and value > high:
        errors.append(f"{path}: must be <= {high}, got {value}")
        return None
    return value


def _as_float(value, path, errors, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{path}: must be a number, got {value!r}")
        return None
    value = float(value)
    if positive and value <= 0:
        errors.append(f"{path}: must be positive, got {value}")
        return None
    return value
