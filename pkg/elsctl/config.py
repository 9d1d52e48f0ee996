
import json
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from . import utils
from .models import SamplePlan

FORMATS = ("human", "json")


class Config:
    """Persisted run defaults in <data dir>/elsctl.json."""

    DEFAULTS: Dict[str, Any] = {
        "seed": 0,
        "trials": 100,
        "n_min": 3,
        "n_max": 5,
        "exact": False,
        "tol": utils.TOL,
        "check_tol": utils.CHECK_TOL,
        "cond_limit": utils.COND_LIMIT,
        "workers": 1,
        "format": "human",
    }

    def __init__(self, path: Optional[str] = None) -> None:
        self._path = path or utils.get_data_file("elsctl.json")
        self._data: Dict[str, Any] = dict(self.DEFAULTS)
        self._load()

    def _load(self) -> None:
        try:
            with open(self._path, "r", encoding="utf-8") as f:
                stored = json.load(f)
        except FileNotFoundError:
            return
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid config file {self._path}: {e}") from e
        self._data.update(stored)

    def _save(self) -> None:
        Path(self._path).parent.mkdir(parents=True, exist_ok=True)
        with open(self._path, "w", encoding="utf-8") as f:
            json.dump(self._data, f, indent=2, sort_keys=True)

    def get(self, key: str, default: Any = None) -> Any:
        return self._data.get(key, default)

    def set(self, key: str, value: Any) -> None:
        if key not in self.DEFAULTS:
            raise ValueError(f"Unknown config key {key!r} (known: {', '.join(sorted(self.DEFAULTS))})")
        self._data[key] = self.coerce(key, value)
        self._save()

    @classmethod
    def coerce(cls, key: str, value: Any) -> Any:
        """Parse a CLI string to the type of the key's default."""
        kind = type(cls.DEFAULTS[key])
        if not isinstance(value, str):
            return kind(value)
        if kind is bool:
            lowered = value.strip().lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(f"{key} expects true or false, got {value!r}")
            return lowered in ("true", "1", "yes")
        try:
            parsed = kind(value)
        except ValueError as e:
            raise ValueError(f"{key} expects a {kind.__name__}, got {value!r}") from e
        if key == "format" and parsed not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")
        return parsed

    @property
    def seed(self) -> int:
        return int(self.get("seed", self.DEFAULTS["seed"]))

    @property
    def trials(self) -> int:
        return int(self.get("trials", self.DEFAULTS["trials"]))

    @property
    def n_min(self) -> int:
        return int(self.get("n_min", self.DEFAULTS["n_min"]))

    @property
    def n_max(self) -> int:
        return int(self.get("n_max", self.DEFAULTS["n_max"]))

    @property
    def exact(self) -> bool:
        return bool(self.get("exact", self.DEFAULTS["exact"]))

    @property
    def tol(self) -> float:
        return float(self.get("tol", self.DEFAULTS["tol"]))

    @property
    def check_tol(self) -> float:
        return float(self.get("check_tol", self.DEFAULTS["check_tol"]))

    @property
    def cond_limit(self) -> float:
        return float(self.get("cond_limit", self.DEFAULTS["cond_limit"]))

    @property
    def workers(self) -> int:
        return int(self.get("workers", self.DEFAULTS["workers"]))

    @property
    def format(self) -> str:
        return str(self.get("format", self.DEFAULTS["format"]))


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    trials: int = 100
    n_min: int = 3
    n_max: int = 5
    exact: bool = False
    tol: float = utils.TOL
    check_tol: float = utils.CHECK_TOL
    cond_limit: float = utils.COND_LIMIT
    workers: int = 1
    format: str = "human"

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}, got {self.format!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @classmethod
    def from_config(cls, config: Config, **overrides: Any) -> "RunConfig":
        """Stored defaults, then every override that is not None."""
        names = {f.name for f in fields(cls)}
        base = cls(**{name: getattr(config, name) for name in names})
        chosen = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(chosen) - names
        if unknown:
            raise ValueError(f"Unknown run settings: {', '.join(sorted(unknown))}")
        return replace(base, **chosen)

    def to_plan(self) -> SamplePlan:
        return SamplePlan(
            trials=self.trials,
            n_min=self.n_min,
            n_max=self.n_max,
            seed=self.seed,
            exact=self.exact,
            check_tol=self.check_tol,
        )
