"""Run configuration shared by the library pipeline and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, fields, asdict
from typing import Any

from netpu.features import DEFAULT_TRANSFORMS


@dataclass
class PipelineConfig:
    """Every knob of the pipeline, with working defaults.

    Paths are optional so the config doubles as the parameter object for
    library calls that already hold graph/seed objects.
    """

    edges: str | None = None
    seeds: str | None = None
    extended_seeds: str | None = None
    output_dir: str = "."
    t: float = 0.005
    alpha_ns: float = 0.5
    alpha_nr: float = 0.5
    alpha_restart: float = 0.8
    quantile_level: float = 0.95
    split: tuple[float, float] = (1.0 / 3.0, 2.0 / 3.0)
    rn_count: int | None = None
    folds: int = 5
    rng_seed: int = 0
    log_transform: tuple[bool, bool, bool, bool] = DEFAULT_TRANSFORMS
    threads: int | None = None
    max_iter: int = 1000
    tol: float = 1e-6

    def __post_init__(self):
        self.split = tuple(self.split)  # type: ignore[assignment]
        self.log_transform = tuple(bool(b) for b in self.log_transform)  # type: ignore[assignment]
        self.validate()

    def validate(self) -> None:
        def check(cond: bool, msg: str) -> None:
            if not cond:
                raise ValueError(f"invalid config: {msg}")

        check(self.t >= 0, f"t must be >= 0, got {self.t}")
        check(0 < self.alpha_ns <= 1, f"alpha_ns must be in (0, 1], got {self.alpha_ns}")
        check(0 <= self.alpha_nr <= 1, f"alpha_nr must be in [0, 1], got {self.alpha_nr}")
        check(0 < self.alpha_restart <= 1,
              f"alpha_restart must be in (0, 1], got {self.alpha_restart}")
        check(0 < self.quantile_level < 1,
              f"quantile_level must be in (0, 1), got {self.quantile_level}")
        check(len(self.split) == 2, f"split needs two fractions, got {self.split}")
        f1, f2 = self.split
        check(0 < f1 <= f2 < 1, f"split fractions must satisfy 0 < f1 <= f2 < 1, got {self.split}")
        check(self.rn_count is None or self.rn_count >= 1,
              f"rn_count must be >= 1 or null, got {self.rn_count}")
        check(self.folds >= 2, f"folds must be >= 2, got {self.folds}")
        check(len(self.log_transform) == 4, "log_transform needs one flag per feature column")
        check(self.threads is None or self.threads >= 1,
              f"threads must be >= 1 or null, got {self.threads}")
        check(self.max_iter >= 1, f"max_iter must be >= 1, got {self.max_iter}")
        check(self.tol > 0, f"tol must be > 0, got {self.tol}")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["split"] = list(self.split)
        d["log_transform"] = list(self.log_transform)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ValueError(f"unknown config key(s): {', '.join(unknown)}")
        return cls(**d)
