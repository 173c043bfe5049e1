import os
from dataclasses import (dataclass, field, replace)
from typing import Callable

from .errors import InvalidConfigError
from .estimators.base import (EstimatorConfig, METHODS, MMSE)
from .freeprob.pipeline import MAX_ORDER
from .simulation.scenario import (ChannelModel, NetworkScenario)
from .utils import snr_db_to_sigma2


TABLE1: str = "table1"
MOMENT_RELERR: str = "moment-relerr"
ESTIMATOR_CDF: str = "estimator-cdf"
ITERATIVE: str = "iterative"
MP_DENSITY: str = "mp-density"
KINDS: tuple[str, ...] = (TABLE1, MOMENT_RELERR, ESTIMATOR_CDF, ITERATIVE, MP_DENSITY)

DEFAULT_L_SWEEP: tuple[int, ...] = (256, 512, 1024, 2048, 4096, 8192, 16384, 32768)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(item) for item in text.split(",") if item.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(item) for item in text.split(",") if item.strip())


def _text(text: str) -> str:
    return text.strip()


SCENARIO_KEYS: dict[str, Callable[[str], any]] = {
    "M": int,
    "N": int,
    "L": int,
    "powers": _float_list,
    "sigma2": float,
    "snr_db": float,
    "channel_model": ChannelModel.parse,
    "alphabet": _text,
    "master_seed": int,
}

EXPERIMENT_KEYS: dict[str, Callable[[str], any]] = {
    "kind": _text,
    "trials": int,
    "estimator": _text,
    "P_max": float,
    "grid_points": int,
    "K": int,
    "prior": _text,
    "accumulations": int,
    "steps": int,
    "L_sweep": _int_list,
    "covariance_method": _text,
    "covariance_trials": int,
    "c": float,
    "points": int,
    "output_path": _text,
}

KEY_TYPES: dict[str, Callable[[str], any]] = {**SCENARIO_KEYS, **EXPERIMENT_KEYS}


@dataclass(frozen=True)
class ExperimentSpec:
    """
    A parsed and validated experiment description.

    Attributes:
        kind: one of table1, moment-relerr, estimator-cdf, iterative, mp-density.
        scenario: the network scenario (None for mp-density).
        trials: Monte-Carlo trials (per L value for table1, runs for iterative).
        estimator: method tag, one of mmse, ml, zf, classical.
        estimator_config: grid and covariance settings.
        output_path: CSV file name, relative to the output directory.
        accumulations: blocks averaged per estimate (estimator-cdf).
        steps: iterative refinement steps.
        L_sweep: values of L swept by table1.
        c: Marchenko-Pastur ratio (mp-density).
        points: number of abscissae (mp-density).
        source_path: the spec file it was read from.
    """
    kind: str
    scenario: NetworkScenario | None
    trials: int = 100
    estimator: str = MMSE
    estimator_config: EstimatorConfig = field(default_factory=EstimatorConfig)
    output_path: str = ""
    accumulations: int = 1
    steps: int = 10
    L_sweep: tuple[int, ...] = DEFAULT_L_SWEEP
    c: float | None = None
    points: int = 400
    source_path: str | None = None

    def with_seed(self, seed: int) -> "ExperimentSpec":
        """Same experiment under another master seed."""
        if self.scenario is None:
            return self
        return replace(self, scenario=replace(self.scenario, master_seed=seed).validate())

    @property
    def master_seed(self) -> int:
        return self.scenario.master_seed if self.scenario is not None else 0

    def resolved_items(self) -> list[tuple[str, any]]:
        """Every setting, defaults included, in a fixed order; hashed into every artifact."""
        items: list[tuple[str, any]] = [("kind", self.kind)]
        if self.kind == MP_DENSITY:
            items += [("c", repr(self.c)), ("points", self.points)]
        else:
            items += list(self.scenario.describe().items())
            cfg: EstimatorConfig = self.estimator_config
            items += [
                ("trials", self.trials),
                ("estimator", self.estimator),
                ("P_max", repr(float(cfg.P_max))),
                ("grid_points", cfg.resolve_grid_points(self.scenario.M)),
                ("K", cfg.resolve_K(self.scenario.M)),
                ("prior", cfg.prior),
                ("covariance_method", cfg.covariance_method),
                ("covariance_trials", cfg.covariance_trials),
                ("accumulations", self.accumulations),
                ("steps", self.steps),
            ]
            if self.kind == TABLE1:
                items.append(("L_sweep", ",".join(str(value) for value in self.L_sweep)))
        items.append(("output_path", self.output_path))
        return items

    def resolved_text(self) -> str:
        return "".join(f"{key} = {value}\n" for key, value in self.resolved_items())


class ConfigurationManager:
    """Reads line-oriented ``key = value`` experiment files into :class:`ExperimentSpec` objects."""

    @classmethod
    def _read_entries(cls, text: str) -> dict[str, tuple[str, int]]:
        """
        Split a spec file into raw entries.

        ``#`` starts a comment, blank lines are skipped. Every other line must be
        ``key = value`` with a known key, and each key may appear once.

        Returns:
            dict: key -> (raw value, line number).
        """
        entries: dict[str, tuple[str, int]] = {}
        for line_number, raw_line in enumerate(text.splitlines(), start=1):
            line: str = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            key, separator, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not separator or not key:
                raise InvalidConfigError(f"expected 'key = value', got {raw_line.strip()!r}", (line_number,))
            if key not in KEY_TYPES:
                raise InvalidConfigError(f"unknown key {key!r}", (line_number,))
            if key in entries:
                raise InvalidConfigError(f"duplicate key {key!r}", (entries[key][1], line_number))
            if not value:
                raise InvalidConfigError(f"key {key!r} has no value", (line_number,))
            entries[key] = (value, line_number)
        return entries

    @classmethod
    def _convert(cls, entries: dict[str, tuple[str, int]]) -> dict[str, any]:
        values: dict[str, any] = {}
        for key, (raw, line_number) in entries.items():
            try:
                values[key] = KEY_TYPES[key](raw)
            except InvalidConfigError as error:
                raise InvalidConfigError(str(error), (line_number,)) from None
            except ValueError:
                raise InvalidConfigError(f"invalid value {raw!r} for key {key!r}", (line_number,)) from None
        return values

    @classmethod
    def _require(cls, values: dict[str, any], keys: tuple[str, ...], kind: str) -> None:
        missing: list[str] = [key for key in keys if key not in values]
        if missing:
            raise InvalidConfigError(f"{kind} experiments need the keys {', '.join(missing)}")

    @classmethod
    def _line(cls, entries: dict[str, tuple[str, int]], *keys: str) -> tuple[int, ...]:
        return tuple(entries[key][1] for key in keys if key in entries)

    @classmethod
    def _scenario(cls, values: dict[str, any], entries: dict[str, tuple[str, int]]) -> NetworkScenario:
        if len(values["powers"]) != values["M"]:
            raise InvalidConfigError(
                f"powers has {len(values['powers'])} entries but M = {values['M']}",
                cls._line(entries, "M", "powers"),
            )
        scenario = NetworkScenario(
            M=values["M"],
            N=values["N"],
            L=values.get("L", values["N"]),
            powers=values["powers"],
            sigma2=values["sigma2"] if "sigma2" in values else snr_db_to_sigma2(values["snr_db"]),
            channel_model=values.get("channel_model", ChannelModel()),
            alphabet=values.get("alphabet", "gaussian"),
            master_seed=values.get("master_seed", 0),
        )
        return scenario.validate()

    @classmethod
    def parse_text(cls, text: str, source_path: str = None) -> ExperimentSpec:
        """
        Parse and validate the content of a spec file.

        :param text: File content.
        :param source_path: Path recorded on the spec.
        :raises InvalidConfigError: On unknown, duplicate, missing or ill-typed keys.
        """
        entries = cls._read_entries(text)
        values = cls._convert(entries)
        cls._require(values, ("kind",), "all")
        kind: str = values["kind"]
        if kind not in KINDS:
            raise InvalidConfigError(f"kind must be one of {KINDS}, got {kind!r}", cls._line(entries, "kind"))

        output_path: str = values.get("output_path", f"{kind}.csv")
        if kind == MP_DENSITY:
            cls._require(values, ("c",), kind)
            if not values["c"] > 0:
                raise InvalidConfigError("c must be positive", cls._line(entries, "c"))
            if values.get("points", 400) < 2:
                raise InvalidConfigError("points must be at least 2", cls._line(entries, "points"))
            return ExperimentSpec(
                kind=kind, scenario=None, c=values["c"], points=values.get("points", 400),
                output_path=output_path, source_path=source_path,
            )

        required: tuple[str, ...] = ("M", "N", "powers") + (() if kind == TABLE1 else ("L",))
        cls._require(values, required, kind)
        if ("sigma2" in values) == ("snr_db" in values):
            raise InvalidConfigError("give exactly one of sigma2 and snr_db", cls._line(entries, "sigma2", "snr_db"))
        if "L_sweep" in values and (not values["L_sweep"] or min(values["L_sweep"]) < 1):
            raise InvalidConfigError("L_sweep needs at least one positive value", cls._line(entries, "L_sweep"))
        scenario: NetworkScenario = cls._scenario(values, entries)
        estimator: str = values.get("estimator", MMSE)
        if estimator not in METHODS:
            raise InvalidConfigError(
                f"estimator must be one of {METHODS}, got {estimator!r}", cls._line(entries, "estimator")
            )
        for key in ("trials", "accumulations", "steps"):
            if values.get(key, 1) < 1:
                raise InvalidConfigError(f"{key} must be at least 1", cls._line(entries, key))
        config_keys = ("P_max", "grid_points", "K", "prior", "covariance_method", "covariance_trials")
        try:
            estimator_config = EstimatorConfig(**{key: values[key] for key in config_keys if key in values})
        except InvalidConfigError as error:
            raise InvalidConfigError(str(error), cls._line(entries, *config_keys)) from None
        if estimator_config.resolve_K(scenario.M) < scenario.M:
            raise InvalidConfigError(f"K must be at least M = {scenario.M}", cls._line(entries, "K"))
        if estimator_config.resolve_K(scenario.M) > MAX_ORDER:
            raise InvalidConfigError(f"K must be at most {MAX_ORDER}", cls._line(entries, "K", "M"))
        return ExperimentSpec(
            kind=kind,
            scenario=scenario,
            trials=values.get("trials", 100),
            estimator=estimator,
            estimator_config=estimator_config,
            output_path=output_path,
            accumulations=values.get("accumulations", 1),
            steps=values.get("steps", 10),
            L_sweep=values.get("L_sweep", DEFAULT_L_SWEEP),
            source_path=source_path,
        )

    @classmethod
    def load(cls, path: str) -> ExperimentSpec:
        """
        Read a spec file from disk.

        :raises InvalidConfigError: If the file does not exist or does not validate.
        """
        if not os.path.exists(path):
            raise InvalidConfigError(f"spec file not found at {path}")
        with open(path, 'r', encoding='utf-8') as f:
            return cls.parse_text(f.read(), source_path=path)


def parse_spec(path: str) -> ExperimentSpec:
    return ConfigurationManager.load(path)
