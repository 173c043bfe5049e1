from dataclasses import (dataclass, field, replace)
from typing import Sequence

from ..errors import InvalidConfigError


IID_FREQUENCY: str = "iid-frequency"
TAPS: str = "taps"
PRESET: str = "preset"

# channel length as a fraction of N for the standardized short-delay channels
PRESET_DIVISORS: dict[str, int] = {"EVA": 27, "ETU": 13}

ALPHABETS: tuple[str, ...] = ("gaussian", "qpsk")


@dataclass(frozen=True)
class ChannelModel:
    """
    Time-domain channel length model.

    Three forms exist:
        * ``iid-frequency``: tau_d = N, the frequency response is white across carriers.
        * ``taps``: an explicit tap count, either absolute (``taps:32``) or relative
          to N (``taps:N/8``).
        * ``preset``: the standardized EVA or ETU channels, of length N/27 and N/13.
    """
    kind: str = IID_FREQUENCY
    taps: int | None = None
    divisor: int | None = None
    preset: str | None = None

    @classmethod
    def parse(cls, text: str) -> "ChannelModel":
        """
        Parse the ``channel_model`` grammar of scenario files.

        Example:
            ChannelModel.parse("taps:N/8") == ChannelModel(kind="taps", divisor=8)

        :param text: ``iid-frequency`` | ``taps:<int>`` | ``taps:N/<int>`` | ``preset:EVA`` | ``preset:ETU``
        :raises InvalidConfigError: On anything else.
        """
        text = text.strip()
        if text == IID_FREQUENCY:
            return cls()
        kind, _, argument = text.partition(":")
        argument = argument.strip()
        if kind == TAPS and argument:
            try:
                if argument.upper().startswith("N/"):
                    return cls(kind=TAPS, divisor=int(argument[2:]))
                return cls(kind=TAPS, taps=int(argument))
            except ValueError:
                raise InvalidConfigError(f"invalid tap count {argument!r}") from None
        if kind == PRESET and argument.upper() in PRESET_DIVISORS:
            return cls(kind=PRESET, preset=argument.upper())
        raise InvalidConfigError(f"unknown channel model {text!r}")

    def tau_d(self, n_subcarriers: int) -> int:
        """Channel length in samples for ``n_subcarriers`` carriers."""
        if self.kind == IID_FREQUENCY:
            return n_subcarriers
        if self.kind == PRESET:
            return max(1, round(n_subcarriers / PRESET_DIVISORS[self.preset]))
        if self.divisor is not None:
            if self.divisor < 1:
                raise InvalidConfigError(f"channel length divisor must be positive, got {self.divisor}")
            return max(1, round(n_subcarriers / self.divisor))
        return self.taps

    def __str__(self) -> str:
        if self.kind == IID_FREQUENCY:
            return IID_FREQUENCY
        if self.kind == PRESET:
            return f"{PRESET}:{self.preset}"
        if self.divisor is not None:
            return f"{TAPS}:N/{self.divisor}"
        return f"{TAPS}:{self.taps}"


@dataclass(frozen=True)
class NetworkScenario:
    """
    Full description of one synthetic multi-cell experiment.

    Attributes:
        M: number of base stations.
        N: number of subcarriers (doubling N emulates two receive antennas).
        L: number of OFDM symbols.
        powers: per-station transmit powers, descending.
        sigma2: additive noise variance.
        channel_model: channel length model, see :class:`ChannelModel`.
        alphabet: ``gaussian`` or ``qpsk`` input symbols.
        master_seed: root of every random stream of the experiment.
    """
    M: int
    N: int
    L: int
    powers: tuple[float, ...]
    sigma2: float = 0.0
    channel_model: ChannelModel = field(default_factory=ChannelModel)
    alphabet: str = "gaussian"
    master_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "powers", tuple(float(power) for power in self.powers))
        if isinstance(self.channel_model, str):
            object.__setattr__(self, "channel_model", ChannelModel.parse(self.channel_model))

    @property
    def tau_d(self) -> int:
        return self.channel_model.tau_d(self.N)

    @property
    def sigma(self) -> float:
        return self.sigma2 ** 0.5

    def validate(self) -> "NetworkScenario":
        """
        Check every scenario invariant.

        :return: self, so calls can be chained.
        :raises InvalidConfigError: On the first violated invariant.
        """
        for name in ("M", "N", "L"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidConfigError(f"{name} must be a positive integer, got {value!r}")
        if len(self.powers) != self.M:
            raise InvalidConfigError(f"powers has {len(self.powers)} entries but M = {self.M}")
        if any(power < 0 for power in self.powers):
            raise InvalidConfigError(f"powers must be nonnegative, got {self.powers}")
        if any(a < b for a, b in zip(self.powers, self.powers[1:])):
            raise InvalidConfigError(f"powers must be sorted descending, got {self.powers}")
        if self.sigma2 < 0:
            raise InvalidConfigError(f"sigma2 must be nonnegative, got {self.sigma2}")
        if self.alphabet not in ALPHABETS:
            raise InvalidConfigError(f"alphabet must be one of {ALPHABETS}, got {self.alphabet!r}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise InvalidConfigError(f"master_seed must fit in 64 bits, got {self.master_seed}")
        tau_d: int = self.tau_d
        if tau_d is None or not 1 <= tau_d <= self.N:
            raise InvalidConfigError(f"channel length tau_d = {tau_d} outside 1..N = {self.N}")
        return self

    def with_powers(self, powers: Sequence[float]) -> "NetworkScenario":
        """Same scenario with other powers (sorted descending), e.g. a covariance hypothesis."""
        ordered = tuple(sorted((float(power) for power in powers), reverse=True))
        return replace(self, M=len(ordered), powers=ordered)

    def describe(self) -> dict[str, any]:
        return {
            "M": self.M,
            "N": self.N,
            "L": self.L,
            "powers": ",".join(repr(power) for power in self.powers),
            "sigma2": repr(float(self.sigma2)),
            "channel_model": str(self.channel_model),
            "alphabet": self.alphabet,
            "master_seed": self.master_seed,
        }
