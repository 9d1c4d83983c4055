"""모드(+, -, 0, ?)와 pa 값, 관측 presence 에 따른 일관 값 표."""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Tuple

from src.core.errors import ModelError


class Mode(str, Enum):
    PLUS = "+"
    MINUS = "-"
    ABSENT = "0"
    UNKNOWN = "?"

    @property
    def is_concrete(self) -> bool:
        return self is not Mode.UNKNOWN


@dataclass(frozen=True)
class PaValue:
    """<m_pre, m_eff> 쌍. <+,+>와 <-,->는 존재하지 않는다."""

    pre: Mode
    eff: Mode

    def __post_init__(self) -> None:
        if self.pre is self.eff and self.pre in (Mode.PLUS, Mode.MINUS):
            raise ModelError(f"허용되지 않는 pa 값: <{self.pre.value},{self.eff.value}>")

    @property
    def is_concrete(self) -> bool:
        return self.pre.is_concrete and self.eff.is_concrete

    def matches(self, pre: Mode, eff: Mode) -> bool:
        """unknown 은 와일드카드."""
        return (pre is Mode.UNKNOWN or pre is self.pre) and (eff is Mode.UNKNOWN or eff is self.eff)

    def __str__(self) -> str:
        return f"<{self.pre.value},{self.eff.value}>"


# 일관 값 표 행 순서
LEGAL_PA_VALUES: Tuple[PaValue, ...] = (
    PaValue(Mode.PLUS, Mode.MINUS),
    PaValue(Mode.PLUS, Mode.ABSENT),
    PaValue(Mode.MINUS, Mode.PLUS),
    PaValue(Mode.MINUS, Mode.ABSENT),
    PaValue(Mode.ABSENT, Mode.PLUS),
    PaValue(Mode.ABSENT, Mode.MINUS),
    PaValue(Mode.ABSENT, Mode.ABSENT),
)
ALL_PA_VALUES: FrozenSet[PaValue] = frozenset(LEGAL_PA_VALUES)


def is_legal_pair(pre: Mode, eff: Mode) -> bool:
    return not (pre is eff and pre in (Mode.PLUS, Mode.MINUS))


class Presence(str, Enum):
    POS = "pos"
    NEG = "neg"

    @classmethod
    def of(cls, holds: bool) -> "Presence":
        return cls.POS if holds else cls.NEG


@dataclass(frozen=True)
class PresenceTuple:
    pre_presence: Presence
    post_presence: Presence

    @classmethod
    def of(cls, in_pre: bool, in_post: bool) -> "PresenceTuple":
        return cls(Presence.of(in_pre), Presence.of(in_post))


_P, _M, _O = Mode.PLUS, Mode.MINUS, Mode.ABSENT

_CONSISTENT: Dict[PresenceTuple, FrozenSet[PaValue]] = {
    PresenceTuple(Presence.POS, Presence.POS): frozenset(
        {PaValue(_P, _O), PaValue(_O, _P), PaValue(_O, _O)}
    ),
    PresenceTuple(Presence.POS, Presence.NEG): frozenset({PaValue(_P, _M), PaValue(_O, _M)}),
    PresenceTuple(Presence.NEG, Presence.POS): frozenset({PaValue(_M, _P), PaValue(_O, _P)}),
    PresenceTuple(Presence.NEG, Presence.NEG): frozenset(
        {PaValue(_M, _O), PaValue(_O, _M), PaValue(_O, _O)}
    ),
}


def consistent_pa_values(pt: PresenceTuple) -> FrozenSet[PaValue]:
    """관측된 presence 와 모순되지 않는 pa 값 집합."""
    return _CONSISTENT[pt]
