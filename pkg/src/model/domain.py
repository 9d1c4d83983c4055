"""DomainModel: pal-tuple -> mode 의 전체 매핑과 모델 간 비교 연산."""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Tuple

from src.core.errors import IncomparableModelsError, ModelError
from src.model.modes import Mode, PaValue, is_legal_pair
from src.model.vocabulary import LiftedAtom, Location, PaKey, PalTuple, Vocabulary

logger = logging.getLogger(__name__)

# (lifted atom, pre mode, eff mode)
ActionLiteral = Tuple[LiftedAtom, Mode, Mode]


@dataclass(frozen=True)
class DomainModel:
    """정규 pal-tuple 순서에 맞춘 모드 튜플을 가진 불변 모델."""

    vocabulary: Vocabulary
    modes: Tuple[Mode, ...]
    name: str = "domain"

    def __post_init__(self) -> None:
        pals = self.vocabulary.pal_tuples
        if len(self.modes) != len(pals):
            raise ModelError(f"모드 {len(self.modes)}개, pal-tuple {len(pals)}개: 전체 매핑이 아님")
        for pre_idx, eff_idx in self.vocabulary.pa_slots:
            if not is_legal_pair(self.modes[pre_idx], self.modes[eff_idx]):
                pal = pals[pre_idx]
                raise ModelError(
                    f"허용되지 않는 pa 값 <{self.modes[pre_idx].value},{self.modes[eff_idx].value}> "
                    f"at {pal.action.name} {pal.atom}"
                )

    @classmethod
    def from_assignments(
        cls,
        vocabulary: Vocabulary,
        assignments: Mapping[PalTuple, Mode],
        name: str = "domain",
        default: Mode = Mode.ABSENT,
    ) -> "DomainModel":
        modes = [default] * vocabulary.n_pals
        for pal, mode in assignments.items():
            modes[vocabulary.index[pal]] = mode
        return cls(vocabulary, tuple(modes), name)

    @classmethod
    def unknown(cls, vocabulary: Vocabulary, name: str = "domain") -> "DomainModel":
        return cls(vocabulary, (Mode.UNKNOWN,) * vocabulary.n_pals, name)

    @property
    def pal_tuples(self) -> Tuple[PalTuple, ...]:
        return self.vocabulary.pal_tuples

    @cached_property
    def is_concrete(self) -> bool:
        return Mode.UNKNOWN not in self.modes

    def mode(self, pal: PalTuple) -> Mode:
        return self.modes[self.vocabulary.index[pal]]

    def pa_value(self, atom: LiftedAtom, action) -> PaValue:
        pre = self.mode(PalTuple(atom, action, Location.PRE))
        eff = self.mode(PalTuple(atom, action, Location.EFF))
        return PaValue(pre, eff)

    def pa_value_of(self, key: PaKey) -> PaValue:
        return self.pa_value(key[0], key[1])

    def unknown_pal_tuples(self) -> List[PalTuple]:
        return [pal for pal, m in zip(self.pal_tuples, self.modes) if m is Mode.UNKNOWN]

    def with_modes(self, assignments: Mapping[PalTuple, Mode]) -> "DomainModel":
        if not assignments:
            return self
        modes = list(self.modes)
        for pal, mode in assignments.items():
            modes[self.vocabulary.index[pal]] = mode
        return DomainModel(self.vocabulary, tuple(modes), self.name)

    def abstract(self, pal_tuples: Iterable[PalTuple]) -> "DomainModel":
        return self.with_modes({pal: Mode.UNKNOWN for pal in pal_tuples})

    @cached_property
    def action_literals(self) -> Dict[str, Tuple[ActionLiteral, ...]]:
        """액션별 (atom, pre, eff) 목록. pa 키 순서를 따른다."""
        out: Dict[str, List[ActionLiteral]] = {a.name: [] for a in self.vocabulary.actions}
        pals = self.pal_tuples
        for pre_idx, eff_idx in self.vocabulary.pa_slots:
            pal = pals[pre_idx]
            out[pal.action.name].append((pal.atom, self.modes[pre_idx], self.modes[eff_idx]))
        return {name: tuple(lits) for name, lits in out.items()}

    def is_concrete_for(self, action_name: str) -> bool:
        return all(
            pre.is_concrete and eff.is_concrete for _, pre, eff in self.action_literals[action_name]
        )

    def debug_dump(self) -> str:
        """정규 순서로 pal-tuple 과 모드를 한 줄씩."""
        lines = [f"; model {self.name} ({self.vocabulary.n_pals} pal-tuples)"]
        for pal, mode in zip(self.pal_tuples, self.modes):
            lines.append(f"{pal} {mode.value}")
        return "\n".join(lines) + "\n"



def _require_comparable(m1: DomainModel, m2: DomainModel) -> None:
    if not m1.vocabulary.same_as(m2.vocabulary):
        raise IncomparableModelsError(f"어휘가 다른 모델: {m1.name} vs {m2.name}")


def model_diff(m1: DomainModel, m2: DomainModel) -> int:
    _require_comparable(m1, m2)
    return sum(1 for a, b in zip(m1.modes, m2.modes) if a is not b)


def diff_pal_tuples(m1: DomainModel, m2: DomainModel) -> List[Tuple[PalTuple, Mode, Mode]]:
    _require_comparable(m1, m2)
    return [
        (pal, a, b)
        for pal, a, b in zip(m1.pal_tuples, m1.modes, m2.modes)
        if a is not b
    ]


def is_abstraction(m2: DomainModel, m1: DomainModel) -> bool:
    """m2 가 m1 의 abstraction 인지 (m2 의 각 모드가 ? 이거나 m1 과 같음)."""
    _require_comparable(m1, m2)
    return all(b is Mode.UNKNOWN or b is a for a, b in zip(m1.modes, m2.modes))
