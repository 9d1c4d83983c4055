"""관측 action triplet 으로부터 pa 키별 가능한 값 집합을 좁힌다.

같은 ground 액션에서 두 lifted atom 이 하나의 ground atom 으로 겹치면 (같은 객체가
두 파라미터에 묶인 경우) 그 atom 들에 대해서는 어떤 값도 배제하지 않는다.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Set

from src.core.errors import InconsistentObservationsError
from src.model.ground import ActionTriplet, Atom, GroundAction, ObservationTrace
from src.model.modes import ALL_PA_VALUES, PaValue, PresenceTuple, consistent_pa_values
from src.model.semantics import bind_parameters
from src.model.vocabulary import ActionSignature, LiftedAtom, PaKey, Vocabulary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PaConstraint:
    atom: LiftedAtom
    action: ActionSignature
    possible_values: FrozenSet[PaValue]

    @property
    def pa_key(self) -> PaKey:
        return (self.atom, self.action)


def ground_groups(vocab: Vocabulary, action: GroundAction) -> Dict[Atom, List[PaKey]]:
    """ground 액션의 pa 키들을 ground atom 별로 묶는다."""
    assignment = bind_parameters(vocab, action)
    groups: Dict[Atom, List[PaKey]] = {}
    for key in vocab.pa_keys_by_action[action.name]:
        groups.setdefault(key[0].ground(assignment), []).append(key)
    return groups


class ConstraintTable:
    """pa 키 -> 가능한 PaValue 집합. 관측된 액션과 triplet 도 기억한다."""

    def __init__(self, vocabulary: Vocabulary) -> None:
        self.vocabulary = vocabulary
        self._values: Dict[PaKey, FrozenSet[PaValue]] = {}
        self._triplets: Dict[str, List[ActionTriplet]] = {}
        self._seen: Set[ActionTriplet] = set()

    def add_triplet(self, triplet: ActionTriplet) -> None:
        if triplet in self._seen:
            return
        groups = ground_groups(self.vocabulary, triplet.action)
        updates: Dict[PaKey, FrozenSet[PaValue]] = {}
        for atom, keys in groups.items():
            if len(keys) > 1:
                continue
            key = keys[0]
            column = consistent_pa_values(
                PresenceTuple.of(atom in triplet.pre_state, atom in triplet.post_state)
            )
            narrowed = self.possible(key) & column
            if not narrowed:
                raise InconsistentObservationsError(
                    f"{triplet.action} 의 {key[0]}: 관측들과 일관한 pa 값이 없음"
                )
            updates[key] = narrowed
        self._values.update(updates)
        self._seen.add(triplet)
        self._triplets.setdefault(triplet.action.name, []).append(triplet)

    def add_trace(self, trace: ObservationTrace) -> None:
        for triplet in trace.triplets():
            self.add_triplet(triplet)

    def possible(self, key: PaKey) -> FrozenSet[PaValue]:
        return self._values.get(key, ALL_PA_VALUES)

    def is_constrained(self, key: PaKey) -> bool:
        return self.possible(key) != ALL_PA_VALUES

    def observed(self, action_name: str) -> bool:
        return bool(self._triplets.get(action_name))

    def triplets_for(self, action_name: str) -> List[ActionTriplet]:
        return list(self._triplets.get(action_name, ()))

    @property
    def triplets(self) -> List[ActionTriplet]:
        return [t for name in sorted(self._triplets) for t in self._triplets[name]]

    def __iter__(self) -> Iterator[PaConstraint]:
        for key in self.vocabulary.pa_keys:
            yield PaConstraint(key[0], key[1], self.possible(key))


def infer_pa_constraints(observations: Iterable[ObservationTrace], vocabulary: Vocabulary) -> ConstraintTable:
    """모든 트레이스 triplet 에 대해 일관 값 표의 열을 교집합한다.

    관측되지 않은 액션의 pa 키는 7개 값 전체를 가진다.
    """
    table = ConstraintTable(vocabulary)
    for trace in observations:
        table.add_trace(trace)
    constrained = sum(1 for key in vocabulary.pa_keys if table.is_constrained(key))
    logger.debug("pa 제약: %d / %d 키가 좁혀짐", constrained, len(vocabulary.pa_keys))
    return table
