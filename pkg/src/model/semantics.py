"""ground 액션 의미론 (closed world, delete 후 add 적용) 과 triplet 일관성."""
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional

from src.core.errors import AbstractModelError, GroundingError, VocabularyError
from src.model.domain import DomainModel
from src.model.ground import ActionTriplet, Atom, GroundAction, State
from src.model.modes import Mode, PresenceTuple
from src.model.vocabulary import ActionSignature, Vocabulary


@dataclass(frozen=True)
class GroundEffects:
    pre_pos: FrozenSet[Atom]
    pre_neg: FrozenSet[Atom]
    add: FrozenSet[Atom]
    delete: FrozenSet[Atom]

    def applicable(self, state: State) -> bool:
        return self.pre_pos <= state and not (self.pre_neg & state)

    def successor(self, state: State) -> Optional[State]:
        """적용 불가면 None."""
        if not self.applicable(state):
            return None
        return (state - self.delete) | self.add


def bind_parameters(vocabulary: Vocabulary, action: GroundAction) -> Dict[str, str]:
    signature: ActionSignature = vocabulary.action(action.name)
    if len(action.args) != signature.arity:
        raise VocabularyError(
            f"{action}: 인자 {len(action.args)}개, {signature.name} 는 {signature.arity}개"
        )
    return dict(zip(signature.parameter_names, action.args))


def ground_effects(model: DomainModel, action: GroundAction) -> GroundEffects:
    """ground 액션의 precondition/effect 리터럴 집합.

    두 lifted atom 이 같은 ground atom 으로 겹치면 add 가 delete 보다 우선한다.
    """
    assignment = bind_parameters(model.vocabulary, action)
    pre_pos, pre_neg, add, delete = set(), set(), set(), set()
    for atom, pre, eff in model.action_literals[action.name]:
        if pre is Mode.UNKNOWN or eff is Mode.UNKNOWN:
            raise AbstractModelError(f"{action}: unknown 모드가 남아 있음 ({atom})")
        if pre is Mode.ABSENT and eff is Mode.ABSENT:
            continue
        g = atom.ground(assignment)
        if pre is Mode.PLUS:
            pre_pos.add(g)
        elif pre is Mode.MINUS:
            pre_neg.add(g)
        if eff is Mode.PLUS:
            add.add(g)
        elif eff is Mode.MINUS:
            delete.add(g)
    return GroundEffects(frozenset(pre_pos), frozenset(pre_neg), frozenset(add), frozenset(delete - add))


def successor(model: DomainModel, state: State, action: GroundAction) -> Optional[State]:
    return ground_effects(model, action).successor(state)


def presence_tuple(
    triplet: ActionTriplet, atom: Atom, objects: Optional[Iterable[str]] = None
) -> PresenceTuple:
    if objects is not None:
        known = set(objects)
        unknown = [o for o in atom.args if o not in known]
        if unknown:
            raise GroundingError(f"{atom}: 알 수 없는 객체 {unknown}")
    return PresenceTuple.of(atom in triplet.pre_state, atom in triplet.post_state)


def triplet_consistent(model: DomainModel, triplet: ActionTriplet) -> bool:
    model.vocabulary.action(triplet.action.name)
    if not model.is_concrete:
        raise AbstractModelError(f"{model.name}: concrete 모델이 필요함")
    return successor(model, triplet.pre_state, triplet.action) == triplet.post_state
