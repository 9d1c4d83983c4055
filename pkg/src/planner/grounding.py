"""DomainModel + 객체 집합 -> 비트마스크 기반 GroundTask."""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from src.core.errors import AbstractModelError, GroundingError
from src.model.domain import DomainModel
from src.model.ground import Atom, GroundAction, State
from src.model.semantics import ground_effects
from src.model.vocabulary import ActionSignature, Vocabulary
from src.pddl.problem import GroundLiteral, ProblemInstance

logger = logging.getLogger(__name__)

StateKey = int


@dataclass(frozen=True)
class CompiledAction:
    action: GroundAction
    pre_pos: int
    pre_neg: int
    add: int
    delete: int

    def applicable(self, key: StateKey) -> bool:
        return (key & self.pre_pos) == self.pre_pos and not (key & self.pre_neg)

    def apply(self, key: StateKey) -> StateKey:
        return (key & ~self.delete) | self.add


@dataclass
class GroundTask:
    atoms: Tuple[Atom, ...]
    actions: Tuple[CompiledAction, ...]
    objects: Tuple[Tuple[str, str], ...]
    initial: StateKey = 0
    goal_pos: int = 0
    goal_neg: int = 0
    index: Dict[Atom, int] = field(default_factory=dict)

    @cached_property
    def action_index(self) -> Dict[GroundAction, int]:
        return {compiled.action: i for i, compiled in enumerate(self.actions)}

    def state_key(self, state: Iterable[Atom]) -> StateKey:
        key = 0
        for atom in state:
            bit = self.index.get(atom)
            if bit is None:
                raise GroundingError(f"{atom}: 이 태스크의 atom universe 밖에 있음")
            key |= 1 << bit
        return key

    def state_from_key(self, key: StateKey) -> State:
        return frozenset(atom for i, atom in enumerate(self.atoms) if key >> i & 1)

    def is_goal(self, key: StateKey) -> bool:
        return (key & self.goal_pos) == self.goal_pos and not (key & self.goal_neg)

    def compiled(self, action: GroundAction) -> Optional[CompiledAction]:
        idx = self.action_index.get(action)
        return None if idx is None else self.actions[idx]

    def with_goal(self, initial: StateKey, goal: Iterable[GroundLiteral]) -> "GroundTask":
        goal_pos = goal_neg = 0
        for lit in goal:
            bit = self.index.get(lit.atom)
            if bit is None:
                if lit.positive:
                    raise GroundingError(f"goal {lit}: universe 밖의 atom")
                continue
            if lit.positive:
                goal_pos |= 1 << bit
            else:
                goal_neg |= 1 << bit
        return GroundTask(self.atoms, self.actions, self.objects, initial, goal_pos, goal_neg, self.index)


def objects_of_type(vocab: Vocabulary, objects: Mapping[str, str], wanted: str) -> List[str]:
    return sorted(o for o, t in objects.items() if vocab.is_subtype(t, wanted))


def groundings(vocab: Vocabulary, signature: ActionSignature, objects: Mapping[str, str]) -> List[GroundAction]:
    """타입이 맞는 모든 ground 액션 (객체 이름 사전순 곱)."""
    pools = [objects_of_type(vocab, objects, t) for t in signature.parameter_types]
    return [GroundAction(signature.name, tuple(args)) for args in itertools.product(*pools)]


def ground_atoms(vocab: Vocabulary, objects: Mapping[str, str]) -> Tuple[Atom, ...]:
    atoms: List[Atom] = []
    for pred in vocab.predicates:
        pools = [objects_of_type(vocab, objects, t) for t in pred.parameter_types]
        atoms.extend(Atom(pred.name, tuple(args)) for args in itertools.product(*pools))
    return tuple(atoms)


def _check_objects(vocab: Vocabulary, objects: Mapping[str, str]) -> None:
    for obj, obj_type in objects.items():
        if not vocab.known_type(obj_type):
            raise GroundingError(f"객체 {obj}: 선언되지 않은 타입 {obj_type}")


def ground_objects(model: DomainModel, objects: Mapping[str, str]) -> GroundTask:
    """목표 없이 모델과 객체만으로 grounding (초기 상태는 빈 상태)."""
    if not model.is_concrete:
        raise AbstractModelError(f"{model.name}: grounding 에는 concrete 모델이 필요함")
    vocab = model.vocabulary
    _check_objects(vocab, objects)
    atoms = ground_atoms(vocab, objects)
    index = {atom: i for i, atom in enumerate(atoms)}

    def mask(group: Iterable[Atom]) -> int:
        value = 0
        for atom in group:
            value |= 1 << index[atom]
        return value

    compiled: List[CompiledAction] = []
    for signature in vocab.actions:
        for action in groundings(vocab, signature, objects):
            eff = ground_effects(model, action)
            compiled.append(
                CompiledAction(action, mask(eff.pre_pos), mask(eff.pre_neg), mask(eff.add), mask(eff.delete))
            )
    logger.debug("grounding %s: atom %d개, action %d개", model.name, len(atoms), len(compiled))
    return GroundTask(tuple(atoms), tuple(compiled), tuple(sorted(objects.items())), index=index)


def ground(model: DomainModel, problem: ProblemInstance) -> GroundTask:
    base = ground_objects(model, problem.object_types)
    return base.with_goal(base.state_key(problem.initial_state), problem.goal)


def apply(task: GroundTask, state: State, action: GroundAction) -> Optional[State]:
    """적용 불가면 None. 입력 상태는 변경하지 않는다."""
    compiled = task.compiled(action)
    if compiled is None:
        raise GroundingError(f"{action}: 이 태스크에 없는 ground 액션")
    key = task.state_key(state)
    if not compiled.applicable(key):
        return None
    return task.state_from_key(compiled.apply(key))
