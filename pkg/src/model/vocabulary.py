"""술어/액션 시그니처와 lifted instantiation(pal-tuple) 열거.

액션 파라미터에 술어 인자를 묶는 모든 타입 호환 바인딩을 열거하고,
(action, predicate, binding, location) 순서의 정규 순서를 고정한다.
"""
import itertools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.core.errors import VocabularyError
from src.model.ground import Atom

logger = logging.getLogger(__name__)

ROOT_TYPE = "object"
_IDENTIFIER = re.compile(r"^[a-z_][a-z0-9_\-]*$")


class Location(str, Enum):
    """pal-tuple이 놓이는 위치."""
    PRE = "pre"
    EFF = "eff"


LOCATION_ORDER = {Location.PRE: 0, Location.EFF: 1}


@dataclass(frozen=True)
class PredicateSignature:
    name: str
    parameter_types: Tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.parameter_types)


@dataclass(frozen=True)
class ActionSignature:
    name: str
    parameter_names: Tuple[str, ...] = ()
    parameter_types: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.parameter_names) != len(self.parameter_types):
            raise VocabularyError(f"액션 {self.name}: 파라미터 이름/타입 개수 불일치")
        if len(set(self.parameter_names)) != len(self.parameter_names):
            raise VocabularyError(f"액션 {self.name}: 파라미터 이름 중복 {self.parameter_names}")

    @property
    def arity(self) -> int:
        return len(self.parameter_names)

    def type_of(self, parameter: str) -> str:
        return self.parameter_types[self.parameter_names.index(parameter)]

    def header(self) -> str:
        return "(" + " ".join((self.name,) + self.parameter_names) + ")"


@dataclass(frozen=True)
class LiftedAtom:
    """액션 파라미터에 인자를 묶은 술어 (P*의 원소)."""

    predicate: PredicateSignature
    binding: Tuple[str, ...] = ()

    def ground(self, assignment: Mapping[str, str]) -> Atom:
        return Atom(self.predicate.name, tuple(assignment[p] for p in self.binding))

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate.name,) + self.binding) + ")"


PaKey = Tuple[LiftedAtom, ActionSignature]


@dataclass(frozen=True)
class PalTuple:
    atom: LiftedAtom
    action: ActionSignature
    location: Location

    @property
    def pa_key(self) -> PaKey:
        return (self.atom, self.action)

    def partner(self) -> "PalTuple":
        other = Location.EFF if self.location is Location.PRE else Location.PRE
        return PalTuple(self.atom, self.action, other)

    def sort_key(self) -> Tuple:
        return (
            self.action.name,
            self.atom.predicate.name,
            self.atom.binding,
            LOCATION_ORDER[self.location],
        )

    def __str__(self) -> str:
        return f"{self.action.header()} {self.atom} {self.location.value}"


def _check_identifier(kind: str, name: str) -> None:
    if not _IDENTIFIER.match(name):
        raise VocabularyError(f"잘못된 {kind} 이름: {name!r}")


def validate_type_hierarchy(type_hierarchy: Mapping[str, str]) -> None:
    """부모 타입이 선언되어 있고 순환이 없는지 확인."""
    for child, parent in type_hierarchy.items():
        _check_identifier("type", child)
        if parent != ROOT_TYPE and parent not in type_hierarchy:
            raise VocabularyError(f"선언되지 않은 부모 타입: {parent} (child {child})")
    for start in type_hierarchy:
        seen = {start}
        current = type_hierarchy.get(start)
        while current is not None and current != ROOT_TYPE:
            if current in seen:
                raise VocabularyError(f"타입 계층 순환: {start}")
            seen.add(current)
            current = type_hierarchy.get(current)


def is_subtype(child: str, ancestor: str, type_hierarchy: Mapping[str, str]) -> bool:
    if ancestor == ROOT_TYPE or child == ancestor:
        return True
    current = type_hierarchy.get(child)
    while current is not None:
        if current == ancestor:
            return True
        if current == ROOT_TYPE:
            return False
        current = type_hierarchy.get(current)
    return False


def _known_type(name: str, type_hierarchy: Mapping[str, str]) -> bool:
    return name == ROOT_TYPE or name in type_hierarchy


def _validate_signatures(
    predicates: Sequence[PredicateSignature],
    actions: Sequence[ActionSignature],
    type_hierarchy: Mapping[str, str],
) -> None:
    validate_type_hierarchy(type_hierarchy)
    for kind, names in (("predicate", [p.name for p in predicates]), ("action", [a.name for a in actions])):
        if len(set(names)) != len(names):
            raise VocabularyError(f"중복된 {kind} 이름: {sorted(names)}")
        for name in names:
            _check_identifier(kind, name)
    for pred in predicates:
        for t in pred.parameter_types:
            if not _known_type(t, type_hierarchy):
                raise VocabularyError(f"술어 {pred.name}: 선언되지 않은 타입 {t}")
    for action in actions:
        for t in action.parameter_types:
            if not _known_type(t, type_hierarchy):
                raise VocabularyError(f"액션 {action.name}: 선언되지 않은 타입 {t}")


def enumerate_pal_tuples(
    predicates: Iterable[PredicateSignature],
    actions: Iterable[ActionSignature],
    type_hierarchy: Mapping[str, str],
    distinct_bindings: bool = False,
) -> List[PalTuple]:
    """모든 타입 호환 <lifted atom, action, location>을 정규 순서로 한 번씩 반환.

    액션 파라미터 타입이 술어 인자 타입과 같거나 하위 타입이면 바인딩할 수 있다.
    distinct_bindings=True이면 같은 파라미터를 두 인자에 묶는 바인딩은 제외한다.
    """
    predicates = sorted(predicates, key=lambda p: p.name)
    actions = sorted(actions, key=lambda a: a.name)
    _validate_signatures(predicates, actions, type_hierarchy)

    result: List[PalTuple] = []
    for action in actions:
        for pred in predicates:
            options = [
                [
                    name
                    for name, ptype in zip(action.parameter_names, action.parameter_types)
                    if is_subtype(ptype, arg_type, type_hierarchy)
                ]
                for arg_type in pred.parameter_types
            ]
            for binding in itertools.product(*options):
                if distinct_bindings and len(set(binding)) < len(binding):
                    continue
                atom = LiftedAtom(pred, tuple(binding))
                result.append(PalTuple(atom, action, Location.PRE))
                result.append(PalTuple(atom, action, Location.EFF))
    result.sort(key=PalTuple.sort_key)
    return result


@dataclass(frozen=True)
class Vocabulary:
    """모델 비교의 기준이 되는 어휘 (술어, 액션, 타입 계층, 바인딩 규칙)."""

    predicates: Tuple[PredicateSignature, ...]
    actions: Tuple[ActionSignature, ...]
    type_hierarchy: Tuple[Tuple[str, str], ...] = ()
    distinct_bindings: bool = False

    @classmethod
    def build(
        cls,
        predicates: Iterable[PredicateSignature],
        actions: Iterable[ActionSignature],
        type_hierarchy: Optional[Mapping[str, str]] = None,
        distinct_bindings: bool = False,
    ) -> "Vocabulary":
        vocab = cls(
            predicates=tuple(sorted(predicates, key=lambda p: p.name)),
            actions=tuple(sorted(actions, key=lambda a: a.name)),
            type_hierarchy=tuple(sorted((type_hierarchy or {}).items())),
            distinct_bindings=distinct_bindings,
        )
        # 검증 겸 열거 결과 캐시
        _ = vocab.pal_tuples
        return vocab

    @cached_property
    def hierarchy(self) -> Dict[str, str]:
        return dict(self.type_hierarchy)

    @cached_property
    def pal_tuples(self) -> Tuple[PalTuple, ...]:
        return tuple(
            enumerate_pal_tuples(self.predicates, self.actions, self.hierarchy, self.distinct_bindings)
        )

    @cached_property
    def index(self) -> Dict[PalTuple, int]:
        return {pal: i for i, pal in enumerate(self.pal_tuples)}

    @cached_property
    def pa_keys(self) -> Tuple[PaKey, ...]:
        seen: Dict[PaKey, None] = {}
        for pal in self.pal_tuples:
            seen.setdefault(pal.pa_key, None)
        return tuple(seen)

    @cached_property
    def pa_slots(self) -> Tuple[Tuple[int, int], ...]:
        """pa 키별 (pre 인덱스, eff 인덱스). 정규 순서에서 둘은 인접한다."""
        return tuple((i, i + 1) for i in range(0, len(self.pal_tuples), 2))

    @cached_property
    def pa_keys_by_action(self) -> Dict[str, Tuple[PaKey, ...]]:
        grouped: Dict[str, List[PaKey]] = {a.name: [] for a in self.actions}
        for key in self.pa_keys:
            grouped[key[1].name].append(key)
        return {name: tuple(keys) for name, keys in grouped.items()}

    @cached_property
    def action_by_name(self) -> Dict[str, ActionSignature]:
        return {a.name: a for a in self.actions}

    @cached_property
    def predicate_by_name(self) -> Dict[str, PredicateSignature]:
        return {p.name: p for p in self.predicates}

    @property
    def n_pals(self) -> int:
        return len(self.pal_tuples)

    def action(self, name: str) -> ActionSignature:
        try:
            return self.action_by_name[name]
        except KeyError:
            raise VocabularyError(f"알 수 없는 액션: {name}") from None

    def predicate(self, name: str) -> PredicateSignature:
        try:
            return self.predicate_by_name[name]
        except KeyError:
            raise VocabularyError(f"알 수 없는 술어: {name}") from None

    def pal_tuples_of(self, action_name: str) -> List[PalTuple]:
        return [pal for pal in self.pal_tuples if pal.action.name == action_name]

    def is_subtype(self, child: str, ancestor: str) -> bool:
        return is_subtype(child, ancestor, self.hierarchy)

    def known_type(self, name: str) -> bool:
        return _known_type(name, self.hierarchy)

    def same_as(self, other: "Vocabulary") -> bool:
        return (
            self.predicates == other.predicates
            and self.actions == other.actions
            and self.type_hierarchy == other.type_hierarchy
            and self.distinct_bindings == other.distinct_bindings
        )
