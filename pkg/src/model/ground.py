"""ground atom/action, 관측 트레이스와 action triplet."""
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, Tuple

from src.core.errors import TraceAlternationError


@dataclass(frozen=True, order=True)
class Atom:
    predicate: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.args) + ")"


@dataclass(frozen=True, order=True)
class GroundAction:
    name: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.name,) + self.args) + ")"


State = FrozenSet[Atom]


def make_state(atoms: Iterable[Atom]) -> State:
    return frozenset(atoms)


def canonical_state(state: State) -> Tuple[Atom, ...]:
    return tuple(sorted(state))


@dataclass(frozen=True)
class ActionTriplet:
    pre_state: State
    action: GroundAction
    post_state: State


@dataclass(frozen=True)
class ObservationTrace:
    """state, action, state, ... 교대 시퀀스. objects 는 (이름, 타입) 쌍."""

    states: Tuple[State, ...]
    actions: Tuple[GroundAction, ...] = ()
    objects: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if not self.states:
            raise TraceAlternationError("트레이스는 state 로 시작해야 함")
        if len(self.states) != len(self.actions) + 1:
            raise TraceAlternationError(
                f"state {len(self.states)}개, action {len(self.actions)}개: 교대 규칙 위반"
            )

    def __len__(self) -> int:
        return len(self.actions)

    def triplets(self) -> Iterator[ActionTriplet]:
        for i, action in enumerate(self.actions):
            yield ActionTriplet(self.states[i], action, self.states[i + 1])

    def truncated(self, n_triplets: int) -> "ObservationTrace":
        n = min(n_triplets, len(self.actions))
        return ObservationTrace(self.states[: n + 1], self.actions[:n], self.objects)
