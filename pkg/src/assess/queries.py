"""에이전트에게 던질 질의 생성."""
import logging
from typing import Iterator, List, Mapping, Optional, Sequence

from src.agent.queries import Query
from src.assess.constraints import ConstraintTable, ground_groups
from src.assess.sieve import group_outcomes
from src.core.errors import ModelError
from src.model.domain import DomainModel
from src.model.ground import ActionTriplet, GroundAction, State
from src.model.semantics import bind_parameters
from src.model.vocabulary import PalTuple, Vocabulary
from src.planner.grounding import groundings

logger = logging.getLogger(__name__)


def _target_atom(vocab: Vocabulary, pal: PalTuple, action: GroundAction):
    return pal.atom.ground(bind_parameters(vocab, action))


def _collides(vocab: Vocabulary, pal: PalTuple, action: GroundAction) -> bool:
    groups = ground_groups(vocab, action)
    return len(groups[_target_atom(vocab, pal, action)]) > 1


def make_precondition_query(
    pal: PalTuple,
    triplets: Sequence[ActionTriplet],
    vocabulary: Vocabulary,
    set_true: bool = False,
) -> Optional[Query]:
    """관측된 pre-state 에서 γ_p 의 grounding 을 지운 (set_true 면 참으로 만든) 단일 액션 질의.

    γ_a 가 관측된 적이 없으면 None.
    """
    matching = [t for t in triplets if t.action.name == pal.action.name]
    if not matching:
        return None

    def rank(t: ActionTriplet):
        holds = _target_atom(vocabulary, pal, t.action) in t.pre_state
        changes = holds if not set_true else not holds
        return (_collides(vocabulary, pal, t.action), not changes)

    chosen = min(matching, key=rank)
    atom = _target_atom(vocabulary, pal, chosen.action)
    start = chosen.pre_state | {atom} if set_true else chosen.pre_state - {atom}
    return Query(frozenset(start), (chosen.action,))


def ordered_groundings(vocab: Vocabulary, action_name: str, objects: Mapping[str, str]) -> List[GroundAction]:
    """서로 다른 객체를 쓰는 grounding 을 먼저, 그 안에서는 정규 순서."""
    actions = groundings(vocab, vocab.action(action_name), objects)
    return sorted(actions, key=lambda a: (len(set(a.args)) < len(a.args), a))


def distinguishes(
    m_i: DomainModel,
    m_j: DomainModel,
    action: GroundAction,
    state: State,
    constraints: Optional[ConstraintTable] = None,
) -> bool:
    """두 모델이 가질 수 있는 응답 집합이 서로소인지."""
    out_i = group_outcomes(m_i, action, state, constraints)
    out_j = group_outcomes(m_j, action, state, constraints)
    if out_i is None or out_j is None:
        return False
    differing = [atom for atom in out_i if out_i[atom] != out_j[atom]]
    if len(differing) != 1:
        return False
    shared = [atom for atom in out_i if atom not in differing]
    if any(not ok for atom in shared for ok, _ in out_i[atom]):
        return False
    target = differing[0]
    fail_i = any(not ok for ok, _ in out_i[target])
    fail_j = any(not ok for ok, _ in out_j[target])
    if fail_i and fail_j:
        return False
    values_i = {value for ok, value in out_i[target] if ok}
    values_j = {value for ok, value in out_j[target] if ok}
    return not (values_i & values_j)


def generate_distinguishing_query(
    m_i: DomainModel,
    m_j: DomainModel,
    pal: PalTuple,
    states: Sequence[State],
    objects: Mapping[str, str],
    constraints: Optional[ConstraintTable] = None,
) -> Optional[Query]:
    """𝒮 를 정규 순서로 훑어 두 모델의 응답이 반드시 갈리는 단일 액션 질의를 찾는다.

    없으면 γ_p grounding 의 극성만 바꾼 상태까지 시도하고, 그래도 없으면 None.
    """
    if m_i.modes == m_j.modes:
        raise ModelError("같은 모델 사이에는 구분 질의가 없음")
    vocab = m_i.vocabulary
    candidates = ordered_groundings(vocab, pal.action.name, objects)
    for state in states:
        for action in candidates:
            if distinguishes(m_i, m_j, action, state, constraints):
                return Query(state, (action,))
    for state in states:
        for action in candidates:
            atom = _target_atom(vocab, pal, action)
            edited = state - {atom} if atom in state else state | {atom}
            if distinguishes(m_i, m_j, action, frozenset(edited), constraints):
                return Query(frozenset(edited), (action,))
    return None


def exploration_queries(
    model: DomainModel,
    action_name: str,
    states: Sequence[State],
    objects: Mapping[str, str],
    constraints: Optional[ConstraintTable] = None,
) -> Iterator[Query]:
    """후보 모델이 실행 가능하다고 볼 수 있는 (상태, grounding) 조합을 순서대로."""
    vocab = model.vocabulary
    candidates = ordered_groundings(vocab, action_name, objects)
    for state in states:
        for action in candidates:
            outcomes = group_outcomes(model, action, state, constraints)
            if outcomes is None:
                continue
            if all(any(ok for ok, _ in group) for group in outcomes.values()):
                yield Query(state, (action,))
