"""후보 모델을 질의 응답과 대조해 걸러낸다.

concrete 모델은 응답을 정확히 시뮬레이션해 비교한다. unknown 모드가 남은 모델은
"가능한 응답" 으로 읽는다: 아직 증거와 모순되지 않는 값들로 unknown 을 채웠을 때
같은 응답을 낼 수 있으면 남긴다. 이 판정은 ground atom 단위로 독립적이므로
단일 액션 질의에서만 정의된다.
"""
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from src.agent.queries import Query, QueryResponse
from src.assess.constraints import ConstraintTable, ground_groups
from src.core.errors import AbstractModelError, ContradictionError
from src.model.domain import DomainModel
from src.model.ground import Atom, GroundAction, State
from src.model.modes import LEGAL_PA_VALUES, Mode, PaValue
from src.model.semantics import ground_effects

logger = logging.getLogger(__name__)

# (precondition 만족 여부, 실행 후 atom 진리값)
Outcome = Tuple[bool, bool]


def predicted_response(model: DomainModel, query: Query) -> QueryResponse:
    """concrete 모델 자신의 응답."""
    state = query.start_state
    executed = 0
    for action in query.plan:
        nxt = ground_effects(model, action).successor(state)
        if nxt is None:
            break
        state = nxt
        executed += 1
    return QueryResponse(executed, state)


def allowed_values(
    model: DomainModel, key, constraints: Optional[ConstraintTable]
) -> List[PaValue]:
    current = model.pa_value_of(key)
    pool = constraints.possible(key) if constraints is not None else frozenset(LEGAL_PA_VALUES)
    return [v for v in LEGAL_PA_VALUES if v in pool and v.matches(current.pre, current.eff)]


def _member_outcomes(values: List[PaValue], holds: bool) -> Set[Tuple[bool, bool, bool]]:
    """(pre 만족, delete 여부, add 여부)."""
    out = set()
    for v in values:
        ok = not ((v.pre is Mode.PLUS and not holds) or (v.pre is Mode.MINUS and holds))
        out.add((ok, v.eff is Mode.MINUS, v.eff is Mode.PLUS))
    return out


def group_outcomes(
    model: DomainModel,
    action: GroundAction,
    state: State,
    constraints: Optional[ConstraintTable] = None,
) -> Optional[Dict[Atom, FrozenSet[Outcome]]]:
    """ground atom 별로 가능한 (적용 가능, 새 진리값) 조합. 채울 값이 없으면 None."""
    vocab = model.vocabulary
    result: Dict[Atom, FrozenSet[Outcome]] = {}
    for atom, keys in ground_groups(vocab, action).items():
        holds = atom in state
        combos: Set[Tuple[bool, bool, bool]] = {(True, False, False)}
        for key in keys:
            values = allowed_values(model, key, constraints)
            if not values:
                return None
            member = _member_outcomes(values, holds)
            combos = {
                (ok1 and ok2, del1 or del2, add1 or add2)
                for ok1, del1, add1 in combos
                for ok2, del2, add2 in member
            }
        result[atom] = frozenset((ok, add or (holds and not delete)) for ok, delete, add in combos)
    return result


def response_possible(
    model: DomainModel,
    query: Query,
    response: QueryResponse,
    constraints: Optional[ConstraintTable] = None,
) -> bool:
    """모델이 이 응답을 낼 수 있는지."""
    relevant = {a.name for a in query.plan}
    if all(model.is_concrete_for(name) for name in relevant):
        return predicted_response(model, query) == response
    if len(query.plan) != 1:
        raise AbstractModelError("unknown 모드가 남은 후보는 단일 액션 질의로만 걸러낼 수 있음")
    if response.n_f not in (0, 1):
        return False
    action = query.plan[0]
    start = query.start_state
    outcomes = group_outcomes(model, action, start, constraints)
    if outcomes is None:
        return False
    if response.n_f == 0:
        if response.s_f != start:
            return False
        return any(not ok for group in outcomes.values() for ok, _ in group)
    touched = set(outcomes)
    if (response.s_f - touched) != (start - touched):
        return False
    return all(
        any(ok and value == (atom in response.s_f) for ok, value in group)
        for atom, group in outcomes.items()
    )


def sieve_models(
    candidates: Iterable[DomainModel],
    query: Query,
    response: QueryResponse,
    constraints: Optional[ConstraintTable] = None,
    strict: bool = True,
) -> List[DomainModel]:
    """응답과 일관한 후보만 남긴다. strict 이면 전부 제거될 때 ContradictionError."""
    candidates = list(candidates)
    survivors = []
    for model in candidates:
        if response_possible(model, query, response, constraints):
            survivors.append(model)
        else:
            logger.debug("sieve: 후보 제거 (n_f=%d)", response.n_f)
    if strict and candidates and not survivors:
        raise ContradictionError("모든 후보 모델이 질의 응답과 모순됨")
    return survivors
