"""숨겨진 모델(M*_drift)로 질의에 답하는 블랙박스 에이전트 시뮬레이터."""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.agent.queries import Query, QueryResponse
from src.core.errors import GroundingError, NoTraceError, QueryFormatError, SearchExhaustedError
from src.model.domain import DomainModel
from src.model.ground import ObservationTrace, State, canonical_state
from src.pddl.problem import ProblemInstance
from src.planner.grounding import GroundTask, ground, ground_objects
from src.planner.search import Plan, optimal_plan, satisficing_plan

logger = logging.getLogger(__name__)

DEFAULT_WALK_LENGTH = 12


class PlanningMode(str, Enum):
    OPTIMAL = "optimal"
    SATISFICING = "satisficing"


@dataclass(frozen=True)
class AgentSim:
    """질의에는 응답만 돌려주고 숨겨진 모델은 노출하지 않는다."""

    _hidden_model: DomainModel = field(repr=False)
    objects: Tuple[Tuple[str, str], ...]
    initial_states: Tuple[State, ...] = ()
    mode: PlanningMode = PlanningMode.OPTIMAL
    expansion_cap: Optional[int] = None

    @classmethod
    def from_problems(
        cls,
        model: DomainModel,
        problems: Sequence[ProblemInstance],
        mode: PlanningMode = PlanningMode.OPTIMAL,
        expansion_cap: Optional[int] = None,
    ) -> "AgentSim":
        objects: Dict[str, str] = {}
        for problem in problems:
            for obj, obj_type in problem.objects:
                if objects.setdefault(obj, obj_type) != obj_type:
                    raise GroundingError(f"객체 {obj} 의 타입이 문제마다 다름")
        return cls(
            model,
            tuple(sorted(objects.items())),
            tuple(p.initial_state for p in problems),
            mode,
            expansion_cap,
        )

    @property
    def vocabulary(self):
        return self._hidden_model.vocabulary

    @property
    def object_types(self) -> Dict[str, str]:
        return dict(self.objects)

    @cached_property
    def _task(self) -> GroundTask:
        return ground_objects(self._hidden_model, self.object_types)

    @property
    def ground_atoms(self):
        return self._task.atoms

    def simulate(self, query: Query) -> QueryResponse:
        task = self._task
        try:
            key = task.state_key(query.start_state)
        except GroundingError as exc:
            raise QueryFormatError(str(exc)) from exc
        compiled = []
        for action in query.plan:
            c = task.compiled(action)
            if c is None:
                raise QueryFormatError(f"{action}: 에이전트 객체 위에서 grounding 되지 않음")
            compiled.append(c)
        executed = 0
        for c in compiled:
            if not c.applicable(key):
                break
            key = c.apply(key)
            executed += 1
        return QueryResponse(executed, task.state_from_key(key))

    def plan_for(self, problem: ProblemInstance) -> Optional[Plan]:
        task = ground(self._hidden_model, problem)
        if self.mode is PlanningMode.OPTIMAL:
            return optimal_plan(task, self.expansion_cap)
        return satisficing_plan(task, self.expansion_cap)

    def trace_from_plan(self, problem: ProblemInstance, plan: Plan) -> ObservationTrace:
        task = ground(self._hidden_model, problem)
        key = task.initial
        states = [task.state_from_key(key)]
        for action in plan.actions:
            key = task.compiled(action).apply(key)
            states.append(task.state_from_key(key))
        return ObservationTrace(tuple(states), plan.actions, problem.objects)


def answer_query(agent: AgentSim, query: Query) -> QueryResponse:
    """plan 을 차례로 실행하다 처음 적용 불가한 액션에서 멈춘다."""
    response = agent.simulate(query)
    logger.debug("query len=%d -> n_f=%d", len(query.plan), response.n_f)
    return response


def generate_trace(agent: AgentSim, problem: ProblemInstance) -> ObservationTrace:
    plan = agent.plan_for(problem)
    if plan is None:
        raise NoTraceError(f"{problem.name}: 숨겨진 모델에서 풀 수 없음")
    return agent.trace_from_plan(problem, plan)


def select_trace_problem(
    agent: AgentSim,
    problems: Sequence[ProblemInstance],
    triplets: int,
    seed: int,
) -> Tuple[ProblemInstance, ObservationTrace]:
    """시드 순서로 문제를 훑어 최적 plan 길이가 triplets 이상인 첫 문제를 고른다.

    트레이스는 triplets 개로 자른다. 조건을 만족하는 문제가 없으면 가장 긴 것을 쓴다.
    """
    if not problems:
        raise NoTraceError("문제가 없음")
    rng = np.random.default_rng(seed)
    order = [int(i) for i in rng.permutation(len(problems))]
    best: Optional[Tuple[ProblemInstance, ObservationTrace]] = None
    for i in order:
        problem = problems[i]
        try:
            trace = generate_trace(agent, problem)
        except (NoTraceError, SearchExhaustedError) as exc:
            logger.warning("문제 %s 건너뜀: %s", problem.name, exc)
            continue
        if len(trace) >= triplets:
            logger.info("트레이스 문제 선택: %s (plan 길이 %d)", problem.name, len(trace))
            return problem, trace.truncated(triplets)
        if best is None or len(trace) > len(best[1]):
            best = (problem, trace)
    if best is None:
        raise NoTraceError("풀 수 있는 문제가 없음")
    logger.warning("plan 길이 %d 이상인 문제가 없어 %s (길이 %d) 사용", triplets, best[0].name, len(best[1]))
    return best


def sample_random_states(
    agent: AgentSim,
    n: int,
    seed: int,
    walk_length: int = DEFAULT_WALK_LENGTH,
    initial_states: Optional[Sequence[State]] = None,
) -> Tuple[State, ...]:
    """숨겨진 모델 위의 랜덤 워크로 서로 다른 상태 n개를 모은다.

    워크로 부족하면 균등 랜덤 atom 부분집합으로 채운다. 결과는 정규 순서로 정렬.
    """
    if n < 1:
        raise ValueError("n 은 1 이상이어야 함")
    task = agent._task
    rng = np.random.default_rng(seed)
    starts = list(initial_states if initial_states is not None else agent.initial_states)
    if not starts:
        starts = [frozenset()]
    start_keys = sorted({task.state_key(s) for s in starts})

    found: Dict[int, None] = {}
    max_walks = max(4 * n, len(start_keys))
    for walk in range(max_walks):
        if len(found) >= n:
            break
        key = start_keys[walk % len(start_keys)]
        found.setdefault(key, None)
        for _ in range(walk_length):
            if len(found) >= n:
                break
            applicable = [c for c in task.actions if c.applicable(key)]
            if not applicable:
                break
            key = applicable[int(rng.integers(len(applicable)))].apply(key)
            found.setdefault(key, None)
        if walk_length == 0 and walk + 1 >= len(start_keys):
            break

    universe = len(task.atoms)
    capacity = 2 ** universe if universe < 63 else n
    target = min(n, capacity)
    attempts = 0
    while len(found) < target and attempts < 100 * n:
        attempts += 1
        bits = rng.random(universe) < 0.5
        key = sum(1 << i for i, on in enumerate(bits) if on)
        found.setdefault(key, None)

    states = [task.state_from_key(k) for k in list(found)[:n]]
    logger.debug("랜덤 상태 %d개 샘플 (요청 %d)", len(states), n)
    return tuple(sorted(states, key=canonical_state))
