"""StateKey 위의 너비 우선 탐색.

모든 액션 비용이 1이므로 BFS 가 최적이다. 후속 상태는 정규 ground 액션 순서로
생성하므로 같은 길이의 plan 중 사전순으로 가장 앞선 것을 돌려준다.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from src.core.errors import SearchExhaustedError
from src.model.ground import GroundAction
from src.planner.grounding import GroundTask, StateKey

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Plan:
    actions: Tuple[GroundAction, ...] = ()

    def __len__(self) -> int:
        return len(self.actions)


_Parents = Dict[StateKey, Optional[Tuple[StateKey, int]]]


def _reconstruct(parents: _Parents, key: StateKey) -> List[int]:
    steps: List[int] = []
    link = parents[key]
    while link is not None:
        key, action_idx = link
        steps.append(action_idx)
        link = parents[key]
    steps.reverse()
    return steps


def _to_plan(task: GroundTask, steps: List[int]) -> Plan:
    return Plan(tuple(task.actions[i].action for i in steps))


def optimal_plan(task: GroundTask, expansion_cap: Optional[int] = None) -> Optional[Plan]:
    """최소 길이 plan. 도달 불가면 None, 확장 한도 초과면 SearchExhaustedError."""
    start = task.initial
    if task.is_goal(start):
        return Plan(())
    parents: _Parents = {start: None}
    frontier = deque([start])
    expansions = 0
    while frontier:
        key = frontier.popleft()
        if expansion_cap is not None and expansions >= expansion_cap:
            raise SearchExhaustedError(expansions)
        expansions += 1
        for idx, compiled in enumerate(task.actions):
            if not compiled.applicable(key):
                continue
            nxt = compiled.apply(key)
            if nxt in parents:
                continue
            parents[nxt] = (key, idx)
            if task.is_goal(nxt):
                logger.debug("plan 발견: 확장 %d회, 길이 %d", expansions, len(_reconstruct(parents, nxt)))
                return _to_plan(task, _reconstruct(parents, nxt))
            frontier.append(nxt)
    return None


@dataclass
class ReachResult:
    plans: Dict[StateKey, List[int]]
    exhausted: bool = False


def reachable_distances(
    task: GroundTask,
    start: StateKey,
    targets: Iterable[StateKey],
    expansion_cap: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> ReachResult:
    """start 에서 여러 target 까지의 최적 plan(액션 인덱스 목록)을 한 번의 BFS 로.

    max_depth 보다 긴 plan 은 찾지 않는다. 확장 한도에 걸리면 그때까지 찾은
    결과와 exhausted=True 를 돌려준다 (찾은 plan 은 여전히 최적이다).
    """
    remaining = set(targets)
    result = ReachResult(plans={})
    if start in remaining:
        result.plans[start] = []
        remaining.discard(start)
    if not remaining or max_depth == 0:
        return result
    parents: _Parents = {start: None}
    depth: Dict[StateKey, int] = {start: 0}
    frontier = deque([start])
    expansions = 0
    while frontier and remaining:
        key = frontier.popleft()
        if max_depth is not None and depth[key] >= max_depth:
            break
        if expansion_cap is not None and expansions >= expansion_cap:
            result.exhausted = True
            break
        expansions += 1
        for idx, compiled in enumerate(task.actions):
            if not compiled.applicable(key):
                continue
            nxt = compiled.apply(key)
            if nxt in parents:
                continue
            parents[nxt] = (key, idx)
            depth[nxt] = depth[key] + 1
            if nxt in remaining:
                result.plans[nxt] = _reconstruct(parents, nxt)
                remaining.discard(nxt)
            frontier.append(nxt)
    return result


def satisficing_plan(task: GroundTask, expansion_cap: Optional[int] = None) -> Optional[Plan]:
    """깊이 우선으로 처음 찾은 plan (최적 보장 없음)."""
    start = task.initial
    parents: _Parents = {start: None}
    stack = [start]
    expansions = 0
    while stack:
        key = stack.pop()
        if task.is_goal(key):
            return _to_plan(task, _reconstruct(parents, key))
        if expansion_cap is not None and expansions >= expansion_cap:
            raise SearchExhaustedError(expansions)
        expansions += 1
        for idx in range(len(task.actions) - 1, -1, -1):
            compiled = task.actions[idx]
            if compiled.applicable(key):
                nxt = compiled.apply(key)
                if nxt not in parents:
                    parents[nxt] = (key, idx)
                    stack.append(nxt)
    return None
