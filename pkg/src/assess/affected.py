"""drift 로 영향을 받았을 수 있는 pal-tuple(Γ_δ) 탐지.

- expanded: M_init 의 pa 값이 관측과 모순되는 경우 (일관 값 교집합 밖)
- reduced: 관측 구간보다 M_init 의 최적 plan 이 더 짧은 경우
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from src.assess.constraints import ConstraintTable
from src.model.domain import DomainModel
from src.model.ground import ObservationTrace
from src.model.modes import Mode
from src.model.vocabulary import Location, PalTuple
from src.planner.grounding import ground_objects
from src.planner.search import reachable_distances

logger = logging.getLogger(__name__)


class Provenance(str, Enum):
    EXPANDED = "expanded"
    REDUCED = "reduced"


@dataclass
class AffectedSet:
    """정규 순서로 순회되는 pal-tuple 집합과 항목별 근거."""

    entries: Dict[PalTuple, Set[Provenance]] = field(default_factory=dict)

    def add(self, pal: PalTuple, provenance: Provenance) -> None:
        self.entries.setdefault(pal, set()).add(provenance)

    def discard(self, pal: PalTuple) -> None:
        self.entries.pop(pal, None)

    def __contains__(self, pal: PalTuple) -> bool:
        return pal in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.ordered())

    def ordered(self) -> List[PalTuple]:
        return sorted(self.entries, key=PalTuple.sort_key)

    def provenance(self, pal: PalTuple) -> Tuple[Provenance, ...]:
        return tuple(sorted(self.entries.get(pal, ()), key=lambda p: p.value))


def detect_expanded(
    m_init: DomainModel, constraints: ConstraintTable
) -> Tuple[List[PalTuple], Dict[PalTuple, Mode]]:
    """M_init 값이 가능한 값 집합 밖인 pa 키의 pal-tuple 들.

    가능한 값들에서 한 위치의 모드가 유일하면 그 모드를 바로 고정하고 Γ_δ 에서 뺀다.
    반환: (Γ_δ 추가분, 고정된 모드)
    """
    additions: List[PalTuple] = []
    fixed: Dict[PalTuple, Mode] = {}
    for atom, action in m_init.vocabulary.pa_keys:
        key = (atom, action)
        if not constraints.is_constrained(key):
            continue
        values = constraints.possible(key)
        if m_init.pa_value(atom, action) in values:
            continue
        for location in (Location.PRE, Location.EFF):
            pal = PalTuple(atom, action, location)
            options = {v.pre if location is Location.PRE else v.eff for v in values}
            if len(options) == 1:
                fixed[pal] = next(iter(options))
            else:
                additions.append(pal)
    logger.debug("expanded: Γ_δ 추가 %d, 고정 %d", len(additions), len(fixed))
    return additions, fixed


def determined_modes(
    pals: Iterable[PalTuple], constraints: ConstraintTable
) -> Dict[PalTuple, Mode]:
    """가능한 값 집합만으로 모드가 유일하게 정해지는 pal-tuple."""
    fixed: Dict[PalTuple, Mode] = {}
    for pal in pals:
        values = constraints.possible(pal.pa_key)
        options = {v.pre if pal.location is Location.PRE else v.eff for v in values}
        if len(options) == 1:
            fixed[pal] = next(iter(options))
    return fixed


def detect_reduced(
    m_init: DomainModel,
    observations: Iterable[ObservationTrace],
    objects: Optional[Mapping[str, str]] = None,
    expansion_cap: Optional[int] = None,
) -> List[PalTuple]:
    """관측된 상태 쌍 (s_i, s_j) 마다 M_init 의 최적 plan 이 j-i 보다 짧으면
    두 궤적을 나란히 따라가며 처음 어긋나는 M_init 액션의 pal-tuple 전부를 추가한다.

    확장 한도에 걸린 탐색은 경고만 남기고 증거로 쓰지 않는다.
    """
    vocab = m_init.vocabulary
    flagged: Dict[str, None] = {}
    for trace in observations:
        trace_objects = dict(objects) if objects is not None else dict(trace.objects)
        if len(trace) < 2:
            continue
        task = ground_objects(m_init, trace_objects)
        keys = [task.state_key(s) for s in trace.states]
        last = len(keys) - 1
        for i in range(last):
            targets = {keys[j] for j in range(i + 2, last + 1)}
            if not targets:
                continue
            reach = reachable_distances(
                task, keys[i], targets, expansion_cap=expansion_cap, max_depth=last - i - 1
            )
            if reach.exhausted:
                logger.warning("상태 %d 에서의 진단 탐색이 확장 한도에 걸림, 일부 구간 건너뜀", i)
            for j in range(i + 2, last + 1):
                steps = reach.plans.get(keys[j])
                if steps is None or len(steps) >= j - i:
                    continue
                culprit = _first_divergence(task, keys, trace, i, steps)
                if culprit is not None and culprit not in flagged:
                    logger.debug("reduced: s%d->s%d 에서 M_init plan %d < %d, %s", i, j, len(steps), j - i, culprit)
                    flagged[culprit] = None
    additions = [pal for name in flagged for pal in vocab.pal_tuples_of(name)]
    additions.sort(key=PalTuple.sort_key)
    return additions


def _first_divergence(task, keys: List[int], trace: ObservationTrace, i: int, steps: List[int]) -> Optional[str]:
    key = keys[i]
    for k, idx in enumerate(steps):
        compiled = task.actions[idx]
        if compiled.action != trace.actions[i + k]:
            return compiled.action.name
        key = compiled.apply(key)
        if key != keys[i + k + 1]:
            return compiled.action.name
    return None
