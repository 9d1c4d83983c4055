"""DAAISy 질의 루프와 전수 질의(AIA) 기준선.

두 전략 모두 같은 루프를 쓴다: 관측되지 않은 액션을 먼저 한 번씩 실행시켜 보고,
pa 키(술어, 액션)마다 pre/eff 를 함께 {7개 pa 값} 변형으로 펼친 뒤, 관측된 실행의
pre-state 에서 그 atom 만 뒤집은 질의로 변형을 가른다. 차이는 시작 모델과 순회할
pal-tuple 집합뿐이다.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.agent.queries import Query, QueryResponse
from src.agent.simulator import AgentSim, answer_query
from src.assess.affected import AffectedSet, Provenance, detect_expanded, detect_reduced, determined_modes
from src.assess.constraints import ConstraintTable, infer_pa_constraints
from src.assess.metrics import accuracy
from src.assess.queries import exploration_queries, generate_distinguishing_query, make_precondition_query
from src.assess.sieve import allowed_values, predicted_response, response_possible, sieve_models
from src.core.errors import ContradictionError, IncomparableModelsError
from src.model.domain import DomainModel
from src.model.ground import ActionTriplet, ObservationTrace, State
from src.model.modes import Mode
from src.model.vocabulary import Location, PaKey, PalTuple, Vocabulary
from src.planner.validate import validate_trace

logger = logging.getLogger(__name__)

DEFAULT_EXPLORATION_LIMIT = 40
DEFAULT_MAX_CANDIDATES = 256

QueryLogEntry = Tuple[Query, QueryResponse]


@dataclass
class AssessmentReport:
    strategy: str
    learned_models: Tuple[DomainModel, ...]
    gamma_delta: AffectedSet
    query_log: Tuple[QueryLogEntry, ...] = ()
    fixed_modes: Dict[PalTuple, Mode] = field(default_factory=dict)
    accuracy: Optional[float] = None
    initial_accuracy: Optional[float] = None
    progress: Tuple[Tuple[int, float], ...] = ()

    @property
    def query_count(self) -> int:
        return len(self.query_log)

    @property
    def learned_model(self) -> DomainModel:
        return self.learned_models[0]

    def matched_query_count(self, target: float) -> int:
        """처음으로 target 정확도에 도달한 시점의 질의 수."""
        for queries, acc in self.progress:
            if acc >= target - 1e-9:
                return queries
        return self.query_count


class Dialog:
    """에이전트와의 질의 기록. 이미 아는 질의(로그나 관측 triplet)는 다시 묻지 않는다."""

    def __init__(self, agent: AgentSim, constraints: ConstraintTable) -> None:
        self._agent = agent
        self.constraints = constraints
        self.log: List[QueryLogEntry] = []
        self._responses: Dict[Query, QueryResponse] = {}
        self._by_action: Dict[str, List[QueryLogEntry]] = {}
        for triplet in constraints.triplets:
            self._remember(Query(triplet.pre_state, (triplet.action,)), QueryResponse(1, triplet.post_state))

    def _remember(self, query: Query, response: QueryResponse) -> None:
        self._responses[query] = response
        for name in {a.name for a in query.plan}:
            self._by_action.setdefault(name, []).append((query, response))

    def known(self, query: Query) -> bool:
        return query in self._responses

    def ask(self, query: Query) -> QueryResponse:
        cached = self._responses.get(query)
        if cached is not None:
            return cached
        response = answer_query(self._agent, query)
        self.log.append((query, response))
        self._remember(query, response)
        if len(query.plan) == 1 and response.n_f == 1:
            self.constraints.add_triplet(ActionTriplet(query.start_state, query.plan[0], response.s_f))
        return response

    def evidence_for(self, action_name: str) -> List[QueryLogEntry]:
        return list(self._by_action.get(action_name, ()))

    @property
    def query_count(self) -> int:
        return len(self.log)


class _Interrogator:
    """Γ 의 pa 키를 액션별로 풀어 가는 질의 루프.

    단일 액션 질의의 응답은 그 액션의 모드에만 달려 있으므로 후보는 액션별
    인자(factor)로 따로 유지하고 마지막에 곱으로 조립한다.
    """

    def __init__(
        self,
        agent: AgentSim,
        constraints: ConstraintTable,
        states: Sequence[State],
        exploration_limit: int,
        max_candidates: int,
        ground_truth: Optional[DomainModel],
        prior: Optional[DomainModel] = None,
    ) -> None:
        self.dialog = Dialog(agent, constraints)
        self.constraints = constraints
        self.states = list(states)
        self.objects = agent.object_types
        self.exploration_limit = exploration_limit
        self.max_candidates = max_candidates
        self.ground_truth = ground_truth
        self.prior = prior
        self.progress: List[Tuple[int, float]] = []
        self._current: Optional[DomainModel] = None

    def _record(self) -> None:
        if self.ground_truth is not None:
            self.progress.append((self.dialog.query_count, accuracy(self._current, self.ground_truth)))

    def run(self, start: DomainModel, gamma: Iterable[PalTuple]) -> List[DomainModel]:
        self._current = start
        self._record()
        plan = _keys_by_action(gamma)
        self._explore(start, plan)
        factors: Dict[str, List[DomainModel]] = {}
        for name, keys in plan.items():
            models = [start]
            for key in keys:
                resolved: List[DomainModel] = []
                for model in models:
                    resolved.extend(self._resolve(model, key))
                models = _dedupe(resolved)
                if not models:
                    raise ContradictionError(f"{key[1].name} {key[0]}: 남은 후보 모델이 없음")
                if len(models) > self.max_candidates:
                    logger.warning("%s: 후보 %d개를 공통 abstraction 하나로 합침", name, len(models))
                    models = [_merge(models)]
                self._current = _overlay(self._current, models[0], name)
                self._record()
            factors[name] = models
        return self._assemble(start, factors)

    def _assemble(self, start: DomainModel, factors: Dict[str, List[DomainModel]]) -> List[DomainModel]:
        """액션별 후보의 곱. 곱이 max_candidates 를 넘으면 가장 큰 인자부터 합친다."""
        sizes = {name: len(models) for name, models in factors.items()}
        while math.prod(sizes.values()) > self.max_candidates:
            name = max(sizes, key=lambda n: (sizes[n], n))
            logger.warning("%s: 학습 모델 조합이 너무 많아 후보 %d개를 합침", name, sizes[name])
            factors[name] = [_merge(factors[name])]
            sizes[name] = 1
        names = list(factors)
        combined = []
        for choice in itertools.product(*(factors[n] for n in names)):
            model = start
            for name, part in zip(names, choice):
                model = _overlay(model, part, name)
            combined.append(model)
        return _dedupe(combined) or [start]

    def _consistent(self, model: DomainModel, action_name: str) -> bool:
        return all(
            response_possible(model, q, r, self.constraints)
            for q, r in self.dialog.evidence_for(action_name)
        )

    def _variants(self, model: DomainModel, key: PaKey) -> List[DomainModel]:
        atom, action = key
        pre_pal = PalTuple(atom, action, Location.PRE)
        eff_pal = PalTuple(atom, action, Location.EFF)
        values = allowed_values(model, key, self.constraints)
        if self.prior is not None:
            anchor = self.prior.pa_value_of(key)
            values.sort(key=lambda v: (v.pre is not anchor.pre) + (v.eff is not anchor.eff))
        variants = [model.with_modes({pre_pal: v.pre, eff_pal: v.eff}) for v in values]
        return [v for v in variants if self._consistent(v, action.name)]

    def _narrow(self, variants: List[DomainModel], key: PaKey, query: Query, response: QueryResponse) -> List[DomainModel]:
        survivors = sieve_models(variants, query, response, self.constraints)
        allowed = self.constraints.possible(key)
        survivors = [v for v in survivors if v.pa_value_of(key) in allowed]
        if not survivors:
            raise ContradictionError(f"{key[1].name} {key[0]}: 모든 변형이 응답과 모순됨")
        return survivors

    def _resolve(self, model: DomainModel, key: PaKey) -> List[DomainModel]:
        variants = self._variants(model, key)
        if len(variants) <= 1:
            return variants
        atom, action = key
        pre_pal = PalTuple(atom, action, Location.PRE)

        if self.constraints.observed(action.name):
            for set_true in (False, True):
                query = make_precondition_query(
                    pre_pal, self.constraints.triplets_for(action.name), model.vocabulary, set_true
                )
                if query is None or self.dialog.known(query):
                    continue
                variants = self._narrow(variants, key, query, self.dialog.ask(query))
                if len(variants) <= 1:
                    return variants

        while len(variants) > 1:
            query = self._distinguishing_query(variants, pre_pal)
            if query is None:
                break
            variants = self._narrow(variants, key, query, self.dialog.ask(query))
        if len(variants) > 1:
            logger.info("%s %s: 구분 질의를 찾지 못해 변형 %d개 유지", action.name, atom, len(variants))
        return variants

    def _distinguishing_query(self, variants: List[DomainModel], pal: PalTuple) -> Optional[Query]:
        for i, m_i in enumerate(variants):
            for m_j in variants[i + 1 :]:
                query = generate_distinguishing_query(
                    m_i, m_j, pal, self.states, self.objects, self.constraints
                )
                if query is not None and not self.dialog.known(query):
                    return query
        return None

    def _exploration_states(self) -> List[State]:
        """에이전트가 실제로 도달한 상태(최근 응답 먼저)를 𝒮 보다 앞에 둔다."""
        pool: Dict[State, None] = {}
        for query, response in reversed(self.dialog.log):
            if response.n_f > 0:
                pool.setdefault(response.s_f, None)
        for triplet in self.constraints.triplets:
            pool.setdefault(triplet.post_state, None)
            pool.setdefault(triplet.pre_state, None)
        for state in self.states:
            pool.setdefault(state, None)
        return list(pool)

    def _next_exploration(self, model: DomainModel, action_name: str) -> Optional[Query]:
        for query in exploration_queries(
            model, action_name, self._exploration_states(), self.objects, self.constraints
        ):
            if not self.dialog.known(query):
                return query
        return None

    def _explore(self, start: DomainModel, plan: Mapping[str, List[PaKey]]) -> None:
        """관측되지 않은 액션이 한 번씩 실행될 때까지 돌아가며 탐색 질의를 던진다.

        한 액션의 성공 응답 상태는 다른 액션의 다음 탐색 후보가 된다.
        """
        waiting = [
            name
            for name, keys in plan.items()
            if not self.constraints.observed(name) and any(len(self._variants(start, k)) > 1 for k in keys)
        ]
        posed = {name: 0 for name in waiting}
        while waiting:
            asked = False
            for name in list(waiting):
                if posed[name] >= self.exploration_limit:
                    logger.warning("%s: 탐색 질의 %d개로 실행을 관측하지 못함", name, posed[name])
                    waiting.remove(name)
                    continue
                query = self._next_exploration(start, name)
                if query is None:
                    continue
                response = self.dialog.ask(query)
                posed[name] += 1
                asked = True
                if response.n_f == 1:
                    logger.debug("%s: 탐색 질의 %d번 만에 실행 관측", name, posed[name])
                    waiting.remove(name)
            if not asked:
                for name in waiting:
                    logger.warning("%s: 더 시도할 탐색 질의가 없음 (%d개 사용)", name, posed[name])
                break


def _keys_by_action(gamma: Iterable[PalTuple]) -> Dict[str, List[PaKey]]:
    plan: Dict[str, List[PaKey]] = {}
    for pal in gamma:
        keys = plan.setdefault(pal.action.name, [])
        if pal.pa_key not in keys:
            keys.append(pal.pa_key)
    return plan


def _overlay(base: DomainModel, part: DomainModel, action_name: str) -> DomainModel:
    """base 에 part 의 action_name 모드만 덮어쓴다."""
    return base.with_modes({pal: part.mode(pal) for pal in base.vocabulary.pal_tuples_of(action_name)})


def _merge(models: Sequence[DomainModel]) -> DomainModel:
    """모드가 갈리는 pal-tuple 을 ? 로 둔 공통 abstraction."""
    first = models[0]
    differing = [
        pal for i, pal in enumerate(first.pal_tuples) if any(m.modes[i] is not first.modes[i] for m in models)
    ]
    return first.abstract(differing)


def _dedupe(models: Iterable[DomainModel]) -> List[DomainModel]:
    seen: Dict[Tuple[Mode, ...], DomainModel] = {}
    for model in models:
        seen.setdefault(model.modes, model)
    return list(seen.values())


def _final_check(
    candidates: Sequence[DomainModel],
    observations: Sequence[ObservationTrace],
    log: Sequence[QueryLogEntry],
) -> Tuple[DomainModel, ...]:
    """모든 트레이스와 질의 응답을 정확히 재현하는 concrete 모델만 남긴다."""
    survivors = [
        m
        for m in candidates
        if m.is_concrete
        and all(validate_trace(m, t) for t in observations)
        and all(predicted_response(m, q) == r for q, r in log)
    ]
    if not survivors:
        concrete = [m for m in candidates if m.is_concrete]
        if concrete:
            raise ContradictionError("관측과 질의 응답을 모두 재현하는 모델이 없음")
        logger.warning("concrete 모델을 얻지 못함, 추상 후보 %d개 반환", len(candidates))
        return tuple(candidates)
    return tuple(survivors)


def daaisy(
    m_init: DomainModel,
    observations: Sequence[ObservationTrace],
    agent: AgentSim,
    states: Sequence[State],
    ground_truth: Optional[DomainModel] = None,
    expansion_cap: Optional[int] = None,
    exploration_limit: int = DEFAULT_EXPLORATION_LIMIT,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> AssessmentReport:
    """M_init 과 관측으로 Γ_δ 를 찾고, 그 모드만 질의로 다시 배운다."""
    observations = list(observations)
    vocab = m_init.vocabulary
    if not vocab.same_as(agent.vocabulary):
        raise IncomparableModelsError("M_init 과 에이전트의 어휘가 다름")

    constraints = infer_pa_constraints(observations, vocab)
    gamma = AffectedSet()
    additions, fixed = detect_expanded(m_init, constraints)
    for pal in list(additions) + list(fixed):
        gamma.add(pal, Provenance.EXPANDED)
    for pal in detect_reduced(m_init, observations, agent.object_types, expansion_cap):
        gamma.add(pal, Provenance.REDUCED)
    fixed_modes = determined_modes(gamma.ordered(), constraints)
    for pal in fixed_modes:
        gamma.discard(pal)
    logger.info("Γ_δ %d개 (모드 고정 %d개)", len(gamma), len(fixed_modes))

    assignments: Dict[PalTuple, Mode] = {pal: Mode.UNKNOWN for pal in gamma.ordered()}
    assignments.update(fixed_modes)
    start = m_init.with_modes(assignments)

    interrogator = _Interrogator(
        agent, constraints, states, exploration_limit, max_candidates, ground_truth, prior=m_init
    )
    candidates = interrogator.run(start, gamma.ordered())
    learned = _final_check(candidates, observations, interrogator.dialog.log)
    report = AssessmentReport(
        strategy="daaisy",
        learned_models=learned,
        gamma_delta=gamma,
        query_log=tuple(interrogator.dialog.log),
        fixed_modes=fixed_modes,
        progress=tuple(interrogator.progress),
    )
    if ground_truth is not None:
        report.accuracy = accuracy(learned[0], ground_truth)
        report.initial_accuracy = accuracy(m_init, ground_truth)
    logger.info("DAAISy 완료: 질의 %d개, 학습 모델 %d개", report.query_count, len(learned))
    return report


def aia_baseline(
    agent: AgentSim,
    vocabulary: Vocabulary,
    states: Sequence[State],
    ground_truth: Optional[DomainModel] = None,
    exploration_limit: int = DEFAULT_EXPLORATION_LIMIT,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    name: str = "domain",
) -> AssessmentReport:
    """아무것도 모르는 모델에서 시작해 모든 pal-tuple 을 질의로 배운다."""
    if not vocabulary.same_as(agent.vocabulary):
        raise IncomparableModelsError("어휘가 에이전트와 다름")
    constraints = ConstraintTable(vocabulary)
    gamma = AffectedSet({pal: set() for pal in vocabulary.pal_tuples})
    start = DomainModel.unknown(vocabulary, name)
    interrogator = _Interrogator(agent, constraints, states, exploration_limit, max_candidates, ground_truth)
    candidates = interrogator.run(start, vocabulary.pal_tuples)
    learned = _final_check(candidates, [], interrogator.dialog.log)
    report = AssessmentReport(
        strategy="aia",
        learned_models=learned,
        gamma_delta=gamma,
        query_log=tuple(interrogator.dialog.log),
        progress=tuple(interrogator.progress),
    )
    if ground_truth is not None:
        report.accuracy = accuracy(learned[0], ground_truth)
        report.initial_accuracy = 0.0
    logger.info("AIA 완료: 질의 %d개", report.query_count)
    return report
