"""도메인 x drift level x method x trial 실험 실행과 요약.

도메인마다 트레이스 하나와 𝒮 하나를 만들어 모든 trial 에서 재사용한다.
AIA 는 M_init 과 무관하므로 도메인마다 한 번만 돌리고 진행 곡선을 재사용한다.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.stats import spearmanr

from src.agent.drift import DriftMethod, DriftSpec, inject_drift
from src.agent.simulator import AgentSim, sample_random_states, select_trace_problem
from src.assess.interrogation import AssessmentReport, aia_baseline, daaisy
from src.config.experiment import DomainEntry, ExperimentConfig
from src.core.errors import AssessmentError
from src.core.seeding import derive_seed
from src.model.domain import DomainModel
from src.model.ground import ObservationTrace, State
from src.pddl.domain import parse_domain
from src.pddl.problem import parse_problem
from src.records.models import ResultRow
from src.records.writer import ResultWriter

logger = logging.getLogger(__name__)

CURVE_COLUMNS = [
    "domain",
    "method",
    "level",
    "daaisy_queries_mean",
    "daaisy_queries_std",
    "aia_matched_mean",
    "aia_matched_std",
    "accuracy_mean",
    "accuracy_std",
    "trials",
]


@dataclass
class DomainContext:
    name: str
    hidden: DomainModel
    agent: AgentSim
    trace: ObservationTrace
    states: Tuple[State, ...]
    aia: Optional[AssessmentReport] = None
    aia_error: Optional[str] = None
    aia_duration: Optional[float] = None


def prepare_domain(entry: DomainEntry, config: ExperimentConfig, record_timing: bool = False) -> DomainContext:
    hidden = parse_domain(entry.domain.read_text(encoding="utf-8"), config.distinct_bindings)
    problems = [parse_problem(p.read_text(encoding="utf-8"), hidden) for p in entry.problems]
    scout = AgentSim.from_problems(hidden, problems, expansion_cap=config.expansion_cap)
    problem, trace = select_trace_problem(
        scout, problems, config.triplets, derive_seed(config.master_seed, entry.name, "trace")
    )
    agent = AgentSim.from_problems(hidden, [problem], expansion_cap=config.expansion_cap)
    states = sample_random_states(
        agent, config.s_size, derive_seed(config.master_seed, entry.name, "states"), config.walk_length
    )
    ctx = DomainContext(entry.name, hidden, agent, trace, states)
    if config.run_aia:
        started = time.perf_counter()
        try:
            ctx.aia = aia_baseline(
                agent, hidden.vocabulary, states, ground_truth=hidden, exploration_limit=config.exploration_limit, name=hidden.name
            )
        except AssessmentError as exc:
            logger.warning("%s: AIA 실패 (%s)", entry.name, exc.code)
            ctx.aia_error = exc.code
        if record_timing:
            ctx.aia_duration = time.perf_counter() - started
    logger.info("도메인 %s 준비: nPals %d, 트레이스 %d triplets, 𝒮 %d", entry.name, hidden.vocabulary.n_pals, len(trace), len(states))
    return ctx


def run_trial(
    ctx: DomainContext,
    level: float,
    method: DriftMethod,
    trial: int,
    config: ExperimentConfig,
    record_timing: bool = False,
) -> List[ResultRow]:
    seed = derive_seed(config.master_seed, ctx.name, level, method.value, trial)
    n_pals = ctx.hidden.vocabulary.n_pals
    base = dict(domain=ctx.name, level=level, method=method.value, trial=trial, seed=seed, n_pals=n_pals)
    strategies = ["daaisy"] + (["aia"] if config.run_aia else [])
    started = time.perf_counter()
    try:
        m_init = inject_drift(ctx.hidden, DriftSpec(level, method, seed))
        report = daaisy(
            m_init,
            [ctx.trace],
            ctx.agent,
            ctx.states,
            ground_truth=ctx.hidden,
            expansion_cap=config.diagnosis_cap,
            exploration_limit=config.exploration_limit,
        )
    except AssessmentError as exc:
        logger.warning("%s level=%.2f %s trial=%d 실패: %s", ctx.name, level, method.value, trial, exc)
        return [ResultRow(strategy=s, error=exc.code, **base) for s in strategies]

    rows = [
        ResultRow(
            strategy="daaisy",
            query_count=report.query_count,
            accuracy=report.accuracy,
            initial_accuracy=report.initial_accuracy,
            gamma_size=len(report.gamma_delta),
            learned_models=len(report.learned_models),
            duration=time.perf_counter() - started if record_timing else None,
            **base,
        )
    ]
    if config.run_aia:
        if ctx.aia is None:
            rows.append(ResultRow(strategy="aia", error=ctx.aia_error or "aia-unavailable", **base))
        else:
            rows.append(
                ResultRow(
                    strategy="aia",
                    query_count=ctx.aia.query_count,
                    matched_query_count=ctx.aia.matched_query_count(report.accuracy),
                    accuracy=ctx.aia.accuracy,
                    initial_accuracy=0.0,
                    gamma_size=n_pals,
                    learned_models=len(ctx.aia.learned_models),
                    duration=ctx.aia_duration,
                    **base,
                )
            )
    return rows


def _run_trial_job(job) -> List[ResultRow]:
    return run_trial(*job)


def run_bench(config: ExperimentConfig, out_dir: Path, record_timing: bool = False) -> List[ResultRow]:
    rows: List[ResultRow] = []
    jobs = []
    for entry in config.domains:
        try:
            ctx = prepare_domain(entry, config, record_timing)
        except AssessmentError as exc:
            logger.warning("도메인 %s 준비 실패: %s", entry.name, exc)
            rows.append(ResultRow(domain=entry.name, level=0.0, method="", trial=0, seed=0, strategy="daaisy", error=exc.code))
            continue
        for level in config.drift_levels:
            for method in config.drift_methods:
                for trial in range(config.trials):
                    jobs.append((ctx, level, method, trial, config, record_timing))

    logger.info("trial %d개 실행 (workers=%d)", len(jobs), config.workers)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for result in pool.map(_run_trial_job, jobs):
                rows.extend(result)
    else:
        for i, job in enumerate(jobs, 1):
            rows.extend(_run_trial_job(job))
            if i % 10 == 0:
                logger.info("진행: %d/%d", i, len(jobs))

    summary, curves = summarize(rows)
    writer = ResultWriter(out_dir)
    writer.write_rows(rows)
    writer.write_curves(curves, CURVE_COLUMNS)
    writer.write_summary(summary)
    logger.info("결과 저장: %s", out_dir)
    return sorted(rows, key=ResultRow.sort_key)


def _stats(values: List[float]) -> Dict[str, Optional[float]]:
    if not values:
        return {"mean": None, "std": None}
    arr = np.asarray(values, dtype=float)
    return {"mean": round(float(np.mean(arr)), 6), "std": round(float(np.std(arr)), 6)}


def _spearman(xs: List[float], ys: List[float]) -> Optional[float]:
    if len(xs) < 3 or len(set(ys)) < 2:
        return None
    rho, _ = spearmanr(xs, ys)
    rho = float(rho)
    return None if np.isnan(rho) else round(rho, 6)


def summarize(rows: List[ResultRow]) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """원시 행만으로 다시 계산되는 요약과 곡선 데이터."""
    groups: Dict[Tuple[str, float, str, str], List[ResultRow]] = {}
    errors = 0
    for row in rows:
        if row.error:
            errors += 1
            continue
        groups.setdefault((row.domain, row.level, row.method, row.strategy), []).append(row)

    summary_groups = []
    for (domain, level, method, strategy), members in sorted(groups.items()):
        summary_groups.append(
            {
                "domain": domain,
                "level": level,
                "method": method,
                "strategy": strategy,
                "trials": len(members),
                "query_count": _stats([r.query_count for r in members]),
                "matched_query_count": _stats([r.matched_query_count for r in members if r.matched_query_count is not None]),
                "accuracy": _stats([r.accuracy for r in members if r.accuracy is not None]),
                "gamma_size": _stats([r.gamma_size for r in members if r.gamma_size is not None]),
            }
        )

    curves: List[Dict[str, Any]] = []
    spearman: Dict[str, Dict[str, Optional[float]]] = {}
    series = sorted({(d, m) for d, _, m, s in groups if s == "daaisy"})
    for domain, method in series:
        levels = sorted({lvl for d, lvl, m, s in groups if d == domain and m == method and s == "daaisy"})
        means = []
        for level in levels:
            ours = groups[(domain, level, method, "daaisy")]
            aia = groups.get((domain, level, method, "aia"), [])
            q = _stats([r.query_count for r in ours])
            matched = _stats([r.matched_query_count for r in aia if r.matched_query_count is not None])
            acc = _stats([r.accuracy for r in ours if r.accuracy is not None])
            means.append(q["mean"])
            curves.append(
                {
                    "domain": domain,
                    "method": method,
                    "level": level,
                    "daaisy_queries_mean": q["mean"],
                    "daaisy_queries_std": q["std"],
                    "aia_matched_mean": matched["mean"],
                    "aia_matched_std": matched["std"],
                    "accuracy_mean": acc["mean"],
                    "accuracy_std": acc["std"],
                    "trials": len(ours),
                }
            )
        spearman.setdefault(domain, {})[method] = _spearman(levels, means)
    return {"groups": summary_groups, "spearman": spearman, "error_rows": errors, "rows": len(rows)}, curves
