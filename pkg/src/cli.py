import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from src.agent.drift import DriftMethod, DriftSpec, inject_drift
from src.agent.simulator import AgentSim, sample_random_states, select_trace_problem
from src.assess.interrogation import aia_baseline, daaisy
from src.assess.report import format_pal, save_report
from src.bench.harness import run_bench
from src.config.experiment import load_experiment_config
from src.config.settings import Settings
from src.core.errors import AssessmentError, IncomparableModelsError
from src.core.seeding import derive_seed
from src.model.domain import DomainModel, diff_pal_tuples
from src.pddl.domain import parse_domain, print_domain
from src.pddl.problem import ProblemInstance, parse_problem
from src.pddl.traces import read_trace, write_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSESSMENT_ERROR = 1
EXIT_IO_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="drift 된 에이전트 모델의 차등 평가 (DAAISy)")
    parser.add_argument("--verbose", action="store_true", help="DEBUG 로그 출력")
    sub = parser.add_subparsers(dest="target", required=True)

    assess = sub.add_parser("assess", help="M_init 과 관측 트레이스로 에이전트 모델을 다시 배운다")
    assess.add_argument("--domain", type=Path, required=True, help="에이전트(숨겨진) 도메인 PDDL")
    assess.add_argument("--problem", type=Path, nargs="+", required=True, help="문제 PDDL (객체 집합 제공)")
    source = assess.add_mutually_exclusive_group(required=True)
    source.add_argument("--trace", type=Path, help="관측 트레이스 파일")
    source.add_argument("--generate-trace", action="store_true", help="숨겨진 모델로 최적 트레이스 생성")
    assess.add_argument("--init", type=Path, help="명시적 M_init 도메인 PDDL (없으면 drift 주입)")
    assess.add_argument("--drift-amount", type=float, default=0.0, help="drift 비율 [0, 1] (기본 0)")
    assess.add_argument("--drift-method", type=DriftMethod, choices=list(DriftMethod), default=DriftMethod.DROP)
    assess.add_argument("--seed", type=int, default=0)
    assess.add_argument("--triplets", type=int, default=10, help="생성 트레이스의 triplet 수 (기본 10)")
    assess.add_argument("--s-size", type=int, help="랜덤 상태 집합 𝒮 크기")
    assess.add_argument("--expansion-cap", type=int, help="planner 확장 한도")
    assess.add_argument("--out-dir", type=Path, help="산출물 디렉토리")
    assess.add_argument("--aia", action="store_true", help="AIA 기준선도 함께 실행")

    bench = sub.add_parser("bench", help="drift sweep 실험")
    bench.add_argument("--config", type=Path, required=True, help="실험 설정 JSON")
    bench.add_argument("--out-dir", type=Path, help="결과 디렉토리")

    diff = sub.add_parser("diff", help="두 도메인 모델의 pal-tuple 차이")
    diff.add_argument("model_a", type=Path)
    diff.add_argument("model_b", type=Path)

    trace = sub.add_parser("trace", help="숨겨진 모델로 최적 관측 트레이스를 생성")
    trace.add_argument("--domain", type=Path, required=True)
    trace.add_argument("--problem", type=Path, nargs="+", required=True)
    trace.add_argument("--triplets", type=int, default=10)
    trace.add_argument("--seed", type=int, default=0)
    trace.add_argument("--expansion-cap", type=int)
    trace.add_argument("--out", type=Path, help="출력 파일 (없으면 stdout)")

    drift = sub.add_parser("drift", help="drift 를 주입한 M_init 도메인을 생성")
    drift.add_argument("--domain", type=Path, required=True)
    drift.add_argument("--drift-amount", type=float, required=True)
    drift.add_argument("--drift-method", type=DriftMethod, choices=list(DriftMethod), default=DriftMethod.DROP)
    drift.add_argument("--seed", type=int, default=0)
    drift.add_argument("--out", type=Path, help="출력 파일 (없으면 stdout)")

    return parser


def _read_domain(path: Path, settings: Settings) -> DomainModel:
    path = settings.resolve_corpus_path(path)
    return parse_domain(path.read_text(encoding="utf-8"), settings.distinct_bindings)


def _read_problems(paths: Sequence[Path], model: DomainModel, settings: Settings) -> List[ProblemInstance]:
    return [
        parse_problem(settings.resolve_corpus_path(p).read_text(encoding="utf-8"), model)
        for p in paths
    ]


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    print(f"✅ 저장: {out}")


def cmd_assess(args: argparse.Namespace, settings: Settings) -> int:
    hidden = _read_domain(args.domain, settings)
    problems = _read_problems(args.problem, hidden, settings)
    scout = AgentSim.from_problems(hidden, problems, expansion_cap=settings.expansion_cap)

    if args.generate_trace:
        problem, trace = select_trace_problem(scout, problems, args.triplets, derive_seed(args.seed, "trace"))
        agent = AgentSim.from_problems(hidden, [problem], expansion_cap=settings.expansion_cap)
    else:
        trace = read_trace(args.trace.read_text(encoding="utf-8"), hidden, scout.object_types)
        agent = scout

    if args.init is not None:
        m_init = _read_domain(args.init, settings)
        if not m_init.vocabulary.same_as(hidden.vocabulary):
            raise IncomparableModelsError(f"{args.init}: 에이전트 도메인과 어휘가 다름")
    else:
        m_init = inject_drift(hidden, DriftSpec(args.drift_amount, args.drift_method, derive_seed(args.seed, "drift")))

    states = sample_random_states(agent, settings.s_size, derive_seed(args.seed, "states"), settings.walk_length)
    print(f">>> [안내] 관측 {len(trace)} triplets, 𝒮 {len(states)}개 상태로 평가를 시작합니다.")

    report = daaisy(
        m_init,
        [trace],
        agent,
        states,
        ground_truth=hidden,
        expansion_cap=settings.diagnosis_cap,
        exploration_limit=settings.exploration_limit,
    )
    out_dir = args.out_dir or settings.out_dir / f"assess-{hidden.name}-{args.seed}"
    save_report(report, out_dir)
    print(f"✅ DAAISy: 질의 {report.query_count}개, Γ_δ {len(report.gamma_delta)}개, 정확도 {report.accuracy:.3f}")

    if args.aia:
        baseline = aia_baseline(
            agent, hidden.vocabulary, states, ground_truth=hidden, exploration_limit=settings.exploration_limit, name=hidden.name
        )
        save_report(baseline, out_dir / "aia")
        matched = baseline.matched_query_count(report.accuracy)
        print(f"✅ AIA: 질의 {baseline.query_count}개 (같은 정확도까지 {matched}개), 정확도 {baseline.accuracy:.3f}")
    print(f"결과 디렉토리: {out_dir}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, settings: Settings) -> int:
    config = load_experiment_config(args.config, settings.corpus_dir)
    out_dir = args.out_dir or settings.out_dir / args.config.stem
    rows = run_bench(config, out_dir, record_timing=settings.record_timing)
    errors = sum(1 for r in rows if r.error)
    print(f"✅ 결과 {len(rows)}행 (에러 {errors}행): {out_dir}")
    return EXIT_OK


def cmd_diff(args: argparse.Namespace, settings: Settings) -> int:
    model_a = _read_domain(args.model_a, settings)
    model_b = _read_domain(args.model_b, settings)
    differing = diff_pal_tuples(model_a, model_b)
    for pal, mode_a, mode_b in differing:
        print(f"{format_pal(pal)} {mode_a.value} {mode_b.value}")
    print(f"delta: {len(differing)}")
    return EXIT_OK


def cmd_trace(args: argparse.Namespace, settings: Settings) -> int:
    hidden = _read_domain(args.domain, settings)
    problems = _read_problems(args.problem, hidden, settings)
    cap = args.expansion_cap or settings.expansion_cap
    agent = AgentSim.from_problems(hidden, problems, expansion_cap=cap)
    _, trace = select_trace_problem(agent, problems, args.triplets, derive_seed(args.seed, "trace"))
    _emit(write_trace(trace), args.out)
    return EXIT_OK


def cmd_drift(args: argparse.Namespace, settings: Settings) -> int:
    hidden = _read_domain(args.domain, settings)
    drifted = inject_drift(hidden, DriftSpec(args.drift_amount, args.drift_method, derive_seed(args.seed, "drift")))
    _emit(print_domain(drifted), args.out)
    return EXIT_OK


COMMANDS = {
    "assess": cmd_assess,
    "bench": cmd_bench,
    "diff": cmd_diff,
    "trace": cmd_trace,
    "drift": cmd_drift,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = Settings.from_env()
    if getattr(args, "s_size", None) is not None or getattr(args, "expansion_cap", None) is not None:
        settings = settings.with_overrides(s_size=args.s_size, expansion_cap=args.expansion_cap)
    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(message)s",
    )

    try:
        return COMMANDS[args.target](args, settings)
    except AssessmentError as exc:
        logger.debug("명령 실패", exc_info=True)
        print(json.dumps(exc.to_record(), ensure_ascii=False), file=sys.stderr)
        return EXIT_ASSESSMENT_ERROR
    except OSError as exc:
        print(json.dumps({"error": "io-error", "message": str(exc)}, ensure_ascii=False), file=sys.stderr)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
