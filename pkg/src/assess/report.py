"""AssessmentReport 를 사람이 읽을 수 있는 텍스트로."""
from pathlib import Path
from typing import Dict, List

from src.assess.interrogation import AssessmentReport
from src.model.vocabulary import PalTuple
from src.pddl.domain import print_domain
from src.pddl.traces import write_query_log


def format_pal(pal: PalTuple) -> str:
    return f"(pal {pal.action.header()} {pal.atom} {pal.location.value})"


def _metric(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_report(report: AssessmentReport) -> str:
    """key: value 지표, 이어서 Γ_δ 와 고정된 모드를 s-expression 으로."""
    lines: List[str] = [
        "; assessment report",
        f"strategy: {report.strategy}",
        f"query_count: {report.query_count}",
        f"accuracy: {_metric(report.accuracy)}",
        f"initial_accuracy: {_metric(report.initial_accuracy)}",
        f"learned_models: {len(report.learned_models)}",
        f"gamma_delta_size: {len(report.gamma_delta)}",
        f"fixed_modes: {len(report.fixed_modes)}",
        "(gamma-delta",
    ]
    for pal in report.gamma_delta.ordered():
        provenance = " ".join(p.value for p in report.gamma_delta.provenance(pal))
        lines.append(f"  {format_pal(pal)} ({provenance})" if provenance else f"  {format_pal(pal)}")
    lines.append(")")
    lines.append("(fixed")
    for pal in sorted(report.fixed_modes, key=PalTuple.sort_key):
        lines.append(f"  {format_pal(pal)} {report.fixed_modes[pal].value}")
    lines.append(")")
    return "\n".join(lines) + "\n"


def save_report(report: AssessmentReport, out_dir: Path) -> Dict[str, Path]:
    """report.txt, queries.log, learned_model*.pddl 을 쓴다."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written: Dict[str, Path] = {}
    report_path = out_dir / "report.txt"
    report_path.write_text(write_report(report), encoding="utf-8")
    written["report"] = report_path
    log_path = out_dir / "queries.log"
    log_path.write_text(write_query_log(report.query_log), encoding="utf-8")
    written["queries"] = log_path
    for i, model in enumerate(report.learned_models):
        if not model.is_concrete:
            continue
        suffix = "" if i == 0 else f"_{i}"
        path = out_dir / f"learned_model{suffix}.pddl"
        path.write_text(print_domain(model), encoding="utf-8")
        written[f"model{suffix}"] = path
    return written
