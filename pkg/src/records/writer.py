"""결과 행을 CSV 로, 요약을 JSON 으로 적재."""
import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List

from src.records.models import ResultRow


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


class ResultWriter:
    """실행 디렉토리 아래에 results.csv / curves.csv / summary.json 을 쓴다."""

    def __init__(self, base_path: Path = Path("data/runs")) -> None:
        self.base_path = base_path
        self.base_path.mkdir(parents=True, exist_ok=True)
        self.results_path = self.base_path / "results.csv"
        self.curves_path = self.base_path / "curves.csv"
        self.summary_path = self.base_path / "summary.json"

    def write_rows(self, rows: Iterable[ResultRow]) -> Path:
        ordered = sorted(rows, key=ResultRow.sort_key)
        columns = ResultRow.columns()
        with self.results_path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in ordered:
                data = row.to_dict()
                writer.writerow([_cell(data[c]) for c in columns])
        return self.results_path

    def write_curves(self, points: List[Dict[str, Any]], columns: List[str]) -> Path:
        with self.curves_path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for point in points:
                writer.writerow([_cell(point.get(c)) for c in columns])
        return self.curves_path

    def write_summary(self, summary: Dict[str, Any]) -> Path:
        with self.summary_path.open("w", encoding="utf-8") as f:
            json.dump(summary, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")
        return self.summary_path
