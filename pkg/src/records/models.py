from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional


@dataclass
class ResultRow:
    """한 (도메인, drift level, method, trial, strategy) 실행 결과."""

    domain: str
    level: float
    method: str
    trial: int
    seed: int
    strategy: str  # daaisy / aia
    n_pals: int = 0
    query_count: Optional[int] = None
    matched_query_count: Optional[int] = None  # AIA 가 DAAISy 정확도에 도달한 시점의 질의 수
    accuracy: Optional[float] = None
    initial_accuracy: Optional[float] = None
    gamma_size: Optional[int] = None
    learned_models: Optional[int] = None
    duration: Optional[float] = None  # DRIFT_RECORD_TIMING 일 때만
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def sort_key(self):
        return (self.domain, self.level, self.method, self.trial, self.strategy)

    @classmethod
    def columns(cls) -> List[str]:
        return [f.name for f in fields(cls)]
