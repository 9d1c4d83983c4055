"""벤치 실험 설정 (JSON) 스키마."""
import json
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from src.agent.drift import DriftMethod
from src.core.errors import ConfigError


class DomainEntry(BaseModel):
    name: str
    domain: Path
    problems: List[Path] = Field(min_length=1)


class ExperimentConfig(BaseModel):
    domains: List[DomainEntry] = Field(min_length=1)
    drift_levels: List[float] = Field(default_factory=lambda: [round(0.1 * i, 1) for i in range(1, 11)])
    drift_methods: List[DriftMethod] = Field(default_factory=lambda: [DriftMethod.DROP, DriftMethod.ADD])
    trials: int = Field(6, ge=1)
    triplets: int = Field(10, ge=1)
    s_size: int = Field(20, ge=1)
    walk_length: int = Field(12, ge=0)
    master_seed: int = 0
    expansion_cap: Optional[int] = Field(200_000, ge=1)
    diagnosis_cap: Optional[int] = Field(50_000, ge=1)
    exploration_limit: int = Field(40, ge=1)
    distinct_bindings: bool = False
    run_aia: bool = True
    workers: int = Field(1, ge=1)

    @field_validator("drift_levels")
    @classmethod
    def _levels_in_range(cls, levels: List[float]) -> List[float]:
        if not levels:
            raise ValueError("drift_levels 가 비어 있음")
        for level in levels:
            if not 0.0 < level <= 1.0:
                raise ValueError(f"drift level 은 (0, 1] 범위여야 함: {level}")
        return levels


def _resolve(path: Path, base_dir: Path, corpus_dir: Optional[Path]) -> Path:
    if path.is_absolute():
        return path
    candidate = base_dir / path
    if candidate.exists() or corpus_dir is None:
        return candidate
    return corpus_dir / path


def load_experiment_config(path: Path, corpus_dir: Optional[Path] = None) -> ExperimentConfig:
    """JSON 설정 로드. 상대 경로는 설정 파일 위치, 다음으로 코퍼스 디렉토리 기준."""
    with path.open("r", encoding="utf-8") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: JSON 형식 오류 ({exc})") from exc
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ConfigError(f"{path}: {where}: {first['msg']}") from exc
    base_dir = path.parent
    for entry in config.domains:
        entry.domain = _resolve(entry.domain, base_dir, corpus_dir)
        entry.problems = [_resolve(p, base_dir, corpus_dir) for p in entry.problems]
    return config
