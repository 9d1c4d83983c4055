"""환경 변수(.env 포함) 기반 런타임 설정."""
import copy
import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


def _env_flag(name: str, default: bool = False) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass
class Settings:
    """환경 변수 기반 런타임 설정."""

    # 번들 벤치마크 코퍼스 / 산출물 경로
    corpus_dir: Path = field(default_factory=lambda: Path(os.getenv("DRIFT_CORPUS_DIR", "data/corpus")))
    out_dir: Path = field(default_factory=lambda: Path(os.getenv("DRIFT_OUT_DIR", "data/runs")))

    # 탐색 한도 (트레이스 생성 / reduced 진단)
    expansion_cap: int = field(default_factory=lambda: _env_int("DRIFT_EXPANSION_CAP", 200_000))
    diagnosis_cap: int = field(default_factory=lambda: _env_int("DRIFT_DIAGNOSIS_CAP", 50_000))

    # 랜덤 상태 집합 𝒮
    s_size: int = field(default_factory=lambda: _env_int("DRIFT_S_SIZE", 20))
    walk_length: int = field(default_factory=lambda: _env_int("DRIFT_WALK_LENGTH", 12))

    exploration_limit: int = field(default_factory=lambda: _env_int("DRIFT_EXPLORATION_LIMIT", 40))
    distinct_bindings: bool = field(default_factory=lambda: _env_flag("DRIFT_DISTINCT_BINDINGS"))
    log_level: str = field(default_factory=lambda: os.getenv("DRIFT_LOG_LEVEL", "INFO"))
    record_timing: bool = field(default_factory=lambda: _env_flag("DRIFT_RECORD_TIMING"))

    @classmethod
    def from_env(cls) -> "Settings":
        """dotenv -> 환경 변수 값을 로드."""
        return cls()

    def with_overrides(self, **overrides) -> "Settings":
        """None 이 아닌 값만 덮어쓴 사본."""
        new_settings = copy.copy(self)
        for key, value in overrides.items():
            if value is None:
                continue
            if not hasattr(new_settings, key):
                raise AttributeError(f"알 수 없는 설정: {key}")
            setattr(new_settings, key, value)
        return new_settings

    def resolve_corpus_path(self, path: Path) -> Path:
        """존재하지 않는 상대 경로는 코퍼스 디렉토리 기준으로 다시 찾는다."""
        if path.exists() or path.is_absolute():
            return path
        candidate = self.corpus_dir / path
        return candidate if candidate.exists() else path
