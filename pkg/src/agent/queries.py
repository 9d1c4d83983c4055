from dataclasses import dataclass
from typing import Tuple

from src.model.ground import GroundAction, State


@dataclass(frozen=True)
class Query:
    """<시작 상태, plan> 질의."""

    start_state: State
    plan: Tuple[GroundAction, ...] = ()


@dataclass(frozen=True)
class QueryResponse:
    """실행에 성공한 prefix 길이 n_f 와 그 결과 상태 s_f."""

    n_f: int
    s_f: State
