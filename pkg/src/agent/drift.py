"""pal-tuple 모드를 무작위로 뒤집어 합성 M_init 을 만든다."""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np

from src.core.errors import InfeasibleDriftError, ModelError
from src.model.domain import DomainModel
from src.model.modes import Mode, is_legal_pair
from src.model.vocabulary import Location

logger = logging.getLogger(__name__)


class DriftMethod(str, Enum):
    DROP = "drop"
    ADD = "add"
    MIXED = "mixed"


@dataclass(frozen=True)
class DriftSpec:
    amount: float
    method: DriftMethod = DriftMethod.DROP
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.amount <= 1.0:
            raise InfeasibleDriftError(f"drift 양은 [0, 1] 범위여야 함: {self.amount}")

    def flip_count(self, n_pals: int) -> int:
        # 0.5 는 올림 (파이썬 round 의 banker's rounding 을 쓰지 않음)
        return int(math.floor(self.amount * n_pals + 0.5))


def inject_drift(m_star: DomainModel, spec: DriftSpec) -> DomainModel:
    """정확히 round(amount * nPals) 개의 pal-tuple 모드를 바꾼 concrete 모델."""
    if not m_star.is_concrete:
        raise ModelError("drift 주입에는 concrete 모델이 필요함")
    vocab = m_star.vocabulary
    k = spec.flip_count(vocab.n_pals)
    modes = list(m_star.modes)
    if spec.method is DriftMethod.DROP:
        candidates = [i for i, m in enumerate(modes) if m is not Mode.ABSENT]
    elif spec.method is DriftMethod.ADD:
        candidates = [i for i, m in enumerate(modes) if m is Mode.ABSENT]
    else:
        candidates = list(range(len(modes)))
    if k > len(candidates):
        raise InfeasibleDriftError(
            f"{m_star.name}: {spec.method.value} drift {k}개 요청, 후보는 {len(candidates)}개"
        )

    rng = np.random.default_rng(spec.seed)
    chosen: List[int] = [candidates[int(i)] for i in rng.permutation(len(candidates))[:k]]
    pals = vocab.pal_tuples
    for idx in chosen:
        if modes[idx] is not Mode.ABSENT:
            modes[idx] = Mode.ABSENT
            continue
        partner = vocab.index[pals[idx].partner()]
        if pals[idx].location is Location.PRE:
            options = [m for m in (Mode.PLUS, Mode.MINUS) if is_legal_pair(m, modes[partner])]
        else:
            options = [m for m in (Mode.PLUS, Mode.MINUS) if is_legal_pair(modes[partner], m)]
        modes[idx] = options[int(rng.integers(len(options)))]
    drifted = DomainModel(vocab, tuple(modes), m_star.name)
    logger.debug("drift %s amount=%.2f seed=%d: %d개 변경", spec.method.value, spec.amount, spec.seed, k)
    return drifted
