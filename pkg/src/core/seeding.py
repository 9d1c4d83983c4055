"""시드 파생 유틸."""
import hashlib
from typing import Iterable


def make_id(parts: Iterable[object]) -> str:
    """여러 값을 합쳐 안정적인 해시 ID 생성."""
    joined = "|".join(str(p) for p in parts)
    return hashlib.sha1(joined.encode("utf-8")).hexdigest()


def derive_seed(*parts: object) -> int:
    """마스터 시드와 식별자들로부터 재현 가능한 하위 시드를 만든다."""
    return int(make_id(parts)[:15], 16)
