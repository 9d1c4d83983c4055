"""평가 파이프라인 공통 예외 계층.

모든 예외는 `AssessmentError`를 상속하며, CLI가 기계 판독용 에러 레코드로
바꿀 수 있도록 고정된 `code`를 가진다.
"""
from typing import Any, Dict, Optional


class AssessmentError(Exception):
    """모든 도메인 에러의 기반 클래스."""

    code = "assessment-error"

    def to_record(self) -> Dict[str, Any]:
        return {"error": self.code, "message": str(self)}


class VocabularyError(AssessmentError):
    """선언되지 않은 술어/액션/타입/객체 참조, 잘못된 시그니처."""

    code = "vocabulary-error"


class IncomparableModelsError(AssessmentError):
    """서로 다른 어휘(vocabulary)의 모델을 비교하려 할 때."""

    code = "incomparable-models"


class ModelError(AssessmentError):
    """모델 불변식 위반 (예: <+,+> pa 값)."""

    code = "model-error"


class AbstractModelError(ModelError):
    """concrete 모델이 필요한 곳에 unknown 모드가 남아 있는 경우."""

    code = "abstract-model"


class PddlParseError(AssessmentError):
    """PDDL/트레이스 텍스트 구문 오류 (위치 포함)."""

    code = "parse-error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnsupportedFeatureError(AssessmentError):
    """지원하지 않는 PDDL requirement/구문."""

    code = "unsupported-feature"

    def __init__(self, keyword: str) -> None:
        self.keyword = keyword
        super().__init__(f"지원하지 않는 PDDL 기능: {keyword}")


class TraceAlternationError(AssessmentError):
    """state/action 교대 규칙을 어긴 트레이스."""

    code = "trace-alternation"


class GroundingError(AssessmentError):
    """타입/객체가 맞지 않는 grounding."""

    code = "grounding-error"


class SearchExhaustedError(AssessmentError):
    """탐색 노드 확장 한도 초과 (unsolvable과 구분)."""

    code = "resource-exhausted"

    def __init__(self, expansions: int) -> None:
        self.expansions = expansions
        super().__init__(f"expansion cap exceeded after {expansions} expansions")


class QueryFormatError(AssessmentError):
    """에이전트 객체 위에 grounding 되지 않은 질의."""

    code = "query-format"


class InfeasibleDriftError(AssessmentError):
    """요청한 drift 양을 만들 후보 pal-tuple이 부족한 경우."""

    code = "infeasible-drift"


class InconsistentObservationsError(AssessmentError):
    """관측 트레이스가 하나의 결정적 모델로 설명되지 않는 경우."""

    code = "inconsistent-observations"


class ContradictionError(AssessmentError):
    """모든 후보 모델이 sieve에서 제거된 경우."""

    code = "contradiction"


class NoTraceError(AssessmentError):
    """풀 수 없는 문제라 트레이스를 만들 수 없는 경우."""

    code = "no-trace"


class ConfigError(AssessmentError):
    """실험 설정 파일 검증 실패."""

    code = "config-error"
