from src.core.errors import IncomparableModelsError, VocabularyError
from src.model.domain import DomainModel
from src.model.ground import ObservationTrace
from src.model.semantics import triplet_consistent


def validate_trace(model: DomainModel, trace: ObservationTrace) -> bool:
    """트레이스의 모든 action triplet 이 모델과 일관한지."""
    vocab = model.vocabulary
    for action in trace.actions:
        if action.name not in vocab.action_by_name:
            raise IncomparableModelsError(f"{model.name} 에 없는 액션: {action.name}")
    for state in trace.states:
        for atom in state:
            if atom.predicate not in vocab.predicate_by_name:
                raise IncomparableModelsError(f"{model.name} 에 없는 술어: {atom.predicate}")
    try:
        return all(triplet_consistent(model, t) for t in trace.triplets())
    except VocabularyError as exc:
        raise IncomparableModelsError(str(exc)) from exc
