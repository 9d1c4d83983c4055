from src.model.domain import DomainModel, model_diff


def accuracy(model: DomainModel, reference: DomainModel) -> float:
    """1 - diff/nPals. unknown 모드는 불일치로 센다."""
    n = reference.vocabulary.n_pals
    if n == 0:
        return 1.0
    return 1.0 - model_diff(model, reference) / n
