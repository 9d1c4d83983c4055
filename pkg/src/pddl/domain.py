"""PDDL 도메인 <-> DomainModel 변환.

지원 범위는 :strips, :typing, :negative-preconditions 이다. 그 밖의 requirement 나
구문은 조용히 버리지 않고 UnsupportedFeatureError 로 거부한다.
"""
import logging
from typing import Dict, List, Tuple

from src.core.errors import AbstractModelError, ModelError, UnsupportedFeatureError, VocabularyError
from src.model.domain import DomainModel
from src.model.modes import Mode
from src.model.vocabulary import (
    ROOT_TYPE,
    ActionSignature,
    LiftedAtom,
    Location,
    PalTuple,
    PredicateSignature,
    Vocabulary,
)
from src.pddl.sexpr import SExpr, expect_list, expect_token, parse_sexprs, parse_typed_list

logger = logging.getLogger(__name__)

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":negative-preconditions"})
_UNSUPPORTED_CONNECTIVES = frozenset(
    {"or", "imply", "forall", "exists", "when", "=", "increase", "decrease", "assign", "either"}
)

# (atom 이름, 인자, 양/음, 위치)
_RawLiteral = Tuple[str, Tuple[str, ...], bool, SExpr]


def _check_requirements(section: SExpr) -> None:
    for req in section.tail:
        keyword = expect_token(req, ":requirements", section)
        if keyword not in SUPPORTED_REQUIREMENTS:
            raise UnsupportedFeatureError(keyword)


def _parse_literals(node, at: SExpr) -> List[_RawLiteral]:
    """conjunction 을 (술어, 인자, 극성) 목록으로 평탄화."""
    expr = expect_list(node, "literal", at)
    if not expr.items:
        return []
    head = expr.head
    if head == "and":
        out: List[_RawLiteral] = []
        for child in expr.tail:
            out.extend(_parse_literals(child, expr))
        return out
    if head == "not":
        if len(expr.tail) != 1:
            raise expr.error("not 은 원자식 하나만 받음")
        inner = expect_list(expr.tail[0], "not", expr)
        if inner.head in ("and", "not") or inner.head in _UNSUPPORTED_CONNECTIVES:
            raise UnsupportedFeatureError(f"not {inner.head}")
        return [(inner.head, _atom_args(inner), False, inner)]
    if head in _UNSUPPORTED_CONNECTIVES or not head:
        raise UnsupportedFeatureError(head or "nested-list")
    return [(head, _atom_args(expr), True, expr)]


def _atom_args(expr: SExpr) -> Tuple[str, ...]:
    return tuple(expect_token(a, expr.head, expr) for a in expr.tail)


class _DomainBuilder:
    def __init__(self) -> None:
        self.name = "domain"
        self.hierarchy: Dict[str, str] = {}
        self.predicates: List[PredicateSignature] = []
        self.actions: List[Tuple[ActionSignature, SExpr, object, object]] = []

    def add_types(self, section: SExpr) -> None:
        for child, parent in parse_typed_list(section.tail, section):
            if child == ROOT_TYPE:
                continue
            self.hierarchy[child] = parent

    def add_predicates(self, section: SExpr) -> None:
        for node in section.tail:
            expr = expect_list(node, ":predicates", section)
            typed = parse_typed_list(expr.tail, expr)
            for var, _ in typed:
                if not var.startswith("?"):
                    raise expr.error(f"술어 인자는 변수여야 함: {var}")
            self.predicates.append(PredicateSignature(expr.head, tuple(t for _, t in typed)))

    def add_action(self, section: SExpr) -> None:
        items = section.tail
        name = expect_token(items[0], ":action", section) if items else ""
        if not name:
            raise section.error("액션 이름이 없음")
        fields: Dict[str, object] = {}
        i = 1
        while i < len(items):
            key = expect_token(items[i], name, section)
            if key not in (":parameters", ":precondition", ":effect"):
                raise UnsupportedFeatureError(key)
            if i + 1 >= len(items):
                raise section.error(f"{key} 값이 없음")
            fields[key] = items[i + 1]
            i += 2
        params_node = fields.get(":parameters", SExpr([], section.line, section.column))
        params_expr = expect_list(params_node, ":parameters", section)
        typed = parse_typed_list(params_expr.items, params_expr)
        signature = ActionSignature(name, tuple(p for p, _ in typed), tuple(t for _, t in typed))
        self.actions.append((signature, section, fields.get(":precondition"), fields.get(":effect")))


def parse_domain(text: str, distinct_bindings: bool = False) -> DomainModel:
    """PDDL 도메인 텍스트를 concrete DomainModel 로 변환.

    언급되지 않은 pal-tuple 은 모두 0(absent) 모드가 된다.
    """
    nodes = parse_sexprs(text)
    if len(nodes) != 1 or not isinstance(nodes[0], SExpr) or nodes[0].head != "define":
        at = nodes[0] if nodes and isinstance(nodes[0], SExpr) else SExpr([], 1, 1)
        raise at.error("(define (domain ...) ...) 형식이 아님")
    root = nodes[0]
    builder = _DomainBuilder()
    for node in root.tail:
        section = expect_list(node, "define", root)
        head = section.head
        if head == "domain":
            builder.name = expect_token(section.tail[0], "domain", section) if section.tail else "domain"
        elif head == ":requirements":
            _check_requirements(section)
        elif head == ":types":
            builder.add_types(section)
        elif head == ":predicates":
            builder.add_predicates(section)
        elif head == ":action":
            builder.add_action(section)
        else:
            raise UnsupportedFeatureError(head or "nested-list")

    vocabulary = Vocabulary.build(
        builder.predicates,
        [sig for sig, _, _, _ in builder.actions],
        builder.hierarchy,
        distinct_bindings=distinct_bindings,
    )
    assignments: Dict[PalTuple, Mode] = {}
    for signature, section, pre_node, eff_node in builder.actions:
        for location, node in ((Location.PRE, pre_node), (Location.EFF, eff_node)):
            if node is None:
                continue
            for pred_name, args, positive, at in _parse_literals(node, section):
                pal = _resolve_pal(vocabulary, signature, pred_name, args, location, at)
                mode = Mode.PLUS if positive else Mode.MINUS
                previous = assignments.get(pal)
                if previous is not None and previous is not mode:
                    raise ModelError(f"{signature.name}: {pal.atom} {location.value} 가 +와 - 로 동시에 선언됨")
                assignments[pal] = mode
    model = DomainModel.from_assignments(vocabulary, assignments, name=builder.name)
    logger.debug("도메인 %s 파싱: pal-tuple %d개", model.name, vocabulary.n_pals)
    return model


def _resolve_pal(
    vocabulary: Vocabulary,
    signature: ActionSignature,
    pred_name: str,
    args: Tuple[str, ...],
    location: Location,
    at: SExpr,
) -> PalTuple:
    predicate = vocabulary.predicate_by_name.get(pred_name)
    if predicate is None:
        raise VocabularyError(f"선언되지 않은 술어 {pred_name} (line {at.line}, column {at.column})")
    if len(args) != predicate.arity:
        raise VocabularyError(f"{pred_name}: 인자 {len(args)}개, 선언은 {predicate.arity}개 (line {at.line})")
    for arg in args:
        if not arg.startswith("?"):
            raise UnsupportedFeatureError(":constants")
        if arg not in signature.parameter_names:
            raise VocabularyError(f"{signature.name}: 선언되지 않은 파라미터 {arg} (line {at.line})")
    pal = PalTuple(LiftedAtom(predicate, args), signature, location)
    if pal not in vocabulary.index:
        raise VocabularyError(
            f"{signature.name}: {pal.atom} 는 허용된 lifted instantiation 이 아님 (line {at.line})"
        )
    return pal


def _format_typed(names: List[str], types: List[str]) -> str:
    return " ".join(f"{n} - {t}" for n, t in zip(names, types))


def _format_literals(literals: List[str], indent: str) -> str:
    if not literals:
        return "(and)"
    body = "\n".join(f"{indent}  {lit}" for lit in literals)
    return f"(and\n{body}\n{indent})"


def print_domain(model: DomainModel) -> str:
    """정규 PDDL 텍스트. 같은 모델이면 항상 같은 바이트열을 낸다."""
    if not model.is_concrete:
        raise AbstractModelError(f"{model.name}: unknown 모드가 있는 모델은 PDDL 로 쓸 수 없음")
    vocab = model.vocabulary
    requirements = [":strips"]
    if vocab.type_hierarchy:
        requirements.append(":typing")
    if any(m is Mode.MINUS for pal, m in zip(model.pal_tuples, model.modes) if pal.location is Location.PRE):
        requirements.append(":negative-preconditions")

    lines = [f"(define (domain {model.name})", f"  (:requirements {' '.join(requirements)})"]
    if vocab.type_hierarchy:
        by_parent: Dict[str, List[str]] = {}
        for child, parent in vocab.type_hierarchy:
            by_parent.setdefault(parent, []).append(child)
        groups = " ".join(f"{' '.join(sorted(children))} - {parent}" for parent, children in sorted(by_parent.items()))
        lines.append(f"  (:types {groups})")
    lines.append("  (:predicates")
    for pred in vocab.predicates:
        names = [f"?x{i + 1}" for i in range(pred.arity)]
        params = _format_typed(names, list(pred.parameter_types))
        lines.append(f"    ({pred.name}{' ' + params if params else ''})")
    lines.append("  )")

    for action in vocab.actions:
        pre: List[str] = []
        eff: List[str] = []
        for atom, pre_mode, eff_mode in model.action_literals[action.name]:
            for mode, bucket in ((pre_mode, pre), (eff_mode, eff)):
                if mode is Mode.PLUS:
                    bucket.append(str(atom))
                elif mode is Mode.MINUS:
                    bucket.append(f"(not {atom})")
        params = _format_typed(list(action.parameter_names), list(action.parameter_types))
        lines.append(f"  (:action {action.name}")
        lines.append(f"    :parameters ({params})")
        lines.append(f"    :precondition {_format_literals(pre, '    ')}")
        lines.append(f"    :effect {_format_literals(eff, '    ')}")
        lines.append("  )")
    lines.append(")")
    return "\n".join(lines) + "\n"
