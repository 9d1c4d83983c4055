"""PDDL 문제 파일 <-> ProblemInstance."""
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Tuple

from src.core.errors import UnsupportedFeatureError, VocabularyError
from src.model.domain import DomainModel
from src.model.ground import Atom, State, canonical_state
from src.model.vocabulary import Vocabulary
from src.pddl.domain import SUPPORTED_REQUIREMENTS
from src.pddl.sexpr import SExpr, expect_list, expect_token, parse_sexprs, parse_typed_list


@dataclass(frozen=True, order=True)
class GroundLiteral:
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"(not {self.atom})"


@dataclass(frozen=True)
class ProblemInstance:
    name: str
    domain_name: str
    objects: Tuple[Tuple[str, str], ...]
    initial_state: State
    goal: FrozenSet[GroundLiteral] = frozenset()

    @property
    def object_types(self) -> Dict[str, str]:
        return dict(self.objects)


def check_atom(vocabulary: Vocabulary, objects: Mapping[str, str], atom: Atom) -> None:
    """술어/객체 선언과 타입 호환성 확인."""
    predicate = vocabulary.predicate(atom.predicate)
    if len(atom.args) != predicate.arity:
        raise VocabularyError(f"{atom}: 인자 {len(atom.args)}개, 선언은 {predicate.arity}개")
    for obj, arg_type in zip(atom.args, predicate.parameter_types):
        if obj not in objects:
            raise VocabularyError(f"{atom}: 선언되지 않은 객체 {obj}")
        if not vocabulary.is_subtype(objects[obj], arg_type):
            raise VocabularyError(f"{atom}: {obj} - {objects[obj]} 는 {arg_type} 가 아님")


def _atom_of(expr: SExpr) -> Atom:
    if not expr.head:
        raise expr.error("원자식이 필요함")
    return Atom(expr.head, tuple(expect_token(a, expr.head, expr) for a in expr.tail))


def _goal_literals(node, at: SExpr) -> List[GroundLiteral]:
    expr = expect_list(node, ":goal", at)
    if not expr.items:
        return []
    if expr.head == "and":
        out: List[GroundLiteral] = []
        for child in expr.tail:
            out.extend(_goal_literals(child, expr))
        return out
    if expr.head == "not":
        return [GroundLiteral(_atom_of(expect_list(expr.tail[0], "not", expr)), False)]
    if expr.head in ("or", "imply", "forall", "exists", "="):
        raise UnsupportedFeatureError(expr.head)
    return [GroundLiteral(_atom_of(expr), True)]


def parse_problem(text: str, model: DomainModel) -> ProblemInstance:
    vocab = model.vocabulary
    nodes = parse_sexprs(text)
    if len(nodes) != 1 or not isinstance(nodes[0], SExpr) or nodes[0].head != "define":
        at = nodes[0] if nodes and isinstance(nodes[0], SExpr) else SExpr([], 1, 1)
        raise at.error("(define (problem ...) ...) 형식이 아님")
    root = nodes[0]
    name, domain_name = "problem", model.name
    objects: List[Tuple[str, str]] = []
    init: List[Atom] = []
    goal: List[GroundLiteral] = []
    for node in root.tail:
        section = expect_list(node, "define", root)
        head = section.head
        if head == "problem":
            name = expect_token(section.tail[0], "problem", section)
        elif head == ":domain":
            domain_name = expect_token(section.tail[0], ":domain", section)
        elif head == ":requirements":
            for req in section.tail:
                keyword = expect_token(req, ":requirements", section)
                if keyword not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedFeatureError(keyword)
        elif head == ":objects":
            objects.extend(parse_typed_list(section.tail, section))
        elif head == ":init":
            for child in section.tail:
                expr = expect_list(child, ":init", section)
                if expr.head in ("=", "not"):
                    raise UnsupportedFeatureError(expr.head)
                init.append(_atom_of(expr))
        elif head == ":goal":
            for child in section.tail:
                goal.extend(_goal_literals(child, section))
        else:
            raise UnsupportedFeatureError(head or "nested-list")

    object_types: Dict[str, str] = {}
    for obj, obj_type in objects:
        if obj in object_types:
            raise VocabularyError(f"객체 {obj} 가 두 번 선언됨")
        if not vocab.known_type(obj_type):
            raise VocabularyError(f"객체 {obj}: 선언되지 않은 타입 {obj_type}")
        object_types[obj] = obj_type
    for atom in init:
        check_atom(vocab, object_types, atom)
    for lit in goal:
        check_atom(vocab, object_types, lit.atom)
    return ProblemInstance(
        name=name,
        domain_name=domain_name,
        objects=tuple(sorted(object_types.items())),
        initial_state=frozenset(init),
        goal=frozenset(goal),
    )


def format_objects(objects: Iterable[Tuple[str, str]]) -> str:
    return " ".join(f"{obj} - {obj_type}" for obj, obj_type in objects)


def format_state(state: State) -> str:
    return " ".join(str(a) for a in canonical_state(state))


def print_problem(problem: ProblemInstance) -> str:
    goal = sorted(problem.goal)
    goal_text = "(and " + " ".join(str(g) for g in goal) + ")" if goal else "(and)"
    lines = [
        f"(define (problem {problem.name})",
        f"  (:domain {problem.domain_name})",
        f"  (:objects {format_objects(problem.objects)})",
        "  (:init",
    ]
    lines.extend(f"    {atom}" for atom in canonical_state(problem.initial_state))
    lines.append("  )")
    lines.append(f"  (:goal {goal_text})")
    lines.append(")")
    return "\n".join(lines) + "\n"
