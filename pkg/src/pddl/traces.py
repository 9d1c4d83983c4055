"""관측 트레이스와 질의 로그의 줄 단위 s-expression 포맷.

트레이스:
    (objects rover1 - rover waypoint1 - waypoint)
    (state (at rover1 waypoint1) ...)
    (action (navigate rover1 waypoint1 waypoint2))
    (state ...)

질의 로그 (한 줄에 하나):
    (query (state ...) (plan (a x) ...) (response 1 (state ...)))
"""
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.agent.queries import Query, QueryResponse
from src.core.errors import TraceAlternationError, VocabularyError
from src.model.domain import DomainModel
from src.model.ground import Atom, GroundAction, ObservationTrace, State
from src.model.vocabulary import Vocabulary
from src.pddl.problem import check_atom, format_objects, format_state
from src.pddl.sexpr import SExpr, expect_list, expect_token, parse_sexprs, parse_typed_list

logger = logging.getLogger(__name__)


def _atom(expr: SExpr) -> Atom:
    if not expr.head:
        raise expr.error("원자식이 필요함")
    return Atom(expr.head, tuple(expect_token(a, expr.head, expr) for a in expr.tail))


def _state(expr: SExpr, vocab: Vocabulary, objects: Optional[Dict[str, str]]) -> State:
    atoms = []
    for child in expr.tail:
        atom = _atom(expect_list(child, "state", expr))
        if objects is not None:
            check_atom(vocab, objects, atom)
        else:
            predicate = vocab.predicate(atom.predicate)
            if len(atom.args) != predicate.arity:
                raise VocabularyError(f"{atom}: 인자 개수가 선언과 다름")
        atoms.append(atom)
    return frozenset(atoms)


def _action(expr: SExpr, vocab: Vocabulary, objects: Optional[Dict[str, str]]) -> GroundAction:
    inner = _atom(expect_list(expr.tail[0], "action", expr)) if expr.tail else None
    if inner is None:
        raise expr.error("action 레코드가 비어 있음")
    action = GroundAction(inner.predicate, inner.args)
    check_ground_action(vocab, objects, action)
    return action


def check_ground_action(vocab: Vocabulary, objects: Optional[Dict[str, str]], action: GroundAction) -> None:
    signature = vocab.action(action.name)
    if len(action.args) != signature.arity:
        raise VocabularyError(f"{action}: 인자 {len(action.args)}개, 선언은 {signature.arity}개")
    if objects is None:
        return
    for obj, param_type in zip(action.args, signature.parameter_types):
        if obj not in objects:
            raise VocabularyError(f"{action}: 선언되지 않은 객체 {obj}")
        if not vocab.is_subtype(objects[obj], param_type):
            raise VocabularyError(f"{action}: {obj} - {objects[obj]} 는 {param_type} 가 아님")


def read_trace(text: str, model: DomainModel, objects: Optional[Mapping[str, str]] = None) -> ObservationTrace:
    """(objects ...) 헤더가 있으면 그것으로, 없으면 `objects`(문제의 객체)로 인자를 검사한다.

    둘 다 없으면 arity 만 검사한다.
    """
    vocab = model.vocabulary
    known: Optional[Dict[str, str]] = dict(objects) if objects is not None else None
    header_seen = False
    states: List[State] = []
    actions: List[GroundAction] = []
    expect_state = True
    for node in parse_sexprs(text):
        if not isinstance(node, SExpr):
            raise TraceAlternationError(f"트레이스 레코드가 아님: {node}")
        if node.head == "objects":
            if states or header_seen:
                raise node.error("objects 헤더는 맨 앞에 한 번만 올 수 있음")
            header_seen = True
            known = dict(parse_typed_list(node.tail, node))
            for obj_type in known.values():
                if not vocab.known_type(obj_type):
                    raise VocabularyError(f"선언되지 않은 타입 {obj_type}")
        elif node.head == "state":
            if not expect_state:
                raise TraceAlternationError(f"line {node.line}: state 가 연속으로 나옴")
            if not states and known is None:
                logger.warning("objects 헤더도 문제 객체도 없어 객체 검사를 건너뜀")
            states.append(_state(node, vocab, known))
            expect_state = False
        elif node.head == "action":
            if expect_state:
                raise TraceAlternationError(f"line {node.line}: action 이 state 없이 나옴")
            actions.append(_action(node, vocab, known))
            expect_state = True
        else:
            raise node.error(f"알 수 없는 트레이스 레코드: {node.head}")
    if expect_state:
        raise TraceAlternationError("트레이스는 state 로 끝나야 함")
    return ObservationTrace(tuple(states), tuple(actions), tuple(sorted((known or {}).items())))


def _state_text(state: State) -> str:
    body = format_state(state)
    return f"(state {body})" if body else "(state)"


def write_trace(trace: ObservationTrace) -> str:
    lines = ["; observation trace"]
    if trace.objects:
        lines.append(f"(objects {format_objects(trace.objects)})")
    for i, state in enumerate(trace.states):
        lines.append(_state_text(state))
        if i < len(trace.actions):
            lines.append(f"(action {trace.actions[i]})")
    return "\n".join(lines) + "\n"


def _format_query_entry(query: Query, response: QueryResponse) -> str:
    state = _state_text(query.start_state)
    plan = " ".join(str(a) for a in query.plan)
    plan_text = f"(plan {plan})" if plan else "(plan)"
    result = _state_text(response.s_f)
    return f"(query {state} {plan_text} (response {response.n_f} {result}))"


def write_query_log(entries: Sequence[Tuple[Query, QueryResponse]]) -> str:
    return "".join(_format_query_entry(q, r) + "\n" for q, r in entries)


def parse_query_log(text: str, model: DomainModel) -> List[Tuple[Query, QueryResponse]]:
    vocab = model.vocabulary
    out: List[Tuple[Query, QueryResponse]] = []
    for node in parse_sexprs(text):
        if not isinstance(node, SExpr) or node.head != "query" or len(node.tail) != 3:
            at = node if isinstance(node, SExpr) else SExpr([], 0, 0)
            raise at.error("(query (state ...) (plan ...) (response n (state ...))) 형식이 아님")
        state_expr, plan_expr, response_expr = (expect_list(n, "query", node) for n in node.tail)
        start = _state(state_expr, vocab, None)
        plan = []
        for step in plan_expr.tail:
            atom = _atom(expect_list(step, "plan", plan_expr))
            action = GroundAction(atom.predicate, atom.args)
            check_ground_action(vocab, None, action)
            plan.append(action)
        if response_expr.head != "response" or len(response_expr.tail) != 2:
            raise response_expr.error("(response n (state ...)) 형식이 아님")
        n_token = expect_token(response_expr.tail[0], "response", response_expr)
        if not n_token.isdigit():
            raise response_expr.error(f"n_f 는 정수여야 함: {n_token}")
        s_f = _state(expect_list(response_expr.tail[1], "response", response_expr), vocab, None)
        out.append((Query(start, tuple(plan)), QueryResponse(int(n_token), s_f)))
    return out
