"""pyparsing 기반 s-expression 리더.

리스트 노드마다 시작 위치(line, column)를 기록해 의미 오류도 위치와 함께 보고한다.
식별자는 소문자로 정규화한다.
"""
from dataclasses import dataclass, field
from typing import List, Union

from pyparsing import CharsNotIn, Empty, Forward, ParseBaseException, Suppress, ZeroOrMore, col, lineno, rest_of_line

from src.core.errors import PddlParseError, UnsupportedFeatureError


@dataclass
class SExpr:
    items: List[Union[str, "SExpr"]] = field(default_factory=list)
    line: int = 0
    column: int = 0

    @property
    def head(self) -> str:
        if self.items and isinstance(self.items[0], str):
            return self.items[0]
        return ""

    @property
    def tail(self) -> List[Union[str, "SExpr"]]:
        return self.items[1:]

    def error(self, message: str) -> PddlParseError:
        return PddlParseError(message, self.line, self.column)

    def __len__(self) -> int:
        return len(self.items)


Node = Union[str, SExpr]


def _grammar():
    token = Empty() + CharsNotIn("(); \n\t\r")
    token.set_parse_action(lambda t: t[0].lower())
    expr = Forward()
    lst = Suppress("(") + ZeroOrMore(expr) + Suppress(")")

    def _to_node(text, loc, toks):
        return [SExpr(list(toks), lineno(loc, text), col(loc, text))]

    lst.set_parse_action(_to_node)
    expr <<= token | lst
    document = ZeroOrMore(expr)
    document.ignore(";" + rest_of_line)
    return document


_DOCUMENT = _grammar()


def parse_sexprs(text: str) -> List[Node]:
    """텍스트 전체를 최상위 s-expression 목록으로 읽는다."""
    try:
        return list(_DOCUMENT.parse_string(text, parse_all=True))
    except ParseBaseException as exc:
        raise PddlParseError(f"s-expression 구문 오류: {exc.msg}", exc.lineno, exc.col) from None


def expect_list(node: Node, what: str, at: SExpr) -> SExpr:
    if not isinstance(node, SExpr):
        raise at.error(f"{what}: 리스트가 필요함, {node!r}")
    return node


def expect_token(node: Node, what: str, at: SExpr) -> str:
    if not isinstance(node, str):
        raise node.error(f"{what}: 토큰이 필요함")
    return node


def parse_typed_list(tokens: List[Node], at: SExpr, default_type: str = "object") -> List[tuple]:
    """`a b - t c` -> [(a, t), (b, t), (c, object)]."""
    out: List[tuple] = []
    pending: List[str] = []
    i = 0
    while i < len(tokens):
        tok = expect_token(tokens[i], "typed list", at)
        if tok == "-":
            if i + 1 >= len(tokens):
                raise at.error("'-' 뒤에 타입 이름이 없음")
            type_node = tokens[i + 1]
            if isinstance(type_node, SExpr):
                raise UnsupportedFeatureError(type_node.head or "either")
            if not pending:
                raise at.error(f"타입 {type_node} 앞에 이름이 없음")
            out.extend((name, type_node) for name in pending)
            pending = []
            i += 2
            continue
        pending.append(tok)
        i += 1
    out.extend((name, default_type) for name in pending)
    return out
