"""
Line-oriented file formats.

Region file::

    # comment
    ambient w^2 w
    box [0,w^2] x {w}
    tri [0,w] x [0,w]
    rel >= [0,w] x [0,w]

Poset file::

    poset 3
    labels a b c
    a < b
    a < c
"""

from typing import List, Optional, Tuple

from loguru import logger

from app.core.duality import FinPoset
from app.core.ordinal import Ordinal
from app.core.region import BOX, OPS_RELATION, TRI, Piece, Region
from app.parsers.expressions import ExpressionParser, evaluate_set
from app.parsers.lexer import NAME, NUM, OP, TokenStream
from app.utils.error_handlers import ParseError, SemanticError


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _line_error(number: int, error: ParseError) -> ParseError:
    return ParseError(f"line {number}: {error.message}", error.source, error.position, {"line": number})


def parse_region_file(text: str, normalize: bool = False) -> Region:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty region file: expected 'ambient <ord> <ord>'")
    ambient: Optional[Tuple[Ordinal, Ordinal]] = None
    pieces: List[Piece] = []
    for number, line in lines:
        try:
            parser = ExpressionParser(line, normalize)
            ts = parser.ts
            if ambient is None:
                ts.expect("ambient")
                ambient = (parser.ordinal(), parser.ordinal())
                ts.expect_end()
                continue
            pieces.append(_piece(parser, ambient))
            ts.expect_end()
        except ParseError as e:
            raise _line_error(number, e) from e
        except SemanticError as e:
            e.details.setdefault("line", number)
            raise
    logger.debug(f"region file: {len(pieces)} pieces over {ambient[0]} x {ambient[1]}")
    return Region.build(ambient, pieces)


def _piece(parser: ExpressionParser, ambient: Tuple[Ordinal, Ordinal]) -> Piece:
    ts = parser.ts
    keyword = ts.expect_kind(NAME, "'box', 'tri' or 'rel'")
    if keyword.text == "box":
        rel = BOX
    elif keyword.text == "tri":
        rel = TRI
    elif keyword.text == "rel":
        op = ts.expect_kind(OP, "a relation operator")
        if op.text not in OPS_RELATION:
            ts.fail(f"unknown relation {op.text!r}; use one of {' '.join(sorted(OPS_RELATION))}", op.position)
        rel = OPS_RELATION[op.text]
    else:
        ts.fail(f"unknown piece kind {keyword.text!r}", keyword.position)
    xs = evaluate_set(parser.set_expr(), ambient[0])
    ts.expect("x")
    ys = evaluate_set(parser.set_expr(), ambient[1])
    return Piece(xs, ys, rel)


def parse_poset_file(text: str) -> FinPoset:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty poset file: expected 'poset <n>'")
    size: Optional[int] = None
    labels: Optional[List[str]] = None
    pairs: List[Tuple[str, str]] = []
    for number, line in lines:
        ts = TokenStream(line)
        try:
            if size is None:
                ts.expect("poset")
                size = int(ts.expect_kind(NUM, "the number of elements").text)
                ts.expect_end()
                continue
            if ts.at("labels") and labels is None and not pairs:
                ts.advance()
                labels = [_element(ts) for _ in range(size)]
                ts.expect_end()
                continue
            a = _element(ts)
            ts.expect("<")
            b = _element(ts)
            ts.expect_end()
            pairs.append((a, b))
        except ParseError as e:
            raise _line_error(number, e) from e
    labels = labels or [str(i) for i in range(size)]
    return FinPoset.from_relations(labels, pairs)


def _element(ts: TokenStream) -> str:
    token = ts.current
    if token.kind not in (NAME, NUM):
        ts.fail(f"expected an element name, found {token}")
    return ts.advance().text
