"""
Tokenizer shared by every grammar. Tokens keep their column so that parse
errors can point at the offending character.
"""

import re
from dataclasses import dataclass
from typing import List, Optional

from app.utils.error_handlers import ParseError

NUM = "NUM"
NAME = "NAME"
OP = "OP"
END = "END"

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|!=|[-+*^(),\[\]{}|&\\<>=;:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int

    def __str__(self) -> str:
        return "end of input" if self.kind == END else repr(self.text)


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(source):
        match = _TOKEN.match(source, pos)
        if match is None:
            raise ParseError(f"unexpected character {source[pos]!r}", source, pos)
        kind = match.lastgroup
        if kind == "num":
            tokens.append(Token(NUM, match.group(), pos))
        elif kind == "name":
            tokens.append(Token(NAME, match.group(), pos))
        elif kind == "op":
            tokens.append(Token(OP, match.group(), pos))
        pos = match.end()
    tokens.append(Token(END, "", len(source)))
    return tokens


class TokenStream:
    """Cursor over a token list with the usual peek/expect helpers."""

    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        if token.kind != END:
            self.index += 1
        return token

    def at(self, text: str) -> bool:
        return self.current.kind in (OP, NAME) and self.current.text == text

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.current}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.current.kind != kind:
            self.fail(f"expected {what}, found {self.current}")
        return self.advance()

    def expect_end(self):
        if self.current.kind != END:
            self.fail(f"unexpected {self.current} after complete expression")

    def fail(self, message: str, position: Optional[int] = None):
        raise ParseError(message, self.source, self.current.position if position is None else position)
