"""Words over the generator alphabet {0, 1, 2}.

Letters are self-inverse, so the inverse of a word is its reverse.  The text
syntax accepts digits, whitespace, parenthesised groups and ``^k`` powers::

    >>> expand(parse("((10)^2 12)^4"))[:6]
    (1, 0, 1, 0, 1, 2)

Powers stay symbolic in the parse tree so that callers evaluating in a group
can square-and-multiply instead of expanding.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence, Union

from .errors import InvalidWordError

LETTERS = (0, 1, 2)


class Power(NamedTuple):
    base: "Node"
    exponent: int


class Seq(NamedTuple):
    items: tuple


Node = Union[int, Power, Seq]

_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")


def parse(text: str) -> Node:
    """Parse the textual word syntax into a tree of letters, groups and powers."""
    src = text.replace("ρ", "").replace("r", "")
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(src) and src[pos].isspace():
            pos += 1

    def exponent():
        nonlocal pos
        skip()
        if pos < len(src) and src[pos] == "^":
            pos += 1
            skip()
            start = pos
            while pos < len(src) and src[pos].isdigit():
                pos += 1
            if start == pos:
                raise InvalidWordError(f"missing exponent at position {start} in {text!r}")
            return int(src[start:pos])
        start = pos
        while pos < len(src) and src[pos] in "⁰¹²³⁴⁵⁶⁷⁸⁹":
            pos += 1
        if start != pos:
            return int(src[start:pos].translate(_SUPERSCRIPTS))
        return None

    def sequence(closing):
        nonlocal pos
        items = []
        while True:
            skip()
            if pos >= len(src):
                if closing:
                    raise InvalidWordError(f"unbalanced parenthesis in {text!r}")
                break
            ch = src[pos]
            if ch == ")":
                if not closing:
                    raise InvalidWordError(f"unexpected ')' at position {pos} in {text!r}")
                pos += 1
                break
            if ch == "(":
                pos += 1
                node = sequence(True)
            elif ch in "012":
                pos += 1
                node = int(ch)
            else:
                raise InvalidWordError(f"invalid letter {ch!r} in word {text!r}")
            k = exponent()
            items.append(node if k is None else Power(node, k))
        return items[0] if len(items) == 1 and not closing else Seq(tuple(items))

    return sequence(False)


def expand(node: Node) -> tuple[int, ...]:
    """Flatten a parse tree into its letter sequence."""
    if isinstance(node, int):
        return (node,)
    if isinstance(node, Power):
        return expand(node.base) * node.exponent
    out: list[int] = []
    for item in node.items:
        out.extend(expand(item))
    return tuple(out)


def as_letters(word: Union[str, Sequence[int], Node]) -> tuple[int, ...]:
    """Coerce a string, letter sequence or parse tree to a checked letter tuple."""
    if isinstance(word, str):
        return expand(parse(word))
    if isinstance(word, (Power, Seq)):
        return expand(word)
    letters = tuple(word)
    for a in letters:
        if a not in LETTERS:
            raise InvalidWordError(f"invalid letter {a!r}; letters are 0, 1, 2")
    return letters


def inverse(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(tuple(word)))


def to_string(word: Sequence[int]) -> str:
    return "".join(str(a) for a in word)
