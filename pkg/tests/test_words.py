import pytest

from lochness.errors import InvalidWordError
from lochness.words import Power, Seq, as_letters, expand, inverse, parse, to_string


def test_parse_keeps_powers_symbolic():
    node = parse("((10)^2 12)^4")
    assert isinstance(node, Power) and node.exponent == 4
    assert expand(node) == (1, 0, 1, 0, 1, 2) * 4


def test_superscripts_and_generator_prefixes():
    assert expand(parse("((10)²12)⁴")) == expand(parse("((10)^2 12)^4"))
    assert as_letters("r1 r0 r2") == (1, 0, 2)
    assert as_letters("ρ1ρ0") == (1, 0)


def test_whitespace_and_empty_word():
    assert as_letters(" 0 1\t2 ") == (0, 1, 2)
    assert as_letters("") == ()
    assert parse("") == Seq(())


@pytest.mark.parametrize("bad", ["3", "01a", "(01", "01)", "(0)^", [0, 3], (5,)])
def test_invalid_words_rejected(bad):
    with pytest.raises(InvalidWordError):
        as_letters(bad)


def test_inverse_is_reverse():
    assert inverse((0, 1, 2)) == (2, 1, 0)
    assert to_string((2, 1, 0)) == "210"
