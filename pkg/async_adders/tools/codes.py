"""Delay-insensitive data codes: dual-rail (1-of-2) and 1-of-4.

Wire levels are plain 0/1 integers; there are no unknown states at this
abstraction.
"""

from itertools import combinations
from typing import Iterable, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from async_adders.enums import DecodeState
from async_adders.exceptions import UsageError


def _check_level(value: int) -> int:
    if value not in (0, 1):
        raise ValueError(f"Wire level must be 0 or 1, got {value}")
    return value


class RailPair(BaseModel):
    """One dual-rail signal"""
    model_config = ConfigDict(frozen=True)

    rail1: int = Field(0, description="The true rail (X1)")
    rail0: int = Field(0, description="The false rail (X0)")

    @field_validator("rail1", "rail0")
    @classmethod
    def check_level(cls, value):
        return _check_level(value)

    @property
    def state(self) -> DecodeState:
        return decode_dual_rail(self)

    def as_tuple(self) -> Tuple[int, int]:
        return (self.rail1, self.rail0)


class OneOfFour(BaseModel):
    """A 1-of-4 word F0..F3; all-zero is the spacer"""
    model_config = ConfigDict(frozen=True)

    f: Tuple[int, int, int, int] = Field((0, 0, 0, 0), description="Wire levels F0, F1, F2, F3")

    @model_validator(mode="after")
    def at_most_one_high(self):
        for level in self.f:
            _check_level(level)
        if sum(self.f) > 1:
            raise ValueError(f"1-of-4 word has more than one wire high: {self.f}")
        return self


SPACER = RailPair(rail1=0, rail0=0)


def encode_dual_rail(bit: int) -> RailPair:
    """X = 1 -> (X1, X0) = (1, 0); X = 0 -> (0, 1)"""
    if bit not in (0, 1):
        raise UsageError(f"Dual-rail encoding takes a single bit, got {bit}")
    return RailPair(rail1=bit, rail0=1 - bit)


def decode_levels(rail1: int, rail0: int) -> DecodeState:
    if rail1 and rail0:
        return DecodeState.ILLEGAL
    if rail1:
        return DecodeState.VALID_1
    if rail0:
        return DecodeState.VALID_0
    return DecodeState.SPACER


def decode_dual_rail(pair: RailPair) -> DecodeState:
    return decode_levels(pair.rail1, pair.rail0)


def encode_one_of_four(p: int, q: int) -> OneOfFour:
    """Two bits P, Q -> one of F0..F3 high, F index = 2P + Q"""
    if p not in (0, 1) or q not in (0, 1):
        raise UsageError(f"1-of-4 encoding takes two bits, got ({p}, {q})")
    f = [0, 0, 0, 0]
    f[2 * p + q] = 1
    return OneOfFour(f=tuple(f))


def decode_one_of_four(word: OneOfFour) -> Tuple[int, int] | DecodeState:
    """Return (P, Q) for a valid word, DecodeState.SPACER for the all-zero word"""
    if sum(word.f) == 0:
        return DecodeState.SPACER
    index = word.f.index(1)
    return (index >> 1, index & 1)


class CodewordReport(BaseModel):
    unordered: bool
    complete_one_hot: bool
    subset_pair: Tuple[str, str] | None = Field(
        None, description="A witness (smaller, larger) when the set is not unordered"
    )


def _as_word(word: str | Sequence[int]) -> str:
    if isinstance(word, str):
        text = word.strip()
    else:
        text = "".join(str(int(b)) for b in word)
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"Codewords are binary strings, got {word!r}")
    return text


def _high_bits(word: str) -> frozenset:
    return frozenset(i for i, c in enumerate(word) if c == "1")


def check_codeword_set(words: Iterable[str | Sequence[int]]) -> CodewordReport:
    """Unordered: no word's high bits are a subset of another's.
    Complete one-hot: the set is exactly the n one-hot words of length n.
    """
    codewords = sorted({_as_word(w) for w in words})
    if not codewords:
        raise UsageError("Codeword set is empty")
    lengths = {len(w) for w in codewords}
    if len(lengths) != 1:
        raise UsageError(f"Codewords have mismatched lengths: {sorted(lengths)}")

    witness = None
    for x, y in combinations(codewords, 2):
        hx, hy = _high_bits(x), _high_bits(y)
        if hx <= hy:
            witness = (x, y)
            break
        if hy <= hx:
            witness = (y, x)
            break

    n = lengths.pop()
    one_hot = {"".join("1" if i == j else "0" for i in range(n)) for j in range(n)}
    return CodewordReport(
        unordered=witness is None,
        complete_one_hot=set(codewords) == one_hot,
        subset_pair=witness,
    )
