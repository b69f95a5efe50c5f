from typing import Tuple

from async_adders.exceptions import UsageError


def oracle_add(a: int, b: int, cin: int, width: int) -> Tuple[int, int]:
    """(a + b + cin) mod 2^width and the carry out"""
    limit = 1 << width
    if width < 1 or not (0 <= a < limit and 0 <= b < limit) or cin not in (0, 1):
        raise UsageError(f"Operands out of range for {width} bits: a={a}, b={b}, cin={cin}")
    total = a + b + cin
    return total & (limit - 1), total >> width
