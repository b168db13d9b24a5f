"""
Helpers for sets of worlds stored as integer bit-vectors.
"""

from typing import Iterator


def full_mask(size: int) -> int:
    """Bit-vector with the lowest `size` bits set."""
    return (1 << size) - 1


def popcount(bits: int) -> int:
    """Number of set bits."""
    return bin(bits).count("1")


def iter_bits(bits: int) -> Iterator[int]:
    """
    Iterate over the indices of the set bits, lowest first.

    Args:
        bits: Non-negative bit-vector

    Returns:
        Iterator over bit indices
    """
    index = 0
    while bits:
        if bits & 1:
            yield index
        bits >>= 1
        index += 1


def lowest_bit(bits: int) -> int:
    """Index of the lowest set bit, -1 for the empty vector."""
    if not bits:
        return -1
    return (bits & -bits).bit_length() - 1


def submasks(bits: int) -> Iterator[int]:
    """
    Iterate over every subset of `bits`, in increasing numeric order.

    Args:
        bits: Bit-vector whose subsets are wanted

    Returns:
        Iterator over sub-bit-vectors, starting with 0 and ending with `bits`
    """
    sub = 0
    while True:
        yield sub
        if sub == bits:
            return
        sub = (sub - bits) & bits
