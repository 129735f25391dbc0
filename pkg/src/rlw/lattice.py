"""Boolean lattice primitives.

Subsets of the ground set [n] = {1, ..., n} are plain ints used as
bitmasks: bit i-1 set means element i is present.  Families of subsets
are big-int bitsets indexed by subset code.  Ground elements are 1-based
in all I/O and 0-based bit positions internally.
"""

from __future__ import annotations

import enum
import functools
from math import comb

MAX_GROUND = 24


class LatticeError(ValueError):
    """Base class for lattice-level input errors."""


class CapacityError(LatticeError):
    """Raised when a requested instance exceeds the size caps."""


class OrderViolation(LatticeError):
    """Raised when a pair of subsets is not ordered as required."""


class PreconditionError(LatticeError):
    """Raised when a documented operation precondition fails."""


def check_ground(n):
    if not isinstance(n, int) or n < 1:
        raise LatticeError(f"ground-set size must be a positive int, got {n!r}")
    if n > MAX_GROUND:
        raise CapacityError(f"ground-set size {n} exceeds the cap of {MAX_GROUND}")


def check_subset(n, s):
    check_ground(n)
    if not isinstance(s, int) or s < 0:
        raise LatticeError(f"subset must be a nonnegative bitmask int, got {s!r}")
    if s >> n:
        raise LatticeError(f"subset {bin(s)} has bits above ground position {n}")


def full_set(n):
    return (1 << n) - 1


def subset_size(s):
    return s.bit_count()


def parse_subset(text, n=None):
    """Parse a subset literal: ``{1,3,4}``, ``{}`` or ``0b1101``."""
    text = text.strip()
    if text.startswith("0b") or text.startswith("0B"):
        bits = int(text, 2)
    elif text.startswith("{") and text.endswith("}"):
        inner = text[1:-1].strip()
        bits = 0
        if inner:
            for part in inner.split(","):
                elem = int(part)
                if elem < 1:
                    raise LatticeError(f"ground elements are 1-based, got {elem}")
                bits |= 1 << (elem - 1)
    else:
        raise LatticeError(f"bad subset literal {text!r}")
    if n is not None:
        check_subset(n, bits)
    return bits


def format_subset(s):
    if s == 0:
        return "{}"
    elems = [str(i + 1) for i in range(s.bit_length()) if s >> i & 1]
    return "{" + ",".join(elems) + "}"


def iter_elements(s):
    """Yield the 1-based ground elements of a subset bitmask."""
    while s:
        low = s & -s
        yield low.bit_length()
        s ^= low


class OrderRelation(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare(n, x, y):
    check_subset(n, x)
    check_subset(n, y)
    if x == y:
        return OrderRelation.EQUAL
    if x & ~y == 0:
        return OrderRelation.LESS
    if y & ~x == 0:
        return OrderRelation.GREATER
    return OrderRelation.INCOMPARABLE


def comparable(x, y):
    return x & ~y == 0 or y & ~x == 0


@functools.lru_cache(maxsize=None)
def canonical_order(n):
    """All subset codes of B_n sorted by (size, bitmask)."""
    check_ground(n)
    return tuple(sorted(range(1 << n), key=lambda s: (s.bit_count(), s)))


@functools.lru_cache(maxsize=None)
def canonical_position(n):
    """Inverse permutation of canonical_order as a tuple."""
    order = canonical_order(n)
    pos = [0] * len(order)
    for i, s in enumerate(order):
        pos[s] = i
    return tuple(pos)


def iter_submasks(mask):
    """All submasks of mask, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class Bounds(str, enum.Enum):
    CLOSED = "closed"
    OPEN_LO = "open_lo"
    OPEN_HI = "open_hi"
    OPEN = "open"


class FamilyMask:
    """A set of subsets of [n], stored as one big-int bitset."""

    __slots__ = ("n", "bits")

    def __init__(self, n, bits=0):
        check_ground(n)
        if not isinstance(bits, int) or bits < 0 or bits >> (1 << n):
            raise LatticeError(f"family bitset out of range for n={n}")
        self.n = n
        self.bits = bits

    @classmethod
    def from_members(cls, n, members):
        bits = 0
        for s in members:
            check_subset(n, s)
            bits |= 1 << s
        return cls(n, bits)

    @classmethod
    def whole(cls, n):
        return cls(n, (1 << (1 << n)) - 1)

    def _check_peer(self, other):
        if not isinstance(other, FamilyMask):
            raise TypeError("expected a FamilyMask")
        if other.n != self.n:
            raise LatticeError(f"family over n={other.n} mixed with n={self.n}")

    def __contains__(self, s):
        check_subset(self.n, s)
        return self.bits >> s & 1 == 1

    def __len__(self):
        return self.bits.bit_count()

    def __eq__(self, other):
        return (
            isinstance(other, FamilyMask)
            and other.n == self.n
            and other.bits == self.bits
        )

    def __hash__(self):
        return hash((self.n, self.bits))

    def __or__(self, other):
        self._check_peer(other)
        return FamilyMask(self.n, self.bits | other.bits)

    def __and__(self, other):
        self._check_peer(other)
        return FamilyMask(self.n, self.bits & other.bits)

    def __sub__(self, other):
        self._check_peer(other)
        return FamilyMask(self.n, self.bits & ~other.bits)

    def complement(self):
        return FamilyMask(self.n, ~self.bits & ((1 << (1 << self.n)) - 1))

    def add(self, s):
        check_subset(self.n, s)
        return FamilyMask(self.n, self.bits | 1 << s)

    def members(self):
        """Members in increasing bitmask order."""
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def canonical_members(self):
        """Members in (size, bitmask) order."""
        return sorted(self.members(), key=lambda s: (s.bit_count(), s))

    def __repr__(self):
        shown = [format_subset(s) for s in self.canonical_members()]
        return f"FamilyMask(n={self.n}, {{{', '.join(shown)}}})"


def interval(n, lo, hi, bounds=Bounds.CLOSED):
    """The interval {Z : lo <= Z <= hi} with requested endpoints removed."""
    check_subset(n, lo)
    check_subset(n, hi)
    bounds = Bounds(bounds)
    if lo & ~hi:
        raise OrderViolation(
            f"interval bounds not ordered: {format_subset(lo)} is not "
            f"a subset of {format_subset(hi)}"
        )
    bits = 0
    diff = hi & ~lo
    for sub in iter_submasks(diff):
        bits |= 1 << (lo | sub)
    if bounds in (Bounds.OPEN_LO, Bounds.OPEN):
        bits &= ~(1 << lo)
    if bounds in (Bounds.OPEN_HI, Bounds.OPEN):
        bits &= ~(1 << hi)
    return FamilyMask(n, bits)


def level(n, k):
    check_ground(n)
    if not 0 <= k <= n:
        raise LatticeError(f"level {k} out of range for n={n}")
    bits = 0
    for s in range(1 << n):
        if s.bit_count() == k:
            bits |= 1 << s
    return FamilyMask(n, bits)


def levels(n, lo, hi):
    """Union of levels lo..hi inclusive."""
    check_ground(n)
    if not 0 <= lo <= hi <= n:
        raise LatticeError(f"level range {lo}..{hi} out of range for n={n}")
    bits = 0
    for s in range(1 << n):
        if lo <= s.bit_count() <= hi:
            bits |= 1 << s
    return FamilyMask(n, bits)


def _check_strictly_less(n, x0, y0):
    check_subset(n, x0)
    check_subset(n, y0)
    if x0 == y0 or x0 & ~y0:
        raise OrderViolation(
            f"{format_subset(x0)} is not strictly below {format_subset(y0)}"
        )


def up_family(n, x0, y0):
    """{Z : X0 < Z <= [n] and Z meets Y0 \\ X0}."""
    _check_strictly_less(n, x0, y0)
    diff = y0 & ~x0
    rest = full_set(n) & ~x0
    bits = 0
    for sub in iter_submasks(rest):
        if sub and sub & diff:
            bits |= 1 << (x0 | sub)
    return FamilyMask(n, bits)


def down_family(n, x0, y0):
    """{Z : empty <= Z < Y0 and Y0 \\ X0 is not contained in Z}."""
    _check_strictly_less(n, x0, y0)
    diff = y0 & ~x0
    bits = 0
    for sub in iter_submasks(y0):
        if sub != y0 and diff & ~sub:
            bits |= 1 << sub
    return FamilyMask(n, bits)


def tl1_witness(n, x, z, w):
    """Smallest W0 with X < W0 < Z, |W0| = |X|+1 and W0 incomparable to W."""
    check_subset(n, x)
    check_subset(n, z)
    check_subset(n, w)
    if x == z or x & ~z:
        raise PreconditionError(
            f"need X < Z strictly: X={format_subset(x)}, Z={format_subset(z)}"
        )
    if z.bit_count() < x.bit_count() + 2:
        raise PreconditionError(
            f"need |Z| >= |X|+2: |X|={x.bit_count()}, |Z|={z.bit_count()}"
        )
    if w & ~x == 0 or z & ~w == 0:
        raise PreconditionError(
            f"W={format_subset(w)} must avoid the closed cone below X "
            f"and the closed cone above Z"
        )
    diff = z & ~x
    for elem in iter_elements(diff):
        w0 = x | 1 << (elem - 1)
        if not comparable(w0, w):
            return w0
    raise AssertionError("witness guaranteed by the preconditions was not found")
