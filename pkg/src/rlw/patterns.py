"""Abstract pattern posets and copy detection inside colored families.

Detection is backtracking over pattern elements in a linear-extension
order.  Candidate sets are big-int bitmasks over subset codes, so the
per-node constraint propagation is a couple of AND operations.  Returned
embeddings are deterministic: positions are filled in a fixed order and
candidates are tried in (size, bitmask) order.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass, field

from .lattice import (
    CapacityError,
    FamilyMask,
    LatticeError,
    canonical_order,
    check_ground,
    check_subset,
    full_set,
    iter_submasks,
)

MAX_PATTERN = 16

# Mask tables are quadratic in lattice size; detection beyond this is
# out of desk scale anyway.
MAX_DETECT_GROUND = 14


class PatternError(ValueError):
    pass


class CopyMode(str, enum.Enum):
    INDUCED = "induced"
    WEAK = "weak"


class PatternPoset:
    """A finite poset given by its reflexive-transitive order matrix.

    ``le[i]`` is a bitmask over element indices with bit j set iff
    i <= j in the pattern.
    """

    __slots__ = ("size", "le", "label")

    def __init__(self, le, label="custom"):
        size = len(le)
        if size == 0:
            raise PatternError("empty pattern rejected")
        if size > MAX_PATTERN:
            raise PatternError(f"pattern size {size} exceeds cap {MAX_PATTERN}")
        le = tuple(int(row) for row in le)
        for i, row in enumerate(le):
            if row >> size:
                raise PatternError("order matrix row out of range")
            if not row >> i & 1:
                raise PatternError("order matrix must be reflexive")
        for i in range(size):
            for j in range(size):
                if i != j and le[i] >> j & 1 and le[j] >> i & 1:
                    raise PatternError(f"cycle: elements {i} and {j} order each other")
        for i in range(size):
            reach = le[i]
            for j in range(size):
                if le[i] >> j & 1 and le[j] & ~reach:
                    raise PatternError("order matrix must be transitive")
        self.size = size
        self.le = le
        self.label = label

    def leq(self, i, j):
        return self.le[i] >> j & 1 == 1

    def linear_extension(self):
        """Stable topological order of element indices."""
        placed = []
        remaining = set(range(self.size))
        while remaining:
            for i in sorted(remaining):
                if all(j in placed or j == i or not self.leq(j, i) for j in remaining):
                    placed.append(i)
                    remaining.remove(i)
                    break
        return placed

    def has_maximum(self):
        return any(
            all(self.leq(j, i) for j in range(self.size)) for i in range(self.size)
        )

    def has_minimum(self):
        return any(
            all(self.leq(i, j) for j in range(self.size)) for i in range(self.size)
        )

    def __eq__(self, other):
        return isinstance(other, PatternPoset) and other.le == self.le

    def __hash__(self):
        return hash(self.le)

    def __repr__(self):
        return f"PatternPoset({self.label}, size={self.size})"


def chain(t):
    if t < 1:
        raise PatternError("chain length must be >= 1")
    le = [sum(1 << j for j in range(i, t)) for i in range(t)]
    return PatternPoset(le, f"chain:{t}")


def antichain(t):
    if t < 1:
        raise PatternError("antichain size must be >= 1")
    return PatternPoset([1 << i for i in range(t)], f"antichain:{t}")


def fork():
    """Three elements with X0 < X1, X0 < X2 and X1, X2 incomparable."""
    return PatternPoset([0b111, 0b010, 0b100], "fork")


def boolean(m):
    if m < 0:
        raise PatternError("boolean pattern order must be >= 0")
    if 1 << m > MAX_PATTERN:
        raise PatternError(f"boolean:{m} exceeds the pattern size cap")
    size = 1 << m
    le = []
    for i in range(size):
        row = 0
        for j in range(size):
            if i & ~j == 0:
                row |= 1 << j
        le.append(row)
    return PatternPoset(le, f"boolean:{m}")


def disjoint_chains(u, v):
    """u disjoint v-chains, sets from different chains pairwise incomparable."""
    if u < 1 or v < 1:
        raise PatternError("disjoint chains need u >= 1 and v >= 1")
    if u * v > MAX_PATTERN:
        raise PatternError(f"disjoint:{u}x{v} exceeds the pattern size cap")
    le = []
    for i in range(u):
        for j in range(v):
            row = 0
            for jj in range(j, v):
                row |= 1 << (i * v + jj)
            le.append(row)
    return PatternPoset(le, f"disjoint:{u}x{v}")


def from_covers(covers):
    """Build a pattern from cover relations [(a, b), ...] meaning a < b."""
    names = sorted({x for pair in covers for x in pair})
    if not names:
        raise PatternError("custom pattern needs at least one element")
    if len(names) > MAX_PATTERN:
        raise PatternError("custom pattern exceeds the size cap")
    idx = {name: i for i, name in enumerate(names)}
    size = len(names)
    le = [1 << i for i in range(size)]
    for a, b in covers:
        le[idx[a]] |= 1 << idx[b]
    # Transitive closure.
    changed = True
    while changed:
        changed = False
        for i in range(size):
            row = le[i]
            for j in range(size):
                if row >> j & 1 and le[j] & ~row:
                    row |= le[j]
                    changed = True
            le[i] = row
    for i in range(size):
        for j in range(i + 1, size):
            if le[i] >> j & 1 and le[j] >> i & 1:
                raise PatternError(
                    f"cycle through {names[i]!r} and {names[j]!r} is not a partial order"
                )
    pretty = ",".join(f"{a}<{b}" for a, b in covers)
    return PatternPoset(le, f"custom:[{pretty}]")


_DESCRIPTOR_RE = re.compile(
    r"^(chain|antichain|boolean):(\d+)$|^fork$|^disjoint:(\d+)x(\d+)$|^custom:\[(.*)\]$"
)


def make_pattern(descriptor):
    """Parse ``chain:3``, ``antichain:2``, ``fork``, ``boolean:2``,
    ``disjoint:2x2`` or ``custom:[a<b,a<c]``."""
    text = descriptor.strip()
    m = _DESCRIPTOR_RE.match(text)
    if not m:
        raise PatternError(f"bad pattern descriptor {descriptor!r}")
    if text == "fork":
        return fork()
    if m.group(1):
        t = int(m.group(2))
        return {"chain": chain, "antichain": antichain, "boolean": boolean}[
            m.group(1)
        ](t)
    if m.group(3):
        return disjoint_chains(int(m.group(3)), int(m.group(4)))
    body = m.group(5).strip()
    covers = []
    if body:
        for piece in body.split(","):
            parts = [p.strip() for p in piece.split("<")]
            if len(parts) < 2 or not all(parts):
                raise PatternError(f"bad cover relation {piece!r}")
            for a, b in zip(parts, parts[1:]):
                covers.append((a, b))
    return from_covers(covers)


@dataclass(frozen=True)
class Embedding:
    map: tuple  # pattern element index -> subset bitmask
    mode: CopyMode

    def images(self):
        return set(self.map)


@dataclass(frozen=True)
class Coloring:
    """A total color assignment on B_n; colors are 0-based internally."""

    n: int
    k: int
    colors: tuple = field(default=())

    def __post_init__(self):
        check_ground(self.n)
        if self.k < 1:
            raise LatticeError(f"palette size must be >= 1, got {self.k}")
        colors = tuple(self.colors)
        if len(colors) != 1 << self.n:
            raise LatticeError(
                f"coloring needs {1 << self.n} entries, got {len(colors)}"
            )
        for col in colors:
            if not 0 <= col < self.k:
                raise LatticeError(f"color {col} outside palette [0,{self.k})")
        object.__setattr__(self, "colors", colors)

    @property
    def exact(self):
        """True iff every color in [0,k) occurs; recomputed, never trusted."""
        return len(set(self.colors)) == self.k

    @property
    def colors_used(self):
        return len(set(self.colors))

    def color_of(self, s):
        check_subset(self.n, s)
        return self.colors[s]

    def class_masks(self):
        """Per-color family bitsets over subset codes."""
        masks = [0] * self.k
        for s, col in enumerate(self.colors):
            masks[col] |= 1 << s
        return masks

    def class_family(self, col):
        return FamilyMask(self.n, self.class_masks()[col])

    def relabel(self, perm):
        """Apply a color permutation (list of new colors indexed by old)."""
        return Coloring(self.n, self.k, tuple(perm[c] for c in self.colors))


@functools.lru_cache(maxsize=None)
class _DetectCtx:
    """Per-n mask tables for copy detection."""

    def __init__(self, n):
        check_ground(n)
        if n > MAX_DETECT_GROUND:
            raise CapacityError(
                f"copy detection capped at n <= {MAX_DETECT_GROUND}, got {n}"
            )
        self.n = n
        size = 1 << n
        full = full_set(n)
        strict_sub = [0] * size
        strict_sup = [0] * size
        for s in range(size):
            bits = 0
            for sub in iter_submasks(s):
                bits |= 1 << sub
            strict_sub[s] = bits & ~(1 << s)
            bits = 0
            rest = full & ~s
            for sup in iter_submasks(rest):
                bits |= 1 << (s | sup)
            strict_sup[s] = bits & ~(1 << s)
        all_mask = (1 << size) - 1
        self.strict_sub = strict_sub
        self.strict_sup = strict_sup
        self.incomp = [
            all_mask & ~strict_sub[s] & ~strict_sup[s] & ~(1 << s)
            for s in range(size)
        ]
        self.order = canonical_order(n)


def _search_copy(
    n,
    host_bits,
    pattern,
    mode,
    class_masks=None,
    rainbow=False,
    fixed=None,
    collect=None,
):
    """Core backtracking search for one copy of pattern inside host_bits.

    class_masks + rainbow=True adds the pairwise-distinct-color
    constraint.  fixed maps pattern positions to forced images.  When
    collect is a list, every embedding image tuple is appended and the
    search exhausts instead of stopping at the first hit.
    """
    ctx = _DetectCtx(n)
    mode = CopyMode(mode)
    order = pattern.linear_extension()
    t = pattern.size
    images = [None] * t
    size = 1 << n
    all_mask = (1 << size) - 1
    color_of = None
    if rainbow:
        color_of = [0] * size
        for col, mask in enumerate(class_masks):
            bits = mask
            while bits:
                low = bits & -bits
                color_of[low.bit_length() - 1] = col
                bits ^= low

    induced = mode is CopyMode.INDUCED

    def candidates(depth, banned_colors_mask):
        p = order[depth]
        cand = host_bits
        for d in range(depth):
            q = order[d]
            img = images[q]
            if pattern.leq(p, q):
                cand &= ctx.strict_sub[img]
            elif pattern.leq(q, p):
                cand &= ctx.strict_sup[img]
            elif induced:
                cand &= ctx.incomp[img]
            else:
                cand &= all_mask & ~(1 << img)
        if rainbow:
            cand &= ~banned_colors_mask
        if fixed is not None and p in fixed:
            want = fixed[p]
            cand &= 1 << want
        return p, cand

    found = []

    def rec(depth, banned_colors_mask):
        if depth == t:
            if collect is not None:
                collect.append(tuple(images))
                return False
            found.append(tuple(images))
            return True
        p, cand = candidates(depth, banned_colors_mask)
        if cand == 0:
            return False
        for s in ctx.order:
            if not cand >> s & 1:
                continue
            images[p] = s
            nb = banned_colors_mask
            if rainbow:
                nb |= class_masks[color_of[s]]
            if rec(depth + 1, nb):
                return True
            images[p] = None
        return False

    if rec(0, 0):
        return found[0]
    return None


def find_induced_copy(n, host, P):
    """First induced embedding of P into host, or None."""
    img = _search_copy(n, host.bits, P, CopyMode.INDUCED)
    return Embedding(img, CopyMode.INDUCED) if img else None


def find_weak_copy(n, host, P):
    """First weak embedding of P into host, or None."""
    img = _search_copy(n, host.bits, P, CopyMode.WEAK)
    return Embedding(img, CopyMode.WEAK) if img else None


def find_copy(n, host, P, mode):
    mode = CopyMode(mode)
    if mode is CopyMode.INDUCED:
        return find_induced_copy(n, host, P)
    return find_weak_copy(n, host, P)


def find_mono_copy(c, P, mode=CopyMode.INDUCED):
    """An embedding of P into a single color class; scans colors upward."""
    mode = CopyMode(mode)
    for col, mask in enumerate(c.class_masks()):
        if mask.bit_count() < P.size:
            continue
        img = _search_copy(c.n, mask, P, mode)
        if img:
            return col, Embedding(img, mode)
    return None


def find_rainbow_copy(c, P, mode=CopyMode.INDUCED):
    """An embedding of P into B_n whose images have distinct colors."""
    mode = CopyMode(mode)
    if c.colors_used < P.size:
        return None
    host = (1 << (1 << c.n)) - 1
    img = _search_copy(c.n, host, P, mode, class_masks=c.class_masks(), rainbow=True)
    return Embedding(img, mode) if img else None


def iter_copy_images(n, host_bits, P, mode):
    """All embeddings of P into the host, as image tuples."""
    sink = []
    _search_copy(n, host_bits, P, mode, collect=sink)
    return sink


def has_mono_copy_with(n, class_mask, P, mode, forced):
    """Does the color class contain a copy of P whose image includes forced?"""
    if class_mask.bit_count() < P.size:
        return False
    for p in range(P.size):
        if _search_copy(n, class_mask, P, mode, fixed={p: forced}):
            return True
    return False


def has_rainbow_copy_with(n, host_bits, P, mode, class_masks, forced):
    """Rainbow copy of P inside host_bits whose image includes forced?"""
    for p in range(P.size):
        if _search_copy(
            n, host_bits, P, mode, class_masks=class_masks, rainbow=True,
            fixed={p: forced},
        ):
            return True
    return False


def max_rainbow_chain(c):
    """Longest chain of nested sets with pairwise distinct colors."""
    ctx = _DetectCtx(c.n)
    class_masks = c.class_masks()
    best_len = 0
    best_chain = []
    order = ctx.order
    n = c.n

    def extend(last, banned, chain):
        nonlocal best_len, best_chain
        if len(chain) > best_len:
            best_len = len(chain)
            best_chain = list(chain)
        # Levels strictly above can add at most this many sets.
        if len(chain) + (n - last.bit_count()) <= best_len:
            return
        sup = ctx.strict_sup[last] & ~banned
        for s in order:
            if sup >> s & 1:
                chain.append(s)
                extend(s, banned | class_masks[c.colors[s]], chain)
                chain.pop()

    for s in order:
        extend(s, class_masks[c.colors[s]], [s])
    return best_len, best_chain
