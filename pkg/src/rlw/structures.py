"""Generators, matchers and classifiers for rainbow-free coloring shapes.

Each shape is a named partition of B_n into monochromatic families with
pairwise distinct colors, plus a "free" region whose sets may take
either of two designated family colors.  Predicate shapes (C3Shape,
V2Case2, Type5) have matchers only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .lattice import (
    Bounds,
    FamilyMask,
    LatticeError,
    OrderViolation,
    PreconditionError,
    canonical_order,
    check_ground,
    check_subset,
    down_family,
    format_subset,
    full_set,
    interval,
    level,
    levels,
    parse_subset,
    up_family,
)
from .patterns import Coloring, max_rainbow_chain


class PaletteError(LatticeError):
    pass


class NotGenerable(LatticeError):
    """The shape is a predicate; it has no closed-form generator."""


@dataclass(frozen=True)
class C3Shape:
    pass


@dataclass(frozen=True)
class V2Case1:
    a: int


@dataclass(frozen=True)
class V2Case2:
    pass


@dataclass(frozen=True)
class Type1:
    x0: int
    y0: int


@dataclass(frozen=True)
class Type2:
    x0: int
    y0: int


@dataclass(frozen=True)
class Type3_1:
    x0: int
    y0: int


@dataclass(frozen=True)
class Type3_2:
    x0: int
    y0: int


@dataclass(frozen=True)
class Type4_1:
    x0: int
    y_family: FamilyMask


@dataclass(frozen=True)
class Type4_2:
    y0: int
    x_family: FamilyMask


@dataclass(frozen=True)
class Type5:
    """Predicate shape for c(empty) = c([n]); records its witness chains."""

    chains4: tuple = field(default=())
    nonext3: tuple = field(default=())
    mirror3_ok: bool = True  # informational: bottom-anchored 3-chain mirror


StructureInstance = (
    C3Shape,
    V2Case1,
    V2Case2,
    Type1,
    Type2,
    Type3_1,
    Type3_2,
    Type4_1,
    Type4_2,
    Type5,
)


@dataclass(frozen=True)
class Layout:
    """Named monochromatic families plus a two-color free region."""

    families: tuple  # ((name, bits over subset codes), ...)
    free_bits: int
    free_low: str
    free_high: str


def _require(cond, message):
    if not cond:
        raise PreconditionError(message)


def _check_pair(n, x0, y0):
    check_subset(n, x0)
    check_subset(n, y0)
    full = full_set(n)
    _require(x0 != 0, "X0 must be nonempty")
    _require(y0 != full, "Y0 must be a proper subset of the ground set")
    _require(x0 != y0 and x0 & ~y0 == 0, "need X0 strictly below Y0")
    _require(
        y0.bit_count() >= x0.bit_count() + 2,
        f"need |Y0| >= |X0|+2, got |X0|={x0.bit_count()}, |Y0|={y0.bit_count()}",
    )


def layout_for(n, inst):
    """The family layout of a generable interval shape."""
    check_ground(n)
    full = full_set(n)
    all_bits = (1 << (1 << n)) - 1

    if isinstance(inst, (Type1, Type2, Type3_1, Type3_2)):
        x0, y0 = inst.x0, inst.y0
        _check_pair(n, x0, y0)
        box = interval(n, x0, y0).bits
        below = interval(n, 0, y0).bits & ~box
        mid = interval(n, x0, y0, Bounds.OPEN).bits
        above = interval(n, x0, full).bits & ~box

    if isinstance(inst, Type1):
        free = all_bits & ~interval(n, 0, y0).bits & ~interval(n, x0, full).bits
        return Layout(
            (
                ("below", below),
                ("x0", 1 << x0),
                ("middle", mid),
                ("y0", 1 << y0),
                ("above", above),
            ),
            free,
            "below",
            "above",
        )

    if isinstance(inst, Type2):
        free = all_bits & ~interval(n, 0, y0).bits & ~interval(n, x0, full).bits
        return Layout(
            (
                ("below", below),
                ("ends", (1 << x0) | (1 << y0)),
                ("middle", mid),
                ("above", above),
            ),
            free,
            "below",
            "above",
        )

    if isinstance(inst, Type3_1):
        up = up_family(n, x0, y0).bits
        half_open = interval(n, x0, y0, Bounds.OPEN_LO).bits
        side = (1 << x0) | (up & ~half_open)
        free = all_bits & ~interval(n, 0, y0).bits & ~up
        return Layout(
            (
                ("below", below),
                ("x0_side", side),
                ("middle", mid),
                ("y0", 1 << y0),
            ),
            free,
            "below",
            "x0_side",
        )

    if isinstance(inst, Type3_2):
        down = down_family(n, x0, y0).bits
        half_open = interval(n, x0, y0, Bounds.OPEN_HI).bits
        side = (1 << y0) | (down & ~half_open)
        free = all_bits & ~interval(n, x0, full).bits & ~down
        return Layout(
            (
                ("above", above),
                ("y0_side", side),
                ("middle", mid),
                ("x0", 1 << x0),
            ),
            free,
            "above",
            "y0_side",
        )

    if isinstance(inst, Type4_1):
        x0 = inst.x0
        check_subset(n, x0)
        _require(1 <= x0.bit_count() <= n - 2, "need 1 <= |X0| <= n-2")
        yfam = inst.y_family
        _require(
            isinstance(yfam, FamilyMask) and yfam.n == n and len(yfam) > 0,
            "Y_family must be a nonempty family over the same n",
        )
        strict_up = interval(n, x0, full, Bounds.OPEN_LO).bits
        _require(yfam.bits & ~strict_up == 0, "Y_family must lie strictly above X0")
        below = 0
        low_cones = 0
        for y in yfam.members():
            below |= interval(n, 0, y, Bounds.OPEN_HI).bits & ~interval(
                n, x0, y, Bounds.OPEN_HI
            ).bits
            low_cones |= interval(n, 0, y, Bounds.OPEN_HI).bits
        free = all_bits & ~interval(n, x0, full).bits & ~low_cones
        return Layout(
            (
                ("below", below),
                ("x0", 1 << x0),
                ("rest", strict_up & ~yfam.bits),
                ("y_family", yfam.bits),
            ),
            free,
            "below",
            "rest",
        )

    if isinstance(inst, Type4_2):
        y0 = inst.y0
        check_subset(n, y0)
        _require(2 <= y0.bit_count() <= n - 1, "need 2 <= |Y0| <= n-1")
        xfam = inst.x_family
        _require(
            isinstance(xfam, FamilyMask) and xfam.n == n and len(xfam) > 0,
            "X_family must be a nonempty family over the same n",
        )
        strict_down = interval(n, 0, y0, Bounds.OPEN).bits
        _require(xfam.bits & ~strict_down == 0, "X_family must lie strictly below Y0")
        above = 0
        up_cones = 0
        for x in xfam.members():
            above |= interval(n, x, full, Bounds.OPEN_LO).bits & ~interval(
                n, x, y0, Bounds.OPEN_LO
            ).bits
            up_cones |= interval(n, x, full, Bounds.OPEN_LO).bits
        free = all_bits & ~interval(n, 0, y0).bits & ~up_cones
        return Layout(
            (
                ("above", above),
                ("y0", 1 << y0),
                ("rest", interval(n, 0, y0, Bounds.OPEN_HI).bits & ~xfam.bits),
                ("x_family", xfam.bits),
            ),
            free,
            "above",
            "rest",
        )

    if isinstance(inst, V2Case1):
        a = inst.a
        check_subset(n, a)
        _require(a.bit_count() <= n - 2, "need |A| <= n-2")
        cone = interval(n, a, full).bits
        return Layout(
            (
                ("outside", all_bits & ~cone & ~(1 << full)),
                ("a", 1 << a),
                ("above", interval(n, a, full, Bounds.OPEN).bits),
            ),
            0,
            "outside",
            "outside",
        )

    raise NotGenerable(f"{type(inst).__name__} is a predicate shape with no layout")


def generate_structure(n, inst, palette=None, free="low", top=None):
    """Build a Coloring realizing a generable instance.

    palette maps family names to 0-based colors (default: 0,1,2,... in
    family order).  free is "low", "high", or a per-subset dict of
    those two choices.  V2Case1 additionally takes the color of [n]
    via top (default: a fresh color).
    """
    layout = layout_for(n, inst)
    names = [name for name, _ in layout.families]
    if palette is None:
        palette = {name: i for i, name in enumerate(names)}
    missing = [name for name in names if name not in palette]
    if missing:
        raise PaletteError(f"palette missing families: {missing}")
    nonempty = [name for name, bits in layout.families if bits]
    used = [palette[name] for name in nonempty]
    if len(set(used)) != len(used):
        raise PaletteError("distinct-color families share a palette color")

    colors = {}
    for name, bits in layout.families:
        col = palette[name]
        s_bits = bits
        while s_bits:
            low = s_bits & -s_bits
            colors[low.bit_length() - 1] = col
            s_bits ^= low

    lo_col = palette[layout.free_low]
    hi_col = palette[layout.free_high]
    fbits = layout.free_bits
    while fbits:
        low = fbits & -fbits
        s = low.bit_length() - 1
        fbits ^= low
        if isinstance(free, dict):
            choice = free.get(s, "low")
        else:
            choice = free
        if choice not in ("low", "high"):
            raise PaletteError(f"free choice must be low/high, got {choice!r}")
        colors[s] = lo_col if choice == "low" else hi_col

    if isinstance(inst, V2Case1):
        if top is None:
            top = max(colors.values()) + 1
        colors[full_set(n)] = top

    k = max(colors.values()) + 1
    return Coloring(n, k, tuple(colors[s] for s in range(1 << n)))


def _layout_matches(c, layout):
    fam_colors = {}
    for name, bits in layout.families:
        if bits == 0:
            continue
        cols = {c.colors[s] for s in FamilyMask(c.n, bits).members()}
        if len(cols) != 1:
            return False
        fam_colors[name] = cols.pop()
    if len(set(fam_colors.values())) != len(fam_colors):
        return False
    allowed = {
        fam_colors[name]
        for name in (layout.free_low, layout.free_high)
        if name in fam_colors
    }
    fbits = layout.free_bits
    while fbits:
        low = fbits & -fbits
        s = low.bit_length() - 1
        fbits ^= low
        if c.colors[s] not in allowed:
            return False
    return fam_colors


def matches_structure(c, inst):
    """Does the coloring satisfy every clause of the instance?"""
    if isinstance(inst, C3Shape):
        return check_c3_shape(c)
    if isinstance(inst, V2Case2):
        return _matches_v2case2(c)
    if isinstance(inst, Type5):
        return type5_match(c) is not None
    if isinstance(inst, V2Case1):
        return _matches_v2case1(c, inst)
    try:
        layout = layout_for(c.n, inst)
    except PreconditionError:
        return False
    return _layout_matches(c, layout) is not False


def check_c3_shape(c):
    """No-rainbow-C3 shape: bottom and top share a color, and strictly
    intermediate sets whose colors differ from each other and from the
    bottom are pairwise incomparable."""
    n = c.n
    if n < 2:
        raise PreconditionError("shape check needs n >= 2")
    if c.k < 3:
        raise PreconditionError("shape check needs k >= 3")
    full = full_set(n)
    base = c.colors[0]
    if c.colors[full] != base:
        return False
    mids = [s for s in range(1, full) ]
    for i, x in enumerate(mids):
        cx = c.colors[x]
        if cx == base:
            continue
        for y in mids[i + 1 :]:
            cy = c.colors[y]
            if cy == base or cy == cx:
                continue
            if x & ~y == 0 or y & ~x == 0:
                return False
    return True


def _matches_v2case1(c, inst):
    try:
        layout = layout_for(c.n, inst)
    except PreconditionError:
        return False
    fam_colors = _layout_matches(c, layout)
    if fam_colors is False:
        return False
    full = full_set(c.n)
    kused = c.colors_used
    if kused == 3:
        return True
    if kused == 4:
        below_top = {c.colors[s] for s in range(full)}
        return c.colors[full] not in below_top
    return False


def _matches_v2case2(c):
    full = full_set(c.n)
    below_top = {c.colors[s] for s in range(full)}
    return len(below_top) == 2 and c.colors[full] not in below_top


def classify_v2(c):
    """Match Theorem-style case (1) with its set A, else case (2)."""
    if c.n < 2 or c.k < 3:
        raise PreconditionError("classification needs n >= 2 and k >= 3")
    if not c.exact:
        raise PreconditionError("classification needs an exact coloring")
    for a in canonical_order(c.n):
        if a.bit_count() > c.n - 2:
            continue
        inst = V2Case1(a)
        if _matches_v2case1(c, inst):
            return inst
    if _matches_v2case2(c):
        return V2Case2()
    return None


def _type5_families(n, w, y):
    """Clause-(1) family layout around an inner pair w < y."""
    full = full_set(n)
    up = up_family(n, w, y).bits
    down = down_family(n, w, y).bits
    box = interval(n, w, y).bits
    mid = interval(n, w, y, Bounds.OPEN).bits
    first = (up | down) & ~box
    low_rest = interval(n, 0, y, Bounds.OPEN_HI).bits & ~down
    high_rest = interval(n, w, full, Bounds.OPEN_LO).bits & ~up
    return first, mid, low_rest, high_rest


def _type5_clause1_ok(c, w, y):
    n = c.n
    first, mid, low_rest, high_rest = _type5_families(n, w, y)
    fams = [first, 1 << w, mid, 1 << y]
    cols = []
    for bits in fams:
        if bits == 0:
            cols.append(None)
            continue
        seen = {c.colors[s] for s in FamilyMask(n, bits).members()}
        if len(seen) != 1:
            return False
        cols.append(seen.pop())
    present = [col for col in cols if col is not None]
    if len(set(present)) != len(present):
        return False
    c_first, c_w, _c_mid, c_y = cols
    for s in FamilyMask(n, low_rest).members():
        if c.colors[s] not in {c_first, c_y}:
            return False
    for s in FamilyMask(n, high_rest).members():
        if c.colors[s] not in {c_first, c_w}:
            return False
    return True


def _rainbow_chains4_anchored(c):
    """Rainbow 4-chains ending at [n] or starting at the empty set."""
    n = c.n
    full = full_set(n)
    order = canonical_order(n)
    tops, bottoms = [], []
    base = c.colors[0]
    strict = [s for s in order if 0 < s < full]
    for w in strict:
        for x in strict:
            if x == w or w & ~x:
                continue
            for y in strict:
                if y == x or x & ~y:
                    continue
                trio = {c.colors[w], c.colors[x], c.colors[y]}
                if len(trio) != 3:
                    continue
                if c.colors[full] not in trio:
                    tops.append((w, x, y, full))
                if base not in trio:
                    bottoms.append((0, w, x, y))
    return tops, bottoms


def _nonextendable_rainbow3(c):
    """Rainbow 3-chains (W, Y, [n]) with no rainbow 4-chain extension."""
    n = c.n
    full = full_set(n)
    out = []
    for w in range(1, full):
        cw = c.colors[w]
        if cw == c.colors[full]:
            continue
        for y in range(1, full):
            if y == w or w & ~y:
                continue
            cy = c.colors[y]
            if cy == cw or cy == c.colors[full]:
                continue
            used = {cw, cy, c.colors[full]}
            extendable = False
            for z in range(full):
                if z in (w, y) or c.colors[z] in used:
                    continue
                if (
                    z & ~w == 0
                    or (w & ~z == 0 and z & ~y == 0)
                    or (y & ~z == 0)
                ):
                    extendable = True
                    break
            if not extendable:
                out.append((w, y))
    return out


def _chain3_union_ok(c, w, y):
    n = c.n
    full = full_set(n)
    union = interval(n, 0, y) | interval(n, w, full)
    cols = {c.colors[s] for s in union.members()}
    return len(cols) == 3


def type5_match(c):
    """Type-5 matcher; returns a Type5 instance or None."""
    n = c.n
    full = full_set(n)
    if c.colors[0] != c.colors[full]:
        return None
    length, _ = max_rainbow_chain(c)
    if length > 4:
        return None
    tops, bottoms = _rainbow_chains4_anchored(c)
    for w, x, y, _top in tops:
        if not _type5_clause1_ok(c, w, y):
            return None
    for _bot, w, x, y in bottoms:
        if not _type5_clause1_ok(c, w, y):
            return None
    nonext = _nonextendable_rainbow3(c)
    for w, y in nonext:
        if not _chain3_union_ok(c, w, y):
            return None
    # Bottom-anchored 3-chain mirror, informational only.
    mirror_ok = True
    base = c.colors[0]
    for w in range(1, full):
        if c.colors[w] == base:
            continue
        for y in range(1, full):
            if y == w or w & ~y or c.colors[y] in (base, c.colors[w]):
                continue
            used = {base, c.colors[w], c.colors[y]}
            extendable = any(
                z not in (w, y)
                and c.colors[z] not in used
                and (
                    (z and z & ~w == 0)
                    or (w & ~z == 0 and z & ~y == 0)
                    or (y & ~z == 0 and z != full)
                )
                for z in range(1, 1 << n)
            )
            if not extendable and not _chain3_union_ok(c, w, y):
                mirror_ok = False
    return Type5(tuple(tops), tuple(nonext), mirror_ok)


def _candidate_pairs(n):
    order = canonical_order(n)
    full = full_set(n)
    for x0 in order:
        if x0 == 0 or x0 == full:
            continue
        for y0 in order:
            if y0 in (0, full, x0):
                continue
            if x0 & ~y0 or y0.bit_count() < x0.bit_count() + 2:
                continue
            yield x0, y0


def classify_b2(c):
    """Match a no-rainbow-B2 shape: Types 1..4-2 when the bottom and
    top colors differ, Type 5 when they agree."""
    if c.k < 4:
        raise PreconditionError("classification needs k >= 4")
    n = c.n
    full = full_set(n)
    if c.colors[0] != c.colors[full]:
        for ctor in (Type1, Type2, Type3_1, Type3_2):
            for x0, y0 in _candidate_pairs(n):
                inst = ctor(x0, y0)
                if matches_structure(c, inst):
                    return inst
        class_masks = c.class_masks()
        for x0 in canonical_order(n):
            if not 1 <= x0.bit_count() <= n - 2:
                continue
            for mask in class_masks:
                if mask == 0 or mask >> x0 & 1:
                    continue
                inst = Type4_1(x0, FamilyMask(n, mask))
                if matches_structure(c, inst):
                    return inst
        for y0 in canonical_order(n):
            if not 2 <= y0.bit_count() <= n - 1:
                continue
            for mask in class_masks:
                if mask == 0 or mask >> y0 & 1:
                    continue
                inst = Type4_2(y0, FamilyMask(n, mask))
                if matches_structure(c, inst):
                    return inst
        return None
    return type5_match(c)


def lower_bound_gr_c3(s, k):
    """Layered coloring of B_{s-1} avoiding rainbow C3 and mono C_s."""
    from math import comb

    _require(s >= 3, "need s >= 3")
    n = s - 1
    cap = comb(n, (n + 1) // 2) + 1
    if not 3 <= k <= cap:
        raise PreconditionError(f"need 3 <= k <= {cap}, got k={k}")
    mid = level(n, n // 2).canonical_members()
    colors = [0] * (1 << n)
    for s_code in mid:
        colors[s_code] = 1
    for i, s_code in enumerate(mid[: k - 1]):
        colors[s_code] = i + 1
    return Coloring(n, k, tuple(colors))


def lower_bound_gr_v2(s, k):
    """Layered colorings avoiding rainbow fork and mono C_s (k in {3,4})."""
    if k == 3:
        _require(s >= 2, "need s >= 2 for k=3")
        n = 2 * s - 2
        colors = []
        for code in range(1 << n):
            size = code.bit_count()
            if size == n:
                colors.append(2)
            elif size <= s - 2:
                colors.append(0)
            else:
                colors.append(1)
        return Coloring(n, 3, tuple(colors))
    if k == 4:
        _require(s >= 4, "need s >= 4 for k=4")
        n = s - 1
        full = full_set(n)
        one = 1  # the singleton {1}
        colors = [0] * (1 << n)
        colors[one] = 1
        for code in interval(n, one, full, Bounds.OPEN).members():
            colors[code] = 2
        colors[full] = 3
        return Coloring(n, 4, tuple(colors))
    raise PreconditionError(f"k must be 3 or 4, got {k}")


def blob_partition(m, n0):
    """The 2^m - 1 interval sublattices of B_{m*n0+m}, each a copy of
    B_{n0}, whose cross containments mirror label containment."""
    _require(m >= 1 and n0 >= 1, "need m >= 1 and n0 >= 1")
    n = m * n0 + m
    check_ground(n)
    blocks = []
    for block in range(1, m + 1):
        bits = 0
        for e in range(m + (block - 1) * n0 + 1, m + block * n0 + 1):
            bits |= 1 << (e - 1)
        blocks.append(bits)
    out = []
    labels = sorted(range(1, 1 << m), key=lambda s: (s.bit_count(), s))
    for label in labels:
        j = label.bit_count()
        lo = label
        for ell in range(j - 1):
            lo |= blocks[ell]
        hi = lo | blocks[j - 1]
        out.append((label, lo, hi))
    return out


_TAGS = {
    "C3Shape": C3Shape,
    "V2Case1": V2Case1,
    "V2Case2": V2Case2,
    "Type1": Type1,
    "Type2": Type2,
    "Type3_1": Type3_1,
    "Type3_2": Type3_2,
    "Type4_1": Type4_1,
    "Type4_2": Type4_2,
    "Type5": Type5,
}


def instance_to_json(inst, n):
    doc = {"type": type(inst).__name__, "n": n}
    if isinstance(inst, V2Case1):
        doc["A"] = format_subset(inst.a)
    elif isinstance(inst, (Type1, Type2, Type3_1, Type3_2)):
        doc["X0"] = format_subset(inst.x0)
        doc["Y0"] = format_subset(inst.y0)
    elif isinstance(inst, Type4_1):
        doc["X0"] = format_subset(inst.x0)
        doc["Y_family"] = [
            format_subset(s) for s in inst.y_family.canonical_members()
        ]
    elif isinstance(inst, Type4_2):
        doc["Y0"] = format_subset(inst.y0)
        doc["X_family"] = [
            format_subset(s) for s in inst.x_family.canonical_members()
        ]
    elif isinstance(inst, Type5):
        doc["chains4"] = [
            [format_subset(s) for s in chain] for chain in inst.chains4
        ]
        doc["nonextendable3"] = [
            [format_subset(s) for s in pair] for pair in inst.nonext3
        ]
        doc["mirror3_ok"] = inst.mirror3_ok
    return doc


def instance_from_json(doc):
    tag = doc["type"]
    if tag not in _TAGS:
        raise LatticeError(f"unknown structure type {tag!r}")
    n = doc["n"]
    check_ground(n)
    if tag == "V2Case1":
        return V2Case1(parse_subset(doc["A"], n)), n
    if tag in ("Type1", "Type2", "Type3_1", "Type3_2"):
        return (
            _TAGS[tag](parse_subset(doc["X0"], n), parse_subset(doc["Y0"], n)),
            n,
        )
    if tag == "Type4_1":
        yfam = FamilyMask.from_members(
            n, [parse_subset(t, n) for t in doc["Y_family"]]
        )
        return Type4_1(parse_subset(doc["X0"], n), yfam), n
    if tag == "Type4_2":
        xfam = FamilyMask.from_members(
            n, [parse_subset(t, n) for t in doc["X_family"]]
        )
        return Type4_2(parse_subset(doc["Y0"], n), xfam), n
    return _TAGS[tag](), n
