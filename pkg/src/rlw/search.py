"""Canonical pruned enumeration of colorings and Ramsey-style numbers.

Colorings are enumerated as restricted-growth strings: a fresh color may
be used only after all smaller colors have appeared, so every set
partition (and every exact k-coloring up to color relabeling) is visited
exactly once.  Subsets are assigned in (size, bitmask) order and a
branch dies the moment the colored prefix contains a rainbow copy of
the rainbow target or a monochromatic copy of the mono target.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import time
from dataclasses import dataclass, field

from .lattice import LatticeError, canonical_order, canonical_position, check_ground
from .patterns import (
    Coloring,
    CopyMode,
    PatternPoset,
    find_mono_copy,
    find_rainbow_copy,
    has_mono_copy_with,
    has_rainbow_copy_with,
    iter_copy_images,
)

DEFAULT_BUDGET = 10**8


class BudgetExceeded(Exception):
    def __init__(self, nodes):
        super().__init__(f"node budget exhausted after {nodes} expansions")
        self.nodes = nodes


class ModelError(LatticeError):
    pass


def default_budget():
    raw = os.environ.get("RLW_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class Palette:
    kind: str  # "exact" | "at_most" | "unbounded"
    k: int | None = None

    def __post_init__(self):
        if self.kind not in ("exact", "at_most", "unbounded"):
            raise LatticeError(f"unknown palette kind {self.kind!r}")
        if self.kind == "unbounded":
            if self.k is not None:
                raise LatticeError("unbounded palette takes no k")
        elif not isinstance(self.k, int) or self.k < 1:
            raise LatticeError("finite palette needs k >= 1")


def exact_k(k):
    return Palette("exact", k)


def at_most_k(k):
    return Palette("at_most", k)


UNBOUNDED = Palette("unbounded")


@dataclass(frozen=True)
class AvoidanceSpec:
    n: int
    rainbow: PatternPoset | None = None
    mono: PatternPoset | None = None
    palette: Palette = UNBOUNDED
    mode: CopyMode = CopyMode.INDUCED

    def __post_init__(self):
        check_ground(self.n)
        if self.rainbow is None and self.mono is None:
            raise LatticeError("avoidance spec needs at least one target")
        if self.palette.kind == "exact" and self.palette.k > 1 << self.n:
            raise LatticeError(
                f"exact palette k={self.palette.k} exceeds 2^n={1 << self.n}"
            )
        object.__setattr__(self, "mode", CopyMode(self.mode))

    def describe(self):
        return {
            "n": self.n,
            "rainbow": self.rainbow.label if self.rainbow else None,
            "mono": self.mono.label if self.mono else None,
            "palette": self.palette.kind,
            "k": self.palette.k,
            "mode": self.mode.value,
        }

    def fingerprint(self):
        blob = json.dumps(self.describe(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def accepts(self, c):
        """Independent re-verification of a finished coloring."""
        if c.n != self.n:
            return False
        if self.palette.kind == "exact" and not (c.k == self.palette.k and c.exact):
            return False
        if self.palette.kind == "at_most" and c.colors_used > self.palette.k:
            return False
        if self.rainbow is not None and find_rainbow_copy(c, self.rainbow, self.mode):
            return False
        if self.mono is not None and find_mono_copy(c, self.mono, self.mode):
            return False
        return True


def _normalize_prefix(seq):
    relabel = {}
    out = []
    for col in seq:
        if col not in relabel:
            relabel[col] = len(relabel)
        out.append(relabel[col])
    return out


class _Counter:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget):
        self.nodes = 0
        self.budget = budget

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.nodes)


def iter_avoiders(spec, budget=None, order=None, symmetry=None, counter=None):
    """Yield every canonical avoiding coloring of the spec.

    Raises BudgetExceeded when the node budget runs out, so exhaustion
    is witnessed by normal generator termination.
    """
    n = spec.n
    size = 1 << n
    default_order = list(canonical_order(n))
    order = list(order) if order is not None else default_order
    if sorted(order) != list(range(size)):
        raise LatticeError("assignment order must be a permutation of all subsets")
    canonical = order == default_order
    if symmetry is None:
        symmetry = canonical
    symmetry = symmetry and canonical
    if counter is None:
        counter = _Counter(budget if budget is not None else default_budget())

    palette = spec.palette
    exact = palette.kind == "exact"
    kmax = size if palette.kind == "unbounded" else palette.k
    q, p, mode = spec.rainbow, spec.mono, spec.mode

    colors = [0] * size
    class_masks = [0] * kmax
    assigned_mask = 0

    def declared_k(used):
        return used if palette.kind == "unbounded" else palette.k

    def sym_ok():
        prefix = [colors[order[i]] for i in range(n + 1)]
        singles = [colors[1 << i] for i in range(n)]
        for perm in itertools.permutations(range(n)):
            permuted = [colors[0]] + [singles[perm[i]] for i in range(n)]
            if _normalize_prefix(permuted) < prefix:
                return False
        return True

    def rec(depth, used):
        nonlocal assigned_mask
        if depth == size:
            if exact and used < palette.k:
                return
            yield Coloring(n, declared_k(used), tuple(colors))
            return
        s = order[depth]
        top = min(used + 1, kmax)
        remaining = size - depth - 1
        for col in range(top):
            new_used = used + 1 if col == used else used
            if exact and palette.k - new_used > remaining:
                continue
            counter.tick()
            colors[s] = col
            class_masks[col] |= 1 << s
            assigned_mask |= 1 << s
            ok = True
            if p is not None and has_mono_copy_with(n, class_masks[col], p, mode, s):
                ok = False
            if ok and q is not None and new_used >= q.size:
                if has_rainbow_copy_with(n, assigned_mask, q, mode, class_masks, s):
                    ok = False
            if ok and symmetry and depth == n:
                ok = sym_ok()
            if ok:
                yield from rec(depth + 1, new_used)
            class_masks[col] &= ~(1 << s)
            assigned_mask &= ~(1 << s)
        colors[s] = 0

    yield from rec(0, 0)


@dataclass
class ExistsResult:
    coloring: Coloring | None
    exhausted: bool
    nodes: int
    seconds: float

    @property
    def indeterminate(self):
        return self.coloring is None and not self.exhausted


def exists_coloring(spec, budget=None, order=None, symmetry=None):
    """First avoiding coloring, or absence with an exhaustive flag."""
    counter = _Counter(budget if budget is not None else default_budget())
    start = time.monotonic()
    gen = iter_avoiders(spec, order=order, symmetry=symmetry, counter=counter)
    try:
        found = next(gen, None)
    except BudgetExceeded:
        return ExistsResult(None, False, counter.nodes, time.monotonic() - start)
    elapsed = time.monotonic() - start
    return ExistsResult(found, found is None, counter.nodes, elapsed)


@dataclass
class NumberResult:
    kind: str  # "R" | "RR" | "GR"
    value: int | None
    good: bool
    verified_up_to: int
    witnesses: dict = field(default_factory=dict)  # n -> avoiding Coloring
    exhausted: dict = field(default_factory=dict)  # n -> absence proved
    nodes: int = 0
    seconds: float = 0.0
    indeterminate: bool = False


def _scan(kind, make_spec, n_range, budget, stop_at_exhausted=False):
    start = time.monotonic()
    total_nodes = 0
    witnesses = {}
    exhausted = {}
    threshold = None
    indeterminate = False
    for n in n_range:
        spec = make_spec(n)
        if spec is None:  # vacuous: no exact coloring exists at this n
            exhausted[n] = True
            continue
        res = exists_coloring(spec, budget=budget)
        total_nodes += res.nodes
        if res.coloring is not None:
            witnesses[n] = res.coloring
        elif res.exhausted:
            exhausted[n] = True
            if threshold is None:
                threshold = n
            if stop_at_exhausted:
                break
        else:
            indeterminate = True
            break
    return (
        witnesses,
        exhausted,
        threshold,
        total_nodes,
        time.monotonic() - start,
        indeterminate,
    )


def compute_ramsey(P, k, mode=CopyMode.INDUCED, n_max=6, budget=None):
    """Least n <= n_max where every coloring with at most k colors has a
    monochromatic copy of P."""
    if k < 1:
        raise LatticeError("k must be >= 1")

    def make_spec(n):
        return AvoidanceSpec(n, mono=P, palette=at_most_k(k), mode=mode)

    value = None
    witnesses, exhausted, _t, nodes, secs, indet = _scan(
        "R", make_spec, range(1, n_max + 1), budget
    )
    for n in range(1, n_max + 1):
        if exhausted.get(n):
            value = n
            break
        if n not in witnesses:
            break
    return NumberResult(
        "R", value, False, n_max, witnesses, exhausted, nodes, secs, indet
    )


def compute_rr(Q, P, n_max=5, budget=None):
    """Least n <= n_max where every set partition of B_n has a rainbow
    copy of Q or a monochromatic copy of P."""

    def make_spec(n):
        return AvoidanceSpec(n, rainbow=Q, mono=P, palette=UNBOUNDED)

    value = None
    witnesses, exhausted, _t, nodes, secs, indet = _scan(
        "RR", make_spec, range(1, n_max + 1), budget
    )
    for n in range(1, n_max + 1):
        if exhausted.get(n):
            value = n
            break
        if n not in witnesses:
            break
    return NumberResult(
        "RR", value, False, n_max, witnesses, exhausted, nodes, secs, indet
    )


def compute_gr(Q, P, k, window, budget=None):
    """Scan exact k-colorings over the window (and all smaller N).

    good=True when no avoider exists at any N <= n_hi; otherwise
    value = 1 + the largest N in range admitting an avoider.  N with
    2^N < k admits no exact coloring and counts as avoider-free.
    """
    if k < 2:
        raise LatticeError("k must be >= 2")
    n_lo, n_hi = window
    if not 1 <= n_lo <= n_hi:
        raise LatticeError(f"bad window {window}")

    def make_spec(n):
        if (1 << n) < k:
            return None
        return AvoidanceSpec(n, rainbow=Q, mono=P, palette=exact_k(k))

    witnesses, exhausted, _t, nodes, secs, indet = _scan(
        "GR", make_spec, range(1, n_hi + 1), budget
    )
    good = not witnesses and not indet
    value = None
    if witnesses:
        value = 1 + max(witnesses)
    return NumberResult(
        "GR", value, good, n_hi, witnesses, exhausted, nodes, secs, indet
    )


# ---------------------------------------------------------------------------
# DIMACS export / decoding and the internal mini-solver


@dataclass
class CnfDocument:
    spec: AvoidanceSpec
    num_vars: int
    clauses: list
    text: str


def _var_maps(spec):
    n, k = spec.n, spec.palette.k
    size = 1 << n
    pos = canonical_position(n)

    def x_var(s, col):
        return pos[s] * k + col + 1

    pair_index = {}
    order = canonical_order(n)
    idx = size * k + 1
    for i in range(size):
        for j in range(i + 1, size):
            pair_index[(order[i], order[j])] = idx
            idx += 1

    def e_var(s, t):
        key = (s, t) if (pos[s], s) < (pos[t], t) else (t, s)
        a, b = key
        if (a, b) in pair_index:
            return pair_index[(a, b)]
        return pair_index[(b, a)]

    return x_var, e_var, idx - 1


def export_dimacs(spec):
    """CNF encoding of the avoidance spec (finite palettes only)."""
    if spec.palette.kind == "unbounded":
        raise LatticeError("DIMACS export needs a finite palette")
    n, k = spec.n, spec.palette.k
    size = 1 << n
    x_var, e_var, top_e = _var_maps(spec)
    clauses = []

    all_bits = (1 << size) - 1
    for s in range(size):
        clauses.append(tuple(x_var(s, c) for c in range(k)))
        for c1 in range(k):
            for c2 in range(c1 + 1, k):
                clauses.append((-x_var(s, c1), -x_var(s, c2)))
    if spec.palette.kind == "exact":
        for c in range(k):
            clauses.append(tuple(x_var(s, c) for s in range(size)))

    if spec.mono is not None:
        images = {
            frozenset(img)
            for img in iter_copy_images(n, all_bits, spec.mono, spec.mode)
        }
        for img in sorted(images, key=sorted):
            for c in range(k):
                clauses.append(tuple(-x_var(s, c) for s in sorted(img)))

    num_vars = size * k
    if spec.rainbow is not None:
        num_vars = top_e
        order = canonical_order(n)
        for i in range(size):
            for j in range(i + 1, size):
                s, t = order[i], order[j]
                e = e_var(s, t)
                for c in range(k):
                    clauses.append((-x_var(s, c), -x_var(t, c), e))
                    clauses.append((-e, -x_var(s, c), x_var(t, c)))
                    clauses.append((-e, -x_var(t, c), x_var(s, c)))
        images = {
            frozenset(img)
            for img in iter_copy_images(n, all_bits, spec.rainbow, spec.mode)
        }
        for img in sorted(images, key=sorted):
            members = sorted(img)
            clause = []
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    clause.append(e_var(members[a], members[b]))
            clauses.append(tuple(clause))

    lines = [
        "c boolean-lattice coloring avoidance",
        f"c spec-sha256: {spec.fingerprint()}",
    ]
    d = spec.describe()
    lines.append(
        "c n={n} palette={palette} k={k} mode={mode} rainbow={rainbow} "
        "mono={mono}".format(**d)
    )
    lines.append(f"p cnf {num_vars} {len(clauses)}")
    for cl in clauses:
        lines.append(" ".join(str(lit) for lit in cl) + " 0")
    return CnfDocument(spec, num_vars, clauses, "\n".join(lines) + "\n")


def parse_model(text):
    """Literals from DIMACS v-lines or a whitespace-separated file."""
    lits = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("c", "s")):
            continue
        if line.startswith("v"):
            line = line[1:]
        for tok in line.split():
            lit = int(tok)
            if lit != 0:
                lits.append(lit)
    return lits


def decode_model(spec, model):
    """Coloring from a satisfying assignment of export_dimacs(spec)."""
    if spec.palette.kind == "unbounded":
        raise LatticeError("DIMACS decoding needs a finite palette")
    n, k = spec.n, spec.palette.k
    size = 1 << n
    x_var, _e, _top = _var_maps(spec)
    truth = {}
    for lit in model:
        truth[abs(lit)] = lit > 0
    colors = []
    for s in range(size):
        chosen = [c for c in range(k) if truth.get(x_var(s, c))]
        if len(chosen) != 1:
            raise ModelError(
                f"model assigns {len(chosen)} colors to subset code {s}"
            )
        colors.append(chosen[0])
    return Coloring(n, k, tuple(colors))


def solve_cnf(num_vars, clauses):
    """Tiny DPLL with unit propagation; returns a model or None."""
    assign = {}

    def propagate(clauses):
        changed = True
        while changed:
            changed = False
            next_clauses = []
            for cl in clauses:
                live = []
                satisfied = False
                for lit in cl:
                    val = assign.get(abs(lit))
                    if val is None:
                        live.append(lit)
                    elif (lit > 0) == val:
                        satisfied = True
                        break
                if satisfied:
                    continue
                if not live:
                    return None
                if len(live) == 1:
                    lit = live[0]
                    assign[abs(lit)] = lit > 0
                    changed = True
                else:
                    next_clauses.append(live)
            clauses = next_clauses
        return clauses

    def dpll(clauses):
        clauses = propagate(clauses)
        if clauses is None:
            return False
        if not clauses:
            return True
        var = abs(clauses[0][0])
        for val in (True, False):
            saved = dict(assign)
            assign[var] = val
            if dpll([list(cl) for cl in clauses]):
                return True
            assign.clear()
            assign.update(saved)
        return False

    if not dpll([list(cl) for cl in clauses]):
        return None
    return [v if assign.get(v, False) else -v for v in range(1, num_vars + 1)]
