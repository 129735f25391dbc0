"""Shared helpers for the test suite."""

from __future__ import annotations

import itertools

from rlw import Coloring


def iter_exact_colorings(n, k):
    """Canonical representatives of exact k-colorings of B_n.

    Enumerates restricted-growth strings over subset codes 0..2^n-1 with
    exactly k classes; every exact k-coloring is a color permutation of
    exactly one output, so predicates invariant under color permutation
    can be checked on these alone.
    """
    size = 1 << n

    def rec(pos, used, seq):
        if pos == size:
            if used == k:
                yield Coloring(n, k, tuple(seq))
            return
        if used + (size - pos) < k:
            return
        for col in range(min(used + 1, k)):
            seq.append(col)
            yield from rec(pos + 1, max(used, col + 1), seq)
            seq.pop()

    yield from rec(0, 0, [])


def iter_all_colorings(n, k_max):
    """All exact colorings (canonical reps) with 2 <= k <= k_max."""
    for k in range(2, k_max + 1):
        yield from iter_exact_colorings(n, k)


def brute_force_copies(n, host_codes, P, induced):
    """Oracle: all embeddings of P into the host by raw enumeration."""
    out = []
    for image in itertools.permutations(host_codes, P.size):
        ok = True
        for i in range(P.size):
            for j in range(P.size):
                if i == j:
                    continue
                rel = image[i] != image[j] and image[i] & ~image[j] == 0
                if P.leq(i, j) and not (P.leq(j, i) or rel):
                    ok = False
                    break
                if induced and not P.leq(i, j) and not P.leq(j, i) and rel:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(image)
    return out
