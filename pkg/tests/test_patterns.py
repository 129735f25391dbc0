"""Pattern posets, copy detection, and colorings."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from rlw import (
    Coloring,
    CopyMode,
    FamilyMask,
    PatternError,
    antichain,
    boolean,
    chain,
    disjoint_chains,
    find_copy,
    find_induced_copy,
    find_mono_copy,
    find_rainbow_copy,
    find_weak_copy,
    fork,
    from_covers,
    make_pattern,
    max_rainbow_chain,
)
from conftest import brute_force_copies, iter_exact_colorings


class TestConstructors:
    def test_chain_total_order(self):
        p = chain(3)
        assert all(p.leq(i, j) for i in range(3) for j in range(i, 3))

    def test_antichain_no_relations(self):
        p = antichain(3)
        assert not any(p.leq(i, j) for i in range(3) for j in range(3) if i != j)

    def test_fork_shape(self):
        p = fork()
        assert p.leq(0, 1) and p.leq(0, 2)
        assert not p.leq(1, 2) and not p.leq(2, 1)

    def test_boolean_two_is_diamond(self):
        p = boolean(2)
        bottom = [i for i in range(4) if all(p.leq(i, j) for j in range(4))]
        top = [i for i in range(4) if all(p.leq(j, i) for j in range(4))]
        assert len(bottom) == 1 and len(top) == 1

    def test_disjoint_chains_cross_incomparable(self):
        p = disjoint_chains(2, 2)
        assert p.leq(0, 1) and p.leq(2, 3)
        for i in (0, 1):
            for j in (2, 3):
                assert not p.leq(i, j) and not p.leq(j, i)

    def test_from_covers_transitive(self):
        p = from_covers([("a", "b"), ("b", "c")])
        assert p.leq(0, 2)

    def test_from_covers_cycle_rejected(self):
        with pytest.raises(PatternError):
            from_covers([("a", "b"), ("b", "a")])

    def test_descriptor_round_trip(self):
        for desc in ("chain:3", "antichain:2", "fork", "boolean:2", "disjoint:2x2"):
            assert make_pattern(desc).label == desc
        assert make_pattern("custom:[a<b,a<c]").size == 3

    def test_descriptor_rejects_garbage(self):
        for bad in ("chain", "chain:x", "boolean:9", "disjoint:20x2", ""):
            with pytest.raises(PatternError):
                make_pattern(bad)

    def test_size_cap(self):
        with pytest.raises(PatternError):
            chain(17)

    def test_extremes(self):
        assert boolean(2).has_maximum() and boolean(2).has_minimum()
        assert fork().has_minimum() and not fork().has_maximum()
        assert not antichain(2).has_minimum() and not antichain(2).has_maximum()


def _embedding_ok(P, image, induced):
    for i in range(P.size):
        for j in range(P.size):
            if i == j:
                continue
            strict = image[i] != image[j] and image[i] & ~image[j] == 0
            if P.leq(i, j) and not strict:
                return False
            if induced and not P.leq(i, j) and not P.leq(j, i) and strict:
                return False
    return True


PATTERNS = [chain(2), chain(3), antichain(2), fork(), boolean(2)]


class TestCopyDetectionAgainstOracle:
    @pytest.mark.parametrize("induced", [True, False])
    def test_full_host_small(self, induced):
        for n in (2, 3):
            host = FamilyMask.whole(n)
            codes = list(range(1 << n))
            for P in PATTERNS:
                oracle = brute_force_copies(n, codes, P, induced)
                found = (
                    find_induced_copy(n, host, P)
                    if induced
                    else find_weak_copy(n, host, P)
                )
                assert (found is not None) == (len(oracle) > 0)
                if found is not None:
                    assert _embedding_ok(P, found.map, induced)

    @pytest.mark.parametrize("induced", [True, False])
    def test_random_sub_hosts(self, induced):
        rng = random.Random(7)
        for _ in range(40):
            n = rng.choice((2, 3))
            codes = [s for s in range(1 << n) if rng.random() < 0.6]
            host = FamilyMask.from_members(n, codes)
            P = rng.choice(PATTERNS)
            oracle = brute_force_copies(n, codes, P, induced)
            mode = CopyMode.INDUCED if induced else CopyMode.WEAK
            found = find_copy(n, host, P, mode)
            assert (found is not None) == (len(oracle) > 0)
            if found is not None:
                assert set(found.map) <= set(codes)
                assert _embedding_ok(P, found.map, induced)

    def test_induced_implies_weak(self):
        for n in (2, 3):
            host = FamilyMask.whole(n)
            for P in PATTERNS:
                if find_induced_copy(n, host, P) is not None:
                    assert find_weak_copy(n, host, P) is not None

    def test_weak_chain_equals_induced_chain(self):
        # Chains are totally ordered, so weak and induced coincide.
        host = FamilyMask.from_members(3, [0, 1, 3, 7])
        assert find_weak_copy(3, host, chain(4)) is not None
        assert find_induced_copy(3, host, chain(4)) is not None


class TestColoring:
    def test_validation(self):
        with pytest.raises(Exception):
            Coloring(2, 2, (0, 1, 2, 0))

    def test_exact_recomputed(self):
        assert Coloring(1, 2, (0, 1)).exact
        assert not Coloring(1, 3, (0, 1)).exact

    def test_class_masks_partition(self):
        c = Coloring(2, 2, (0, 1, 1, 0))
        masks = c.class_masks()
        assert masks[0] | masks[1] == 0b1111 and masks[0] & masks[1] == 0

    def test_relabel(self):
        c = Coloring(2, 2, (0, 1, 1, 0))
        assert c.relabel([1, 0]).colors == (1, 0, 0, 1)


class TestMonoAndRainbow:
    def test_mono_copy_in_class(self):
        c = Coloring(2, 2, (0, 0, 1, 0))  # class 0 holds a 3-chain
        hit = find_mono_copy(c, chain(3))
        assert hit is not None
        col, emb = hit
        assert col == 0
        assert all(c.colors[s] == 0 for s in emb.map)

    def test_rainbow_copy(self):
        c = Coloring(2, 3, (0, 1, 1, 2))
        emb = find_rainbow_copy(c, chain(3))
        assert emb is not None
        assert len({c.colors[s] for s in emb.map}) == 3

    def test_rainbow_needs_enough_colors(self):
        c = Coloring(2, 2, (0, 1, 1, 0))
        assert find_rainbow_copy(c, chain(3)) is None

    def test_color_permutation_invariance(self):
        rng = random.Random(3)
        for c in itertools.islice(iter_exact_colorings(2, 3), 0, None, 2):
            perm = [0, 1, 2]
            rng.shuffle(perm)
            d = c.relabel(perm)
            for P in (chain(3), fork()):
                assert (find_rainbow_copy(c, P) is None) == (
                    find_rainbow_copy(d, P) is None
                )
                assert (find_mono_copy(c, P) is None) == (
                    find_mono_copy(d, P) is None
                )

    def test_ground_permutation_invariance(self):
        # Relabeling ground elements preserves copy existence.
        rng = random.Random(5)
        n = 3
        perm = [2, 0, 1]

        def remap(s):
            out = 0
            for i in range(n):
                if s >> i & 1:
                    out |= 1 << perm[i]
            return out

        for _ in range(20):
            colors = tuple(rng.randrange(3) for _ in range(1 << n))
            c = Coloring(n, 3, colors)
            mapped = [0] * (1 << n)
            for s in range(1 << n):
                mapped[remap(s)] = colors[s]
            d = Coloring(n, 3, tuple(mapped))
            for P in (chain(3), fork(), boolean(2)):
                assert (find_rainbow_copy(c, P) is None) == (
                    find_rainbow_copy(d, P) is None
                )


class TestMaxRainbowChain:
    def test_matches_explicit_search(self):
        rng = random.Random(11)
        for _ in range(30):
            n = rng.choice((2, 3))
            k = rng.randint(2, 4)
            c = Coloring(n, k, tuple(rng.randrange(k) for _ in range(1 << n)))
            length, witness = max_rainbow_chain(c)
            # A rainbow chain of the reported length exists...
            assert len(witness) == length
            assert all(
                witness[i] & ~witness[i + 1] == 0 and witness[i] != witness[i + 1]
                for i in range(length - 1)
            )
            assert len({c.colors[s] for s in witness}) == length
            # ...and none longer (cross-check via rainbow chain pattern).
            assert find_rainbow_copy(c, chain(length + 1)) is None
            if length + 1 <= k:
                assert (
                    find_rainbow_copy(c, chain(length)) is not None or length == 0
                )

    @given(st.integers(2, 3), st.data())
    @settings(max_examples=30, deadline=None)
    def test_rainbow_chain_agreement_property(self, n, data):
        k = data.draw(st.integers(2, 4))
        colors = data.draw(
            st.tuples(*[st.integers(0, k - 1) for _ in range(1 << n)])
        )
        c = Coloring(n, k, colors)
        length, _ = max_rainbow_chain(c)
        assert (find_rainbow_copy(c, chain(length)) is not None) or length == 0
        assert find_rainbow_copy(c, chain(length + 1)) is None
