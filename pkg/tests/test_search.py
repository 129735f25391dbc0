"""Avoidance search engine, number scans, and the CNF bridge."""

import math
import random

import pytest

from rlw import (
    AvoidanceSpec,
    Coloring,
    UNBOUNDED,
    at_most_k,
    boolean,
    chain,
    compute_gr,
    compute_ramsey,
    compute_rr,
    decode_model,
    exact_k,
    exists_coloring,
    export_dimacs,
    fork,
    iter_avoiders,
    parse_model,
    solve_cnf,
)
from rlw.search import BudgetExceeded, _Counter


def _stirling2(n, k):
    return sum(
        (-1) ** (k - j) * math.comb(k, j) * j**n for j in range(k + 1)
    ) // math.factorial(k)


class TestEnumeration:
    def test_exact_partition_counts(self):
        # With no targets beyond a trivial one, the enumeration visits
        # every canonical exact k-coloring: Stirling numbers.
        for k in range(1, 5):
            spec = AvoidanceSpec(2, mono=chain(5), palette=exact_k(k))
            count = sum(1 for _ in iter_avoiders(spec, symmetry=False))
            assert count == _stirling2(4, k)

    def test_unbounded_counts_bell(self):
        spec = AvoidanceSpec(2, mono=chain(5), palette=UNBOUNDED)
        assert sum(1 for _ in iter_avoiders(spec, symmetry=False)) == 15  # Bell(4)

    def test_avoiders_actually_avoid(self):
        spec = AvoidanceSpec(
            3, rainbow=chain(3), mono=chain(3), palette=exact_k(3)
        )
        seen = 0
        for c in iter_avoiders(spec):
            seen += 1
            assert spec.accepts(c)
        # Independent recount by raw filtering over canonical colorings.
        from conftest import iter_exact_colorings
        from rlw import find_mono_copy, find_rainbow_copy

        brute = sum(
            1
            for c in iter_exact_colorings(3, 3)
            if find_rainbow_copy(c, chain(3)) is None
            and find_mono_copy(c, chain(3)) is None
        )
        assert seen == brute

    def test_order_independence(self):
        rng = random.Random(2)
        spec = AvoidanceSpec(2, rainbow=chain(3), palette=exact_k(3))
        baseline = sum(1 for _ in iter_avoiders(spec))
        for _ in range(5):
            order = list(range(4))
            rng.shuffle(order)
            assert (
                sum(1 for _ in iter_avoiders(spec, order=order, symmetry=False))
                == baseline
            )

    def test_symmetry_pruning_agrees_on_existence(self):
        # Orbit-leader pruning may drop equivalent avoiders but must
        # never change whether any avoider exists.
        specs = []
        for rainbow in (None, chain(3), fork(), boolean(2)):
            for mono in (None, chain(2), chain(3)):
                if rainbow is None and mono is None:
                    continue
                for k in (2, 3, 4):
                    specs.append(
                        AvoidanceSpec(2, rainbow=rainbow, mono=mono, palette=exact_k(k))
                    )
        for spec in specs:
            with_sym = exists_coloring(spec, symmetry=True)
            without = exists_coloring(spec, symmetry=False)
            assert (with_sym.coloring is None) == (without.coloring is None), spec

    def test_budget_indeterminate(self):
        spec = AvoidanceSpec(3, rainbow=boolean(2), palette=exact_k(4))
        res = exists_coloring(spec, budget=3)
        assert res.indeterminate
        assert res.coloring is None and not res.exhausted

    def test_budget_exception_from_generator(self):
        spec = AvoidanceSpec(3, rainbow=boolean(2), palette=exact_k(4))
        gen = iter_avoiders(spec, counter=_Counter(2))
        with pytest.raises(BudgetExceeded):
            list(gen)


class TestNumbers:
    def test_ramsey_two_chain(self):
        assert compute_ramsey(chain(2), 3).value == 3

    def test_ramsey_three_chain(self):
        assert compute_ramsey(chain(3), 2).value == 4

    def test_ramsey_witnesses_verify(self):
        res = compute_ramsey(chain(2), 3)
        for n, c in res.witnesses.items():
            spec = AvoidanceSpec(n, mono=chain(2), palette=at_most_k(3))
            assert spec.accepts(c)

    def test_rr_fork_two_chain(self):
        res = compute_rr(fork(), chain(2), n_max=4)
        assert res.value == 3
        assert res.exhausted.get(3)

    def test_rr_two_chain_pair(self):
        # Every partition of B_1 = {{}, {1}} is monochromatic or rainbow
        # on its unique 2-chain, so the threshold is already 1.
        assert compute_rr(chain(2), chain(2), n_max=3).value == 1

    def test_gr_fork_two_chain(self):
        res = compute_gr(fork(), chain(2), 3, (2, 4))
        assert res.value == 3 and not res.good

    def test_gr_good_pair(self):
        res = compute_gr(chain(3), chain(3), 4, (1, 4))
        assert res.good and res.value is None

    def test_gr_vacuous_levels_count_as_closed(self):
        # k=4 > 2^1, so N=1 admits no exact coloring at all.
        res = compute_gr(chain(3), chain(3), 4, (1, 2))
        assert res.exhausted.get(1) is True

    def test_gr_witness_reverification(self):
        res = compute_gr(chain(3), chain(4), 3, (1, 4))
        assert res.value == 4
        for n, c in res.witnesses.items():
            spec = AvoidanceSpec(
                n, rainbow=chain(3), mono=chain(4), palette=exact_k(3)
            )
            assert spec.accepts(c)


class TestCnf:
    def _specs(self):
        out = []
        for n in (1, 2):
            for q in (chain(3), fork(), boolean(2)):
                for p in (chain(2), chain(3)):
                    for k in (2, 3, 4):
                        if k > 1 << n:
                            continue
                        out.append(
                            AvoidanceSpec(n, rainbow=q, mono=p, palette=exact_k(k))
                        )
        return out

    def test_header_and_shape(self):
        spec = AvoidanceSpec(2, rainbow=chain(3), palette=exact_k(3))
        doc = export_dimacs(spec)
        lines = doc.text.splitlines()
        assert any(line.startswith("c spec-sha256:") for line in lines)
        header = next(line for line in lines if line.startswith("p cnf"))
        _, _, nv, nc = header.split()
        assert int(nv) == doc.num_vars and int(nc) == len(doc.clauses)

    def test_sat_matches_search(self):
        for spec in self._specs():
            doc = export_dimacs(spec)
            model = solve_cnf(doc.num_vars, doc.clauses)
            direct = exists_coloring(spec)
            assert (model is not None) == (direct.coloring is not None), spec
            if model is not None:
                c = decode_model(spec, model)
                assert spec.accepts(c)

    def test_parse_model_formats(self):
        assert parse_model("v 1 -2 3 0") == [1, -2, 3]
        assert parse_model("1 -2\n3 0") == [1, -2, 3]

    def test_decode_rejects_inconsistent_model(self):
        from rlw.search import ModelError

        spec = AvoidanceSpec(1, rainbow=chain(2), palette=exact_k(2))
        doc = export_dimacs(spec)
        bad = list(range(1, doc.num_vars + 1))  # everything true at once
        with pytest.raises(ModelError):
            decode_model(spec, bad)


class TestDeterminism:
    def test_same_inputs_same_witness(self):
        spec = AvoidanceSpec(3, rainbow=chain(3), palette=exact_k(3))
        a = exists_coloring(spec)
        b = exists_coloring(spec)
        assert a.coloring == b.coloring
        assert a.nodes == b.nodes
