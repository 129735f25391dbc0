"""Exact-arithmetic extremal machinery for subset families.

Everything here is exact: Lubell sums use ``fractions.Fraction`` and all
comparisons are rational equalities or inequalities.  The module houses
the Lubell maximization (lu_max), the consecutive-level free-window
number e(P), the extreme-element defect g(Q), the disjoint-chain packing
formula with its search-based verifier, the two rainbow color caps, and
the quantitative claim formulas exposed through :class:`ClaimId`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .lattice import (
    CapacityError,
    FamilyMask,
    LatticeError,
    PreconditionError,
    check_ground,
    levels,
)
from .patterns import (
    MAX_PATTERN,
    PatternPoset,
    disjoint_chains,
    find_induced_copy,
)

ExactRational = Fraction

MAX_LU_GROUND = 4


def rational_str(q):
    """Serialize a rational as ``"p/q"`` (``"p/1"`` collapses to ``"p"``)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise LatticeError(f"bad rational literal {text!r}") from exc


def lubell(n, family):
    """Exact Lubell mass of a family: sum of 1/C(n,|F|) over members."""
    check_ground(n)
    if not isinstance(family, FamilyMask) or family.n != n:
        raise LatticeError("lubell needs a FamilyMask over the same n")
    total = Fraction(0)
    for s in family.members():
        total += Fraction(1, comb(n, s.bit_count()))
    return total


def _subset_weight(n, s):
    return Fraction(1, comb(n, s.bit_count()))


def lu_max(n, P):
    """Maximum Lubell mass of an induced-P-free family in B_n, with witness.

    Branch-and-bound over inclusion decisions in decreasing-weight order;
    the suffix mass bound makes the search exact, not heuristic.
    """
    check_ground(n)
    if n > MAX_LU_GROUND:
        raise CapacityError(
            f"lu_max is exhaustive and capped at n={MAX_LU_GROUND}, got {n}"
        )
    if not isinstance(P, PatternPoset):
        raise LatticeError("lu_max needs a PatternPoset")
    subsets = sorted(
        range(1 << n), key=lambda s: (-_subset_weight(n, s), s.bit_count(), s)
    )
    weights = [_subset_weight(n, s) for s in subsets]
    suffix = [Fraction(0)] * (len(subsets) + 1)
    for i in range(len(subsets) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]

    best = [Fraction(0), 0]

    def rec(i, bits, mass):
        if mass > best[0]:
            best[0] = mass
            best[1] = bits
        if i == len(subsets) or mass + suffix[i] <= best[0]:
            return
        s = subsets[i]
        grown = bits | 1 << s
        if find_induced_copy(n, FamilyMask(n, grown), P) is None:
            rec(i + 1, grown, mass + weights[i])
        rec(i + 1, bits, mass)

    rec(0, 0, Fraction(0))
    return best[0], FamilyMask(n, best[1])


@dataclass(frozen=True)
class WindowCertificate:
    """A level window that does contain an induced copy of the pattern."""

    n: int
    lo_level: int
    hi_level: int
    image: tuple


def _window_copy(P, n_probe, m):
    """First (n, window) of m consecutive levels containing an induced P."""
    for n in range(1, n_probe + 1):
        for lo in range(0, n - m + 2):
            hi = min(lo + m - 1, n)
            if hi - lo + 1 != m:
                continue
            emb = find_induced_copy(n, levels(n, lo, hi), P)
            if emb is not None:
                return WindowCertificate(n, lo, hi, emb.map)
    return None


@dataclass(frozen=True)
class EPosetResult:
    value: int
    n_probe: int
    certificate: WindowCertificate | None

    @property
    def qualifier(self):
        return f"verified up to n={self.n_probe}"


def e_poset(P, n_probe):
    """Largest m with every m-level window of every B_n (n <= n_probe) free.

    The value quantifies over all n in principle; the result therefore
    carries the probe bound, plus the failing (m+1)-window certificate.
    """
    check_ground(n_probe)
    if not isinstance(P, PatternPoset):
        raise LatticeError("e_poset needs a PatternPoset")
    m = 0
    while m <= n_probe:
        cert = _window_copy(P, n_probe, m + 1)
        if cert is not None:
            return EPosetResult(m, n_probe, cert)
        m += 1
    return EPosetResult(m, n_probe, None)


def g_poset(Q):
    """0 if Q has both extremes, 2 if neither, 1 otherwise."""
    if not isinstance(Q, PatternPoset):
        raise LatticeError("g_poset needs a PatternPoset")
    has_max = Q.has_maximum()
    has_min = Q.has_minimum()
    if has_max and has_min:
        return 0
    if not has_max and not has_min:
        return 2
    return 1


def is_uilb(P, n_max):
    """True iff e(P) >= Lu_n(P) for every n <= n_max ("verified up to n_max")."""
    check_ground(n_max)
    if n_max > MAX_LU_GROUND:
        raise CapacityError(
            f"is_uilb relies on lu_max, capped at n={MAX_LU_GROUND}"
        )
    e_val = e_poset(P, max(n_max, min(P.size + 1, 6))).value
    for n in range(1, n_max + 1):
        lu, _witness = lu_max(n, P)
        if Fraction(e_val) < lu:
            return False
    return True


def gst(v, n):
    """Largest u with u pairwise-incomparable v-chains packing into B_n."""
    if not isinstance(v, int) or not isinstance(n, int) or v < 1 or n < 1:
        raise LatticeError(f"need positive ints, got v={v!r}, n={n!r}")
    if v > n + 1:
        raise LatticeError(f"no {v}-chain fits in B_{n}")
    w = n - v + 1
    return comb(w, w // 2)


def gst_verify(v, n):
    """Brute-force the largest u with an induced u-disjoint-v-chain pattern."""
    predicted = gst(v, n)
    host = FamilyMask.whole(n)
    u = 0
    while True:
        if (u + 1) * v > MAX_PATTERN:
            raise CapacityError(
                f"cannot refute u={u + 1}: pattern size exceeds {MAX_PATTERN}"
            )
        if find_induced_copy(n, host, disjoint_chains(u + 1, v)) is None:
            break
        u += 1
    return u == predicted


def color_cap_c3(n):
    """Max color count admitting a rainbow-3-chain-free exact coloring."""
    if not isinstance(n, int) or n < 2:
        raise LatticeError(f"color_cap_c3 needs n >= 2, got {n!r}")
    return comb(n, (n + 1) // 2) + 1


def color_cap_b2(n):
    """Upper bound on colors in a rainbow-B_2-free exact coloring."""
    if not isinstance(n, int) or n <= 2:
        raise LatticeError(f"color_cap_b2 needs n > 2, got {n!r}")
    return (
        comb(n, n // 2)
        + comb(n - 1, (n - 1) // 2)
        + comb(n - 2, (n - 2) // 2)
        + 1
    )


class ClaimId(str, enum.Enum):
    """Quantitative claims with closed-form predictions."""

    Thm1_2 = "Thm1_2"
    Thm1_3_1 = "Thm1_3_1"
    Thm1_3_2 = "Thm1_3_2"
    Thm1_3_3 = "Thm1_3_3"
    Thm1_4 = "Thm1_4"
    Thm1_5 = "Thm1_5"
    Thm1_6 = "Thm1_6"
    Thm1_7 = "Thm1_7"
    Cor2_2 = "Cor2_2"
    Prop2_14 = "Prop2_14"
    Thm4_2 = "Thm4_2"
    RRLowerGeneral = "RRLowerGeneral"
    RkUILB = "RkUILB"
    Lemma4_1 = "Lemma4_1"


class MissingSubvalue(LatticeError):
    """A claim formula needs a sub-value the caller did not supply."""


def _take(params, claim, *names):
    vals = []
    for name in names:
        if name not in params:
            raise MissingSubvalue(
                f"claim {claim.value} needs parameter {name!r}; "
                f"sub-values are never computed implicitly"
            )
        vals.append(params[name])
    return vals


def theorem_value(claim, params):
    """Evaluate one claim formula on explicitly supplied sub-values.

    Returns a dict with "claim", "params", and one of:
    "value", ("lower","upper"), "upper", "lower", or "good": True.
    Sub-values (searched Ramsey numbers, e(P), g(Q), |Q|) must arrive in
    params so provenance stays with the caller.
    """
    claim = ClaimId(claim)
    out = {"claim": claim.value, "params": dict(params)}
    if claim is ClaimId.Thm1_2:
        s, k = _take(params, claim, "s", "k")
        if s < 3 or k < 3:
            raise PreconditionError("Thm1_2 needs s >= 3 and k >= 3")
        cap = comb(s - 1, s // 2) + 1
        if k <= cap:
            out["value"] = s
        else:
            out["good"] = True
    elif claim is ClaimId.Thm1_3_1:
        (s,) = _take(params, claim, "s")
        if s < 2:
            raise PreconditionError("Thm1_3_1 needs s >= 2")
        out["value"] = 2 * s - 1
    elif claim is ClaimId.Thm1_3_2:
        (s,) = _take(params, claim, "s")
        if s < 2:
            raise PreconditionError("Thm1_3_2 needs s >= 2")
        if s in (2, 3):
            out["good"] = True
        else:
            out["value"] = s
    elif claim is ClaimId.Thm1_3_3:
        k, = _take(params, claim, "k")
        if k < 5:
            raise PreconditionError("Thm1_3_3 needs k >= 5")
        out["good"] = True
    elif claim is ClaimId.Thm1_4:
        n, k, r3 = _take(params, claim, "n", "k", "r3")
        if k < 4:
            raise PreconditionError("Thm1_4 needs k >= 4")
        if k <= 2 ** (r3 + n):
            out["upper"] = r3 + n
        else:
            out["good"] = True
    elif claim is ClaimId.Thm1_5:
        m, r = _take(params, claim, "m", "r")
        out["upper"] = m * r + m
    elif claim is ClaimId.Thm1_6:
        n, r3 = _take(params, claim, "n", "r3")
        out["lower"] = r3
        out["upper"] = r3 + n
    elif claim is ClaimId.Thm1_7:
        (e,) = _take(params, claim, "e")
        out["value"] = 2 * e + 1
    elif claim is ClaimId.Cor2_2:
        (n,) = _take(params, claim, "n")
        out["value"] = color_cap_c3(n)
    elif claim is ClaimId.Prop2_14:
        (n,) = _take(params, claim, "n")
        out["value"] = color_cap_b2(n)
    elif claim is ClaimId.Thm4_2:
        v, n = _take(params, claim, "v", "n")
        out["value"] = gst(v, n)
    elif claim is ClaimId.RRLowerGeneral:
        e, q_size, g = _take(params, claim, "e", "q_size", "g")
        out["lower"] = e * (q_size - 1) + g
    elif claim is ClaimId.RkUILB:
        k, e = _take(params, claim, "k", "e")
        out["value"] = k * e
    elif claim is ClaimId.Lemma4_1:
        (m,) = _take(params, claim, "m")
        out["upper"] = 2**m - 1
    else:  # pragma: no cover - enum is exhaustive above
        raise LatticeError(f"unhandled claim {claim!r}")
    return out
