"""Quotient-direction deciders for 2-generated GBS groups.

Which Baumslag-Solitar groups map onto a given graph's group, whether the
group maps back onto its minimal Baumslag-Solitar source, epi-equivalence,
largeness, residual finiteness, and the explicit infinite quotient
families.  Positive answers come with certificates built in homs.py.
"""

from dataclasses import dataclass
from itertools import count as icount

from .arith import factorize, gcd
from .decision import Decision
from .errors import DecisionError, ElementaryGroupError, NotReducedError, ShapeError
from .graphs import (
    LabelledGraph,
    lollipop_graph,
    qrxy,
    reduce_graph,
    segment_graph,
)
from .homs import HomCertificate, bs_source_epi
from .plateaus import is_two_generated
from .words import is_unimodular, modular_image


def _detect_elementary(g: LabelledGraph) -> str | None:
    """'Z', 'Z2' or 'K' when the reduced graph presents one of them."""
    if not g.edges:
        return "Z"
    if len(g.edges) == 1:
        name = g.sorted_edges()[0]
        a, b = g.edges[name].labels
        if g.is_loop(name) and (abs(a), abs(b)) == (1, 1):
            return "Z2" if a * b > 0 else "K"
        if not g.is_loop(name) and (abs(a), abs(b)) == (2, 2):
            return "K"
    return None


def _validated_shape(g: LabelledGraph, allow_z2: bool = True):
    if not g.is_reduced():
        raise NotReducedError("decider needs a reduced graph")
    kind = _detect_elementary(g)
    if kind == "Z" or kind == "K" or (kind == "Z2" and not allow_z2):
        raise ElementaryGroupError(f"excluded elementary group {kind}")
    ok, witness = is_two_generated(g)
    if not ok:
        raise DecisionError(f"group has rank {witness.rank.rank} > 2")
    if witness.shape.kind == "other":
        raise ShapeError("graph is not a segment, circle or lollipop")
    return witness.shape


@dataclass(frozen=True)
class SourceSet:
    """Symbolic description of {(m, n) : BS(m, n) ->> G}."""

    kind: str  # "segment" | "lollipop"
    Q: int
    R: int
    QX: int | None = None
    QY: int | None = None

    def describe(self) -> str:
        if self.kind == "segment":
            return f"all (m, m) with {self.Q} | m or {self.R} | m"
        return f"all integral multiples of ({self.QX}, {self.QY}) or ({self.QY}, {self.QX})"

    def contains(self, m: int, n: int) -> bool:
        if m == 0 or n == 0:
            raise DecisionError("Baumslag-Solitar parameters must be nonzero")
        if self.kind == "segment":
            return m == n and (m % self.Q == 0 or m % self.R == 0)
        for a, b in ((self.QX, self.QY), (self.QY, self.QX)):
            if m % a == 0 and n % b == 0 and m // a == n // b:
                return True
        return False


def bs_sources(g: LabelledGraph) -> SourceSet:
    shape = _validated_shape(g)
    prods = qrxy(shape)
    if shape.kind == "segment":
        return SourceSet("segment", prods.Q, prods.R)
    return SourceSet("lollipop", prods.Q, prods.R, prods.Q * prods.X, prods.Q * prods.Y)


def is_quotient_of_bs(g: LabelledGraph, m: int, n: int) -> bool:
    return bs_sources(g).contains(m, n)


@dataclass(frozen=True)
class MinimalSource:
    unique: tuple[int, int] | None
    pair: tuple[tuple[int, int], tuple[int, int]] | None


def minimal_bs_source(g: LabelledGraph) -> MinimalSource:
    src = bs_sources(g)
    if src.kind == "segment":
        return MinimalSource(None, ((src.Q, src.Q), (src.R, src.R)))
    return MinimalSource((src.QX, src.QY), None)


def _find_i0(xs, ys, bilateral_primes):
    ell = len(xs)
    for i0 in range(ell):
        ok = True
        for p in bilateral_primes:
            if any(xs[i] % p == 0 for i in range(i0 + 1, ell)) or any(
                ys[j - 1] % p == 0 for j in range(1, i0 + 1)
            ):
                ok = False
                break
        if ok:
            return i0
    return None


def maps_onto_minimal_bs(g: LabelledGraph) -> Decision:
    """Does G map onto BS(QX, QY)?  Gcd-clause test for circles/lollipops."""
    shape = _validated_shape(g)
    if shape.kind == "segment":
        raise ShapeError("segments have no minimal Baumslag-Solitar source")
    prods = qrxy(shape)
    Q, R, X, Y = prods.Q, prods.R, prods.X, prods.Y
    QX, QY = Q * X, Q * Y
    for i in range(shape.k):
        for j in range(i + 1, shape.k):  # paper's r_j, j < k
            if gcd(shape.q[i], shape.r[j - 1]) != 1:
                return Decision(False, "prefix", (f"gcd(q_{i}, r_{j}) > 1",))
    if gcd(X, QY) == 1:
        return Decision(True, "X^QY=1")
    if gcd(Y, QX) == 1:
        return Decision(True, "Y^QX=1")
    if shape.kind == "lollipop" and gcd(Q, shape.r[-1]) != 1:
        return Decision(False, "all clauses fail", (f"gcd(Q, r_k) = {gcd(Q, shape.r[-1])}",))
    i0 = _find_i0(shape.x, shape.y, sorted(factorize(gcd(QX, QY))))
    if i0 is not None:
        return Decision(True, "split index", (f"i0={i0}",))
    return Decision(False, "all clauses fail", ("no split index",))


def epi_equivalent_bs(g: LabelledGraph):
    """The (m, n) with G epi-equivalent to BS(m, n), or None."""
    if not g.is_reduced():
        raise NotReducedError("decider needs a reduced graph")
    if _detect_elementary(g) in ("Z", "K"):
        return None
    ok, witness = is_two_generated(g)
    if not ok or witness.rank.rank != 2 or witness.shape.kind in ("segment", "other"):
        return None
    if not maps_onto_minimal_bs(g):
        return None
    prods = qrxy(witness.shape)
    return (prods.Q * prods.X, prods.Q * prods.Y)


def finitely_many_quotients(m: int, n: int) -> Decision:
    """Finitely many GBS quotients of BS(m, n) up to isomorphism?"""
    if m == 0 or n == 0:
        raise DecisionError("parameters must be nonzero")
    clauses = []
    for a, b in ((m, n), (n, m)):
        fa = factorize(a)
        if gcd(a, b) == 1:
            clauses.append("(a) coprime")
        if len(fa) == 1 and sum(fa.values()) == 1 and a != b:
            clauses.append("(b) prime")
        if a == -b:
            clauses.append("(c) opposite")
        if len(fa) == 1 and len(factorize(b)) == 1 and set(fa) == set(factorize(b)) and a != b:
            clauses.append("(d) powers of one prime")
    if clauses:
        return Decision(True, ", ".join(dict.fromkeys(clauses)))
    return Decision(False, "no clause applies")


def quotient_rigidity(m: int, n: int) -> str:
    """'all_noncyclic_iso', 'all_nonsolvable_iso' or 'neither'."""
    if m == 0 or n == 0:
        raise DecisionError("parameters must be nonzero")

    def prime_abs(a):
        fa = factorize(a)
        return len(fa) == 1 and sum(fa.values()) == 1

    for a, b in ((m, n), (n, m)):
        if abs(a) == 1 or (prime_abs(a) and b % a != 0):
            return "all_noncyclic_iso"
    for a, b in ((m, n), (n, m)):
        if abs(a) == 1 or (prime_abs(a) and a != b):
            return "all_nonsolvable_iso"
    return "neither"


def is_large(g: LabelledGraph) -> bool:
    """Large iff not a quotient of a coprime BS(m, n)."""
    if not g.is_reduced():
        raise NotReducedError("decider needs a reduced graph")
    if _detect_elementary(g) is not None:
        return False  # virtually abelian
    shape = _validated_shape(g)
    if shape.kind == "segment":
        return True
    prods = qrxy(shape)
    return gcd(prods.Q * prods.X, prods.Q * prods.Y) != 1


def is_rf_gbs(g: LabelledGraph) -> Decision:
    """Residually finite iff solvable or unimodular; solvability is tested on
    the reduced graph only (caveat flag on negative answers elsewhere)."""
    g.require_connected()
    red, _ = reduce_graph(g)
    if not red.edges:
        return Decision(True, "solvable (trivial graph)")
    if is_unimodular(g):
        return Decision(True, "unimodular")
    single_loop = len(red.edges) == 1 and red.is_loop(red.sorted_edges()[0])
    if single_loop:
        a, b = red.edges[red.sorted_edges()[0]].labels
        if abs(a) == 1 or abs(b) == 1:
            return Decision(True, "solvable BS(1, n)")
        return Decision(False, "neither solvable nor unimodular")
    return Decision(
        False,
        "neither solvable nor unimodular",
        ("solvability tested on the given reduced graph only",),
        caveat=True,
    )


def exists_bs_quotient(g: LabelledGraph) -> Decision:
    """Does G have a Baumslag-Solitar quotient (besides possibly K)?"""
    g.require_connected()
    red, _ = reduce_graph(g)
    if _detect_elementary(red) is not None:
        raise ElementaryGroupError("decider excludes elementary groups")
    if g.betti() == 0:
        return Decision(False, "none except possibly K (beta = 0)")
    friendly = modular_image(g).is_cyclic()
    return Decision(
        True,
        "beta >= 1",
        ("elliptic-friendly" if friendly else "not elliptic-friendly",),
    )


# -- explicit families ---------------------------------------------------------


@dataclass
class ChainMember:
    index: int
    graph: LabelledGraph
    from_bs_18_36: HomCertificate
    to_next: HomCertificate
    to_bs_9_18: HomCertificate


def descending_chain(n: int) -> ChainMember:
    """G_n = <a, b, t | a^6 = b^(2^n), t b^3 t^-1 = b^6> with its three
    verified epimorphisms."""
    from .homs import HomCertificate, Presentation, solve_witnesses
    from .graphs import bs_graph

    if n < 1:
        raise DecisionError("chain index starts at 1")
    g = lollipop_graph([6, 2**n], [3, 6])
    g_next = lollipop_graph([6, 2 ** (n + 1)], [3, 6])
    cert_from = bs_source_epi(g, 18, 36)

    tree = frozenset({"s0"})
    pres = Presentation(g, tree)
    pres_next = Presentation(g_next, tree)
    images = {
        ("v", "v0"): (("v", "v0", 1),),
        ("v", "w0"): (("v", "w0", 2),),
        ("t", "c0"): (("t", "c0", 1),),
    }
    seeds = [
        ((("v", "v0", 1),), images[("v", "v0")]),
        ((("v", "w0", 1),), images[("v", "w0")]),
    ]
    witnesses = solve_witnesses(pres_next, seeds, {"c0": (("t", "c0", 1),)})
    cert_next = HomCertificate(pres, pres_next, images, witnesses, f"G_{n}->>G_{n+1}")

    tgt = Presentation(bs_graph(9, 18))
    images2 = {
        ("v", "v0"): (("v", "v0", 2 ** (n - 1)),),
        ("v", "w0"): (("v", "v0", 3),),
        ("t", "c0"): (("t", "e0", 1),),
    }
    seeds2 = [
        ((("v", "v0", 1),), images2[("v", "v0")]),
        ((("v", "w0", 1),), images2[("v", "w0")]),
    ]
    witnesses2 = solve_witnesses(tgt, seeds2, {"e0": (("t", "c0", 1),)})
    cert_918 = HomCertificate(pres, tgt, images2, witnesses2, f"G_{n}->>BS(9,18)")
    return ChainMember(n, g, cert_from, cert_next, cert_918)


@dataclass
class FamilyMember:
    graph: LabelledGraph
    cert: HomCertificate
    params: dict


def _hn_factorization(m: int, n: int):
    """m = alpha*beta, n = alpha*beta*gamma*delta with alpha^delta = 1 and
    alpha, beta, delta nonunits; prefers beta^delta = 1, then smallest."""
    c = n // m
    candidates = []
    for alpha in sorted(
        (d for d in range(2, abs(m) + 1) if m % d == 0), key=abs
    ):
        beta = m // alpha
        if abs(beta) == 1:
            continue
        for delta in sorted(
            (d for d in range(2, abs(c) + 1) if c % d == 0), key=abs
        ):
            gamma = c // delta
            if gcd(alpha, delta) != 1:
                continue
            candidates.append(
                (0 if gcd(beta, delta) == 1 else 1, abs(alpha), abs(beta), abs(delta), alpha, beta, gamma, delta)
            )
    if not candidates:
        raise DecisionError(f"no valid factorization for BS({m},{n}) family")
    _, _, _, _, alpha, beta, gamma, delta = min(candidates)
    return alpha, beta, gamma, delta


def infinite_family(m: int, n: int, count: int = 5) -> list[FamilyMember]:
    """`count` pairwise distinct GBS quotients of BS(m, n), each with a
    verified certificate, from the three explicit constructions."""
    if finitely_many_quotients(m, n):
        raise DecisionError(f"BS({m},{n}) has only finitely many GBS quotients")
    members = []
    if m == n:
        for N in icount(2):
            g = segment_graph([m, N])
            cert = bs_source_epi(g, m, n)
            members.append(FamilyMember(g, cert, {"kind": "segment", "N": N}))
            if len(members) == count:
                return members
    swapped = False
    mm, nn = m, n
    if nn % mm != 0 and mm % nn == 0:
        mm, nn = nn, mm
        swapped = True
    if nn % mm == 0:
        alpha, beta, gamma, delta = _hn_factorization(mm, nn)
        source = (mm, nn)
        gen = (
            (N, lollipop_graph([beta, delta**N], [alpha, alpha * gamma * delta]))
            for N in icount(2)
            if (gamma * delta) % (delta**N) != 0
        )
        params = {"kind": "H_N", "alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta, "swapped": swapped}
    else:
        delta = gcd(mm, nn)
        mp, np_ = mm // delta, nn // delta
        primes = sorted(factorize(np_))
        good = [p for p in primes if mm % p != 0]
        p = (good or primes)[0]
        source = (mm, nn)
        gen = (
            (N, lollipop_graph([delta, p**N], [mp, np_]))
            for N in icount(2)
            if np_ % (p**N) != 0
        )
        params = {"kind": "G_N", "delta": delta, "m_prime": mp, "n_prime": np_, "p": p, "swapped": swapped}
    for N, g in gen:
        cert = bs_source_epi(g, *source)
        member_params = dict(params)
        member_params["N"] = N
        members.append(FamilyMember(g, cert, member_params))
        if len(members) == count:
            return members
    raise AssertionError("family generator exhausted")
