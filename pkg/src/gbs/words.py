"""Word problem for fundamental groups of labelled graphs.

Elements are based path words: alternating vertex powers and edge
traversals forming a loop at a base vertex.  A pinch  T_e a^x T_e~  with
the far label dividing x collapses to a vertex power at the near end;
iterating pinches decides the word problem (Britton / normal form for
graphs of groups).

Presentation letters (vertex generators ``a(v)``, stable letters ``t(eps)``
for non-tree edges) convert to and from path words through a spanning tree.
The stable letter of edge eps with data ((v, w), (lv, lw)) satisfies
``t a(v)^lv t^-1 = a(w)^lw``.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, MalformedWordError
from .graphs import LabelledGraph, OrientedEdge, spanning_tree
from .lattice import RationalMultGroup

# syllables: ("v", vertex, exponent) | ("e", edge, end)
# letters:   ("v", vertex, exponent) | ("t", edge, exponent)


@dataclass(frozen=True)
class PathWord:
    base: str
    syllables: tuple

    def __mul__(self, other: "PathWord") -> "PathWord":
        if self.base != other.base:
            raise MalformedWordError("cannot multiply words at different base vertices")
        return PathWord(self.base, self.syllables + other.syllables)

    def inverse(self) -> "PathWord":
        out = []
        for syl in reversed(self.syllables):
            if syl[0] == "v":
                out.append(("v", syl[1], -syl[2]))
            else:
                out.append(("e", syl[1], 1 - syl[2]))
        return PathWord(self.base, tuple(out))

    @property
    def traversal_count(self) -> int:
        return sum(1 for s in self.syllables if s[0] == "e")


@dataclass(frozen=True)
class NormalForm:
    word: PathWord
    trivial: bool


def check_well_formed(g: LabelledGraph, w: PathWord):
    if w.base not in g.vertices:
        raise MalformedWordError(f"unknown base vertex {w.base}")
    pos = w.base
    for syl in w.syllables:
        if syl[0] == "v":
            if syl[1] != pos:
                raise MalformedWordError(f"vertex power at {syl[1]} while at {pos}")
        elif syl[0] == "e":
            oe = OrientedEdge(syl[1], syl[2])
            if syl[1] not in g.edges:
                raise MalformedWordError(f"unknown edge {syl[1]}")
            if g.origin(oe) != pos:
                raise MalformedWordError(f"traversal {oe} does not start at {pos}")
            pos = g.terminus(oe)
        else:
            raise MalformedWordError(f"bad syllable {syl!r}")
    if pos != w.base:
        raise MalformedWordError("word is not a loop at its base vertex")


def _push_vertex(stack, v, exp):
    if exp == 0:
        return
    if stack and stack[-1][0] == "v" and stack[-1][1] == v:
        merged = stack[-1][2] + exp
        stack.pop()
        if merged:
            stack.append(("v", v, merged))
    else:
        stack.append(("v", v, exp))


def britton_reduce(g: LabelledGraph, w: PathWord, *, validate: bool = True) -> NormalForm:
    """Eliminate pinches until none applies; trivial iff nothing is left."""
    if validate:
        check_well_formed(g, w)
    stack: list = []
    for syl in w.syllables:
        if syl[0] == "v":
            _push_vertex(stack, syl[1], syl[2])
            continue
        cur = OrientedEdge(syl[1], syl[2])
        prev = None
        mid = 0
        if stack and stack[-1][0] == "e":
            prev = OrientedEdge(stack[-1][1], stack[-1][2])
            depth = 1
        elif (
            len(stack) >= 2
            and stack[-1][0] == "v"
            and stack[-2][0] == "e"
        ):
            prev = OrientedEdge(stack[-2][1], stack[-2][2])
            mid = stack[-1][2]
            depth = 2
        if prev is not None and prev == cur.reverse:
            far = g.colabel(prev)
            if mid % far == 0:
                del stack[-depth:]
                _push_vertex(stack, g.origin(prev), (mid // far) * g.label(prev))
                continue
        stack.append(syl)
    return NormalForm(PathWord(w.base, tuple(stack)), not stack)


def equal(g: LabelledGraph, w1: PathWord, w2: PathWord) -> bool:
    return britton_reduce(g, w1 * w2.inverse()).trivial


def is_elliptic(g: LabelledGraph, w: PathWord) -> bool:
    """True iff w is conjugate into a vertex group: cyclic Britton reduction
    removes every traversal."""
    nf = britton_reduce(g, w)
    syls = list(nf.word.syllables)
    while True:
        traversal_idx = [i for i, s in enumerate(syls) if s[0] == "e"]
        if not traversal_idx:
            return True
        first_i, last_i = traversal_idx[0], traversal_idx[-1]
        first = OrientedEdge(syls[first_i][1], syls[first_i][2])
        last = OrientedEdge(syls[last_i][1], syls[last_i][2])
        lead = syls[0][2] if first_i == 1 else 0
        tail = syls[-1][2] if last_i == len(syls) - 2 else 0
        if first_i not in (0, 1) or last_i not in (len(syls) - 1, len(syls) - 2):
            raise AssertionError("reduced word has stray syllables")
        if first != last.reverse or (tail + lead) % g.colabel(last) != 0:
            return False
        wrap = ("v", g.origin(last), ((tail + lead) // g.colabel(last)) * g.label(last))
        middle = syls[first_i + 1 : last_i]
        base2 = g.terminus(first)
        nf2 = britton_reduce(g, PathWord(base2, tuple(middle) + (wrap,)), validate=False)
        syls = list(nf2.word.syllables)


def modulus(g: LabelledGraph, w: PathWord) -> Fraction:
    """Product of far-label / near-label over the traversals of w."""
    check_well_formed(g, w)
    out = Fraction(1)
    for syl in w.syllables:
        if syl[0] == "e":
            oe = OrientedEdge(syl[1], syl[2])
            out *= Fraction(g.colabel(oe), g.label(oe))
    return out


# -- presentations and letter words ----------------------------------------


class Presentation:
    """Standard presentation attached to (graph, spanning tree, base)."""

    def __init__(self, g: LabelledGraph, tree: frozenset[str] | None = None, base: str | None = None):
        g.require_connected()
        self.graph = g
        self.tree = frozenset(tree) if tree is not None else spanning_tree(g)
        if len(self.tree) != len(g.vertices) - 1 or any(e not in g.edges for e in self.tree):
            raise InputError("not a spanning tree")
        self.base = base if base is not None else g.sorted_vertices()[0]
        if self.base not in g.vertices:
            raise InputError(f"unknown base vertex {self.base}")
        self._geodesics = self._compute_geodesics()
        if len(self._geodesics) != len(g.vertices):
            raise InputError("spanning tree does not span")

    def _compute_geodesics(self) -> dict[str, tuple]:
        geo = {self.base: ()}
        queue = [self.base]
        while queue:
            v = queue.pop(0)
            for oe in sorted(self.graph.edges_at(v), key=OrientedEdge.key):
                if oe.edge in self.tree:
                    w = self.graph.terminus(oe)
                    if w not in geo:
                        geo[w] = geo[v] + (("e", oe.edge, oe.end),)
                        queue.append(w)
        return geo

    def geodesic(self, v: str) -> tuple:
        return self._geodesics[v]

    def _geo_inv(self, v: str) -> tuple:
        return tuple(("e", e, 1 - end) for _, e, end in reversed(self._geodesics[v]))

    @property
    def stable_edges(self) -> list[str]:
        return [e for e in self.graph.sorted_edges() if e not in self.tree]

    def generators(self) -> list[tuple[str, str]]:
        gens = [("v", v) for v in self.graph.sorted_vertices()]
        gens += [("t", e) for e in self.stable_edges]
        return gens

    def relations(self) -> list[tuple]:
        """One relator letter-word per non-oriented edge."""
        rels = []
        for name in self.graph.sorted_edges():
            ed = self.graph.edges[name]
            v, w = ed.endpoints
            lv, lw = ed.labels
            if name in self.tree:
                rels.append((("v", v, lv), ("v", w, -lw)))
            else:
                rels.append((("t", name, 1), ("v", v, lv), ("t", name, -1), ("v", w, -lw)))
        return rels

    # letter words: tuples of ("v", vertex, exp) | ("t", edge, exp)

    def letters_to_path(self, letters) -> PathWord:
        syls: list = []
        for kind, name, exp in letters:
            if exp == 0:
                continue
            if kind == "v":
                if name not in self.graph.vertices:
                    raise MalformedWordError(f"unknown vertex generator {name}")
                syls.extend(self.geodesic(name))
                syls.append(("v", name, exp))
                syls.extend(self._geo_inv(name))
            elif kind == "t":
                if name not in self.graph.edges or name in self.tree:
                    raise MalformedWordError(f"{name} is not a stable-letter edge")
                v, w = self.graph.edges[name].endpoints
                if exp > 0:
                    hop = self.geodesic(w) + (("e", name, 1),) + self._geo_inv(v)
                else:
                    hop = self.geodesic(v) + (("e", name, 0),) + self._geo_inv(w)
                for _ in range(abs(exp)):
                    syls.extend(hop)
            else:
                raise MalformedWordError(f"bad letter kind {kind!r}")
        return PathWord(self.base, tuple(syls))

    def path_to_letters(self, w: PathWord) -> tuple:
        if w.base != self.base:
            raise MalformedWordError("path word based elsewhere")
        letters: list = []

        def emit(kind, name, exp):
            if exp == 0:
                return
            if letters and letters[-1][0] == kind and letters[-1][1] == name:
                merged = letters[-1][2] + exp
                letters.pop()
                if merged:
                    letters.append((kind, name, merged))
            else:
                letters.append((kind, name, exp))

        for syl in w.syllables:
            if syl[0] == "v":
                emit("v", syl[1], syl[2])
            else:
                if syl[1] in self.tree:
                    continue
                emit("t", syl[1], 1 if syl[2] == 1 else -1)
        return tuple(letters)


def letters_inverse(letters) -> tuple:
    return tuple((k, n, -e) for k, n, e in reversed(letters))


def letters_concat(*words) -> tuple:
    out: list = []
    for word in words:
        for k, n, e in word:
            if e == 0:
                continue
            if out and out[-1][0] == k and out[-1][1] == n:
                merged = out[-1][2] + e
                out.pop()
                if merged:
                    out.append((k, n, merged))
            else:
                out.append((k, n, e))
    return tuple(out)


def letters_power(letters, exp: int) -> tuple:
    if exp == 0:
        return ()
    if len(letters) == 1:
        k, n, e = letters[0]
        return ((k, n, e * exp),)
    base = letters if exp > 0 else letters_inverse(letters)
    return letters_concat(*([base] * abs(exp)))


def format_letters(letters) -> str:
    parts = []
    for kind, name, exp in letters:
        head = f"a({name})" if kind == "v" else f"t({name})"
        parts.append(head if exp == 1 else f"{head}^{exp}")
    return " ".join(parts) or "1"


def parse_letters(text: str) -> tuple:
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        head, _, exp_s = tok.partition("^")
        exp = int(exp_s) if exp_s else 1
        if head.startswith("a(") and head.endswith(")"):
            out.append(("v", head[2:-1], exp))
        elif head.startswith("t(") and head.endswith(")"):
            out.append(("t", head[2:-1], exp))
        else:
            raise InputError(f"cannot parse word token {tok!r}")
    return tuple(out)


def standard_presentation(
    g: LabelledGraph, tree: frozenset[str] | None = None, base: str | None = None
) -> Presentation:
    """Standard presentation for a chosen spanning tree: one generator per
    vertex, one stable letter per non-tree edge, one relation per edge."""
    return Presentation(g, tree, base)


# -- modular homomorphism ----------------------------------------------------


def modular_image(g: LabelledGraph) -> RationalMultGroup:
    """Image of the modular homomorphism, generated by the stable letters'
    label-ratio products around their fundamental loops."""
    pres = Presentation(g)
    gens = []
    for e in pres.stable_edges:
        gens.append(modulus(g, pres.letters_to_path((("t", e, 1),))))
    return RationalMultGroup(gens)


def is_unimodular(g: LabelledGraph) -> bool:
    return modular_image(g).is_subgroup_of_pm1()


def has_nontrivial_center(g: LabelledGraph) -> bool:
    """Trivial modular image <=> nontrivial center (non-elementary inputs)."""
    return modular_image(g).is_trivial()


# -- center index along a segment -------------------------------------------


def segment_center_index(r0: int, q: list[int], r: list[int]) -> int:
    """Generator exponent N of <a_0^r0> n <a_k> inside <a_0^r0> for the
    segment with labels q_0..q_{k-1} near the left ends and r_1..r_k near
    the right ends: gcd-chain recursion, N = q_0...q_{k-1} / theta_k.
    """
    if r0 == 0 or any(v == 0 for v in q) or any(v == 0 for v in r):
        raise InputError("labels and r0 must be nonzero")
    if len(q) != len(r):
        raise InputError("need as many q as r labels")
    from .arith import gcd

    k = len(q)
    theta = 1
    rprod = abs(r0)
    for j in range(k):
        thetap = gcd(rprod // theta, q[j])
        theta *= thetap
        if j + 1 < k:
            rprod *= abs(r[j + 1 - 1])  # r_{j+1} joins the product
    nprod = 1
    for v in q:
        nprod *= abs(v)
    return nprod // theta
