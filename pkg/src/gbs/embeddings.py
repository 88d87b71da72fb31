"""Subgroup certificates: weakly admissible maps between labelled graphs.

A weakly admissible map is a graph morphism with positive vertex and edge
multiplicities subject to a local gcd condition; it certifies that the
source graph's group embeds into the target's.  The checker is purely
local.  Constructions: the circle certificate for coprime-parameter
subgroups, the block-circle and power-circle embeddings between
Baumslag-Solitar groups, and the equal-label test for subgroups of BS(n,n).
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize, gcd, lcm, sign, valuation
from .bs_arith import embeds_bs, power_of_ratio
from .decision import Decision
from .errors import CertificateError, DecisionError, NotReducedError, ShapeError
from .graphs import (
    LabelledGraph,
    MoveRecord,
    apply_move,
    bs_graph,
    canonicalize_signs,
    classify_shape,
    graph_from_edges,
    qrxy,
    reduce_graph,
)
from .words import modular_image


@dataclass
class WeaklyAdmissibleMap:
    source: LabelledGraph
    target: LabelledGraph
    vertex_map: dict
    edge_map: dict  # (edge, end) -> (edge, end)
    vertex_mult: dict
    edge_mult: dict

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "vertex_map": dict(self.vertex_map),
            "edge_map": {f"{e}:{k}": list(v) for (e, k), v in self.edge_map.items()},
            "vertex_mult": dict(self.vertex_mult),
            "edge_mult": dict(self.edge_mult),
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeaklyAdmissibleMap":
        edge_map = {}
        for key, val in data["edge_map"].items():
            e, k = key.rsplit(":", 1)
            edge_map[(e, int(k))] = (val[0], int(val[1]))
        return cls(
            LabelledGraph.from_json(data["source"]),
            LabelledGraph.from_json(data["target"]),
            dict(data["vertex_map"]),
            edge_map,
            {k: int(v) for k, v in data["vertex_mult"].items()},
            {k: int(v) for k, v in data["edge_mult"].items()},
        )


def check_weakly_admissible(wa: WeaklyAdmissibleMap) -> tuple[bool, list[str]]:
    """Verify the local conditions; returns (ok, violation list)."""
    violations = []
    src, tgt = wa.source, wa.target
    for v in src.sorted_vertices():
        if wa.vertex_map.get(v) not in tgt.vertices:
            violations.append(f"vertex {v}: image missing or unknown")
        if wa.vertex_mult.get(v, 0) <= 0:
            violations.append(f"vertex {v}: multiplicity must be positive")
    for e in src.sorted_edges():
        if wa.edge_mult.get(e, 0) <= 0:
            violations.append(f"edge {e}: multiplicity must be positive")
        for k in (0, 1):
            img = wa.edge_map.get((e, k))
            if img is None or img[0] not in tgt.edges or img[1] not in (0, 1):
                violations.append(f"edge {e}:{k}: image missing or unknown")
                continue
            rev = wa.edge_map.get((e, 1 - k))
            if rev != (img[0], 1 - img[1]):
                violations.append(f"edge {e}: images not reverse-compatible")
            o = src.edges[e].endpoints[k]
            if wa.vertex_map.get(o) != tgt.edges[img[0]].endpoints[img[1]]:
                violations.append(f"edge {e}:{k}: origins do not commute with the map")
    if violations:
        return False, violations
    for te in tgt.sorted_edges():
        for tend in (0, 1):
            lab = tgt.edges[te].labels[tend]
            torigin = tgt.edges[te].endpoints[tend]
            for x in src.sorted_vertices():
                if wa.vertex_map[x] != torigin:
                    continue
                k_x = gcd(wa.vertex_mult[x], lab)
                pre = [
                    oe
                    for oe in src.edges_at(x)
                    if wa.edge_map[(oe.edge, oe.end)] == (te, tend)
                ]
                if len(pre) > k_x:
                    violations.append(
                        f"vertex {x} over {te}:{tend}: {len(pre)} preimage edges > gcd {k_x}"
                    )
                for oe in pre:
                    if src.label(oe) != lab // k_x:
                        violations.append(
                            f"edge {oe.edge}:{oe.end}: label {src.label(oe)} != {lab}//{k_x}"
                        )
                    if wa.edge_mult[oe.edge] != wa.vertex_mult[x] // k_x:
                        violations.append(
                            f"edge {oe.edge}: multiplicity {wa.edge_mult[oe.edge]} != {wa.vertex_mult[x]}//{k_x}"
                        )
    return not violations, violations


def check_admissible(wa: WeaklyAdmissibleMap) -> bool:
    """Equality version: exactly gcd-many preimage edges everywhere (covers)."""
    ok, _ = check_weakly_admissible(wa)
    if not ok:
        return False
    src, tgt = wa.source, wa.target
    for te in tgt.sorted_edges():
        for tend in (0, 1):
            lab = tgt.edges[te].labels[tend]
            torigin = tgt.edges[te].endpoints[tend]
            for x in src.sorted_vertices():
                if wa.vertex_map[x] != torigin:
                    continue
                k_x = gcd(wa.vertex_mult[x], lab)
                pre = [
                    oe
                    for oe in src.edges_at(x)
                    if wa.edge_map[(oe.edge, oe.end)] == (te, tend)
                ]
                if len(pre) != k_x:
                    return False
    return True


@dataclass
class EmbeddingCertificate:
    """A weakly admissible map plus a replayable reduction of its source
    graph to the canonical loop of the claimed subgroup.  `aug_records`
    bridge the claimed parameters to the loop the map itself certifies
    (index-scaling steps BS(c) < BS(nu*c))."""

    map: WeaklyAdmissibleMap
    claimed: tuple[int, int]
    map_claimed: tuple[int, int]
    aug_records: tuple = ()  # ("scale", nu) entries
    source_reduce: tuple = ()
    target_params: tuple[int, int] | None = None
    target_reduce: tuple = ()
    provenance: str = ""

    def to_json(self) -> dict:
        return {
            "kind": "embedding",
            "map": self.map.to_json(),
            "claimed": list(self.claimed),
            "map_claimed": list(self.map_claimed),
            "aug_records": [list(r) for r in self.aug_records],
            "source_reduce": [r.to_json() for r in self.source_reduce],
            "target_params": list(self.target_params) if self.target_params else None,
            "target_reduce": [r.to_json() for r in self.target_reduce],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddingCertificate":
        return cls(
            map=WeaklyAdmissibleMap.from_json(data["map"]),
            claimed=tuple(data["claimed"]),
            map_claimed=tuple(data["map_claimed"]),
            aug_records=tuple(tuple(r) for r in data.get("aug_records", ())),
            source_reduce=tuple(MoveRecord.from_json(r) for r in data.get("source_reduce", ())),
            target_params=tuple(data["target_params"]) if data.get("target_params") else None,
            target_reduce=tuple(MoveRecord.from_json(r) for r in data.get("target_reduce", ())),
            provenance=data.get("provenance", ""),
        )


def _loop_labels(g: LabelledGraph):
    if len(g.edges) == 1 and len(g.vertices) == 1:
        (name,) = g.edges
        return g.edges[name].labels
    return None


def _pair_matches(got: tuple[int, int], want: tuple[int, int]) -> bool:
    a, b = got
    return (a, b) in ((want[0], want[1]), (want[1], want[0])) or (-a, -b) in (
        (want[0], want[1]),
        (want[1], want[0]),
    )


def verify_embedding_certificate(cert: EmbeddingCertificate) -> tuple[bool, list[str]]:
    ok, violations = check_weakly_admissible(cert.map)
    cur = cert.map.source
    try:
        for rec in cert.source_reduce:
            cur = apply_move(cur, rec)
    except Exception as exc:  # replay must not crash verification
        violations.append(f"source reduction replay failed: {exc}")
        return False, violations
    loop = _loop_labels(cur)
    if loop is None:
        violations.append("source reduction does not end in a single loop")
    elif not _pair_matches(loop, cert.map_claimed):
        violations.append(f"source reduces to loop {loop}, certificate claims {cert.map_claimed}")
    nu = 1
    for rec in cert.aug_records:
        if rec[0] != "scale" or rec[1] == 0:
            violations.append(f"bad index record {rec}")
        else:
            nu *= rec[1]
    scaled = (cert.claimed[0] * nu, cert.claimed[1] * nu)
    if not _pair_matches(scaled, cert.map_claimed):
        violations.append(
            f"index records scale {cert.claimed} to {scaled}, not {cert.map_claimed}"
        )
    if cert.target_reduce:
        cur = cert.map.target
        try:
            for rec in cert.target_reduce:
                cur = apply_move(cur, rec)
        except Exception as exc:
            violations.append(f"target reduction replay failed: {exc}")
            return False, violations
        loop = _loop_labels(cur)
        if cert.target_params is None or loop is None or not _pair_matches(loop, cert.target_params):
            violations.append("target reduction does not reach the claimed loop")
    return not violations, violations


# -- pattern builder -----------------------------------------------------------


def _derive_map(target: LabelledGraph, vertices: dict, edges: list) -> WeaklyAdmissibleMap:
    """Build the source graph forced by a combinatorial pattern.

    vertices: name -> (target vertex, multiplicity).  edges: (name, origin,
    terminus, (target edge, end)) rows; labels and edge multiplicities are
    derived from the local gcd equations."""
    vmap = {n: tv for n, (tv, _) in vertices.items()}
    vmult = {n: abs(m) for n, (_, m) in vertices.items()}
    rows = []
    emap = {}
    emult = {}
    for name, o, t, (te, tend) in edges:
        lab_o = target.edges[te].labels[tend]
        lab_t = target.edges[te].labels[1 - tend]
        k_o = gcd(vmult[o], lab_o)
        k_t = gcd(vmult[t], lab_t)
        if vmult[o] // k_o != vmult[t] // k_t:
            raise CertificateError(
                f"pattern edge {name}: inconsistent multiplicity "
                f"{vmult[o]}//{k_o} vs {vmult[t]}//{k_t}"
            )
        rows.append((name, o, t, lab_o // k_o, lab_t // k_t))
        emap[(name, 0)] = (te, tend)
        emap[(name, 1)] = (te, 1 - tend)
        emult[name] = vmult[o] // k_o
    source = graph_from_edges(rows)
    return WeaklyAdmissibleMap(source, target, vmap, emap, vmult, emult)


def _finish_cert(
    wa: WeaklyAdmissibleMap,
    claimed,
    aug,
    provenance,
    protect=None,
    target_params=None,
    target_reduce=(),
) -> EmbeddingCertificate:
    ok, violations = check_weakly_admissible(wa)
    if not ok:
        raise CertificateError(f"construction not weakly admissible: {violations[:3]}")
    cur, records = reduce_graph(wa.source, protect=protect)
    records = list(records)
    if protect is not None:
        cur, more = reduce_graph(cur)
        records.extend(more)
    loop = _loop_labels(cur)
    if loop is None:
        raise CertificateError("source graph does not reduce to a loop")
    nu = 1
    for rec in aug:
        nu *= rec[1]
    cert = EmbeddingCertificate(
        map=wa,
        claimed=tuple(claimed),
        map_claimed=loop,
        aug_records=tuple(aug),
        source_reduce=tuple(records),
        target_params=target_params,
        target_reduce=tuple(target_reduce),
        provenance=provenance,
    )
    scaled = (claimed[0] * nu, claimed[1] * nu)
    if not _pair_matches(scaled, loop):
        raise CertificateError(
            f"{provenance}: reduces to {loop}, expected +-{scaled} up to swap"
        )
    return cert


# -- the circle construction ---------------------------------------------------


def circle_bs_subgroup(g: LabelledGraph, m: int, n: int) -> EmbeddingCertificate:
    """BS(m, n) inside the group of a reduced circle with X = m, Y = n and
    m ^ n = 1: the three-block wrap-around circle."""
    shape = classify_shape(g)
    if shape.kind != "circle":
        raise ShapeError("construction needs a circle")
    prods = qrxy(shape)
    if (prods.X, prods.Y) != (m, n):
        raise DecisionError(f"circle has (X, Y) = ({prods.X}, {prods.Y}), not ({m}, {n})")
    if gcd(m, n) != 1:
        raise DecisionError("construction needs coprime parameters")
    ell = shape.ell
    if ell == 1:
        wa = _derive_map(
            g,
            {"z0": (shape.circ_vertices[0], 1)},
            [("d0", "z0", "z0", (shape.circ_edges[0].edge, shape.circ_edges[0].end))],
        )
        return _finish_cert(wa, (m, n), (), "identity circle")
    xs, ys = shape.x, shape.y
    vertices = {}
    edges = []

    def yprod(upto):  # |y_1 ... y_upto|
        out = 1
        for t in range(upto):
            out *= abs(ys[t])
        return out

    def xprod(from_i):  # |x_from ... x_{ell-1}|
        out = 1
        for t in range(from_i, ell):
            out *= abs(xs[t])
        return out

    for i in range(ell):
        vertices[f"z{i}"] = (shape.circ_vertices[i % ell], yprod(i))
    for i in range(ell + 1):
        vertices[f"z{ell + i}"] = (
            shape.circ_vertices[(ell - i) % ell],
            yprod(ell - i) * xprod(ell - i),
        )
    for i in range(1, ell):
        vertices[f"z{2 * ell + i}"] = (shape.circ_vertices[i % ell], xprod(i))
    for i in range(ell):
        ce = shape.circ_edges[i]
        edges.append((f"d{i}", f"z{i}", f"z{i + 1}", (ce.edge, ce.end)))
    for i in range(ell):
        ce = shape.circ_edges[ell - 1 - i]
        edges.append((f"d{ell + i}", f"z{ell + i}", f"z{ell + i + 1}", (ce.edge, 1 - ce.end)))
    for i in range(ell):
        ce = shape.circ_edges[i]
        edges.append(
            (
                f"d{2 * ell + i}",
                f"z{2 * ell + i}",
                f"z{(2 * ell + i + 1) % (3 * ell)}",
                (ce.edge, ce.end),
            )
        )
    wa = _derive_map(g, vertices, edges)
    return _finish_cert(wa, (m, n), (), f"three-block circle for BS({m},{n})")


def contains_bs(g: LabelledGraph, m: int, n: int) -> bool:
    """m/n in lowest terms, m != +-n: BS(m, n) embeds iff m/n is a modulus."""
    if m == 0 or n == 0 or gcd(m, n) != 1 or m == n or m == -n:
        raise DecisionError("need coprime m, n with m != +-n")
    from .quotients import _detect_elementary

    red, _ = reduce_graph(g)
    if _detect_elementary(red) is not None:
        raise DecisionError("modulus criterion needs a non-elementary group")
    return modular_image(g).contains(Fraction(m, n))


# -- Baumslag-Solitar into Baumslag-Solitar ------------------------------------


def _solve_exponent(rhat, base, extra=1, xmin=1):
    """Smallest x >= xmin and nu with nu*rhat = extra * base^x (signed), all
    of nu's primes dividing base*extra; returns (x, nu) or None."""
    fb = factorize(base)
    fr = factorize(rhat)
    fe = factorize(extra)
    for p in fr:
        if p not in fb and fr[p] > fe.get(p, 0):
            return None
    x = xmin
    for p, e in fb.items():
        need = fr.get(p, 0) - fe.get(p, 0)
        if need > 0:
            x = max(x, -(-need // e))
    expr = extra * base**x
    if expr % rhat != 0:
        raise AssertionError("exponent solve: divisibility must hold")
    return x, expr // rhat


def embed_bs_construct(r: int, s: int, m: int, n: int) -> EmbeddingCertificate:
    """Constructive certificate for BS(r, s) inside BS(m, n) whenever the
    three-condition decider says yes."""
    dec = embeds_bs(r, s, m, n)
    if not dec:
        raise DecisionError(f"BS({r},{s}) does not embed into BS({m},{n}): {dec.clause}")
    beta = power_of_ratio(r, s, m, n)
    rhat, shat = (r, s) if beta >= 0 else (s, r)
    beta = abs(beta)
    cert = _construct_core(rhat, shat, beta, m, n)
    cert.claimed = (r, s)
    return cert


def _construct_core(rhat, shat, beta, m, n) -> EmbeddingCertificate:
    target = bs_graph(m, n)
    E_m, E_n = ("e0", 0), ("e0", 1)

    # Z^2 wrap: unit pairs arise as inner steps of the index split
    if abs(rhat) == 1 and abs(shat) == 1:
        wa = _derive_map(
            target,
            {"z0": ("v0", abs(m)), "z1": ("v0", abs(n))},
            [("d0", "z0", "z1", E_m), ("d1", "z1", "z0", E_n)],
        )
        return _finish_cert(wa, (rhat, shat), (), f"unit wrap in BS({m},{n})")

    # unimodular target
    if m == n or m == -n:
        mu = abs(m // rhat)
        if sign(rhat * shat) == sign(m * n):
            wa = _derive_map(target, {"z0": ("v0", mu)}, [("d0", "z0", "z0", E_m)])
            return _finish_cert(wa, (rhat, shat), (), f"power loop in BS({m},{n})")
        wa = _derive_map(
            target,
            {"z0": ("v0", mu), "z1": ("v0", abs(m))},
            [("d0", "z0", "z1", E_m), ("d1", "z1", "z0", E_m)],
        )
        return _finish_cert(wa, (rhat, shat), (), f"double wrap in BS({m},{n})")

    # solvable target
    if abs(m) == 1 or abs(n) == 1:
        k = max(beta, 1)
        vertices = {f"z{i}": ("v0", 1) for i in range(k)}
        edges = [(f"d{i}", f"z{i}", f"z{(i + 1) % k}", E_m) for i in range(k)]
        wa = _derive_map(target, vertices, edges)
        return _finish_cert(wa, (rhat, shat), (), f"{k}-cycle in solvable BS({m},{n})")

    # same-exponent primes split off first
    delta1 = 1
    for p in sorted(set(factorize(m)) | set(factorize(n))):
        vm, vn = valuation(m, p), valuation(n, p)
        if vm == vn and vm > 0:
            delta1 *= p**vm
    if delta1 > 1:
        nu1 = 1
        for p in factorize(delta1):
            nu1 *= p ** (valuation(delta1, p) - valuation(rhat, p))
        r2, s2 = nu1 * rhat, nu1 * shat
        aug = (("scale", nu1),) if nu1 != 1 else ()
        m1, n1 = m // delta1, n // delta1
        if abs(m1) == 1 or abs(n1) == 1:
            swap = abs(m1) != 1
            cert = _variant_power_circle(r2, s2, beta, m, n, swapped=swap)
            cert.aug_records = aug + cert.aug_records
            cert.claimed = (rhat, shat)
            return cert
        inner = _construct_core(r2 // delta1, s2 // delta1, beta, m1, n1)
        cert = _pendant_extend(inner, delta1, m, n)
        cert.aug_records = aug + cert.aug_records
        cert.claimed = (rhat, shat)
        return cert

    if gcd(m, n) == 1:
        return _block_circle(rhat, shat, beta, m, n)

    if n % m == 0 or m % n == 0:
        swap = n % m != 0
        return _power_circle(rhat, shat, beta, m, n, swapped=swap)

    delta = gcd(m, n)
    inner = _construct_core(rhat, shat, beta, m // delta, n // delta)
    return _delta_scale(inner, delta, m, n)


def _block_circle(rhat, shat, beta, m, n) -> EmbeddingCertificate:
    """Seven-block circle for coprime m, n (with index scaling when the
    exponents x, y would drop below the construction's reach)."""
    fr = factorize(rhat)
    fs = factorize(shat)
    for xmin, ymin in ((0, 0), (1, 1)):
        xs = [xmin]
        ys = [ymin]
        for p in factorize(m):
            xs.append(-(-fs.get(p, 0) // valuation(m, p)))
        for p in factorize(n):
            ys.append(-(-fr.get(p, 0) // valuation(n, p)))
        x, y = max(xs), max(ys)
        expr_r = m ** (x + beta) * n**y
        expr_s = m**x * n ** (y + beta)
        if expr_r % rhat or expr_s % shat:
            continue
        nu_val = expr_r // rhat
        if nu_val != expr_s // shat:
            continue
        try:
            cert = _build_block_circle(x, y, beta, m, n)
        except CertificateError:
            continue
        aug = (("scale", nu_val),) if nu_val != 1 else ()
        cert.aug_records = aug
        cert.claimed = (rhat, shat)
        # recheck the bridge with the actual reduction
        if not _pair_matches((rhat * nu_val, shat * nu_val), cert.map_claimed):
            raise CertificateError("block circle scaled to the wrong subgroup")
        return cert
    raise CertificateError(f"no block-circle solution for ({rhat},{shat}) in ({m},{n})")


def _build_block_circle(x, y, beta, m, n) -> EmbeddingCertificate:
    target = bs_graph(m, n)
    E_m, E_n = ("e0", 0), ("e0", 1)
    am, an = abs(m), abs(n)
    sizes = [x + beta, x + beta, y, x + y + beta, x, y + beta, y + beta]
    orients = [E_m, E_n, E_n, E_m, E_n, E_n, E_m]

    def mults():
        out = []
        for j in range(x + beta + 1):
            out.append(an**j)
        for j in range(1, x + beta + 1):
            out.append(an ** (x + beta - j) * am**j)
        for j in range(1, y + 1):
            out.append(am ** (x + beta + j))
        for j in range(1, x + y + beta + 1):
            out.append(am ** (x + y + beta - j) * an**j)
        for j in range(1, x + 1):
            out.append(an ** (x + y + beta - j))
        for j in range(1, y + beta + 1):
            out.append(an ** (y + beta - j) * am**j)
        for j in range(1, y + beta + 1):
            out.append(am ** (y + beta - j))
        return out

    values = mults()
    total = sum(sizes)
    if len(values) != total + 1 or values[-1] != 1:
        raise AssertionError("block multiplicities misaligned")
    vertices = {f"z{i}": ("v0", values[i]) for i in range(total)}
    edges = []
    idx = 0
    for size, orient in zip(sizes, orients):
        for _ in range(size):
            edges.append((f"d{idx}", f"z{idx}", f"z{(idx + 1) % total}", orient))
            idx += 1
    wa = _derive_map(target, vertices, edges)
    claimed = (m ** (x + beta) * n**y, m**x * n ** (y + beta))
    return _finish_cert(wa, claimed, (), f"block circle x={x} y={y} beta={beta}")


def _power_circle(rhat, shat, beta, m, n, swapped=False) -> EmbeddingCertificate:
    """BS(Delta^x, Delta^y) (plain) into BS(m, Delta m); swapped handles the
    n | m orientation."""
    mm, nn = (n, m) if swapped else (m, n)
    rr, ss = (shat, rhat) if swapped else (rhat, shat)
    delta = nn // mm
    solved = _solve_exponent(rr, delta)
    if solved is None:
        return _variant_power_circle(rhat, shat, beta, m, n, swapped=swapped)
    x, nu = solved
    y = x + beta
    cert = _build_power_circle(x, y, mm, nn, variant=False, swapped=swapped)
    cert.aug_records = (("scale", nu),) if nu != 1 else ()
    cert.claimed = (rhat, shat)
    if not _pair_matches((rhat * nu, shat * nu), cert.map_claimed):
        raise CertificateError("power circle scaled to the wrong subgroup")
    return cert


def _variant_power_circle(rhat, shat, beta, m, n, swapped=False) -> EmbeddingCertificate:
    """BS(m Delta^x, m Delta^y) into BS(m, Delta m) via the extra pendant edge."""
    mm, nn = (n, m) if swapped else (m, n)
    rr, ss = (shat, rhat) if swapped else (rhat, shat)
    delta = nn // mm
    solved = _solve_exponent(rr, delta, extra=mm)
    if solved is None:
        raise CertificateError(f"no power-circle form for ({rhat},{shat}) in ({m},{n})")
    x, nu = solved
    y = x + beta
    cert = _build_power_circle(x, y, mm, nn, variant=True, swapped=swapped)
    cert.aug_records = (("scale", nu),) if nu != 1 else ()
    cert.claimed = (rhat, shat)
    if not _pair_matches((rhat * nu, shat * nu), cert.map_claimed):
        raise CertificateError("variant power circle scaled to the wrong subgroup")
    return cert


def _build_power_circle(x, y, mm, nn, variant, swapped) -> EmbeddingCertificate:
    target = bs_graph(mm, nn) if not swapped else bs_graph(nn, mm)
    if swapped:
        E_mm, E_nn = ("e0", 1), ("e0", 0)
    else:
        E_mm, E_nn = ("e0", 0), ("e0", 1)
    delta = nn // mm
    total = x + y
    vertices = {f"z{i}": ("v0", abs(mm)) for i in range(total)}
    edges = []
    for i in range(total):
        orient = E_nn if i < x else E_mm
        edges.append((f"d{i}", f"z{i}", f"z{(i + 1) % total}", orient))
    protect = None
    if variant:
        vertices["zp"] = ("v0", abs(delta))
        edges.append(("dp", "zp", "z0", E_nn))
        protect = "z0"
    wa = _derive_map(target, vertices, edges)
    label = "variant " if variant else ""
    claimed = (mm * delta**x, mm * delta**y) if variant else (delta**x, delta**y)
    return _finish_cert(
        wa, claimed, (), f"{label}power circle x={x} y={y}", protect=protect
    )


def _delta_scale(inner: EmbeddingCertificate, delta: int, m, n) -> EmbeddingCertificate:
    """Retarget a certificate into BS(m', n') onto BS(delta m', delta n') by
    scaling every vertex multiplicity (the local gcds scale along)."""
    target = bs_graph(m, n)
    wa = inner.map
    new_wa = WeaklyAdmissibleMap(
        wa.source,
        target,
        dict(wa.vertex_map),
        dict(wa.edge_map),
        {v: mult * abs(delta) for v, mult in wa.vertex_mult.items()},
        dict(wa.edge_mult),
    )
    ok, violations = check_weakly_admissible(new_wa)
    if not ok:
        raise CertificateError(f"delta scaling broke admissibility: {violations[:3]}")
    return EmbeddingCertificate(
        map=new_wa,
        claimed=inner.claimed,
        map_claimed=inner.map_claimed,
        aug_records=inner.aug_records,
        source_reduce=inner.source_reduce,
        provenance=inner.provenance + f"; scaled into BS({m},{n})",
    )


def _pendant_extend(inner: EmbeddingCertificate, delta1: int, m, n) -> EmbeddingCertificate:
    """Index extension BS(delta1 r1, delta1 s1) < BS(delta1 m1, delta1 n1):
    attach a (delta1, 1) pendant at a multiplicity-coprime vertex and map
    into the two-vertex graph representing BS(m, n)."""
    wa = inner.map
    m1, n1 = wa.target.edges["e0"].labels
    target = graph_from_edges(
        [("e0", "v0", "v0", m1, n1), ("pe", "p0", "v0", delta1, 1)]
    )
    anchor = None
    for v in wa.source.sorted_vertices():
        if gcd(wa.vertex_mult[v], delta1) == 1:
            anchor = v
            break
    if anchor is None:
        raise CertificateError("no multiplicity coprime to the index: cannot extend")
    q = wa.vertex_mult[anchor]
    src_edges = [
        (name, wa.source.edges[name].endpoints[0], wa.source.edges[name].endpoints[1],
         wa.source.edges[name].labels[0], wa.source.edges[name].labels[1])
        for name in wa.source.sorted_edges()
    ]
    pv = wa.source.fresh_vertex("pz")
    pedge = wa.source.fresh_edge("pd")
    src_edges.append((pedge, pv, anchor, delta1, 1))
    source = graph_from_edges(src_edges)
    vertex_map = dict(wa.vertex_map)
    vertex_map[pv] = "p0"
    vertex_mult = dict(wa.vertex_mult)
    vertex_mult[pv] = q
    edge_map = dict(wa.edge_map)
    edge_map[(pedge, 0)] = ("pe", 0)
    edge_map[(pedge, 1)] = ("pe", 1)
    edge_mult = dict(wa.edge_mult)
    edge_mult[pedge] = q
    new_wa = WeaklyAdmissibleMap(source, target, vertex_map, edge_map, vertex_mult, edge_mult)
    ok, violations = check_weakly_admissible(new_wa)
    if not ok:
        raise CertificateError(f"pendant extension not admissible: {violations[:3]}")
    cur, records = reduce_graph(source, protect=anchor)
    cur, more = reduce_graph(cur)
    records = tuple(records) + tuple(more)
    loop = _loop_labels(cur)
    if loop is None:
        raise CertificateError("pendant source does not reduce to a loop")
    tgt_red, tgt_records = reduce_graph(target)
    tgt_loop = _loop_labels(tgt_red)
    if tgt_loop is None or not _pair_matches(tgt_loop, (m, n)):
        raise CertificateError("pendant target does not reduce to BS(m, n)")
    return EmbeddingCertificate(
        map=new_wa,
        claimed=(0, 0),  # caller fills in
        map_claimed=loop,
        aug_records=inner.aug_records,
        source_reduce=records,
        target_params=(m, n),
        target_reduce=tuple(tgt_records),
        provenance=inner.provenance + f"; pendant index {delta1}",
    )


# -- subgroups of BS(n, n) ------------------------------------------------------


def subgroup_of_bs_nn(g: LabelledGraph, n: int, up_to_sign: bool = False) -> bool:
    """Equal labels near every vertex (after greedy sign normalization),
    all dividing n.  up_to_sign tests the BS(n, +-n) variant."""
    if n < 2:
        raise DecisionError("criterion holds only for n >= 2")
    if not g.is_reduced():
        raise NotReducedError("test needs a reduced graph")
    norm, _ = canonicalize_signs(g)
    for v in norm.sorted_vertices():
        labels = [norm.label(oe) for oe in norm.edges_at(v)]
        if up_to_sign:
            labels = [abs(l) for l in labels]
        if len(set(labels)) != 1:
            return False
        if n % labels[0] != 0:
            return False
    return True


def embeds_in_some_bs_nn(g: LabelledGraph):
    """Smallest n (as lcm of labels, floored at 2) with G < BS(n, n), or None."""
    if not g.is_reduced():
        raise NotReducedError("test needs a reduced graph")
    norm, _ = canonicalize_signs(g)
    out = 1
    for v in norm.sorted_vertices():
        labels = [norm.label(oe) for oe in norm.edges_at(v)]
        if labels and len(set(labels)) != 1:
            return None
        if labels:
            out = abs(lcm(out, labels[0]))
    return max(out, 2)


def contains_z2_k(g: LabelledGraph) -> tuple[bool, Decision]:
    """(contains Z^2, contains K).  The K criterion is evaluated on the
    given graph after reduction; the even-label clause quantifies over
    representations, hence the caveat on negative answers."""
    red, _ = reduce_graph(g)
    if not red.edges:
        return False, Decision(False, "infinite cyclic")
    loop = _loop_labels(red)
    if loop is not None and 1 in (abs(loop[0]), abs(loop[1])):
        a, b = loop
        if abs(a) == 1 and abs(b) == 1:
            return True, Decision(a * b < 0, "elementary loop")
        return False, Decision(False, "solvable BS(1, n)")
    if modular_image(red).contains(Fraction(-1)):
        return True, Decision(True, "-1 is a modulus")
    if any(l % 2 == 0 for l in red.labels()):
        return True, Decision(True, "even label present")
    return True, Decision(
        False,
        "no even label on this representation",
        ("other representations not searched",),
        caveat=True,
    )
