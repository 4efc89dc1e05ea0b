"""Multi-limits, pre-limits and their weak/approximate relatives.

A multi-limit of a diagram is a set of cones through which every cone
factorizes via a unique member and a unique morphism.  The solver works
on the category of cones: it splits it into connected components and
returns one terminal cone per component, which yields the factorization
certificate for free.  Empty cone sets are valid multi-limits; a
component without a terminal cone is reported as an ordinary
``NoMultiLimit`` result carrying a witness, not as an error.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    CategoryError,
    Diagram,
    FiniteCategory,
    build_category,
    cospan_diagram,
    diagram_from_graph,
    discrete_diagram,
    empty_diagram,
)


class NotProductComplete(CategoryError):
    """A needed binary product is missing; carries the witness pair."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"no singleton multi-product for {witness}")


class NoPullbacks(CategoryError):
    """A needed pullback is missing; carries the witness cospan."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"no singleton pullback for cospan {witness}")


@dataclass(frozen=True)
class Cone:
    apex: int
    legs: tuple[int, ...]


@dataclass(frozen=True)
class MultiLimitResult:
    cones: tuple[Cone, ...]
    # per enumerated cone: (index into .cones, factorizing morphism id)
    certificate: tuple[tuple[int, int], ...]
    all_cones: tuple[Cone, ...]


@dataclass(frozen=True)
class NoMultiLimit:
    witness: Cone
    component: tuple[Cone, ...]


def enumerate_cones(K: FiniteCategory, D: Diagram) -> list[Cone]:
    """All cones over D, ordered by (apex, legs) lexicographically."""
    shape = D.shape
    label_obj = D.labeling.object_map
    label_mor = D.labeling.morphism_map
    arrows = [f for f in shape.morphisms if not shape.is_identity(f)]
    cones = []
    for apex in K.objects:
        leg_choices = [K.hom(apex, label_obj[x]) for x in shape.objects]
        for legs in itertools.product(*leg_choices):
            ok = True
            for d in arrows:
                if K.compose(label_mor[d], legs[shape.dom[d]]) != legs[shape.cod[d]]:
                    ok = False
                    break
            if ok:
                cones.append(Cone(apex, legs))
    return cones


def cone_factorizations(K: FiniteCategory, c: Cone, d: Cone) -> list[int]:
    """Morphisms h: apex(c) -> apex(d) with legs(c) = legs(d) o h."""
    out = []
    for h in K.hom(c.apex, d.apex):
        if all(K.compose(ld, h) == lc for lc, ld in zip(c.legs, d.legs)):
            out.append(h)
    return out


def _cone_components(K, cones):
    n = len(cones)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edges = {}
    for i in range(n):
        for j in range(n):
            facs = cone_factorizations(K, cones[i], cones[j])
            edges[(i, j)] = facs
            if facs:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return list(comps.values()), edges


def multi_limit(K: FiniteCategory, D: Diagram):
    """Multi-limit of D, or NoMultiLimit witnessing a terminal-free component."""
    cones = enumerate_cones(K, D)
    if not cones:
        return MultiLimitResult(cones=(), certificate=(), all_cones=())
    comps, edges = _cone_components(K, cones)
    comps.sort(key=min)
    members = []
    assignment = {}
    for comp in comps:
        terminals = [
            t for t in comp
            if all(len(edges[(i, t)]) == 1 for i in comp)
        ]
        if not terminals:
            w = min(comp, key=lambda i: (cones[i].apex, cones[i].legs))
            return NoMultiLimit(
                witness=cones[w],
                component=tuple(cones[i] for i in sorted(comp)),
            )
        t = min(terminals, key=lambda i: (cones[i].apex, cones[i].legs))
        members.append(t)
        for i in comp:
            assignment[i] = (t, edges[(i, t)][0])
    order = sorted(range(len(members)), key=lambda k: (cones[members[k]].apex, cones[members[k]].legs))
    member_pos = {members[k]: order.index(k) for k in range(len(members))}
    certificate = tuple(
        (member_pos[assignment[i][0]], assignment[i][1]) for i in range(len(cones))
    )
    return MultiLimitResult(
        cones=tuple(cones[members[k]] for k in order),
        certificate=certificate,
        all_cones=tuple(cones),
    )


def check_multi_limit_certificate(K, D, result: MultiLimitResult) -> bool:
    """Definitional oracle: each cone factors through exactly one member once."""
    cones = enumerate_cones(K, D)
    if tuple(cones) != result.all_cones:
        return False
    for i, c in enumerate(cones):
        hits = []
        for m, member in enumerate(result.cones):
            for h in cone_factorizations(K, c, member):
                hits.append((m, h))
        if len(hits) != 1 or hits[0] != result.certificate[i]:
            return False
    return True


def pre_limit(K: FiniteCategory, D: Diagram) -> list[Cone]:
    """A weakly terminal cone set, greedily minimized.

    Every cone factorizes through some member (uniqueness not required);
    the full cone set is always a correct fallback.
    """
    cones = enumerate_cones(K, D)
    keep = list(range(len(cones)))

    def covered_by(i, pool):
        return any(cone_factorizations(K, cones[i], cones[j]) for j in pool)

    for i in list(keep):
        rest = [j for j in keep if j != i]
        if all(covered_by(c, rest) for c in range(len(cones))):
            keep = rest
    return [cones[i] for i in keep]


def multi_terminal_objects(K: FiniteCategory):
    """Multi-terminal set of objects, or NoMultiLimit over the empty diagram."""
    return multi_limit(K, empty_diagram(K))


def terminal_object(K: FiniteCategory) -> int | None:
    res = multi_terminal_objects(K)
    if isinstance(res, MultiLimitResult) and len(res.cones) == 1:
        return res.cones[0].apex
    return None


def multi_product(K: FiniteCategory, labels):
    return multi_limit(K, discrete_diagram(K, labels))


@dataclass(frozen=True)
class BinaryProduct:
    obj: int
    left: int
    right: int


def binary_product(K: FiniteCategory, a: int, b: int) -> BinaryProduct:
    """The canonical product of a pair; raises unless the multi-product is a singleton."""
    res = multi_product(K, [a, b])
    if not isinstance(res, MultiLimitResult) or len(res.cones) != 1:
        raise NotProductComplete((a, b))
    cone = res.cones[0]
    return BinaryProduct(obj=cone.apex, left=cone.legs[0], right=cone.legs[1])


class ProductsWithLeft:
    """Canonical products a x c for a fixed left factor, built eagerly.

    Also provides the functor action h |-> a x h needed by the comma
    category of the exponential search.  Construction fails with
    NotProductComplete when some pair lacks a singleton multi-product.
    """

    def __init__(self, K: FiniteCategory, a: int):
        self.K = K
        self.a = a
        self.prod = {c: binary_product(K, a, c) for c in K.objects}

    def pair(self, u: int, v: int) -> int:
        """The unique <u, v>: dom(u) -> a x cod(v) for u landing in a."""
        K = self.K
        target = self.prod[K.cod[v]]
        z = K.dom[u]
        out = None
        for m in K.hom(z, target.obj):
            if K.compose(target.left, m) == u and K.compose(target.right, m) == v:
                if out is not None:
                    raise NotProductComplete((self.a, K.cod[v]))
                out = m
        if out is None:
            raise NotProductComplete((self.a, K.cod[v]))
        return out

    def lift(self, h: int) -> int:
        """The induced morphism a x dom(h) -> a x cod(h)."""
        K = self.K
        pc = self.prod[K.dom[h]]
        return self.pair(pc.left, K.compose(h, pc.right))


@dataclass(frozen=True)
class MultiUniversalFamily:
    """A multi-universal family of evaluation morphisms for a fixed pair.

    ``pairs[i]`` is (object, ev) with ev: a x object -> b; every
    c: a x C -> b factors as ev_i o (a x cbar) for exactly one i and
    exactly one cbar.
    """

    left: int
    right: int
    pairs: tuple[tuple[int, int], ...]
    products: dict

    def member_count(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class NoFamily:
    left: int
    right: int
    witness: tuple[int, int]
    component: tuple[tuple[int, int], ...]


def _comma_category_product_over(K, prods: ProductsWithLeft, b: int):
    """Objects (c, m: a x c -> b); morphisms h: c -> c' with m' o (a x h) = m."""
    objs = []
    for c in K.objects:
        for m in K.hom(prods.prod[c].obj, b):
            objs.append((c, m))
    obj_index = {o: i for i, o in enumerate(objs)}
    arrows = []
    arrow_base = []
    for i, (c, m) in enumerate(objs):
        for j, (c2, m2) in enumerate(objs):
            for h in K.hom(c, c2):
                if K.compose(m2, prods.lift(h)) == m:
                    if i == j and h == K.identity[c]:
                        continue
                    arrows.append((i, j))
                    arrow_base.append(h)
    n = len(objs)

    def compose_fn(g, f):
        h = K.compose(arrow_base[g - n], arrow_base[f - n])
        i = arrows[f - n][0]
        j = arrows[g - n][1]
        if i == j and h == K.identity[objs[i][0]]:
            return i
        return n + next(
            k for k, (a, hb) in enumerate(zip(arrows, arrow_base))
            if a == (i, j) and hb == h
        )

    cat = build_category(n, arrows, compose_fn=compose_fn)
    return cat, objs


def multi_exponential(K: FiniteCategory, a: int, b: int):
    """Multi-universal family for (a, b), or NoFamily with a witness.

    Requires every pair (a, c) to have a singleton multi-product; the
    family is the multi-terminal set of the comma category whose objects
    are morphisms a x c -> b.
    """
    K.check_object(a)
    K.check_object(b)
    prods = ProductsWithLeft(K, a)
    comma, objs = _comma_category_product_over(K, prods, b)
    res = multi_terminal_objects(comma)
    if isinstance(res, NoMultiLimit):
        return NoFamily(
            left=a,
            right=b,
            witness=objs[res.witness.apex],
            component=tuple(objs[c.apex] for c in res.component),
        )
    return MultiUniversalFamily(
        left=a,
        right=b,
        pairs=tuple(objs[c.apex] for c in res.cones),
        products={c: prods.prod[c] for c in K.objects},
    )


def check_multi_universal(K, a, b, family: MultiUniversalFamily) -> bool:
    """Definitional oracle for the family's universal property."""
    prods = ProductsWithLeft(K, a)
    for c in K.objects:
        for m in K.hom(prods.prod[c].obj, b):
            hits = []
            for i, (ci, ev) in enumerate(family.pairs):
                for h in K.hom(c, ci):
                    if K.compose(ev, prods.lift(h)) == m:
                        hits.append((i, h))
            if len(hits) != 1:
                return False
    return True


def pullback(K: FiniteCategory, f: int, g: int):
    """Singleton-multi-limit pullback of a cospan, or None when absent."""
    res = multi_limit(K, cospan_diagram(K, f, g))
    if isinstance(res, MultiLimitResult) and len(res.cones) == 1:
        c = res.cones[0]
        return c.apex, c.legs[0], c.legs[1]
    return None


def has_all_pullbacks(K: FiniteCategory):
    """Return None, or a witness cospan lacking a singleton pullback."""
    for f in K.morphisms:
        for g in K.morphisms:
            if K.cod[f] != K.cod[g]:
                continue
            if pullback(K, f, g) is None:
                return (f, g)
    return None


def is_generic_proof(K: FiniteCategory, theta: int):
    """Check the generic-proof property of theta by exhaustive pullback search.

    For every f: Y -> X some g: X -> cod(theta) must yield a pulled-back
    morphism g*theta that factors through f and vice versa.  Returns
    (True, None) or (False, witness f).
    """
    K.check_morphism(theta)
    missing = has_all_pullbacks(K)
    if missing is not None:
        raise NoPullbacks(missing)
    lam = K.cod[theta]
    for f in K.morphisms:
        x = K.cod[f]
        y = K.dom[f]
        ok = False
        for g in K.hom(x, lam):
            pb = pullback(K, g, theta)
            apex, to_x, _ = pb
            fwd = any(K.compose(to_x, u) == f for u in K.hom(y, apex))
            bwd = any(K.compose(f, v) == to_x for v in K.hom(apex, y))
            if fwd and bwd:
                ok = True
                break
        if not ok:
            return False, f
    return True, None


@dataclass(frozen=True)
class WeakSimpleProduct:
    source: int
    left: int
    fiber: int
    obj: int
    eval_mor: int
    weight: int


@dataclass(frozen=True)
class NotFound:
    reason: str


def _simple_product_candidates(K, b, a, x, prods):
    """Triples (p, eps: a x p -> B, w: p -> x) with b o eps = a x w."""
    B = K.dom[b]
    out = []
    for p in K.objects:
        ap = prods.prod[p].obj
        for eps in K.hom(ap, B):
            lhs = K.compose(b, eps)
            for w in K.hom(p, x):
                if lhs == prods.lift(w):
                    out.append((p, eps, w))
    return out


def _triple_covers(K, prods, cand, other) -> bool:
    p, eps, w = cand
    p2, eps2, w2 = other
    for f in K.hom(p2, p):
        if K.compose(eps, prods.lift(f)) == eps2 and K.compose(w, f) == w2:
            return True
    return False


def weak_simple_product(K: FiniteCategory, b: int, a: int, x: int):
    """First triple (P, eps, w) over b: B -> a x x passing the weak property.

    ``b`` must land in the canonical product of (a, x).  Exhaustive search
    in id order; NotFound when no candidate covers all competitors.
    """
    prods = ProductsWithLeft(K, a)
    if K.cod[b] != prods.prod[x].obj:
        raise NotProductComplete((a, x))
    cands = _simple_product_candidates(K, b, a, x, prods)
    for cand in cands:
        if all(_triple_covers(K, prods, cand, other) for other in cands):
            p, eps, w = cand
            return WeakSimpleProduct(
                source=b, left=a, fiber=x, obj=p, eval_mor=eps, weight=w
            )
    return NotFound("no weakly universal triple")


def approximate_dependent_product(K: FiniteCategory, b: int, a: int, x: int):
    """A covering set of triples: every competitor factors through a member.

    Greedy minimization of the full candidate set; a singleton weak
    simple product is always a valid output when one exists.
    """
    prods = ProductsWithLeft(K, a)
    if K.cod[b] != prods.prod[x].obj:
        raise NotProductComplete((a, x))
    cands = _simple_product_candidates(K, b, a, x, prods)
    keep = list(range(len(cands)))
    for i in list(keep):
        rest = [j for j in keep if j != i]
        if all(
            any(_triple_covers(K, prods, cands[j], cands[c]) for j in rest)
            for c in range(len(cands))
        ):
            keep = rest
    return [
        WeakSimpleProduct(source=b, left=a, fiber=x, obj=cands[i][0],
                          eval_mor=cands[i][1], weight=cands[i][2])
        for i in keep
    ]
