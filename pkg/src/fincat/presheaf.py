"""Pointwise-finite presheaves on a finite base category.

A presheaf assigns a finite set to every object and a reversed-direction
function to every morphism.  This fragment is closed under the finite
limits, colimits, exponentials and the truth-value object used here, so
all topos-style checks below are sound within it.  Element ids are local
per object; serialized names are (object id, element index).

Everything is computed pointwise and certified by enumeration; limit
and colimit universal properties have explicit oracle helpers that tests
quantify over bounded corpora.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    CategoryError,
    FiniteCategory,
    FunctorData,
    LawViolation,
    build_category,
    dual_category,
)


class NotMonoPointwise(CategoryError):
    pass


class NotEquivalenceRelation(CategoryError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not an equivalence relation at {witness}")


@dataclass(frozen=True)
class Presheaf:
    cat: FiniteCategory
    sizes: tuple[int, ...]
    actions: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class NatTrans:
    dom: Presheaf
    cod: Presheaf
    maps: tuple[tuple[int, ...], ...]


def make_presheaf(K: FiniteCategory, sizes, actions) -> Presheaf:
    """Validate contravariant functoriality exhaustively and freeze."""
    sizes = tuple(sizes)
    actions = tuple(tuple(a) for a in actions)
    if len(sizes) != K.num_objects or len(actions) != K.num_morphisms:
        raise CategoryError("presheaf table shape mismatch")
    violations = []
    for h in K.morphisms:
        a, b = K.dom[h], K.cod[h]
        if len(actions[h]) != sizes[b] or any(not 0 <= v < sizes[a] for v in actions[h]):
            violations.append(("action-shape", h))
    if violations:
        raise LawViolation(violations)
    for x in K.objects:
        if actions[K.identity[x]] != tuple(range(sizes[x])):
            violations.append(("presheaf-identity", x))
    for g in K.morphisms:
        for f in K.morphisms:
            if K.cod[f] != K.dom[g]:
                continue
            gf = K.compose_table[g][f]
            for v in range(sizes[K.cod[g]]):
                if actions[gf][v] != actions[f][actions[g][v]]:
                    violations.append(("presheaf-composition", g, f, v))
                    break
    if violations:
        raise LawViolation(violations)
    return Presheaf(K, sizes, actions)


def nat_trans(F: Presheaf, G: Presheaf, maps) -> NatTrans:
    maps = tuple(tuple(m) for m in maps)
    K = F.cat
    if F.cat != G.cat:
        raise CategoryError("presheaves over different bases")
    violations = []
    for x in K.objects:
        if len(maps[x]) != F.sizes[x] or any(not 0 <= v < G.sizes[x] for v in maps[x]):
            violations.append(("component-shape", x))
    if violations:
        raise LawViolation(violations)
    for h in K.morphisms:
        a, b = K.dom[h], K.cod[h]
        for v in range(F.sizes[b]):
            if maps[a][F.actions[h][v]] != G.actions[h][maps[b][v]]:
                violations.append(("naturality", h, v))
                break
    if violations:
        raise LawViolation(violations)
    return NatTrans(F, G, maps)


def identity_nat_trans(F: Presheaf) -> NatTrans:
    return NatTrans(F, F, tuple(tuple(range(s)) for s in F.sizes))


def compose_nat_trans(g: NatTrans, f: NatTrans) -> NatTrans:
    if f.cod != g.dom:
        raise CategoryError("not composable")
    return NatTrans(
        f.dom, g.cod,
        tuple(
            tuple(g.maps[x][v] for v in f.maps[x])
            for x in range(len(f.maps))
        ),
    )


def all_nat_trans(F: Presheaf, G: Presheaf) -> list[NatTrans]:
    """Enumerate natural transformations by per-object backtracking.

    Objects are assigned in id order; morphisms to and from already
    assigned objects force or filter values elementwise, endo-morphisms
    are checked per candidate.
    """
    K = F.cat
    n = K.num_objects
    by_endpoints = {}
    for h in K.morphisms:
        if K.is_identity(h):
            continue
        by_endpoints.setdefault((K.dom[h], K.cod[h]), []).append(h)

    out = []
    assigned: dict[int, tuple[int, ...]] = {}

    def candidates(x):
        allowed = [set(range(G.sizes[x])) for _ in range(F.sizes[x])]
        # h: y -> x with y assigned: filter; h: x -> y with y assigned: force.
        for y in assigned:
            for h in by_endpoints.get((y, x), ()):
                ty = assigned[y]
                for e in range(F.sizes[x]):
                    allowed[e] = {
                        v for v in allowed[e]
                        if ty[F.actions[h][e]] == G.actions[h][v]
                    }
            for h in by_endpoints.get((x, y), ()):
                ty = assigned[y]
                for ey in range(F.sizes[y]):
                    forced = G.actions[h][ty[ey]]
                    allowed[F.actions[h][ey]] &= {forced}
        endos = by_endpoints.get((x, x), ())
        for combo in itertools.product(*(sorted(a) for a in allowed)):
            ok = True
            for h in endos:
                for e in range(F.sizes[x]):
                    if combo[F.actions[h][e]] != G.actions[h][combo[e]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield combo

    def extend(x):
        if x == n:
            out.append(NatTrans(F, G, tuple(assigned[i] for i in range(n))))
            return
        for combo in candidates(x):
            assigned[x] = combo
            extend(x + 1)
            del assigned[x]

    extend(0)
    return out


def is_pointwise_injective(t: NatTrans) -> bool:
    return all(len(set(m)) == len(m) for m in t.maps)


def is_pointwise_surjective(t: NatTrans) -> bool:
    return all(set(m) == set(range(s)) for m, s in zip(t.maps, t.cod.sizes))


def presheaves_isomorphic(F: Presheaf, G: Presheaf) -> bool:
    if F.sizes != G.sizes:
        return False
    return any(is_pointwise_injective(t) and is_pointwise_surjective(t)
               for t in all_nat_trans(F, G))


def yoneda(K: FiniteCategory, a: int) -> Presheaf:
    """The representable presheaf of morphisms into ``a``."""
    K.check_object(a)
    sizes = tuple(len(K.hom(x, a)) for x in K.objects)
    index = {x: {f: i for i, f in enumerate(K.hom(x, a))} for x in K.objects}
    actions = []
    for h in K.morphisms:
        x, y = K.dom[h], K.cod[h]
        actions.append(tuple(
            index[x][K.compose(u, h)] for u in K.hom(y, a)
        ))
    return Presheaf(K, sizes, tuple(actions))


def yoneda_map(K: FiniteCategory, f: int) -> NatTrans:
    """The representable transformation induced by postcomposition with f."""
    a, b = K.dom[f], K.cod[f]
    ya, yb = yoneda(K, a), yoneda(K, b)
    index = {x: {g: i for i, g in enumerate(K.hom(x, b))} for x in K.objects}
    maps = tuple(
        tuple(index[x][K.compose(f, u)] for u in K.hom(x, a))
        for x in K.objects
    )
    return NatTrans(ya, yb, maps)


def yoneda_element(K: FiniteCategory, F: Presheaf, a: int, elem: int) -> NatTrans:
    """The transformation y(a) -> F picking out ``elem`` via the actions."""
    ya = yoneda(K, a)
    maps = tuple(
        tuple(F.actions[u][elem] for u in K.hom(x, a))
        for x in K.objects
    )
    return NatTrans(ya, F, maps)


@dataclass(frozen=True)
class PresheafDiagram:
    shape: FiniteCategory
    nodes: tuple[Presheaf, ...]
    arrows: tuple[NatTrans, ...]


def presheaf_diagram(shape: FiniteCategory, nodes, arrow_labels) -> PresheafDiagram:
    """Assemble a diagram; identities are auto-filled, functor laws checked."""
    nodes = tuple(nodes)
    arrows = [None] * shape.num_morphisms
    for x in shape.objects:
        arrows[shape.identity[x]] = identity_nat_trans(nodes[x])
    for mid, t in arrow_labels.items():
        arrows[mid] = t
    violations = []
    for mid, t in enumerate(arrows):
        if t is None:
            violations.append(("missing-arrow-label", mid))
    if violations:
        raise LawViolation(violations)
    for mid, t in enumerate(arrows):
        if t.dom != nodes[shape.dom[mid]] or t.cod != nodes[shape.cod[mid]]:
            violations.append(("arrow-label-endpoints", mid))
    for g in shape.morphisms:
        for f in shape.morphisms:
            if shape.cod[f] != shape.dom[g]:
                continue
            gf = shape.compose_table[g][f]
            if compose_nat_trans(arrows[g], arrows[f]).maps != arrows[gf].maps:
                violations.append(("arrow-label-composition", g, f))
    if violations:
        raise LawViolation(violations)
    return PresheafDiagram(shape, nodes, tuple(arrows))


def discrete_presheaf_diagram(K: FiniteCategory, nodes) -> PresheafDiagram:
    shape = build_category(len(nodes), [])
    return presheaf_diagram(shape, nodes, {})


def parallel_presheaf_diagram(f: NatTrans, g: NatTrans) -> PresheafDiagram:
    shape = build_category(2, [(0, 1), (0, 1)])
    return presheaf_diagram(shape, [f.dom, f.cod], {2: f, 3: g})


def span_presheaf_diagram(f: NatTrans, g: NatTrans) -> PresheafDiagram:
    """Shape l <- c -> r for two transformations with a common domain."""
    shape = build_category(3, [(0, 1), (0, 2)])
    return presheaf_diagram(shape, [f.dom, f.cod, g.cod], {3: f, 4: g})


def cospan_presheaf_diagram(f: NatTrans, g: NatTrans) -> PresheafDiagram:
    """Shape l -> c <- r for two transformations with a common codomain."""
    shape = build_category(3, [(0, 2), (1, 2)])
    return presheaf_diagram(shape, [f.dom, g.dom, f.cod], {3: f, 4: g})


@dataclass(frozen=True)
class PresheafLimit:
    obj: Presheaf
    projections: tuple[NatTrans, ...]
    elements: tuple[tuple[tuple[int, ...], ...], ...]


def presheaf_limit(diag: PresheafDiagram) -> PresheafLimit:
    """Pointwise limit: compatible tuples with componentwise action."""
    K = diag.nodes[0].cat if diag.nodes else None
    if K is None:
        raise CategoryError("empty-shape limits need an ambient category; use terminal_presheaf")
    shape = diag.shape
    gen = [m for m in shape.morphisms if not shape.is_identity(m)]
    elements = []
    index = []
    for x in K.objects:
        elems = []
        for combo in itertools.product(*(range(F.sizes[x]) for F in diag.nodes)):
            if all(
                diag.arrows[m].maps[x][combo[shape.dom[m]]] == combo[shape.cod[m]]
                for m in gen
            ):
                elems.append(combo)
        elements.append(tuple(elems))
        index.append({e: i for i, e in enumerate(elems)})
    actions = []
    for h in K.morphisms:
        a, b = K.dom[h], K.cod[h]
        actions.append(tuple(
            index[a][tuple(F.actions[h][v] for F, v in zip(diag.nodes, combo))]
            for combo in elements[b]
        ))
    obj = make_presheaf(K, tuple(len(e) for e in elements), actions)
    projections = tuple(
        NatTrans(obj, F, tuple(
            tuple(combo[d] for combo in elements[x]) for x in K.objects
        ))
        for d, F in enumerate(diag.nodes)
    )
    return PresheafLimit(obj, projections, tuple(elements))


@dataclass(frozen=True)
class PresheafColimit:
    obj: Presheaf
    injections: tuple[NatTrans, ...]
    class_of: tuple[dict, ...]


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def presheaf_colimit(diag: PresheafDiagram) -> PresheafColimit:
    """Pointwise colimit: tagged disjoint union modulo the generated identification."""
    K = diag.nodes[0].cat if diag.nodes else None
    if K is None:
        raise CategoryError("empty-shape colimits need an ambient category; use initial_presheaf")
    shape = diag.shape
    gen = [m for m in shape.morphisms if not shape.is_identity(m)]
    class_of = []
    classes = []
    for x in K.objects:
        tagged = [(d, v) for d, F in enumerate(diag.nodes) for v in range(F.sizes[x])]
        uf = _UnionFind(tagged)
        for m in gen:
            d, d2 = shape.dom[m], shape.cod[m]
            for v in range(diag.nodes[d].sizes[x]):
                uf.union((d, v), (d2, diag.arrows[m].maps[x][v]))
        reps = sorted({uf.find(t) for t in tagged})
        rep_index = {r: i for i, r in enumerate(reps)}
        class_of.append({t: rep_index[uf.find(t)] for t in tagged})
        classes.append(reps)
    actions = []
    for h in K.morphisms:
        a, b = K.dom[h], K.cod[h]
        actions.append(tuple(
            class_of[a][(d, diag.nodes[d].actions[h][v])]
            for d, v in classes[b]
        ))
    obj = make_presheaf(K, tuple(len(c) for c in classes), actions)
    injections = tuple(
        NatTrans(F, obj, tuple(
            tuple(class_of[x][(d, v)] for v in range(F.sizes[x]))
            for x in K.objects
        ))
        for d, F in enumerate(diag.nodes)
    )
    return PresheafColimit(obj, injections, tuple(class_of))


def terminal_presheaf(K: FiniteCategory) -> Presheaf:
    return make_presheaf(K, (1,) * K.num_objects, ((0,) * 1 for _ in K.morphisms))


def initial_presheaf(K: FiniteCategory) -> Presheaf:
    return make_presheaf(K, (0,) * K.num_objects, ((), ) * K.num_morphisms)


def presheaf_product(F: Presheaf, G: Presheaf) -> PresheafLimit:
    return presheaf_limit(discrete_presheaf_diagram(F.cat, [F, G]))


def presheaf_coproduct(F: Presheaf, G: Presheaf) -> PresheafColimit:
    return presheaf_colimit(discrete_presheaf_diagram(F.cat, [F, G]))


def presheaf_equalizer(f: NatTrans, g: NatTrans) -> PresheafLimit:
    return presheaf_limit(parallel_presheaf_diagram(f, g))


def presheaf_coequalizer(f: NatTrans, g: NatTrans) -> PresheafColimit:
    return presheaf_colimit(parallel_presheaf_diagram(f, g))


def presheaf_pullback(f: NatTrans, g: NatTrans) -> PresheafLimit:
    return presheaf_limit(cospan_presheaf_diagram(f, g))


def presheaf_pushout(f: NatTrans, g: NatTrans) -> PresheafColimit:
    return presheaf_colimit(span_presheaf_diagram(f, g))


def check_limit_ump(diag: PresheafDiagram, lim: PresheafLimit, tests) -> bool:
    """Every cone from a test presheaf factors uniquely through the limit."""
    shape = diag.shape
    gen = [m for m in shape.morphisms if not shape.is_identity(m)]
    for T in tests:
        leg_spaces = [all_nat_trans(T, F) for F in diag.nodes]
        for legs in itertools.product(*leg_spaces):
            if any(
                compose_nat_trans(diag.arrows[m], legs[shape.dom[m]]).maps
                != legs[shape.cod[m]].maps
                for m in gen
            ):
                continue
            hits = [
                u for u in all_nat_trans(T, lim.obj)
                if all(
                    compose_nat_trans(p, u).maps == leg.maps
                    for p, leg in zip(lim.projections, legs)
                )
            ]
            if len(hits) != 1:
                return False
    return True


def check_colimit_ump(diag: PresheafDiagram, colim: PresheafColimit, tests) -> bool:
    """Every cocone into a test presheaf factors uniquely through the colimit."""
    shape = diag.shape
    gen = [m for m in shape.morphisms if not shape.is_identity(m)]
    for T in tests:
        leg_spaces = [all_nat_trans(F, T) for F in diag.nodes]
        for legs in itertools.product(*leg_spaces):
            if any(
                compose_nat_trans(legs[shape.cod[m]], diag.arrows[m]).maps
                != legs[shape.dom[m]].maps
                for m in gen
            ):
                continue
            hits = [
                u for u in all_nat_trans(colim.obj, T)
                if all(
                    compose_nat_trans(u, i).maps == leg.maps
                    for i, leg in zip(colim.injections, legs)
                )
            ]
            if len(hits) != 1:
                return False
    return True


@dataclass(frozen=True)
class PresheafExponential:
    base: Presheaf
    target: Presheaf
    obj: Presheaf
    transforms: tuple[tuple[NatTrans, ...], ...]
    pair_products: tuple[PresheafLimit, ...]


def presheaf_exponential(F: Presheaf, G: Presheaf) -> PresheafExponential:
    """[F,G] with elements at A the transformations y(A) x F -> G."""
    K = F.cat
    prods = []
    elems = []
    for a in K.objects:
        prod = presheaf_product(yoneda(K, a), F)
        prods.append(prod)
        elems.append(tuple(all_nat_trans(prod.obj, G)))
    key_index = [
        {t.maps: i for i, t in enumerate(ts)} for ts in elems
    ]
    hom_index = [
        {a: {f: i for i, f in enumerate(K.hom(x, a))} for a in K.objects}
        for x in K.objects
    ]
    pair_index = []
    for a in K.objects:
        per_obj = []
        for x in K.objects:
            per_obj.append({e: i for i, e in enumerate(prods[a].elements[x])})
        pair_index.append(per_obj)
    actions = []
    for h in K.morphisms:
        a, b = K.dom[h], K.cod[h]
        row = []
        for t in elems[b]:
            maps = []
            for x in K.objects:
                vals = []
                for (u_idx, fe) in prods[a].elements[x]:
                    u = K.hom(x, a)[u_idx]
                    v = K.compose(h, u)
                    enc = pair_index[b][x][(hom_index[x][b][v], fe)]
                    vals.append(t.maps[x][enc])
                maps.append(tuple(vals))
            row.append(key_index[a][tuple(maps)])
        actions.append(tuple(row))
    obj = make_presheaf(K, tuple(len(ts) for ts in elems), actions)
    return PresheafExponential(
        base=F, target=G, obj=obj,
        transforms=tuple(elems), pair_products=tuple(prods),
    )


def exponential_transpose(exp: PresheafExponential, H: Presheaf, s: NatTrans) -> NatTrans:
    """The mate H -> [F,G] of s: H x F -> G over the canonical product."""
    K = exp.base.cat
    prod_hf = presheaf_product(H, exp.base)
    enc_hf = [
        {e: i for i, e in enumerate(prod_hf.elements[x])} for x in K.objects
    ]
    key_index = [
        {t.maps: i for i, t in enumerate(ts)} for ts in exp.transforms
    ]
    maps = []
    for a in K.objects:
        vals = []
        for he in range(H.sizes[a]):
            tmaps = []
            for x in K.objects:
                row = []
                for (u_idx, fe) in exp.pair_products[a].elements[x]:
                    u = K.hom(x, a)[u_idx]
                    row.append(s.maps[x][enc_hf[x][(H.actions[u][he], fe)]])
                tmaps.append(tuple(row))
            vals.append(key_index[a][tuple(tmaps)])
        maps.append(tuple(vals))
    return NatTrans(H, exp.obj, tuple(maps))


def check_presheaf_exponential_ump(exp: PresheafExponential, H: Presheaf) -> bool:
    """Transposition is a bijection hom(H x F, G) = hom(H, [F,G])."""
    prod_hf = presheaf_product(H, exp.base)
    direct = all_nat_trans(prod_hf.obj, exp.target)
    mates = {exponential_transpose(exp, H, s).maps for s in direct}
    if len(mates) != len(direct):
        return False
    return mates == {t.maps for t in all_nat_trans(H, exp.obj)}


def sieves_on(K: FiniteCategory, a: int) -> list[tuple[int, ...]]:
    """All precomposition-closed sets of morphisms into ``a``, sorted."""
    into = K.morphisms_into(a)
    out = []
    for bits in range(1 << len(into)):
        subset = frozenset(into[i] for i in range(len(into)) if bits >> i & 1)
        closed = all(
            K.compose(u, h) in subset
            for u in subset
            for h in K.morphisms_into(K.dom[u])
        )
        if closed:
            out.append(tuple(sorted(subset)))
    out.sort()
    return out


@dataclass(frozen=True)
class OmegaResult:
    obj: Presheaf
    truth: NatTrans
    sieves: tuple[tuple[tuple[int, ...], ...], ...]


def omega(K: FiniteCategory) -> OmegaResult:
    """The presheaf of sieves with the maximal-sieve truth arrow.

    The finite fragment makes every subfunctor of a representable
    available, so no smallness filtering is applied; an infinite base
    would need it back.
    """
    sieves = [sieves_on(K, a) for a in K.objects]
    index = [{s: i for i, s in enumerate(sv)} for sv in sieves]
    actions = []
    for h in K.morphisms:
        a, b = K.dom[h], K.cod[h]
        row = []
        for s in sieves[b]:
            sset = set(s)
            preimage = tuple(sorted(
                u for u in K.morphisms_into(a) if K.compose(h, u) in sset
            ))
            row.append(index[a][preimage])
        actions.append(tuple(row))
    obj = make_presheaf(K, tuple(len(s) for s in sieves), actions)
    top = terminal_presheaf(K)
    truth = NatTrans(top, obj, tuple(
        (index[a][tuple(sorted(K.morphisms_into(a)))],) for a in K.objects
    ))
    return OmegaResult(obj=obj, truth=truth, sieves=tuple(tuple(s) for s in sieves))


def classify_subobject(om: OmegaResult, m: NatTrans) -> NatTrans:
    """Characteristic map of a pointwise-injective transformation."""
    if not is_pointwise_injective(m):
        raise NotMonoPointwise(m)
    K = m.cod.cat
    G = m.cod
    images = [set(m.maps[x]) for x in K.objects]
    index = [{s: i for i, s in enumerate(om.sieves[a])} for a in K.objects]
    maps = []
    for a in K.objects:
        vals = []
        for u in range(G.sizes[a]):
            sieve = tuple(sorted(
                f for f in K.morphisms_into(a)
                if G.actions[f][u] in images[K.dom[f]]
            ))
            vals.append(index[a][sieve])
        maps.append(tuple(vals))
    return NatTrans(G, om.obj, tuple(maps))


def is_classifying_square(om: OmegaResult, m: NatTrans, chi: NatTrans) -> bool:
    """Does chi pull the truth arrow back to exactly the image of m?"""
    K = m.cod.cat
    top = [om.truth.maps[a][0] for a in K.objects]
    for a in K.objects:
        pulled = {u for u in range(m.cod.sizes[a]) if chi.maps[a][u] == top[a]}
        if pulled != set(m.maps[a]):
            return False
    return True


@dataclass(frozen=True)
class Subfunctor:
    base: Presheaf
    members: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        K = self.base.cat
        for x in K.objects:
            if any(not 0 <= v < self.base.sizes[x] for v in self.members[x]):
                raise CategoryError(f"subfunctor member out of range at {x}")
        for h in K.morphisms:
            a, b = K.dom[h], K.cod[h]
            keep = set(self.members[a])
            for v in self.members[b]:
                if self.base.actions[h][v] not in keep:
                    raise CategoryError(f"subfunctor not closed under morphism {h}")

    def presheaf(self) -> Presheaf:
        K = self.base.cat
        pos = [
            {v: i for i, v in enumerate(mem)} for mem in self.members
        ]
        actions = []
        for h in K.morphisms:
            a, b = K.dom[h], K.cod[h]
            actions.append(tuple(
                pos[a][self.base.actions[h][v]] for v in self.members[b]
            ))
        return make_presheaf(K, tuple(len(m) for m in self.members), actions)

    def inclusion(self) -> NatTrans:
        return NatTrans(self.presheaf(), self.base, self.members)


def subfunctors(F: Presheaf) -> list[Subfunctor]:
    """All action-closed pointwise subsets, in bitmask-lex order."""
    K = F.cat
    non_id = [h for h in K.morphisms if not K.is_identity(h)]
    out = []
    per_obj = [
        [tuple(i for i in range(F.sizes[x]) if bits >> i & 1)
         for bits in range(1 << F.sizes[x])]
        for x in K.objects
    ]
    for combo in itertools.product(*per_obj):
        keep = [set(c) for c in combo]
        if all(
            F.actions[h][v] in keep[K.dom[h]]
            for h in non_id
            for v in combo[K.cod[h]]
        ):
            out.append(Subfunctor(F, tuple(combo)))
    return out


def regularity_suite(alpha: NatTrans) -> dict:
    """Regular-mono / regular-epi verdicts with pointwise constructions.

    A pointwise-injective map is tested as the equalizer of its cokernel
    pair; a pointwise-surjective one as the coequalizer of its kernel
    pair.  Non-monos/non-epis get a None verdict for that half.
    """
    K = alpha.dom.cat
    F, G = alpha.dom, alpha.cod
    result = {"mono_regular": None, "epi_regular": None}
    if is_pointwise_injective(alpha):
        pushout = presheaf_pushout(alpha, alpha)
        q1, q2 = pushout.injections[1], pushout.injections[2]
        ok = True
        for x in K.objects:
            eq = {u for u in range(G.sizes[x]) if q1.maps[x][u] == q2.maps[x][u]}
            if eq != set(alpha.maps[x]):
                ok = False
                break
        result["mono_regular"] = ok
    if is_pointwise_surjective(alpha):
        pb = presheaf_pullback(alpha, alpha)
        coeq = presheaf_coequalizer(pb.projections[0], pb.projections[1])
        q = coeq.injections[1]
        # alpha is the coequalizer iff the comparison Q -> G is bijective
        ok = True
        for x in K.objects:
            comparison = {}
            for v in range(F.sizes[x]):
                cls, val = q.maps[x][v], alpha.maps[x][v]
                if comparison.setdefault(cls, val) != val:
                    ok = False
            vals = list(comparison.values())
            if (len(comparison) != coeq.obj.sizes[x]
                    or len(set(vals)) != len(vals)
                    or set(vals) != set(range(G.sizes[x]))):
                ok = False
            if not ok:
                break
        result["epi_regular"] = ok
    return result


def diagonal_subfunctor(F: Presheaf) -> Subfunctor:
    prod = presheaf_product(F, F)
    members = []
    for x in F.cat.objects:
        enc = {e: i for i, e in enumerate(prod.elements[x])}
        members.append(tuple(sorted(enc[(v, v)] for v in range(F.sizes[x]))))
    return Subfunctor(prod.obj, tuple(members))


def relation_subfunctor(F: Presheaf, pairs_per_object) -> Subfunctor:
    """Build a relation on F x F from explicit per-object element pairs."""
    prod = presheaf_product(F, F)
    members = []
    for x in F.cat.objects:
        enc = {e: i for i, e in enumerate(prod.elements[x])}
        members.append(tuple(sorted(enc[p] for p in pairs_per_object[x])))
    return Subfunctor(prod.obj, tuple(members))


def effective_equivalence_check(F: Presheaf, R: Subfunctor) -> bool:
    """Quotient by R, take the kernel pair, and certify it equals R.

    R must live on the canonical product F x F and be a pointwise
    equivalence relation; otherwise NotEquivalenceRelation names the
    first offending object and pair.
    """
    K = F.cat
    prod = presheaf_product(F, F)
    if R.base != prod.obj:
        raise CategoryError("relation must live on the canonical product")
    rel = []
    for x in K.objects:
        pairs = {prod.elements[x][v] for v in R.members[x]}
        for v in range(F.sizes[x]):
            if (v, v) not in pairs:
                raise NotEquivalenceRelation((x, (v, v), "reflexivity"))
        for (u, v) in pairs:
            if (v, u) not in pairs:
                raise NotEquivalenceRelation((x, (u, v), "symmetry"))
        for (u, v) in pairs:
            for (v2, w) in pairs:
                if v2 == v and (u, w) not in pairs:
                    raise NotEquivalenceRelation((x, (u, w), "transitivity"))
        rel.append(pairs)
    inc = R.inclusion()
    p1 = compose_nat_trans(prod.projections[0], inc)
    p2 = compose_nat_trans(prod.projections[1], inc)
    coeq = presheaf_coequalizer(p1, p2)
    q = coeq.injections[1]
    for x in K.objects:
        kernel = {
            (u, v)
            for u in range(F.sizes[x])
            for v in range(F.sizes[x])
            if q.maps[x][u] == q.maps[x][v]
        }
        if kernel != rel[x]:
            return False
    return True


@dataclass(frozen=True)
class ElementsCategory:
    presheaf: Presheaf
    category: FiniteCategory
    objects: tuple[tuple[int, int], ...]
    morphism_to_base: tuple[int, ...]

    def projection(self) -> FunctorData:
        """Faithful projection into the dual of the base category."""
        dual = dual_category(self.presheaf.cat)
        return FunctorData(
            source=self.category,
            target=dual,
            object_map=tuple(x for x, _ in self.objects),
            morphism_map=self.morphism_to_base,
        )


def elements_category(F: Presheaf) -> ElementsCategory:
    """Category of elements: pairs (object, element) with action-tracking arrows.

    An arrow (X, x) -> (Y, y) is a base morphism f: Y -> X whose action
    sends x to y, so each element's representable maps out of it and the
    pair (a, identity) is initial in the elements of y(a).
    """
    K = F.cat
    objs = [(x, v) for x in K.objects for v in range(F.sizes[x])]
    obj_index = {o: i for i, o in enumerate(objs)}
    arrows = []
    arrow_base = []
    for i, (x, v) in enumerate(objs):
        for f in K.morphisms_into(x):
            if K.is_identity(f):
                continue
            y = K.dom[f]
            target = obj_index[(y, F.actions[f][v])]
            arrows.append((i, target))
            arrow_base.append(f)
    n = len(objs)

    def compose_fn(g, f):
        base = K.compose(arrow_base[f - n], arrow_base[g - n])
        i = arrows[f - n][0]
        j = arrows[g - n][1]
        if i == j and K.is_identity(base):
            return i
        return n + next(
            k for k, (a, hb) in enumerate(zip(arrows, arrow_base))
            if a == (i, j) and hb == base
        )

    cat = build_category(n, arrows, compose_fn=compose_fn)
    morphism_to_base = tuple(
        [K.identity[x] for x, _ in objs] + arrow_base
    )
    return ElementsCategory(
        presheaf=F, category=cat,
        objects=tuple(objs), morphism_to_base=morphism_to_base,
    )


def weakly_initial_set(F: Presheaf) -> list[tuple[int, int]]:
    """A greedily minimized set of elements reaching every element."""
    el = elements_category(F)
    cat = el.category
    n = cat.num_objects
    keep = list(range(n))
    for i in list(keep):
        rest = [j for j in keep if j != i]
        if all(any(cat.hom(w, e) for w in rest) for e in range(n)):
            keep = rest
    return [el.objects[i] for i in keep]


def colimit_of_elements(F: Presheaf):
    """Rebuild F as the colimit of representables over its elements.

    Returns (colimit presheaf, canonical map to F, iso verdict).
    """
    K = F.cat
    el = elements_category(F)
    shape = dual_category(el.category)
    nodes = [yoneda(K, x) for x, _ in el.objects]
    arrow_labels = {}
    for m in shape.morphisms:
        if shape.is_identity(m):
            continue
        arrow_labels[m] = yoneda_map(K, el.morphism_to_base[m])
    diag = presheaf_diagram(shape, nodes, arrow_labels)
    colim = presheaf_colimit(diag)
    maps = []
    for z in K.objects:
        vals = [None] * colim.obj.sizes[z]
        for d, (x, v) in enumerate(el.objects):
            for u_idx, u in enumerate(K.hom(z, x)):
                vals[colim.injections[d].maps[z][u_idx]] = F.actions[u][v]
        maps.append(tuple(vals))
    to_f = NatTrans(colim.obj, F, tuple(maps))
    iso = is_pointwise_injective(to_f) and is_pointwise_surjective(to_f)
    return colim.obj, to_f, iso


def _set_partitions(n: int):
    """Canonical (restricted-growth) enumeration of partitions of range(n)."""
    if n == 0:
        yield ()
        return

    def rec(i, blocks):
        if i == n:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def congruences(F: Presheaf) -> list[tuple[tuple[tuple[int, ...], ...], ...]]:
    """All families of pointwise partitions compatible with the actions."""
    K = F.cat
    non_id = [h for h in K.morphisms if not K.is_identity(h)]
    per_obj = [list(_set_partitions(F.sizes[x])) for x in K.objects]
    out = []
    for combo in itertools.product(*per_obj):
        block_of = []
        for x in K.objects:
            lookup = {}
            for bi, block in enumerate(combo[x]):
                for v in block:
                    lookup[v] = bi
            block_of.append(lookup)
        ok = True
        for h in non_id:
            a, b = K.dom[h], K.cod[h]
            for block in combo[b]:
                targets = {block_of[a][F.actions[h][v]] for v in block}
                if len(targets) > 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(combo)
    return out


def quotient_by_congruence(F: Presheaf, cong):
    """The quotient presheaf of a compatible partition family with its map."""
    K = F.cat
    block_of = []
    for x in K.objects:
        lookup = {}
        for bi, block in enumerate(cong[x]):
            for v in block:
                lookup[v] = bi
        block_of.append(lookup)
    actions = []
    for h in K.morphisms:
        a, b = K.dom[h], K.cod[h]
        actions.append(tuple(
            block_of[a][F.actions[h][block[0]]] for block in cong[b]
        ))
    Q = make_presheaf(K, tuple(len(c) for c in cong), actions)
    q = NatTrans(F, Q, tuple(
        tuple(block_of[x][v] for v in range(F.sizes[x])) for x in K.objects
    ))
    return Q, q


def _pushout_congruence_key(F: Presheaf, sub: Subfunctor):
    """Kernel congruence of the self-pushout quotient of F + F."""
    K = F.cat
    coprod = presheaf_coproduct(F, F)
    i1, i2 = coprod.injections
    key = []
    for x in K.objects:
        items = list(range(coprod.obj.sizes[x]))
        uf = _UnionFind(items)
        for s in sub.members[x]:
            uf.union(i1.maps[x][s], i2.maps[x][s])
        blocks = {}
        for v in items:
            blocks.setdefault(uf.find(v), []).append(v)
        key.append(tuple(sorted(tuple(b) for b in blocks.values())))
    return tuple(key)


@dataclass(frozen=True)
class CensusResult:
    subobject_count: int
    quotient_count: int
    pushout_injective: bool


def subobject_quotient_census(F: Presheaf) -> CensusResult:
    """Count subfunctors and quotient congruences; certify the pushout split.

    Distinct subfunctors must induce distinct self-pushout quotients of
    F + F, compared as kernel congruences (two quotients agree as
    quotient objects exactly when their congruences coincide).
    """
    subs = subfunctors(F)
    quots = congruences(F)
    keys = [_pushout_congruence_key(F, s) for s in subs]
    injective = len(set(keys)) == len(keys)
    return CensusResult(
        subobject_count=len(subs),
        quotient_count=len(quots),
        pushout_injective=injective,
    )
