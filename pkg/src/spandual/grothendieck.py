"""Straightening and unstraightening between diagrams of categories and
(co)cartesian fibrations, the two-step orthocartesian version, and finite-set
presheaves with left Kan extension."""

from __future__ import annotations

from .errors import (
    IncoherentDiagram,
    InvalidTransformation,
    NotCocartesian,
    NotOrtho,
)
from .fincat import (
    FinCat,
    FinFunctor,
    NatTrans,
    _split_pair,
    compose_functors,
    identity_functor,
    identity_nat,
    opposite,
    pair_obj,
    product,
    vertical_compose,
    whisker_left,
    whisker_right,
)
from .fibrations import FibredFunctor, classify, edge_types


class CatDiagram:
    """A normalized pseudofunctor from a finite index category into finite
    categories: object/arrow assignments plus compositor isomorphisms
    D(g∘f) ⇒ D(g)∘D(f).  Identity arrows carry identity functors and
    compositors involving an identity are identities."""

    def __init__(self, index: FinCat, values, arrows, compositors=None):
        self.index = index
        self.values = dict(values)
        self.arrows = dict(arrows)
        if compositors is None:
            compositors = {}
        self.compositors = dict(compositors)
        for (g, f), gf in index.composition.items():
            if (g, f) not in self.compositors:
                self.compositors[(g, f)] = identity_nat(self.arrows[gf])

    def value(self, a: str) -> FinCat:
        return self.values[a]

    def arrow(self, f: str) -> FinFunctor:
        return self.arrows[f]

    def compositor(self, g: str, f: str) -> NatTrans:
        return self.compositors[(g, f)]

    def validate(self) -> None:
        index = self.index
        for a in index.objects:
            self.values[a].validate()
        for f, (a, b) in index.morphisms.items():
            functor = self.arrows[f]
            if functor.source != self.values[a] or functor.target != self.values[b]:
                raise IncoherentDiagram(f"arrow assignment of {f!r} has wrong endpoints")
            functor.validate()
        for a in index.objects:
            if self.arrows[index.identity[a]] != identity_functor(self.values[a]):
                raise IncoherentDiagram(f"identity of {a!r} not assigned the identity functor")
        for (g, f), gf in index.composition.items():
            kappa = self.compositors[(g, f)]
            if kappa.source != self.arrows[gf] or kappa.target != compose_functors(
                self.arrows[g], self.arrows[f]
            ):
                raise IncoherentDiagram(f"compositor for ({g!r},{f!r}) mis-typed")
            try:
                kappa.validate()
            except InvalidTransformation as exc:
                raise IncoherentDiagram(f"compositor for ({g!r},{f!r}): {exc}") from exc
            if not kappa.is_iso():
                raise IncoherentDiagram(f"compositor for ({g!r},{f!r}) not invertible")
            if index.is_identity(g) or index.is_identity(f):
                if any(
                    not kappa.source.target.is_identity(c) for c in kappa.components.values()
                ):
                    raise IncoherentDiagram(f"compositor with identity ({g!r},{f!r}) not trivial")
        for f in index.morphisms:
            for g in index.morphisms_from(index.target(f)):
                for h in index.morphisms_from(index.target(g)):
                    gf = index.compose(g, f)
                    hg = index.compose(h, g)
                    left = vertical_compose(
                        whisker_left(self.arrows[h], self.compositors[(g, f)]),
                        self.compositors[(h, gf)],
                    )
                    right = vertical_compose(
                        whisker_right(self.compositors[(h, g)], self.arrows[f]),
                        self.compositors[(hg, f)],
                    )
                    if left.components != right.components:
                        raise IncoherentDiagram(
                            f"compositor coherence fails on ({h!r},{g!r},{f!r})"
                        )

    def __eq__(self, other):
        if not isinstance(other, CatDiagram):
            return NotImplemented
        return (
            self.index == other.index
            and self.values == other.values
            and self.arrows == other.arrows
            and {k: v.components for k, v in self.compositors.items()}
            == {k: v.components for k, v in other.compositors.items()}
        )


def strict_diagram(index: FinCat, values, arrows) -> CatDiagram:
    """Build a diagram with identity compositors, checking strict functoriality."""
    diagram = CatDiagram(index, values, arrows)
    for (g, f), gf in index.composition.items():
        if compose_functors(diagram.arrows[g], diagram.arrows[f]) != diagram.arrows[gf]:
            raise IncoherentDiagram(f"assignments not strictly functorial on ({g!r},{f!r})")
    return diagram


def constant_diagram(index: FinCat, value: FinCat) -> CatDiagram:
    ident = identity_functor(value)
    return strict_diagram(
        index, {a: value for a in index.objects}, {f: ident for f in index.morphisms}
    )


def product_diagram(base_a: FinCat, base_b: FinCat, values, pushes, pulls) -> CatDiagram:
    """Assemble a strict diagram over A × B^op from separate transports.

    values: (a, b) -> category; pushes: (f, b) -> functor for non-identity
    f in A; pulls: (g, a) -> functor D(a, tgt g) -> D(a, src g) for
    non-identity g in B.  Mixed arrows are pull-then-push; strictness
    (including interchange on the nose) is verified."""
    base_bop = opposite(base_b)
    index, _, _ = product(base_a, base_bop)
    vals = {pair_obj(a, b): values[(a, b)] for a in base_a.objects for b in base_b.objects}

    def push(f, b):
        if base_a.is_identity(f):
            return identity_functor(values[(base_a.source(f), b)])
        return pushes[(f, b)]

    def pull(g, a):
        if base_b.is_identity(g):
            return identity_functor(values[(a, base_b.source(g))])
        return pulls[(g, a)]

    arrows = {}
    for m in index.morphisms:
        f, g = _split_pair(m)
        a = base_a.source(f)
        b_bot = base_b.source(g)
        arrows[m] = compose_functors(push(f, b_bot), pull(g, a))
    return strict_diagram(index, vals, arrows)


class UnstraightenResult:
    """Total category of a Grothendieck construction with its projection and
    the structural decomposition of the generated identifiers."""

    def __init__(self, total: FinCat, proj: FinFunctor, obj_data, mor_data):
        self.total = total
        self.proj = proj
        self.obj_data = obj_data  # total object -> (base object, fibre object)
        self.mor_data = mor_data  # total morphism -> (base arrow, anchor fibre object, fibre morphism)


def _gr_obj(a: str, x: str) -> str:
    return f"({a};{x})"


def _gr_mor(f: str, x: str, phi: str) -> str:
    return f"({f};{x};{phi})"


def unstraighten_cc(diagram: CatDiagram) -> UnstraightenResult:
    """Covariant Grothendieck construction: a cocartesian fibration over the
    index.  A morphism (a,x) → (a',x') over f is a fibre arrow D(f)(x) → x';
    the anchor of the identifier is the source fibre object x."""
    index = diagram.index
    objects = []
    obj_data = {}
    for a in index.objects:
        for x in diagram.values[a].objects:
            name = _gr_obj(a, x)
            objects.append(name)
            obj_data[name] = (a, x)
    morphisms = {}
    mor_data = {}
    for f, (a, a2) in index.morphisms.items():
        functor = diagram.arrows[f]
        fib2 = diagram.values[a2]
        for x in diagram.values[a].objects:
            fx = functor.object_map[x]
            for phi in fib2.morphisms_from(fx):
                name = _gr_mor(f, x, phi)
                morphisms[name] = (_gr_obj(a, x), _gr_obj(a2, fib2.target(phi)))
                mor_data[name] = (f, x, phi)
    identity = {
        name: _gr_mor(index.identity[a], x, diagram.values[a].identity[x])
        for name, (a, x) in obj_data.items()
    }
    composition = {}
    by_source: dict[str, list[str]] = {}
    for name, (src, _) in morphisms.items():
        by_source.setdefault(src, []).append(name)
    for n1, (_, tgt1) in morphisms.items():
        f, x, phi = mor_data[n1]
        for n2 in by_source.get(tgt1, ()):
            g, _, psi = mor_data[n2]
            gf = index.compose(g, f)
            fib = diagram.values[index.target(g)]
            chi = fib.compose_path(
                psi,
                diagram.arrows[g].morphism_map[phi],
                diagram.compositor(g, f).components[x],
            )
            composition[(n2, n1)] = _gr_mor(gf, x, chi)
    total = FinCat(objects, morphisms, identity, composition)
    proj = FinFunctor(
        total,
        index,
        {name: a for name, (a, _) in obj_data.items()},
        {name: f for name, (f, _, _) in mor_data.items()},
    )
    return UnstraightenResult(total, proj, obj_data, mor_data)


def unstraighten_ct(diagram: CatDiagram) -> UnstraightenResult:
    """Contravariant Grothendieck construction: a cartesian fibration over the
    opposite of the index.  A morphism (a,x) → (a',x') over the base arrow f
    is a fibre arrow x → D(f)(x'); the anchor of the identifier is the target
    fibre object x'."""
    index = diagram.index
    base = opposite(index)
    objects = []
    obj_data = {}
    for a in base.objects:
        for x in diagram.values[a].objects:
            name = _gr_obj(a, x)
            objects.append(name)
            obj_data[name] = (a, x)
    morphisms = {}
    mor_data = {}
    for f, (a, a2) in base.morphisms.items():
        functor = diagram.arrows[f]  # D(f): values[a2] -> values[a]
        fib = diagram.values[a]
        for x2 in diagram.values[a2].objects:
            fx2 = functor.object_map[x2]
            for phi in fib.morphisms_to(fx2):
                name = _gr_mor(f, x2, phi)
                morphisms[name] = (_gr_obj(a, fib.source(phi)), _gr_obj(a2, x2))
                mor_data[name] = (f, x2, phi)
    identity = {
        name: _gr_mor(base.identity[a], x, diagram.values[a].identity[x])
        for name, (a, x) in obj_data.items()
    }
    composition = {}
    by_source: dict[str, list[str]] = {}
    for name, (src, _) in morphisms.items():
        by_source.setdefault(src, []).append(name)
    for n1, (_, tgt1) in morphisms.items():
        f, x2, phi = mor_data[n1]  # phi: x -> D(f)(x2)
        a = base.morphisms[f][0]
        for n2 in by_source.get(tgt1, ()):
            g, x3, psi = mor_data[n2]  # psi: x2 -> D(g)(x3)
            h = base.compose(g, f)  # equals f∘g in the index
            fib = diagram.values[a]
            kappa = diagram.compositor(f, g)  # D(f∘g) ⇒ D(f)∘D(g)
            chi = fib.compose_path(
                fib.inverse(kappa.components[x3]),
                diagram.arrows[f].morphism_map[psi],
                phi,
            )
            composition[(n2, n1)] = _gr_mor(h, x3, chi)
    total = FinCat(objects, morphisms, identity, composition)
    proj = FinFunctor(
        total,
        base,
        {name: a for name, (a, _) in obj_data.items()},
        {name: f for name, (f, _, _) in mor_data.items()},
    )
    return UnstraightenResult(total, proj, obj_data, mor_data)


def strict_fiber(p: FinFunctor, a: str) -> FinCat:
    objs = [x for x in p.source.objects if p.object_map[x] == a]
    keep = set(objs)
    ident = p.target.identity[a]
    morphisms = {
        f: st
        for f, st in p.source.morphisms.items()
        if st[0] in keep and st[1] in keep and p.morphism_map[f] == ident
    }
    composition = {
        (g, f): gf
        for (g, f), gf in p.source.composition.items()
        if g in morphisms and f in morphisms
    }
    return FinCat(objs, morphisms, {x: p.source.identity[x] for x in objs}, composition)


def straighten_cc(p: FinFunctor) -> CatDiagram:
    """Straighten a cocartesian fibration: fibres as values, transports along
    canonically chosen (least-identifier) cocartesian lifts, compositors from
    the uniqueness of cocartesian factorizations."""
    cat_x, index = p.source, p.target
    types = edge_types(p)
    values = {a: strict_fiber(p, a) for a in index.objects}

    lifts: dict[tuple[str, str], str] = {}
    for f in index.morphisms:
        a = index.source(f)
        for x in cat_x.objects:
            if p.object_map[x] != a:
                continue
            if index.is_identity(f):
                lifts[(f, x)] = cat_x.identity[x]
                continue
            candidates = sorted(
                ell
                for ell in cat_x.morphisms_from(x)
                if p.morphism_map[ell] == f and types[ell].cocartesian
            )
            if not candidates:
                raise NotCocartesian(
                    f"no strict cocartesian lift of {f!r} at {x!r}", witness=(f, x)
                )
            lifts[(f, x)] = candidates[0]

    def factor(f: str, x: str, edge: str) -> str:
        """The unique vertical ψ with ψ∘lift(f,x) = edge."""
        ell = lifts[(f, x)]
        vertical = index.identity[index.target(f)]
        matches = [
            psi
            for psi in cat_x.hom(cat_x.target(ell), cat_x.target(edge))
            if p.morphism_map[psi] == vertical and cat_x.compose(psi, ell) == edge
        ]
        if len(matches) != 1:
            raise NotCocartesian(
                f"cocartesian factorization not unique for {edge!r} over {f!r}",
                witness=(f, x),
            )
        return matches[0]

    arrows = {}
    for f, (a, a2) in index.morphisms.items():
        if index.is_identity(f):
            arrows[f] = identity_functor(values[a])
            continue
        obj_map = {x: cat_x.target(lifts[(f, x)]) for x in values[a].objects}
        mor_map = {}
        for phi, (x, x2) in values[a].morphisms.items():
            mor_map[phi] = factor(f, x, cat_x.compose(lifts[(f, x2)], phi))
        arrows[f] = FinFunctor(values[a], values[a2], obj_map, mor_map)

    compositors = {}
    for (g, f), gf in index.composition.items():
        if index.is_identity(g) or index.is_identity(f):
            continue
        a = index.source(f)
        components = {}
        for x in values[a].objects:
            composite = cat_x.compose(lifts[(g, arrows[f].object_map[x])], lifts[(f, x)])
            components[x] = factor(gf, x, composite)
        compositors[(g, f)] = NatTrans(
            arrows[gf], compose_functors(arrows[g], arrows[f]), components
        )
    diagram = CatDiagram(index, values, arrows, compositors)
    diagram.validate()
    return diagram


# -- orthofibrations -------------------------------------------------------


def _curried_over_b(diagram, base_a, base_bop, a):
    values = {b: diagram.values[pair_obj(a, b)] for b in base_bop.objects}
    arrows = {g: diagram.arrows[pair_obj(base_a.identity[a], g)] for g in base_bop.morphisms}
    compositors = {
        (g2, g1): diagram.compositor(
            pair_obj(base_a.identity[a], g2), pair_obj(base_a.identity[a], g1)
        )
        for (g2, g1) in base_bop.composition
    }
    return CatDiagram(base_bop, values, arrows, compositors)


def _curried_over_a(diagram, base_a, base_bop, b):
    values = {a: diagram.values[pair_obj(a, b)] for a in base_a.objects}
    arrows = {f: diagram.arrows[pair_obj(f, base_bop.identity[b])] for f in base_a.morphisms}
    compositors = {
        (f2, f1): diagram.compositor(
            pair_obj(f2, base_bop.identity[b]), pair_obj(f1, base_bop.identity[b])
        )
        for (f2, f1) in base_a.composition
    }
    return CatDiagram(base_a, values, arrows, compositors)


def _interchange_iso(diagram, base_a, base_bop, f, g) -> NatTrans:
    """The comparison D(f,id)∘D(id,g) ⇒ D(id,g)∘D(f,id) obtained from the two
    compositors over the mixed arrow (f,g); components live on D(a, src g)."""
    a, a2 = base_a.morphisms[f]
    b, b2 = base_bop.morphisms[g]
    first = diagram.compositor(pair_obj(f, base_bop.identity[b2]), pair_obj(base_a.identity[a], g))
    second = diagram.compositor(pair_obj(base_a.identity[a2], g), pair_obj(f, base_bop.identity[b]))
    return vertical_compose(second, first.inverse())


def unstraighten_ortho(
    diagram: CatDiagram, base_a: FinCat, base_b: FinCat, order: str = "b_inner"
) -> FibredFunctor:
    """Two-step orthocartesian Grothendieck construction of a diagram over
    A × B^op, producing a fibred functor over (A, B).

    order="b_inner": per a, contravariantly unstraighten over B, then
    covariantly over A; order="a_inner" applies the steps the other way.  The
    two results agree up to equivalence over the base."""
    base_bop = opposite(base_b)
    prod_index, _, _ = product(base_a, base_bop)
    if diagram.index != prod_index:
        raise IncoherentDiagram("diagram index is not A × B^op for the given bases")

    if order == "b_inner":
        inner = {
            a: unstraighten_ct(_curried_over_b(diagram, base_a, base_bop, a))
            for a in base_a.objects
        }
        values = {a: inner[a].total for a in base_a.objects}
        arrows = {}
        for f, (a, a2) in base_a.morphisms.items():
            if base_a.is_identity(f):
                arrows[f] = identity_functor(values[a])
                continue
            obj_map = {}
            for name, (b, x) in inner[a].obj_data.items():
                obj_map[name] = _gr_obj(
                    b, diagram.arrows[pair_obj(f, base_bop.identity[b])].object_map[x]
                )
            mor_map = {}
            for name, (g, x2, phi) in inner[a].mor_data.items():
                # g: b -> b2 in B; phi: x -> D(id_a, g)(x2) with x over (a,b)
                b, b2 = base_b.morphisms[g]
                push_b = diagram.arrows[pair_obj(f, base_bop.identity[b])]
                iota = _interchange_iso(diagram, base_a, base_bop, f, g)
                phi2 = diagram.values[pair_obj(a2, b)].compose(
                    iota.components[x2], push_b.morphism_map[phi]
                )
                mor_map[name] = _gr_mor(
                    g,
                    diagram.arrows[pair_obj(f, base_bop.identity[b2])].object_map[x2],
                    phi2,
                )
            arrows[f] = FinFunctor(values[a], values[a2], obj_map, mor_map)
        compositors = {}
        for (f2, f1), f21 in base_a.composition.items():
            if base_a.is_identity(f2) or base_a.is_identity(f1):
                continue
            a1 = base_a.source(f1)
            a3 = base_a.target(f2)
            components = {}
            for name, (b, x) in inner[a1].obj_data.items():
                kappa = diagram.compositor(
                    pair_obj(f2, base_bop.identity[b]), pair_obj(f1, base_bop.identity[b])
                )
                target_obj = arrows[f2].object_map[arrows[f1].object_map[name]]
                _, tx = inner[a3].obj_data[target_obj]
                components[name] = _gr_mor(base_b.identity[b], tx, kappa.components[x])
            compositors[(f2, f1)] = NatTrans(
                arrows[f21], compose_functors(arrows[f2], arrows[f1]), components
            )
        outer = CatDiagram(base_a, values, arrows, compositors)
        outer.validate()
        result = unstraighten_cc(outer)
        object_map = {}
        for name, (a, inner_obj) in result.obj_data.items():
            b, _ = inner[a].obj_data[inner_obj]
            object_map[name] = pair_obj(a, b)
        morphism_map = {}
        for name, (f, _, inner_mor) in result.mor_data.items():
            a2 = base_a.target(f)
            g, _, _ = inner[a2].mor_data[inner_mor]
            morphism_map[name] = pair_obj(f, g)
        return FibredFunctor.from_components(
            result.total, base_a, base_b, object_map, morphism_map
        )

    if order == "a_inner":
        inner = {
            b: unstraighten_cc(_curried_over_a(diagram, base_a, base_bop, b))
            for b in base_bop.objects
        }
        values = {b: inner[b].total for b in base_bop.objects}
        arrows = {}
        for g, (b, b2) in base_bop.morphisms.items():
            if base_bop.is_identity(g):
                arrows[g] = identity_functor(values[b])
                continue
            obj_map = {}
            for name, (a, x) in inner[b].obj_data.items():
                obj_map[name] = _gr_obj(
                    a, diagram.arrows[pair_obj(base_a.identity[a], g)].object_map[x]
                )
            mor_map = {}
            for name, (f, x_src, phi) in inner[b].mor_data.items():
                # f: a -> a2 in A; phi: D(f,id_b)(x_src) -> x_tgt in D(a2,b)
                a, a2 = base_a.morphisms[f]
                pull_g = diagram.arrows[pair_obj(base_a.identity[a2], g)]
                iota = _interchange_iso(diagram, base_a, base_bop, f, g)
                phi2 = diagram.values[pair_obj(a2, b2)].compose(
                    pull_g.morphism_map[phi], iota.components[x_src]
                )
                mor_map[name] = _gr_mor(
                    f,
                    diagram.arrows[pair_obj(base_a.identity[a], g)].object_map[x_src],
                    phi2,
                )
            arrows[g] = FinFunctor(values[b], values[b2], obj_map, mor_map)
        compositors = {}
        for (g2, g1), g21 in base_bop.composition.items():
            if base_bop.is_identity(g2) or base_bop.is_identity(g1):
                continue
            b1 = base_bop.source(g1)
            b3 = base_bop.target(g2)
            components = {}
            for name, (a, x) in inner[b1].obj_data.items():
                kappa = diagram.compositor(
                    pair_obj(base_a.identity[a], g2), pair_obj(base_a.identity[a], g1)
                )
                target_obj = arrows[g2].object_map[arrows[g1].object_map[name]]
                _, tx = inner[b3].obj_data[target_obj]
                components[name] = _gr_mor(base_a.identity[a], tx, kappa.components[x])
            compositors[(g2, g1)] = NatTrans(
                arrows[g21], compose_functors(arrows[g2], arrows[g1]), components
            )
        outer = CatDiagram(base_bop, values, arrows, compositors)
        outer.validate()
        result = unstraighten_ct(outer)
        object_map = {}
        for name, (b, inner_obj) in result.obj_data.items():
            a, _ = inner[b].obj_data[inner_obj]
            object_map[name] = pair_obj(a, b)
        morphism_map = {}
        for name, (g, _, inner_mor) in result.mor_data.items():
            b = result.proj.target.morphisms[g][0]
            f, _, _ = inner[b].mor_data[inner_mor]
            morphism_map[name] = pair_obj(f, g)
        return FibredFunctor.from_components(
            result.total, base_a, base_b, object_map, morphism_map
        )

    raise ValueError(f"unknown order {order!r}")


def straighten_ortho(p: FibredFunctor) -> CatDiagram:
    """Straighten an orthofibration over A×B to a diagram over A×B^op.

    Transports: covariant along chosen cocartesian lifts in the A direction,
    contravariant along chosen cartesian lifts in the B direction; mixed
    arrows are pull-then-push.  Compositors are pasted from three comparison
    families (push splitting, pull splitting, and the interchange, whose
    components are interpolating edges, invertible precisely because p is an
    orthofibration)."""
    report = classify(p)
    if not report.ortho:
        raise NotOrtho(f"not an orthofibration: witnesses {report.witnesses}")
    cat_x = p.total
    base_a, base_b = p.base_a, p.base_b
    base_bop = opposite(base_b)
    index, _, _ = product(base_a, base_bop)
    prod = p.product
    types = p.edge_types()

    values = {
        pair_obj(a, b): p.fiber(a, b) for a in base_a.objects for b in base_b.objects
    }

    cocart_lifts: dict[tuple[str, str], str] = {}
    for f in base_a.morphisms:
        for b in base_b.objects:
            pr_arrow = pair_obj(f, base_b.identity[b])
            for x in cat_x.objects:
                if p.proj.object_map[x] != pair_obj(base_a.source(f), b):
                    continue
                if base_a.is_identity(f):
                    cocart_lifts[(pr_arrow, x)] = cat_x.identity[x]
                    continue
                candidates = sorted(
                    ell
                    for ell in cat_x.morphisms_from(x)
                    if p.proj.morphism_map[ell] == pr_arrow and types[ell].cocartesian
                )
                if not candidates:
                    raise NotOrtho(f"missing cocartesian lift of {pr_arrow!r} at {x!r}")
                cocart_lifts[(pr_arrow, x)] = candidates[0]

    cart_lifts: dict[tuple[str, str], str] = {}
    for g in base_b.morphisms:
        for a in base_a.objects:
            pr_arrow = pair_obj(base_a.identity[a], g)
            for x in cat_x.objects:
                if p.proj.object_map[x] != pair_obj(a, base_b.target(g)):
                    continue
                if base_b.is_identity(g):
                    cart_lifts[(pr_arrow, x)] = cat_x.identity[x]
                    continue
                candidates = sorted(
                    c
                    for c in cat_x.morphisms_to(x)
                    if p.proj.morphism_map[c] == pr_arrow and types[c].cartesian
                )
                if not candidates:
                    raise NotOrtho(f"missing cartesian lift of {pr_arrow!r} at {x!r}")
                cart_lifts[(pr_arrow, x)] = candidates[0]

    def factor_cocart(pr_arrow: str, x: str, edge: str, over: str) -> str:
        """Unique ψ over `over` with ψ∘lift(pr_arrow, x) = edge."""
        ell = cocart_lifts[(pr_arrow, x)]
        matches = [
            psi
            for psi in cat_x.hom(cat_x.target(ell), cat_x.target(edge))
            if p.proj.morphism_map[psi] == over and cat_x.compose(psi, ell) == edge
        ]
        if len(matches) != 1:
            raise NotOrtho(f"cocartesian factorization not unique over {pr_arrow!r}")
        return matches[0]

    def factor_cart(pr_arrow: str, x: str, edge: str, over: str) -> str:
        """Unique ψ over `over` with lift(pr_arrow, x)∘ψ = edge."""
        c = cart_lifts[(pr_arrow, x)]
        matches = [
            psi
            for psi in cat_x.hom(cat_x.source(edge), cat_x.source(c))
            if p.proj.morphism_map[psi] == over and cat_x.compose(c, psi) == edge
        ]
        if len(matches) != 1:
            raise NotOrtho(f"cartesian factorization not unique over {pr_arrow!r}")
        return matches[0]

    def push_functor(f: str, b: str) -> FinFunctor:
        a, a2 = base_a.morphisms[f]
        src = values[pair_obj(a, b)]
        tgt = values[pair_obj(a2, b)]
        pr_arrow = pair_obj(f, base_b.identity[b])
        vertical = prod.identity[pair_obj(a2, b)]
        obj_map = {x: cat_x.target(cocart_lifts[(pr_arrow, x)]) for x in src.objects}
        mor_map = {
            phi: factor_cocart(
                pr_arrow, x, cat_x.compose(cocart_lifts[(pr_arrow, x2)], phi), vertical
            )
            for phi, (x, x2) in src.morphisms.items()
        }
        return FinFunctor(src, tgt, obj_map, mor_map)

    def pull_functor(g: str, a: str) -> FinFunctor:
        """Transport along the B-opposite of g: b -> b2, from fibre (a,b2) to (a,b)."""
        b, b2 = base_b.morphisms[g]
        src = values[pair_obj(a, b2)]
        tgt = values[pair_obj(a, b)]
        pr_arrow = pair_obj(base_a.identity[a], g)
        vertical = prod.identity[pair_obj(a, b)]
        obj_map = {x: cat_x.source(cart_lifts[(pr_arrow, x)]) for x in src.objects}
        mor_map = {}
        for phi, (x, x2) in src.morphisms.items():
            edge = cat_x.compose(phi, cart_lifts[(pr_arrow, x)])
            mor_map[phi] = factor_cart(pr_arrow, x2, edge, vertical)
        return FinFunctor(src, tgt, obj_map, mor_map)

    pushes = {(f, b): push_functor(f, b) for f in base_a.morphisms for b in base_b.objects}
    pulls = {(g, a): pull_functor(g, a) for g in base_b.morphisms for a in base_a.objects}

    arrows = {}
    for m, (s, t) in index.morphisms.items():
        f, g = _split_pair(m)
        a = base_a.source(f)
        _, b_tgt = _split_pair(t)
        arrows[m] = compose_functors(pushes[(f, b_tgt)], pulls[(g, a)])

    def alpha(f2: str, f1: str, b: str) -> NatTrans:
        """D(f2∘f1, id_b) ⇒ D(f2, id_b)∘D(f1, id_b)."""
        f21 = base_a.compose(f2, f1)
        a = base_a.source(f1)
        a3 = base_a.target(f2)
        pr21 = pair_obj(f21, base_b.identity[b])
        pr1 = pair_obj(f1, base_b.identity[b])
        pr2 = pair_obj(f2, base_b.identity[b])
        vertical = prod.identity[pair_obj(a3, b)]
        components = {}
        for x in values[pair_obj(a, b)].objects:
            mid = cat_x.target(cocart_lifts[(pr1, x)])
            composite = cat_x.compose(cocart_lifts[(pr2, mid)], cocart_lifts[(pr1, x)])
            components[x] = factor_cocart(pr21, x, composite, vertical)
        return NatTrans(
            pushes[(f21, b)],
            compose_functors(pushes[(f2, b)], pushes[(f1, b)]),
            components,
        )

    def beta(g2: str, g1: str, a: str) -> NatTrans:
        """Pull-splitting for the B^op composite of g1 after g2 (g1∘g2 in B):
        D(id_a, (g1∘g2)-op) ⇒ D(id_a, g2-op)∘D(id_a, g1-op)."""
        g12 = base_b.compose(g1, g2)
        b_top = base_b.target(g1)
        b_bot = base_b.source(g2)
        pr12 = pair_obj(base_a.identity[a], g12)
        pr1 = pair_obj(base_a.identity[a], g1)
        pr2 = pair_obj(base_a.identity[a], g2)
        vertical = prod.identity[pair_obj(a, b_bot)]
        components = {}
        for x in values[pair_obj(a, b_top)].objects:
            mid = cat_x.source(cart_lifts[(pr1, x)])
            composite = cat_x.compose(cart_lifts[(pr1, x)], cart_lifts[(pr2, mid)])
            # composite is a cartesian lift of (id,g1∘g2) into x; compare the
            # chosen lift against it
            chosen = cart_lifts[(pr12, x)]
            matches = [
                psi
                for psi in cat_x.hom(cat_x.source(chosen), cat_x.source(composite))
                if p.proj.morphism_map[psi] == vertical
                and cat_x.compose(composite, psi) == chosen
            ]
            if len(matches) != 1:
                raise NotOrtho("cartesian comparison not unique")
            components[x] = matches[0]
        return NatTrans(
            pulls[(g12, a)],
            compose_functors(pulls[(g2, a)], pulls[(g1, a)]),
            components,
        )

    def xi(f: str, g: str) -> NatTrans:
        """Interchange D(f,id)∘D(id,g-op) ⇒ D(id,g-op)∘D(f,id); the components
        are interpolating edges and must be invertible."""
        a, a2 = base_a.morphisms[f]
        b_bot, b_top = base_b.morphisms[g]
        pr_f_top = pair_obj(f, base_b.identity[b_top])
        pr_f_bot = pair_obj(f, base_b.identity[b_bot])
        pr_g_a = pair_obj(base_a.identity[a], g)
        pr_g_a2 = pair_obj(base_a.identity[a2], g)
        components = {}
        for x in values[pair_obj(a, b_top)].objects:
            gx = cat_x.source(cart_lifts[(pr_g_a, x)])
            fx = cat_x.target(cocart_lifts[(pr_f_top, x)])
            edge = cat_x.compose(cocart_lifts[(pr_f_top, x)], cart_lifts[(pr_g_a, x)])
            u = factor_cart(pr_g_a2, fx, edge, pair_obj(f, base_b.identity[b_bot]))
            comp = factor_cocart(pr_f_bot, gx, u, prod.identity[pair_obj(a2, b_bot)])
            if not cat_x.is_iso(comp):
                raise NotOrtho(f"interpolating comparison at {x!r} not invertible")
            components[x] = comp
        return NatTrans(
            compose_functors(pushes[(f, b_bot)], pulls[(g, a)]),
            compose_functors(pulls[(g, a2)], pushes[(f, b_top)]),
            components,
        )

    compositors = {}
    for (m2, m1), m21 in index.composition.items():
        if index.is_identity(m2) or index.is_identity(m1):
            continue
        f2, g2 = _split_pair(m2)
        f1, g1 = _split_pair(m1)
        a1 = base_a.source(f1)
        _, b3 = _split_pair(index.morphisms[m2][1])
        tau1 = whisker_left(pushes[(base_a.compose(f2, f1), b3)], beta(g2, g1, a1))
        tau2 = whisker_right(
            alpha(f2, f1, b3), compose_functors(pulls[(g2, a1)], pulls[(g1, a1)])
        )
        tau3 = whisker_left(
            pushes[(f2, b3)], whisker_right(xi(f1, g2), pulls[(g1, a1)])
        )
        kappa = vertical_compose(tau3, vertical_compose(tau2, tau1))
        compositors[(m2, m1)] = NatTrans(
            arrows[m21], compose_functors(arrows[m2], arrows[m1]), kappa.components
        )
    diagram = CatDiagram(index, values, arrows, compositors)
    diagram.validate()
    return diagram
