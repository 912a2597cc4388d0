"""Finite categories as explicit composition tables, plus the exact-search toolkit.

Everything downstream (fibration classification, span categories, straightening,
mates) reduces to table scans over the structures defined here.  Values are
immutable after construction; all operations are pure.
"""

from __future__ import annotations

import itertools

from .errors import (
    BudgetExceeded,
    InvalidCategory,
    InvalidFunctor,
    InvalidTransformation,
)

DEFAULT_BUDGET = 10_000_000


class Budget:
    """Mutable counter guarding exhaustive searches.

    Every candidate considered in an enumeration charges one tick; crossing the
    limit raises BudgetExceeded so callers fail predictably instead of hanging.
    """

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(f"search budget of {self.limit} candidates exhausted")


def _ensure_budget(budget: Budget | None) -> Budget:
    return budget if budget is not None else Budget()


class FinCat:
    """A finite category: object list, morphism table, identities, composition.

    `morphisms` maps morphism id -> (source, target); `composition` maps
    (g, f) -> g∘f for every composable pair.  Identity composites may be
    omitted from the input table; they are filled in automatically.
    Equality is identifier-exact.
    """

    def __init__(self, objects, morphisms, identity, composition):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identity = dict(identity)
        comp = dict(composition)
        for f, (src, tgt) in self.morphisms.items():
            comp[(self.identity[tgt], f)] = f
            comp[(f, self.identity[src])] = f
        self.composition = comp
        self._hom: dict[tuple[str, str], tuple[str, ...]] = {}
        hom_lists: dict[tuple[str, str], list[str]] = {}
        from_lists: dict[str, list[str]] = {x: [] for x in self.objects}
        to_lists: dict[str, list[str]] = {x: [] for x in self.objects}
        for f, (src, tgt) in self.morphisms.items():
            hom_lists.setdefault((src, tgt), []).append(f)
            from_lists[src].append(f)
            to_lists[tgt].append(f)
        for key, fs in hom_lists.items():
            self._hom[key] = tuple(fs)
        self._from = {x: tuple(fs) for x, fs in from_lists.items()}
        self._to = {x: tuple(fs) for x, fs in to_lists.items()}
        self._inverses = self._compute_inverses()

    # -- basic accessors -------------------------------------------------

    def source(self, f: str) -> str:
        return self.morphisms[f][0]

    def target(self, f: str) -> str:
        return self.morphisms[f][1]

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return self._hom.get((x, y), ())

    def compose(self, g: str, f: str) -> str:
        """Return g∘f (f first, then g)."""
        return self.composition[(g, f)]

    def compose_path(self, *fs: str) -> str:
        """Compose fs right-to-left: compose_path(h, g, f) = h∘g∘f."""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            result = self.compose(g, result)
        return result

    def is_identity(self, f: str) -> bool:
        return self.identity[self.source(f)] == f

    def is_iso(self, f: str) -> bool:
        return f in self._inverses

    def inverse(self, f: str) -> str:
        return self._inverses[f]

    def isos(self) -> tuple[str, ...]:
        return tuple(f for f in self.morphisms if f in self._inverses)

    def is_thin(self) -> bool:
        return all(len(fs) <= 1 for fs in self._hom.values())

    def morphisms_from(self, x: str):
        return self._from[x]

    def morphisms_to(self, y: str):
        return self._to[y]

    def _compute_inverses(self) -> dict[str, str]:
        inv = {}
        for f, (src, tgt) in self.morphisms.items():
            for g in self.hom(tgt, src):
                if (
                    self.composition.get((g, f)) == self.identity[src]
                    and self.composition.get((f, g)) == self.identity[tgt]
                ):
                    inv[f] = g
                    break
        return inv

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        """Check the category axioms, raising InvalidCategory with a witness."""
        if len(set(self.objects)) != len(self.objects):
            raise InvalidCategory("duplicate object identifiers")
        for x in self.objects:
            i = self.identity.get(x)
            if i is None or i not in self.morphisms:
                raise InvalidCategory(f"missing identity for object {x!r}")
            if self.morphisms[i] != (x, x):
                raise InvalidCategory(f"identity of {x!r} is not an endomorphism")
        for f, (src, tgt) in self.morphisms.items():
            if src not in self.identity or tgt not in self.identity:
                raise InvalidCategory(f"morphism {f!r} has unknown endpoint")
        for (g, f), gf in self.composition.items():
            if self.target(f) != self.source(g):
                raise InvalidCategory(f"table entry for non-composable pair ({g!r},{f!r})")
            if gf not in self.morphisms:
                raise InvalidCategory(f"composite {gf!r} of ({g!r},{f!r}) not a morphism")
            if self.morphisms[gf] != (self.source(f), self.target(g)):
                raise InvalidCategory(f"composite {gf!r} of ({g!r},{f!r}) has wrong endpoints")
        for f in self.morphisms:
            for g in self.morphisms_from(self.target(f)):
                if (g, f) not in self.composition:
                    raise InvalidCategory(f"missing composite for ({g!r},{f!r})")
        for f, (_, tf) in self.morphisms.items():
            if self.compose(self.identity[tf], f) != f:
                raise InvalidCategory(f"left unit law fails at {f!r}")
            if self.compose(f, self.identity[self.source(f)]) != f:
                raise InvalidCategory(f"right unit law fails at {f!r}")
        for f in self.morphisms:
            for g in self.morphisms_from(self.target(f)):
                for h in self.morphisms_from(self.target(g)):
                    if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                        raise InvalidCategory(f"associativity fails on ({h!r},{g!r},{f!r})")

    def __eq__(self, other):
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and self.morphisms == other.morphisms
            and self.identity == other.identity
            and self.composition == other.composition
        )

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


class FinFunctor:
    """A functor given by explicit object and morphism tables."""

    def __init__(self, source: FinCat, target: FinCat, object_map, morphism_map):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.morphism_map = dict(morphism_map)

    def on_object(self, x: str) -> str:
        return self.object_map[x]

    def on_morphism(self, f: str) -> str:
        return self.morphism_map[f]

    def validate(self) -> None:
        for x in self.source.objects:
            if self.object_map.get(x) not in self.target.identity:
                raise InvalidFunctor(f"object {x!r} has no valid image")
        for f, (src, tgt) in self.source.morphisms.items():
            g = self.morphism_map.get(f)
            if g is None or g not in self.target.morphisms:
                raise InvalidFunctor(f"morphism {f!r} has no valid image")
            if self.target.morphisms[g] != (self.object_map[src], self.object_map[tgt]):
                raise InvalidFunctor(f"image of {f!r} has wrong endpoints")
        for x in self.source.objects:
            if self.morphism_map[self.source.identity[x]] != self.target.identity[self.object_map[x]]:
                raise InvalidFunctor(f"identity of {x!r} not preserved")
        for (g, f), gf in self.source.composition.items():
            if self.target.compose(self.morphism_map[g], self.morphism_map[f]) != self.morphism_map[gf]:
                raise InvalidFunctor(f"composition not preserved on ({g!r},{f!r})")

    def __eq__(self, other):
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.object_map == other.object_map
            and self.morphism_map == other.morphism_map
        )

    def __repr__(self):
        return f"FinFunctor({len(self.object_map)} objects -> {len(set(self.object_map.values()))} images)"


def identity_functor(cat: FinCat) -> FinFunctor:
    return FinFunctor(cat, cat, {x: x for x in cat.objects}, {f: f for f in cat.morphisms})


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    if f.target != g.source:
        raise InvalidFunctor("functors not composable")
    return FinFunctor(
        f.source,
        g.target,
        {x: g.object_map[y] for x, y in f.object_map.items()},
        {m: g.morphism_map[n] for m, n in f.morphism_map.items()},
    )


class NatTrans:
    """A natural transformation between parallel functors, as a component table."""

    def __init__(self, source: FinFunctor, target: FinFunctor, components):
        self.source = source
        self.target = target
        self.components = dict(components)

    def at(self, x: str) -> str:
        return self.components[x]

    def validate(self) -> None:
        F, G = self.source, self.target
        if F.source != G.source or F.target != G.target:
            raise InvalidTransformation("functors are not parallel")
        cat = F.target
        for x in F.source.objects:
            c = self.components.get(x)
            if c is None or cat.morphisms.get(c) != (F.object_map[x], G.object_map[x]):
                raise InvalidTransformation(f"component at {x!r} missing or mis-typed")
        for f, (x, y) in F.source.morphisms.items():
            left = cat.compose(self.components[y], F.morphism_map[f])
            right = cat.compose(G.morphism_map[f], self.components[x])
            if left != right:
                raise InvalidTransformation(f"naturality square fails at {f!r}")

    def is_iso(self) -> bool:
        cat = self.source.target
        return all(cat.is_iso(c) for c in self.components.values())

    def inverse(self) -> "NatTrans":
        cat = self.source.target
        return NatTrans(self.target, self.source, {x: cat.inverse(c) for x, c in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, NatTrans):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    def __repr__(self):
        return f"NatTrans({len(self.components)} components)"


def identity_nat(functor: FinFunctor) -> NatTrans:
    cat = functor.target
    return NatTrans(functor, functor, {x: cat.identity[functor.object_map[x]] for x in functor.source.objects})


def vertical_compose(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """beta after alpha: F ⇒ G ⇒ H."""
    cat = alpha.source.target
    return NatTrans(
        alpha.source,
        beta.target,
        {x: cat.compose(beta.components[x], alpha.components[x]) for x in alpha.components},
    )


def whisker_left(functor: FinFunctor, alpha: NatTrans) -> NatTrans:
    """functor∘alpha : functor∘F ⇒ functor∘G for alpha: F ⇒ G."""
    return NatTrans(
        compose_functors(functor, alpha.source),
        compose_functors(functor, alpha.target),
        {x: functor.morphism_map[c] for x, c in alpha.components.items()},
    )


def whisker_right(alpha: NatTrans, functor: FinFunctor) -> NatTrans:
    """alpha∘functor : F∘functor ⇒ G∘functor."""
    return NatTrans(
        compose_functors(alpha.source, functor),
        compose_functors(alpha.target, functor),
        {x: alpha.components[functor.object_map[x]] for x in functor.source.objects},
    )


# -- constructions -------------------------------------------------------


def opposite(cat: FinCat) -> FinCat:
    """Reverse all arrows; identifiers are kept so the operation is an involution."""
    return FinCat(
        cat.objects,
        {f: (tgt, src) for f, (src, tgt) in cat.morphisms.items()},
        cat.identity,
        {(g, f): gf for (f, g), gf in cat.composition.items()},
    )


def opposite_functor(functor: FinFunctor, source_op: FinCat | None = None, target_op: FinCat | None = None) -> FinFunctor:
    return FinFunctor(
        source_op if source_op is not None else opposite(functor.source),
        target_op if target_op is not None else opposite(functor.target),
        functor.object_map,
        functor.morphism_map,
    )


def pair_obj(a: str, b: str) -> str:
    return f"({a},{b})"


def product(cat_a: FinCat, cat_b: FinCat):
    """Product category with its two projections.

    Object (a,b) is named "(a,b)" and morphism (f,g) is named "(f,g)".
    """
    objects = [pair_obj(a, b) for a in cat_a.objects for b in cat_b.objects]
    morphisms = {}
    for f, (fs, ft) in cat_a.morphisms.items():
        for g, (gs, gt) in cat_b.morphisms.items():
            morphisms[pair_obj(f, g)] = (pair_obj(fs, gs), pair_obj(ft, gt))
    identity = {
        pair_obj(a, b): pair_obj(cat_a.identity[a], cat_b.identity[b])
        for a in cat_a.objects
        for b in cat_b.objects
    }
    composition = {}
    for (f2, f1), f21 in cat_a.composition.items():
        for (g2, g1), g21 in cat_b.composition.items():
            composition[(pair_obj(f2, g2), pair_obj(f1, g1))] = pair_obj(f21, g21)
    cat = FinCat(objects, morphisms, identity, composition)
    proj_a = FinFunctor(
        cat,
        cat_a,
        {pair_obj(a, b): a for a in cat_a.objects for b in cat_b.objects},
        {pair_obj(f, g): f for f in cat_a.morphisms for g in cat_b.morphisms},
    )
    proj_b = FinFunctor(
        cat,
        cat_b,
        {pair_obj(a, b): b for a in cat_a.objects for b in cat_b.objects},
        {pair_obj(f, g): g for f in cat_a.morphisms for g in cat_b.morphisms},
    )
    return cat, proj_a, proj_b


def pairing_functor(p: FinFunctor, q: FinFunctor, prod: FinCat) -> FinFunctor:
    """The induced functor X -> A×B from p: X->A and q: X->B."""
    return FinFunctor(
        p.source,
        prod,
        {x: pair_obj(p.object_map[x], q.object_map[x]) for x in p.source.objects},
        {f: pair_obj(p.morphism_map[f], q.morphism_map[f]) for f in p.source.morphisms},
    )


def core(cat: FinCat) -> frozenset:
    """Morphism ids of the maximal subgroupoid (exactly the isomorphisms)."""
    return frozenset(cat.isos())


def wide_subcategory(cat: FinCat, members: frozenset) -> FinCat:
    """The category with all objects of `cat` and only the given morphisms."""
    morphisms = {f: cat.morphisms[f] for f in members}
    composition = {
        (g, f): gf
        for (g, f), gf in cat.composition.items()
        if g in members and f in members and gf in members
    }
    for (g, f), gf in cat.composition.items():
        if g in members and f in members and gf not in members:
            raise InvalidCategory(f"subcategory not closed under composition: ({g!r},{f!r})")
    return FinCat(cat.objects, morphisms, cat.identity, composition)


def full_subcategory(cat: FinCat, objects) -> FinCat:
    objs = [x for x in cat.objects if x in set(objects)]
    keep = set(objs)
    morphisms = {f: st for f, st in cat.morphisms.items() if st[0] in keep and st[1] in keep}
    composition = {
        (g, f): gf for (g, f), gf in cat.composition.items() if g in morphisms and f in morphisms
    }
    identity = {x: cat.identity[x] for x in objs}
    return FinCat(objs, morphisms, identity, composition)


def is_limit_cone(cat: FinCat, f: str, g: str, apex: str, leg_f: str, leg_g: str) -> bool:
    """Check (apex, leg_f, leg_g) is a limit of the cospan f: x→z ← y :g.

    leg_f: apex→source(f), leg_g: apex→source(g); the universal property is
    verified against every cone by exhaustive factorization counting.
    """
    if cat.compose(f, leg_f) != cat.compose(g, leg_g):
        return False
    x, y = cat.source(f), cat.source(g)
    for w in cat.objects:
        for a in cat.hom(w, x):
            fa = cat.compose(f, a)
            for b in cat.hom(w, y):
                if fa != cat.compose(g, b):
                    continue
                count = 0
                for h in cat.hom(w, apex):
                    if cat.compose(leg_f, h) == a and cat.compose(leg_g, h) == b:
                        count += 1
                        if count > 1:
                            return False
                if count != 1:
                    return False
    return True


def pullback(cat: FinCat, f: str, g: str):
    """Canonical pullback of the cospan f: x→z ← y :g, or None.

    Among all limit cones the one with the least (apex, leg to source(f),
    leg to source(g)) triple is chosen, making the result deterministic.
    """
    if cat.target(f) != cat.target(g):
        raise InvalidCategory("pullback requires a cospan")
    x, y = cat.source(f), cat.source(g)
    candidates = []
    for w in cat.objects:
        for a in cat.hom(w, x):
            fa = cat.compose(f, a)
            for b in cat.hom(w, y):
                if fa == cat.compose(g, b):
                    candidates.append((w, a, b))
    for w, a, b in sorted(candidates):
        if is_limit_cone(cat, f, g, w, a, b):
            return (w, a, b)
    return None


def is_pullback_square(cat: FinCat, top: str, left: str, right: str, bottom: str) -> bool:
    """Check the square with given edges commutes and is cartesian.

    top: w→u, left: w→v, right: u→z, bottom: v→z.
    """
    if cat.compose(right, top) != cat.compose(bottom, left):
        return False
    return is_limit_cone(cat, right, bottom, cat.source(top), top, left)


# -- exhaustive enumeration ----------------------------------------------


def _object_maps(cat_c: FinCat, cat_d: FinCat, budget: Budget, object_candidates=None):
    """DFS over object assignments, pruning on hom-set emptiness."""
    objs = cat_c.objects
    n = len(objs)
    assignment: dict[str, str] = {}

    def candidates(x):
        if object_candidates is not None:
            return object_candidates(x)
        return cat_d.objects

    def rec(i):
        if i == n:
            yield dict(assignment)
            return
        x = objs[i]
        for d in candidates(x):
            budget.charge()
            assignment[x] = d
            ok = True
            for j in range(i + 1):
                y = objs[j]
                if cat_c.hom(x, y) and not cat_d.hom(d, assignment[y]):
                    ok = False
                    break
                if cat_c.hom(y, x) and not cat_d.hom(assignment[y], d):
                    ok = False
                    break
            if ok:
                yield from rec(i + 1)
            del assignment[x]

    yield from rec(0)


def enumerate_functors(
    cat_c: FinCat,
    cat_d: FinCat,
    budget: Budget | None = None,
    object_candidates=None,
    morphism_candidates=None,
):
    """Yield every functor C -> D in canonical order.

    Order follows the declared object/morphism orders of C and D.  Optional
    callbacks restrict the candidate images; composition is checked
    incrementally so dead branches are cut early.
    """
    budget = _ensure_budget(budget)
    nonid = [f for f in cat_c.morphisms if not cat_c.is_identity(f)]
    thin_target = cat_d.is_thin()

    pair_checks: dict[str, list[tuple[str, str, str]]] = {m: [] for m in nonid}
    order_index = {m: i for i, m in enumerate(nonid)}
    for (g, f), gf in cat_c.composition.items():
        if cat_c.is_identity(g) or cat_c.is_identity(f):
            continue
        trigger = max((g, f, gf), key=lambda m: order_index.get(m, -1))
        if trigger in pair_checks:
            pair_checks[trigger].append((g, f, gf))

    for obj_map in _object_maps(cat_c, cat_d, budget, object_candidates):
        mor_map = {cat_c.identity[x]: cat_d.identity[d] for x, d in obj_map.items()}
        if thin_target:
            # images are forced in a thin target, so filters are exact checks
            ok = True
            for f, (src, tgt) in cat_c.morphisms.items():
                if cat_c.is_identity(f):
                    continue
                hom = cat_d.hom(obj_map[src], obj_map[tgt])
                if not hom or (
                    morphism_candidates is not None and not morphism_candidates(f, hom[0])
                ):
                    ok = False
                    break
                mor_map[f] = hom[0]
            if ok:
                yield FinFunctor(cat_c, cat_d, obj_map, mor_map)
            continue

        def rec(i, mor_map):
            if i == len(nonid):
                yield FinFunctor(cat_c, cat_d, dict(obj_map), dict(mor_map))
                return
            m = nonid[i]
            src, tgt = cat_c.morphisms[m]
            options = cat_d.hom(obj_map[src], obj_map[tgt])
            if morphism_candidates is not None:
                options = [h for h in options if morphism_candidates(m, h)]
            for h in options:
                budget.charge()
                mor_map[m] = h
                ok = True
                for g, f, gf in pair_checks[m]:
                    img_g, img_f, img_gf = mor_map.get(g), mor_map.get(f), mor_map.get(gf)
                    if img_g is None or img_f is None or img_gf is None:
                        continue
                    if cat_d.compose(img_g, img_f) != img_gf:
                        ok = False
                        break
                if ok:
                    yield from rec(i + 1, mor_map)
                del mor_map[m]

        yield from rec(0, mor_map)


def count_functors_bruteforce(cat_c: FinCat, cat_d: FinCat, budget: Budget | None = None) -> int:
    """Independent oracle: filter all raw object/morphism assignments by functoriality."""
    budget = _ensure_budget(budget)
    nonid = [f for f in cat_c.morphisms if not cat_c.is_identity(f)]
    count = 0
    for obj_images in itertools.product(cat_d.objects, repeat=len(cat_c.objects)):
        obj_map = dict(zip(cat_c.objects, obj_images))
        for mor_images in itertools.product(list(cat_d.morphisms), repeat=len(nonid)):
            budget.charge()
            mor_map = {cat_c.identity[x]: cat_d.identity[d] for x, d in obj_map.items()}
            mor_map.update(dict(zip(nonid, mor_images)))
            if all(
                cat_d.morphisms[mor_map[f]] == (obj_map[s], obj_map[t])
                for f, (s, t) in cat_c.morphisms.items()
            ) and all(
                cat_d.compose(mor_map[g], mor_map[f]) == mor_map[gf]
                for (g, f), gf in cat_c.composition.items()
            ):
                count += 1
    return count


def enumerate_nat_transes(f_functor: FinFunctor, g_functor: FinFunctor, budget: Budget | None = None):
    """Yield every natural transformation F ⇒ G in canonical component order."""
    budget = _ensure_budget(budget)
    cat = f_functor.target
    objs = f_functor.source.objects
    if cat.is_thin():
        # at most one candidate per component, and naturality is automatic in
        # a thin target whenever all components exist
        components = {}
        for x in objs:
            budget.charge()
            hom = cat.hom(f_functor.object_map[x], g_functor.object_map[x])
            if not hom:
                return
            components[x] = hom[0]
        yield NatTrans(f_functor, g_functor, components)
        return
    arrows_between: dict[tuple[str, str], list[str]] = {}
    for m, (x, y) in f_functor.source.morphisms.items():
        arrows_between.setdefault((x, y), []).append(m)

    components: dict[str, str] = {}

    def natural_so_far(x):
        for j, y in enumerate(objs):
            if y not in components:
                continue
            for m in arrows_between.get((x, y), ()):  # x -> y
                if cat.compose(components[y], f_functor.morphism_map[m]) != cat.compose(
                    g_functor.morphism_map[m], components[x]
                ):
                    return False
            for m in arrows_between.get((y, x), ()):  # y -> x
                if cat.compose(components[x], f_functor.morphism_map[m]) != cat.compose(
                    g_functor.morphism_map[m], components[y]
                ):
                    return False
        return True

    def rec(i):
        if i == len(objs):
            yield NatTrans(f_functor, g_functor, dict(components))
            return
        x = objs[i]
        for c in cat.hom(f_functor.object_map[x], g_functor.object_map[x]):
            budget.charge()
            components[x] = c
            if natural_so_far(x):
                yield from rec(i + 1)
            del components[x]

    yield from rec(0)


# -- equivalences --------------------------------------------------------


def is_fully_faithful(functor: FinFunctor) -> bool:
    cat_c, cat_d = functor.source, functor.target
    for x in cat_c.objects:
        for y in cat_c.objects:
            dom = cat_c.hom(x, y)
            images = [functor.morphism_map[f] for f in dom]
            if len(set(images)) != len(images):
                return False
            cod = cat_d.hom(functor.object_map[x], functor.object_map[y])
            if len(images) != len(cod):
                return False
    return True


def iso_classes(cat: FinCat) -> list[list[str]]:
    """Partition of objects into isomorphism classes, each sorted, reps first."""
    remaining = list(cat.objects)
    classes = []
    while remaining:
        rep = remaining[0]
        cls = [x for x in remaining if any(cat.is_iso(f) for f in cat.hom(rep, x))]
        classes.append(sorted(cls))
        remaining = [x for x in remaining if x not in cls]
    return classes


class Equivalence:
    """An adjoint equivalence witness (F, G, unit, counit)."""

    def __init__(self, forward: FinFunctor, backward: FinFunctor, unit: NatTrans, counit: NatTrans):
        self.forward = forward
        self.backward = backward
        self.unit = unit
        self.counit = counit

    def validate(self) -> None:
        c, d = self.forward.source, self.forward.target
        self.forward.validate()
        self.backward.validate()
        self.unit.validate()
        self.counit.validate()
        if not self.unit.is_iso() or not self.counit.is_iso():
            raise InvalidTransformation("unit/counit of equivalence not invertible")
        for x in c.objects:
            lhs = d.compose(self.counit.components[self.forward.object_map[x]],
                            self.forward.morphism_map[self.unit.components[x]])
            if lhs != d.identity[self.forward.object_map[x]]:
                raise InvalidTransformation(f"triangle identity (F) fails at {x!r}")
        for y in d.objects:
            lhs = c.compose(self.backward.morphism_map[self.counit.components[y]],
                            self.unit.components[self.backward.object_map[y]])
            if lhs != c.identity[self.backward.object_map[y]]:
                raise InvalidTransformation(f"triangle identity (G) fails at {y!r}")


def promote_to_equivalence(functor: FinFunctor, iso_filter=None) -> Equivalence | None:
    """Build an adjoint equivalence from F when F is fully faithful and
    essentially surjective (with witnessing isos accepted by iso_filter).

    The quasi-inverse takes the least preimage and least connecting iso, so the
    witness is deterministic; the triangle identities hold by construction.
    """
    cat_c, cat_d = functor.source, functor.target
    if not is_fully_faithful(functor):
        return None
    eps = {}
    preimage = {}
    for d in cat_d.objects:
        found = False
        for x in cat_c.objects:
            for j in cat_d.hom(functor.object_map[x], d):
                if cat_d.is_iso(j) and (iso_filter is None or iso_filter(j)):
                    eps[d] = j
                    preimage[d] = x
                    found = True
                    break
            if found:
                break
        if not found:
            return None

    hom_inverse = {}
    for x in cat_c.objects:
        for y in cat_c.objects:
            for f in cat_c.hom(x, y):
                hom_inverse[(x, y, functor.morphism_map[f])] = f

    g_obj = dict(preimage)
    g_mor = {}
    for g, (d, d2) in cat_d.morphisms.items():
        x, y = preimage[d], preimage[d2]
        conj = cat_d.compose_path(cat_d.inverse(eps[d2]), g, eps[d])
        g_mor[g] = hom_inverse[(x, y, conj)]
    backward = FinFunctor(cat_d, cat_c, g_obj, g_mor)
    unit = NatTrans(
        identity_functor(cat_c),
        compose_functors(backward, functor),
        {
            x: hom_inverse[(x, preimage[functor.object_map[x]], cat_d.inverse(eps[functor.object_map[x]]))]
            for x in cat_c.objects
        },
    )
    counit = NatTrans(
        compose_functors(functor, backward),
        identity_functor(cat_d),
        dict(eps),
    )
    eq = Equivalence(functor, backward, unit, counit)
    eq.validate()
    return eq


def is_equivalence(functor: FinFunctor) -> Equivalence | None:
    return promote_to_equivalence(functor)


def find_isomorphism(cat_c: FinCat, cat_d: FinCat, budget: Budget | None = None) -> FinFunctor | None:
    """Search for a strict isomorphism of categories (bijective functor)."""
    budget = _ensure_budget(budget)
    if len(cat_c.objects) != len(cat_d.objects) or len(cat_c.morphisms) != len(cat_d.morphisms):
        return None

    def profile(cat, x):
        outs = sorted(len(cat.hom(x, y)) for y in cat.objects)
        ins = sorted(len(cat.hom(y, x)) for y in cat.objects)
        return (tuple(outs), tuple(ins))

    prof_c = {x: profile(cat_c, x) for x in cat_c.objects}
    prof_d = {y: profile(cat_d, y) for y in cat_d.objects}

    def object_candidates(x):
        return tuple(y for y in cat_d.objects if prof_d[y] == prof_c[x])

    used_objects: set[str] = set()
    assignment: dict[str, str] = {}

    def rec_obj(i):
        if i == len(cat_c.objects):
            yield dict(assignment)
            return
        x = cat_c.objects[i]
        for d in object_candidates(x):
            if d in used_objects:
                continue
            budget.charge()
            ok = True
            assignment[x] = d
            for y, dy in assignment.items():
                if len(cat_c.hom(x, y)) != len(cat_d.hom(d, dy)) or len(cat_c.hom(y, x)) != len(
                    cat_d.hom(dy, d)
                ):
                    ok = False
                    break
            if ok:
                used_objects.add(d)
                yield from rec_obj(i + 1)
                used_objects.discard(d)
            del assignment[x]

    nonid_c = [f for f in cat_c.morphisms if not cat_c.is_identity(f)]

    for obj_map in rec_obj(0):
        mor_map = {cat_c.identity[x]: cat_d.identity[d] for x, d in obj_map.items()}
        used = set(mor_map.values())

        def rec_mor(i):
            if i == len(nonid_c):
                return dict(mor_map)
            m = nonid_c[i]
            src, tgt = cat_c.morphisms[m]
            for h in cat_d.hom(obj_map[src], obj_map[tgt]):
                if h in used or cat_d.is_identity(h):
                    continue
                budget.charge()
                mor_map[m] = h
                used.add(h)
                ok = True
                for (g, f), gf in cat_c.composition.items():
                    ig, iff, igf = mor_map.get(g), mor_map.get(f), mor_map.get(gf)
                    if ig is not None and iff is not None and igf is not None:
                        if cat_d.compose(ig, iff) != igf:
                            ok = False
                            break
                if ok:
                    result = rec_mor(i + 1)
                    if result is not None:
                        return result
                used.discard(h)
                del mor_map[m]
            return None

        mors = rec_mor(0)
        if mors is not None:
            functor = FinFunctor(cat_c, cat_d, obj_map, mors)
            functor.validate()
            return functor
    return None


def skeleton(cat: FinCat):
    """Full subcategory on the least representative of each iso class, with the
    retraction data (chosen isos x -> rep(x), identity on representatives)."""
    classes = iso_classes(cat)
    reps = {x: cls[0] for cls in classes for x in cls}
    skel = full_subcategory(cat, sorted({cls[0] for cls in classes}))
    to_rep = {}
    for x in cat.objects:
        r = reps[x]
        if x == r:
            to_rep[x] = cat.identity[x]
        else:
            to_rep[x] = next(f for f in cat.hom(x, r) if cat.is_iso(f))
    return skel, reps, to_rep


def equivalent_categories(cat_c: FinCat, cat_d: FinCat, budget: Budget | None = None) -> Equivalence | None:
    """Adjoint-equivalence search: skeleta are compared by isomorphism search,
    and a found isomorphism is promoted to an equivalence witness."""
    budget = _ensure_budget(budget)
    skel_c, reps_c, to_rep_c = skeleton(cat_c)
    skel_d, _, _ = skeleton(cat_d)
    sigma = find_isomorphism(skel_c, skel_d, budget)
    if sigma is None:
        return None
    obj_map = {x: sigma.object_map[reps_c[x]] for x in cat_c.objects}
    mor_map = {}
    for f, (x, y) in cat_c.morphisms.items():
        conj = cat_c.compose_path(to_rep_c[y], f, cat_c.inverse(to_rep_c[x]))
        mor_map[f] = sigma.morphism_map[conj]
    forward = FinFunctor(cat_c, cat_d, obj_map, mor_map)
    forward.validate()
    return promote_to_equivalence(forward)


def functor_category(functors, budget: Budget | None = None):
    """The category whose objects are the given functors and whose morphisms
    are all natural transformations between them.

    Objects are named F0, F1, ... in the given order and transformations
    t0, t1, ...; returns (category, object tabulation, morphism tabulation).
    """
    budget = _ensure_budget(budget)
    functors = list(functors)
    obj_names = [f"F{i}" for i in range(len(functors))]
    obj_tab = dict(zip(obj_names, functors))
    morphisms = {}
    mor_tab = {}
    identity = {}
    lookup = {}
    counter = itertools.count()
    for i, f_functor in enumerate(functors):
        for j, g_functor in enumerate(functors):
            for nt in enumerate_nat_transes(f_functor, g_functor, budget):
                name = f"t{next(counter)}"
                morphisms[name] = (obj_names[i], obj_names[j])
                mor_tab[name] = nt
                key = (obj_names[i], obj_names[j], tuple(sorted(nt.components.items())))
                lookup[key] = name
                if i == j and all(
                    f_functor.target.is_identity(c) for c in nt.components.values()
                ):
                    identity[obj_names[i]] = name
    composition = {}
    target_cat = functors[0].target if functors else None
    for n2, (s2, t2) in morphisms.items():
        for n1, (s1, t1) in morphisms.items():
            if t1 != s2:
                continue
            budget.charge()
            nt1, nt2 = mor_tab[n1], mor_tab[n2]
            components = tuple(
                sorted(
                    (x, target_cat.compose(nt2.components[x], nt1.components[x]))
                    for x in nt1.components
                )
            )
            composition[(n2, n1)] = lookup[(s1, t2, components)]
    cat = FinCat(obj_names, morphisms, identity, composition)
    return cat, obj_tab, mor_tab


def strict_pullback_category(f1: FinFunctor, f2: FinFunctor):
    """Strict pullback of the cospan A → C ← B in Cat, with its projections."""
    if f1.target != f2.target:
        raise InvalidFunctor("pullback requires functors into a shared category")
    cat_a, cat_b = f1.source, f2.source
    objects = [
        pair_obj(a, b)
        for a in cat_a.objects
        for b in cat_b.objects
        if f1.object_map[a] == f2.object_map[b]
    ]
    morphisms = {}
    for m, (ms, mt) in cat_a.morphisms.items():
        for n, (ns, nt) in cat_b.morphisms.items():
            if f1.morphism_map[m] == f2.morphism_map[n]:
                if pair_obj(ms, ns) in set(objects) and pair_obj(mt, nt) in set(objects):
                    morphisms[pair_obj(m, n)] = (pair_obj(ms, ns), pair_obj(mt, nt))
    identity = {}
    for name in objects:
        a, b = _split_pair(name)
        identity[name] = pair_obj(cat_a.identity[a], cat_b.identity[b])
    composition = {}
    for name2, (m2, n2) in ((k, _split_pair(k)) for k in morphisms):
        for name1, (m1, n1) in ((k, _split_pair(k)) for k in morphisms):
            if morphisms[name1][1] != morphisms[name2][0]:
                continue
            composition[(name2, name1)] = pair_obj(cat_a.compose(m2, m1), cat_b.compose(n2, n1))
    cat = FinCat(objects, morphisms, identity, composition)
    proj1 = FinFunctor(
        cat,
        cat_a,
        {o: _split_pair(o)[0] for o in objects},
        {m: _split_pair(m)[0] for m in morphisms},
    )
    proj2 = FinFunctor(
        cat,
        cat_b,
        {o: _split_pair(o)[1] for o in objects},
        {m: _split_pair(m)[1] for m in morphisms},
    )
    return cat, proj1, proj2


def _split_pair(name: str) -> tuple[str, str]:
    """Inverse of pair_obj: split "(x,y)" at the comma with balanced parens."""
    inner = name[1:-1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i], inner[i + 1 :]
    raise ValueError(f"not a pair identifier: {name!r}")


class OverBaseWitness:
    """Equivalence X ≃ Y strictly over S with vertical unit/counit."""

    def __init__(self, equivalence: Equivalence, p: FinFunctor, q: FinFunctor):
        self.equivalence = equivalence
        self.p = p
        self.q = q

    def validate(self) -> None:
        self.equivalence.validate()
        if compose_functors(self.q, self.equivalence.forward) != self.p:
            raise InvalidFunctor("forward functor does not commute with projections")
        if compose_functors(self.p, self.equivalence.backward) != self.q:
            raise InvalidFunctor("backward functor does not commute with projections")
        base = self.p.target
        for x, c in self.equivalence.unit.components.items():
            if not base.is_identity(self.p.morphism_map[c]):
                raise InvalidTransformation("unit component not vertical")
        for y, c in self.equivalence.counit.components.items():
            if not base.is_identity(self.q.morphism_map[c]):
                raise InvalidTransformation("counit component not vertical")


def functors_over_base(p: FinFunctor, q: FinFunctor, budget: Budget | None = None):
    """Enumerate functors F: X → Y with q∘F = p strictly."""
    if p.target != q.target:
        raise InvalidFunctor("projections do not share a base")
    yield from enumerate_functors(
        p.source,
        q.source,
        budget,
        object_candidates=lambda x: tuple(
            y for y in q.source.objects if q.object_map[y] == p.object_map[x]
        ),
        morphism_candidates=lambda m, h: q.morphism_map[h] == p.morphism_map[m],
    )


def equivalent_over_base(p: FinFunctor, q: FinFunctor, budget: Budget | None = None) -> OverBaseWitness | None:
    """Search for an equivalence X ≃ Y over the shared base S.

    The forward functor commutes with the projections strictly; the witnessing
    unit/counit are vertical (their components project to identities).  The
    first fully faithful, vertically essentially surjective functor in
    canonical enumeration order is promoted to the witness.
    """
    budget = _ensure_budget(budget)
    cat_y = q.source
    base = q.target

    fiber_sizes_p: dict[str, int] = {}
    for x in p.source.objects:
        fiber_sizes_p[p.object_map[x]] = fiber_sizes_p.get(p.object_map[x], 0) + 1

    def vertical_iso(j):
        return base.is_identity(q.morphism_map[j])

    for functor in functors_over_base(p, q, budget):
        eq = promote_to_equivalence(functor, iso_filter=vertical_iso)
        if eq is None:
            continue
        witness = OverBaseWitness(eq, p, q)
        witness.validate()
        return witness
    return None
