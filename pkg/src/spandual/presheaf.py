"""Finite-set-valued presheaves, left Kan extension along a functor (as an
explicit coequalizer of finite sets), and the Yoneda-naturality check."""

from __future__ import annotations

from .errors import InvalidFunctor, InvalidTransformation
from .fincat import Budget, FinCat, FinFunctor, _ensure_budget


class Presheaf:
    """A contravariant finite-set-valued functor: values per object and, for
    every morphism f: x → y, a function values[y] → values[x]."""

    def __init__(self, base: FinCat, values, action):
        self.base = base
        self.values = {x: tuple(v) for x, v in values.items()}
        self.action = {f: dict(a) for f, a in action.items()}

    def value(self, x: str):
        return self.values[x]

    def act(self, f: str, element: str) -> str:
        return self.action[f][element]

    def validate(self) -> None:
        for x in self.base.objects:
            if x not in self.values:
                raise InvalidFunctor(f"presheaf missing value at {x!r}")
        for f, (x, y) in self.base.morphisms.items():
            table = self.action.get(f)
            if table is None or set(table) != set(self.values[y]):
                raise InvalidFunctor(f"presheaf action at {f!r} has wrong domain")
            if not set(table.values()) <= set(self.values[x]):
                raise InvalidFunctor(f"presheaf action at {f!r} has wrong codomain")
        for x in self.base.objects:
            ident = self.base.identity[x]
            if any(self.action[ident][e] != e for e in self.values[x]):
                raise InvalidFunctor(f"presheaf identity law fails at {x!r}")
        for (g, f), gf in self.base.composition.items():
            tgt = self.base.target(g)
            for e in self.values[tgt]:
                if self.action[gf][e] != self.action[f][self.action[g][e]]:
                    raise InvalidFunctor(f"presheaf composition law fails at ({g!r},{f!r})")

    def __eq__(self, other):
        if not isinstance(other, Presheaf):
            return NotImplemented
        return (
            self.base == other.base
            and {x: set(v) for x, v in self.values.items()}
            == {x: set(v) for x, v in other.values.items()}
            and self.action == other.action
        )


def yoneda_presheaf(cat: FinCat, c: str) -> Presheaf:
    """The representable presheaf Hom(-, c)."""
    values = {x: cat.hom(x, c) for x in cat.objects}
    action = {
        f: {u: cat.compose(u, f) for u in cat.hom(cat.target(f), c)}
        for f in cat.morphisms
    }
    return Presheaf(cat, values, action)


class PresheafMorphism:
    def __init__(self, source: Presheaf, target: Presheaf, components):
        self.source = source
        self.target = target
        self.components = {x: dict(t) for x, t in components.items()}

    def validate(self) -> None:
        base = self.source.base
        for x in base.objects:
            table = self.components.get(x)
            if table is None or set(table) != set(self.source.values[x]):
                raise InvalidTransformation(f"component at {x!r} has wrong domain")
            if not set(table.values()) <= set(self.target.values[x]):
                raise InvalidTransformation(f"component at {x!r} has wrong codomain")
        for f, (x, y) in base.morphisms.items():
            for e in self.source.values[y]:
                if self.components[x][self.source.act(f, e)] != self.target.act(
                    f, self.components[y][e]
                ):
                    raise InvalidTransformation(f"naturality fails at {f!r}")

    def is_iso(self) -> bool:
        return all(
            len(set(t.values())) == len(t) and len(t) == len(self.target.values[x])
            for x, t in self.components.items()
        )


def presheaf_morphisms(source: Presheaf, target: Presheaf, budget: Budget | None = None):
    """All natural transformations source ⇒ target, by pruned DFS over components."""
    budget = _ensure_budget(budget)
    base = source.base
    objs = list(base.objects)
    components: dict[str, dict] = {}

    def tables(x):
        dom = source.values[x]
        cod = target.values[x]
        if not dom:
            yield {}
            return

        def rec(i, current):
            if i == len(dom):
                yield dict(current)
                return
            for out in cod:
                budget.charge()
                current[dom[i]] = out
                yield from rec(i + 1, current)
            current.pop(dom[i], None)

        yield from rec(0, {})

    def natural_so_far(k):
        x = objs[k]
        for f, (s, t) in base.morphisms.items():
            if s not in components or t not in components:
                continue
            for e in source.values[t]:
                if components[s][source.act(f, e)] != target.act(f, components[t][e]):
                    return False
        return True

    results = []

    def rec(k):
        if k == len(objs):
            results.append(PresheafMorphism(source, target, components))
            return
        x = objs[k]
        for table in tables(x):
            components[x] = table
            if natural_so_far(k):
                rec(k + 1)
            del components[x]

    rec(0)
    return results


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, a):
        self.parent.setdefault(a, a)

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the lexicographically least element as representative
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class LeftKanResult:
    """The extended presheaf together with the quotient maps of the defining
    colimits: classify(d, c, b, s) names the class of the element s of F(c)
    placed at the comma object (c, b: d → f(c))."""

    def __init__(self, presheaf: Presheaf, tables):
        self.presheaf = presheaf
        self._tables = tables

    def classify(self, d: str, c: str, b: str, s: str) -> str:
        return self._tables[d][(c, b, s)]


def _elem_name(c: str, b: str, s: str) -> str:
    return f"[{c}|{b}|{s}]"


def left_kan(presheaf: Presheaf, functor: FinFunctor) -> LeftKanResult:
    """Left Kan extension of a presheaf along f: C → D.

    The value at d is the colimit over the comma category (d ↓ f) of the
    presheaf, computed as a coequalizer of finite sets: elements (c, b, s)
    with b: d → f(c) and s ∈ F(c), identified along every u: c' → c via
    ((c, f(u)∘b'), s) ~ ((c', b'), F(u)(s)); class names are the least
    representatives."""
    cat_c, cat_d = functor.source, functor.target
    values = {}
    action = {}
    tables = {}
    for d in cat_d.objects:
        uf = _UnionFind()
        elements = []
        for c in cat_c.objects:
            for b in cat_d.hom(d, functor.object_map[c]):
                for s in presheaf.values[c]:
                    elements.append((c, b, s))
                    uf.add((c, b, s))
        for u, (c_src, c_tgt) in cat_c.morphisms.items():
            fu = functor.morphism_map[u]
            for b_src in cat_d.hom(d, functor.object_map[c_src]):
                b_tgt = cat_d.compose(fu, b_src)
                for s in presheaf.values[c_tgt]:
                    uf.union((c_tgt, b_tgt, s), (c_src, b_src, presheaf.act(u, s)))
        table = {e: _elem_name(*uf.find(e)) for e in elements}
        tables[d] = table
        values[d] = tuple(sorted(set(table.values())))
    for h, (d_src, d_tgt) in cat_d.morphisms.items():
        table = {}
        for c in cat_c.objects:
            for b in cat_d.hom(d_tgt, functor.object_map[c]):
                for s in presheaf.values[c]:
                    rep = tables[d_tgt][(c, b, s)]
                    if rep in table:
                        continue
                    table[rep] = tables[d_src][(c, cat_d.compose(b, h), s)]
        action[h] = table
    result = Presheaf(cat_d, values, action)
    result.validate()
    return LeftKanResult(result, tables)


def restrict_presheaf(presheaf: Presheaf, functor: FinFunctor) -> Presheaf:
    """The composite presheaf P∘f on the source of f: C → D."""
    return Presheaf(
        functor.source,
        {c: presheaf.values[functor.object_map[c]] for c in functor.source.objects},
        {u: presheaf.action[functor.morphism_map[u]] for u in functor.source.morphisms},
    )


def kan_unit(presheaf: Presheaf, functor: FinFunctor, kan: LeftKanResult) -> PresheafMorphism:
    """The unit P ⇒ (f_! P)∘f placing s at the identity comma object."""
    cat_d = functor.target
    components = {
        c: {
            s: kan.classify(functor.object_map[c], c, cat_d.identity[functor.object_map[c]], s)
            for s in presheaf.values[c]
        }
        for c in functor.source.objects
    }
    unit = PresheafMorphism(presheaf, restrict_presheaf(kan.presheaf, functor), components)
    unit.validate()
    return unit


def kan_universal_property_check(
    presheaf: Presheaf, functor: FinFunctor, target: Presheaf, budget: Budget | None = None
) -> bool:
    """Hom(f_!P, Q) ≅ Hom(P, Q∘f) via composition with the unit: the
    comparison is checked to be a bijection by full enumeration of both sides."""
    kan = left_kan(presheaf, functor)
    restricted = restrict_presheaf(target, functor)
    unit = kan_unit(presheaf, functor, kan)
    upstairs = presheaf_morphisms(kan.presheaf, target, budget)
    downstairs = presheaf_morphisms(presheaf, restricted, budget)

    def transpose(tau: PresheafMorphism) -> tuple:
        components = {}
        for c in functor.source.objects:
            components[c] = {
                s: tau.components[functor.object_map[c]][unit.components[c][s]]
                for s in presheaf.values[c]
            }
        return tuple(sorted((c, tuple(sorted(t.items()))) for c, t in components.items()))

    images = [transpose(tau) for tau in upstairs]
    expected = {
        tuple(sorted((c, tuple(sorted(t.items()))) for c, t in sigma.components.items()))
        for sigma in downstairs
    }
    return len(images) == len(set(images)) and set(images) == expected


def yoneda_comparison(functor: FinFunctor, c: str):
    """The canonical map f_!(Hom(-,c)) → Hom(-, f(c)) sending the class of
    ((x, b), u: x → c) to f(u)∘b, with a well-definedness check."""
    cat_c, cat_d = functor.source, functor.target
    kan = left_kan(yoneda_presheaf(cat_c, c), functor)
    target = yoneda_presheaf(cat_d, functor.object_map[c])
    components = {}
    for d in cat_d.objects:
        table = {}
        for x in cat_c.objects:
            for b in cat_d.hom(d, functor.object_map[x]):
                for u in cat_c.hom(x, c):
                    rep = kan.classify(d, x, b, u)
                    image = cat_d.compose(functor.morphism_map[u], b)
                    if rep in table and table[rep] != image:
                        raise InvalidTransformation(
                            "yoneda comparison not constant on a class"
                        )
                    table[rep] = image
        components[d] = table
    comparison = PresheafMorphism(kan.presheaf, target, components)
    comparison.validate()
    return comparison, kan


def yoneda_naturality_check(functor: FinFunctor) -> bool:
    """Whether f_!∘y_C ≅ y_D∘f via the canonical comparison, naturally in c."""
    cat_c, cat_d = functor.source, functor.target
    comparisons = {}
    kans = {}
    for c in cat_c.objects:
        comparison, kan = yoneda_comparison(functor, c)
        if not comparison.is_iso():
            return False
        comparisons[c] = comparison
        kans[c] = kan
    for v, (c, c2) in cat_c.morphisms.items():
        # induced map f_!(y v): f_!(Hom(-,c)) -> f_!(Hom(-,c2)) on classes
        for d in cat_d.objects:
            for x in cat_c.objects:
                for b in cat_d.hom(d, functor.object_map[x]):
                    for u in cat_c.hom(x, c):
                        rep = kans[c].classify(d, x, b, u)
                        pushed = kans[c2].classify(d, x, b, cat_c.compose(v, u))
                        left = comparisons[c2].components[d][pushed]
                        right = cat_d.compose(
                            functor.morphism_map[v], comparisons[c].components[d][rep]
                        )
                        if left != right:
                            return False
    return True
