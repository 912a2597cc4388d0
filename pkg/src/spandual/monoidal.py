"""Truncated pointed-finite-set bases, Segal-condition checking for monoidal
data, and doctrinal adjunction: the oplax structure on a left adjoint of a lax
monoidal functor between strict (commutative) monoidal categories."""

from __future__ import annotations

import itertools

from .errors import (
    IncoherentLaxStructure,
    InvalidCategory,
    MissingLeftAdjoint,
    NotSegal,
    ShapeMismatch,
)
from .fincat import (
    FinCat,
    FinFunctor,
    NatTrans,
    compose_functors,
    identity_functor,
    is_equivalence,
    pair_obj,
    pairing_functor,
    product,
)
from .grothendieck import CatDiagram, strict_diagram
from .mates import Adjunction, find_left_adjoint


class GammaOpTrunc:
    """The category of pointed sets <0>..<N> and partial maps, with inert
    (partial bijections onto) and active (total) markings."""

    def __init__(self, bound: int):
        self.bound = bound
        objects = [f"<{n}>" for n in range(bound + 1)]
        morphisms = {}
        identity = {}
        data = {}
        for m in range(bound + 1):
            for n in range(bound + 1):
                for vals in itertools.product(range(n + 1), repeat=m):
                    name = f"pm{vals}>{n}"
                    morphisms[name] = (f"<{m}>", f"<{n}>")
                    data[name] = (m, n, vals)
        for n in range(bound + 1):
            identity[f"<{n}>"] = f"pm{tuple(range(1, n + 1))}>{n}"
        composition = {}
        for n2, (m2, k2, vals2) in data.items():
            for n1, (m1, k1, vals1) in data.items():
                if k1 != m2:
                    continue
                composed = tuple(
                    vals2[v - 1] if v > 0 else 0 for v in vals1
                )
                composition[(n2, n1)] = f"pm{composed}>{k2}"
        self.cat = FinCat(objects, morphisms, identity, composition)
        self._data = data
        self.inerts = frozenset(
            name
            for name, (m, n, vals) in data.items()
            if sorted(v for v in vals if v > 0) == list(range(1, n + 1))
        )
        self.actives = frozenset(
            name for name, (m, n, vals) in data.items() if 0 not in vals
        )

    def values(self, name: str):
        return self._data[name][2]

    def rho(self, n: int, i: int) -> str:
        """The inert projection <n> -> <1> keeping only the i-th point."""
        vals = tuple(1 if j == i else 0 for j in range(1, n + 1))
        return f"pm{vals}>1"


def gamma_op_truncated(bound: int) -> GammaOpTrunc:
    return GammaOpTrunc(bound)


def power_obj(parts) -> str:
    return "[" + "|".join(parts) + "]"


def split_power(name: str):
    inner = name[1:-1]
    return inner.split("|") if inner else []


def power_category(cat: FinCat, n: int) -> FinCat:
    """The n-fold product of a category with itself, tuple-named."""
    objects = [power_obj(parts) for parts in itertools.product(cat.objects, repeat=n)]
    morphisms = {}
    for parts in itertools.product(list(cat.morphisms), repeat=n):
        morphisms[power_obj(parts)] = (
            power_obj([cat.source(f) for f in parts]),
            power_obj([cat.target(f) for f in parts]),
        )
    identity = {
        power_obj(parts): power_obj([cat.identity[x] for x in parts])
        for parts in itertools.product(cat.objects, repeat=n)
    }
    composition = {}
    for name2 in morphisms:
        parts2 = split_power(name2)
        for name1, (_, tgt1) in morphisms.items():
            if tgt1 != morphisms[name2][0]:
                continue
            parts1 = split_power(name1)
            composition[(name2, name1)] = power_obj(
                [cat.compose(g, f) for g, f in zip(parts2, parts1)]
            )
    return FinCat(objects, morphisms, identity, composition)


def power_functor(functor: FinFunctor, n: int, source_power=None, target_power=None) -> FinFunctor:
    src = source_power if source_power is not None else power_category(functor.source, n)
    tgt = target_power if target_power is not None else power_category(functor.target, n)
    return FinFunctor(
        src,
        tgt,
        {o: power_obj([functor.object_map[x] for x in split_power(o)]) for o in src.objects},
        {m: power_obj([functor.morphism_map[f] for f in split_power(m)]) for m in src.morphisms},
    )


class StrictMonCat:
    """A strictly associative and unital monoidal structure on a finite
    category, given by an explicit tensor functor and unit object."""

    def __init__(self, carrier: FinCat, tensor: FinFunctor, unit: str):
        self.carrier = carrier
        self.tensor = tensor
        self.unit = unit

    def tensor_obj(self, x: str, y: str) -> str:
        return self.tensor.object_map[pair_obj(x, y)]

    def tensor_mor(self, f: str, g: str) -> str:
        return self.tensor.morphism_map[pair_obj(f, g)]

    def multi_tensor_obj(self, parts) -> str:
        result = self.unit
        for x in parts:
            result = self.tensor_obj(result, x)
        return result

    def multi_tensor_mor(self, parts) -> str:
        result = self.carrier.identity[self.unit]
        for f in parts:
            result = self.tensor_mor(result, f)
        return result

    def validate(self) -> None:
        carrier = self.carrier
        prod, _, _ = product(carrier, carrier)
        if self.tensor.source != prod or self.tensor.target != carrier:
            raise ShapeMismatch("tensor is not a functor carrier×carrier → carrier")
        self.tensor.validate()
        for x in carrier.objects:
            if self.tensor_obj(self.unit, x) != x or self.tensor_obj(x, self.unit) != x:
                raise InvalidCategory(f"strict unit law fails at object {x!r}")
        for f in carrier.morphisms:
            i = carrier.identity[self.unit]
            if self.tensor_mor(i, f) != f or self.tensor_mor(f, i) != f:
                raise InvalidCategory(f"strict unit law fails at morphism {f!r}")
        for x in carrier.objects:
            for y in carrier.objects:
                for z in carrier.objects:
                    if self.tensor_obj(self.tensor_obj(x, y), z) != self.tensor_obj(
                        x, self.tensor_obj(y, z)
                    ):
                        raise InvalidCategory("strict associativity fails on objects")
        for f in carrier.morphisms:
            for g in carrier.morphisms:
                for h in carrier.morphisms:
                    if self.tensor_mor(self.tensor_mor(f, g), h) != self.tensor_mor(
                        f, self.tensor_mor(g, h)
                    ):
                        raise InvalidCategory("strict associativity fails on morphisms")

    def is_strictly_commutative(self) -> bool:
        return all(
            self.tensor_mor(f, g) == self.tensor_mor(g, f)
            for f in self.carrier.morphisms
            for g in self.carrier.morphisms
        )


def mon_cat_to_gamma_diagram(mon: StrictMonCat, bound: int, gamma: GammaOpTrunc | None = None):
    """Encode a strictly commutative monoidal category as a Segal diagram over
    the truncated partial-map base: <n> carries the n-th power, a partial map
    acts by tensoring its preimages (in increasing order) and discarding."""
    if gamma is None:
        gamma = gamma_op_truncated(bound)
    if not mon.is_strictly_commutative():
        raise IncoherentLaxStructure(
            "gamma encoding requires a strictly commutative tensor"
        )
    powers = {n: power_category(mon.carrier, n) for n in range(bound + 1)}
    values = {f"<{n}>": powers[n] for n in range(bound + 1)}
    arrows = {}
    for name, (src, tgt) in gamma.cat.morphisms.items():
        m = int(src[1:-1])
        n = int(tgt[1:-1])
        vals = gamma.values(name)
        obj_map = {}
        for o in powers[m].objects:
            parts = split_power(o)
            obj_map[o] = power_obj(
                [
                    mon.multi_tensor_obj(
                        [parts[i] for i in range(m) if vals[i] == j]
                    )
                    for j in range(1, n + 1)
                ]
            )
        mor_map = {}
        for mo in powers[m].morphisms:
            parts = split_power(mo)
            mor_map[mo] = power_obj(
                [
                    mon.multi_tensor_mor(
                        [parts[i] for i in range(m) if vals[i] == j]
                    )
                    for j in range(1, n + 1)
                ]
            )
        arrows[name] = FinFunctor(powers[m], powers[n], obj_map, mor_map)
    return strict_diagram(gamma.cat, values, arrows), gamma


def segal_condition_check(diagram: CatDiagram, gamma: GammaOpTrunc) -> bool:
    """Whether the inert projections exhibit each value as the power of the
    value at <1>."""
    value_one = diagram.values["<1>"]
    for n in range(gamma.bound + 1):
        value_n = diagram.values[f"<{n}>"]
        power_n = power_category(value_one, n)
        obj_map = {}
        mor_map = {}
        transports = [diagram.arrows[gamma.rho(n, i)] for i in range(1, n + 1)]
        for x in value_n.objects:
            obj_map[x] = power_obj([t.object_map[x] for t in transports])
        for f in value_n.morphisms:
            mor_map[f] = power_obj([t.morphism_map[f] for t in transports])
        segal_map = FinFunctor(value_n, power_n, obj_map, mor_map)
        segal_map.validate()
        if is_equivalence(segal_map) is None:
            return False
    return True


def fibrewise_adjoint_check(lax_map, gamma: GammaOpTrunc):
    """For a lax map of Segal diagrams: the component at <1> admits a left
    adjoint iff every component does.  Returns (agreement, adjunctions),
    where the dict holds a witness adjunction per object when they exist,
    with the product adjunctions validated."""
    source = lax_map.source_diagram
    target = lax_map.target_diagram
    if not segal_condition_check(source, gamma) or not segal_condition_check(target, gamma):
        raise NotSegal("fibrewise adjoint check requires Segal diagrams")
    adj_one = find_left_adjoint(lax_map.components["<1>"])
    adjunctions = {}
    for n in range(gamma.bound + 1):
        adj_n = find_left_adjoint(lax_map.components[f"<{n}>"])
        if n == 0:
            # the value at <0> is equivalent to the terminal category, where a
            # left adjoint always exists
            if adj_n is None:
                return False, None
        elif (adj_n is None) != (adj_one is None):
            return False, None
        if adj_n is not None:
            adjunctions[f"<{n}>"] = adj_n
    if adj_one is None:
        return True, None
    # the product adjunctions on the powers of the <1>-components
    c_one = source.values["<1>"]
    d_one = target.values["<1>"]
    for n in range(gamma.bound + 1):
        c_pow = power_category(c_one, n)
        d_pow = power_category(d_one, n)
        left = power_functor(adj_one.left, n, d_pow, c_pow)
        right = power_functor(adj_one.right, n, c_pow, d_pow)
        unit = NatTrans(
            identity_functor(d_pow),
            compose_functors(right, left),
            {
                o: power_obj([adj_one.unit.components[x] for x in split_power(o)])
                for o in d_pow.objects
            },
        )
        counit = NatTrans(
            compose_functors(left, right),
            identity_functor(c_pow),
            {
                o: power_obj([adj_one.counit.components[x] for x in split_power(o)])
                for o in c_pow.objects
            },
        )
        Adjunction(left, right, unit, counit).validate()
    return True, adjunctions


def functor_square(functor: FinFunctor, source_prod=None, target_prod=None) -> FinFunctor:
    """functor×functor on the binary products."""
    if source_prod is None:
        source_prod, _, _ = product(functor.source, functor.source)
    if target_prod is None:
        target_prod, _, _ = product(functor.target, functor.target)
    return FinFunctor(
        source_prod,
        target_prod,
        {
            pair_obj(x, y): pair_obj(functor.object_map[x], functor.object_map[y])
            for x in functor.source.objects
            for y in functor.source.objects
        },
        {
            pair_obj(f, g): pair_obj(functor.morphism_map[f], functor.morphism_map[g])
            for f in functor.source.morphisms
            for g in functor.source.morphisms
        },
    )


class LaxMonFunctor:
    """G: C → D with μ: G(-)⊗G(-) ⇒ G(-⊗-) and μ0: 1_D → G(1_C)."""

    def __init__(self, source: StrictMonCat, target: StrictMonCat, underlying: FinFunctor, mu, mu0: str):
        self.source = source
        self.target = target
        self.underlying = underlying
        self.mu = dict(mu)  # (x, y) -> morphism G(x)⊗G(y) -> G(x⊗y) in D
        self.mu0 = mu0

    def mu_at(self, x: str, y: str) -> str:
        return self.mu[(x, y)]

    def validate(self) -> None:
        g = self.underlying
        cat_c = self.source.carrier
        cat_d = self.target.carrier
        if g.source != cat_c or g.target != cat_d:
            raise ShapeMismatch("underlying functor has wrong endpoints")
        g.validate()
        if cat_d.morphisms.get(self.mu0) != (
            self.target.unit,
            g.object_map[self.source.unit],
        ):
            raise IncoherentLaxStructure("unit comparison mis-typed")
        for x in cat_c.objects:
            for y in cat_c.objects:
                m = self.mu.get((x, y))
                expected = (
                    self.target.tensor_obj(g.object_map[x], g.object_map[y]),
                    g.object_map[self.source.tensor_obj(x, y)],
                )
                if m is None or cat_d.morphisms.get(m) != expected:
                    raise IncoherentLaxStructure(f"μ at ({x!r},{y!r}) mis-typed")
        # naturality
        for f in cat_c.morphisms:
            for h in cat_c.morphisms:
                src_pair = (cat_c.source(f), cat_c.source(h))
                tgt_pair = (cat_c.target(f), cat_c.target(h))
                left = cat_d.compose(
                    g.morphism_map[self.source.tensor_mor(f, h)], self.mu[src_pair]
                )
                right = cat_d.compose(
                    self.mu[tgt_pair],
                    self.target.tensor_mor(g.morphism_map[f], g.morphism_map[h]),
                )
                if left != right:
                    raise IncoherentLaxStructure(f"μ not natural at ({f!r},{h!r})")
        # associativity and unit coherence
        for x in cat_c.objects:
            for y in cat_c.objects:
                for z in cat_c.objects:
                    gz = g.object_map[z]
                    gx = g.object_map[x]
                    left = cat_d.compose(
                        self.mu[(self.source.tensor_obj(x, y), z)],
                        self.target.tensor_mor(self.mu[(x, y)], cat_d.identity[gz]),
                    )
                    right = cat_d.compose(
                        self.mu[(x, self.source.tensor_obj(y, z))],
                        self.target.tensor_mor(cat_d.identity[gx], self.mu[(y, z)]),
                    )
                    if left != right:
                        raise IncoherentLaxStructure(
                            f"μ associativity fails at ({x!r},{y!r},{z!r})"
                        )
        for x in cat_c.objects:
            gx = g.object_map[x]
            left_unit = cat_d.compose(
                self.mu[(self.source.unit, x)],
                self.target.tensor_mor(self.mu0, cat_d.identity[gx]),
            )
            right_unit = cat_d.compose(
                self.mu[(x, self.source.unit)],
                self.target.tensor_mor(cat_d.identity[gx], self.mu0),
            )
            if left_unit != cat_d.identity[gx] or right_unit != cat_d.identity[gx]:
                raise IncoherentLaxStructure(f"μ unit coherence fails at {x!r}")


class OplaxMonFunctor:
    """F: D → C with δ: F(-⊗-) ⇒ F(-)⊗F(-) and δ0: F(1_D) → 1_C."""

    def __init__(self, source: StrictMonCat, target: StrictMonCat, underlying: FinFunctor, delta, delta0: str):
        self.source = source
        self.target = target
        self.underlying = underlying
        self.delta = dict(delta)  # (x, y) -> morphism F(x⊗y) -> F(x)⊗F(y)
        self.delta0 = delta0

    def delta_at(self, x: str, y: str) -> str:
        return self.delta[(x, y)]

    def validate(self) -> None:
        f_fun = self.underlying
        cat_d = self.source.carrier
        cat_c = self.target.carrier
        if f_fun.source != cat_d or f_fun.target != cat_c:
            raise ShapeMismatch("underlying functor has wrong endpoints")
        f_fun.validate()
        if cat_c.morphisms.get(self.delta0) != (
            f_fun.object_map[self.source.unit],
            self.target.unit,
        ):
            raise IncoherentLaxStructure("unit comparison mis-typed")
        for x in cat_d.objects:
            for y in cat_d.objects:
                m = self.delta.get((x, y))
                expected = (
                    f_fun.object_map[self.source.tensor_obj(x, y)],
                    self.target.tensor_obj(f_fun.object_map[x], f_fun.object_map[y]),
                )
                if m is None or cat_c.morphisms.get(m) != expected:
                    raise IncoherentLaxStructure(f"δ at ({x!r},{y!r}) mis-typed")
        for f in cat_d.morphisms:
            for h in cat_d.morphisms:
                src_pair = (cat_d.source(f), cat_d.source(h))
                tgt_pair = (cat_d.target(f), cat_d.target(h))
                left = cat_c.compose(
                    self.delta[tgt_pair],
                    f_fun.morphism_map[self.source.tensor_mor(f, h)],
                )
                right = cat_c.compose(
                    self.target.tensor_mor(f_fun.morphism_map[f], f_fun.morphism_map[h]),
                    self.delta[src_pair],
                )
                if left != right:
                    raise IncoherentLaxStructure(f"δ not natural at ({f!r},{h!r})")
        for x in cat_d.objects:
            for y in cat_d.objects:
                for z in cat_d.objects:
                    fz = f_fun.object_map[z]
                    fx = f_fun.object_map[x]
                    left = cat_c.compose(
                        self.target.tensor_mor(self.delta[(x, y)], cat_c.identity[fz]),
                        self.delta[(self.source.tensor_obj(x, y), z)],
                    )
                    right = cat_c.compose(
                        self.target.tensor_mor(cat_c.identity[fx], self.delta[(y, z)]),
                        self.delta[(x, self.source.tensor_obj(y, z))],
                    )
                    if left != right:
                        raise IncoherentLaxStructure(
                            f"δ coassociativity fails at ({x!r},{y!r},{z!r})"
                        )
        for x in cat_d.objects:
            fx = f_fun.object_map[x]
            left_unit = cat_c.compose(
                self.target.tensor_mor(self.delta0, cat_c.identity[fx]),
                self.delta[(self.source.unit, x)],
            )
            right_unit = cat_c.compose(
                self.target.tensor_mor(cat_c.identity[fx], self.delta0),
                self.delta[(x, self.source.unit)],
            )
            if left_unit != cat_c.identity[fx] or right_unit != cat_c.identity[fx]:
                raise IncoherentLaxStructure(f"δ unit coherence fails at {x!r}")


def doctrinal_mate(lax: LaxMonFunctor, adjunction: Adjunction) -> OplaxMonFunctor:
    """The induced oplax structure on the left adjoint:
    δ_{x,y} = ε_{Fx⊗Fy} ∘ F(μ_{Fx,Fy}) ∘ F(η_x ⊗ η_y) and δ0 = ε_1 ∘ F(μ0)."""
    lax.validate()
    adjunction.validate()
    if adjunction.right != lax.underlying:
        raise ShapeMismatch("adjunction right adjoint must be the lax functor")
    f_fun = adjunction.left
    g_fun = lax.underlying
    mon_c, mon_d = lax.source, lax.target
    cat_c, cat_d = mon_c.carrier, mon_d.carrier
    delta = {}
    for x in cat_d.objects:
        for y in cat_d.objects:
            fx, fy = f_fun.object_map[x], f_fun.object_map[y]
            step1 = f_fun.morphism_map[
                mon_d.tensor_mor(
                    adjunction.unit.components[x], adjunction.unit.components[y]
                )
            ]
            step2 = f_fun.morphism_map[lax.mu_at(fx, fy)]
            step3 = adjunction.counit.components[mon_c.tensor_obj(fx, fy)]
            delta[(x, y)] = cat_c.compose_path(step3, step2, step1)
    delta0 = cat_c.compose(
        adjunction.counit.components[mon_c.unit], f_fun.morphism_map[lax.mu0]
    )
    oplax = OplaxMonFunctor(mon_d, mon_c, f_fun, delta, delta0)
    oplax.validate()
    return oplax


def doctrinal_round_trip(lax: LaxMonFunctor, adjunction: Adjunction) -> bool:
    """Mate of the oplax mate recovers μ and μ0 on the nose."""
    oplax = doctrinal_mate(lax, adjunction)
    g_fun = lax.underlying
    mon_c, mon_d = lax.source, lax.target
    cat_d = mon_d.carrier
    for x in mon_c.carrier.objects:
        for y in mon_c.carrier.objects:
            gx, gy = g_fun.object_map[x], g_fun.object_map[y]
            step1 = adjunction.unit.components[mon_d.tensor_obj(gx, gy)]
            step2 = g_fun.morphism_map[oplax.delta_at(gx, gy)]
            step3 = g_fun.morphism_map[
                mon_c.tensor_mor(
                    adjunction.counit.components[x], adjunction.counit.components[y]
                )
            ]
            recovered = cat_d.compose_path(step3, step2, step1)
            if recovered != lax.mu_at(x, y):
                return False
    recovered0 = cat_d.compose(
        g_fun.morphism_map[oplax.delta0], adjunction.unit.components[mon_d.unit]
    )
    return recovered0 == lax.mu0
