"""Optics as coend-class representatives, with a brute-force equality oracle.

An optic from (x,u) to (y,v) is stored as a residual object m plus the pair
(alpha: x -> m (.) y, beta: m (.) v -> u), i.e. one representative of the
class obtained by quotienting along the sliding relation

    < alpha ; (f (.) y) | beta >_m  =  < alpha | (f (.) v) ; beta >_n

for f : n -> m in the acting category.  ``zigzag_equal`` decides the quotient
by exhausting that relation over residuals drawn from a universe, which keeps
it independent of the canonical (get, put) route used for fast equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BoundExceeded, NotRepresentable, TypeMismatch
from .fincat import (
    BASE,
    FinMorphism,
    FinObject,
    KleisliTag,
    UNIT,
    act,
    act_left,
    assoc,
    assoc_inv,
    compose,
    default_bounds,
    diag,
    enumerate_homs,
    identity,
    is_kleisli,
    lunit,
    lunit_inv,
    morphism,
    pmor,
    product,
    proj1,
    proj2,
)

CARTESIAN = "cartesian"


@dataclass(frozen=True)
class Optic:
    x: FinObject
    u: FinObject
    y: FinObject
    v: FinObject
    m: FinObject
    alpha: FinMorphism
    beta: FinMorphism
    flavor: object = CARTESIAN  # CARTESIAN or a KleisliTag

    def __post_init__(self):
        want_alpha_tgt = product(self.m, self.y)
        want_beta_src = product(self.m, self.v)
        if self.alpha.source != self.x or self.alpha.target != want_alpha_tgt:
            raise TypeMismatch("alpha has the wrong boundary")
        if self.beta.source != want_beta_src or self.beta.target != self.u:
            raise TypeMismatch("beta has the wrong boundary")
        if self.flavor == CARTESIAN:
            if is_kleisli(self.alpha.tag) or is_kleisli(self.beta.tag):
                raise TypeMismatch("cartesian optic with effectful components")
        else:
            if self.alpha.tag != self.flavor or self.beta.tag != self.flavor:
                raise TypeMismatch("mixed optic components must match its monad")

    def boundary(self):
        return (self.x, self.u, self.y, self.v)

    def __repr__(self):
        return (
            f"Optic({self.x.name},{self.u.name})->({self.y.name},{self.v.name})"
            f"@{self.m.name}"
        )


@dataclass(frozen=True)
class Lens:
    """A (get, put) pair; put is Kleisli-tagged for monadic lenses."""

    get: FinMorphism
    put: FinMorphism

    def __post_init__(self):
        if is_kleisli(self.get.tag):
            raise TypeMismatch("get must be a base morphism")
        src = self.put.source
        if src.factors is None or src.factors[0] != self.get.source:
            raise TypeMismatch("put must have source x (x) v")

    @property
    def x(self):
        return self.get.source

    @property
    def y(self):
        return self.get.target

    @property
    def v(self):
        return self.put.source.factors[1]

    @property
    def u(self):
        return self.put.target


def _tagged(f: FinMorphism, flavor) -> FinMorphism:
    """View a base morphism in the optic's home category (pure lift if mixed)."""
    if flavor == CARTESIAN or is_kleisli(f.tag):
        return f
    return flavor.monad.pure_lift(f)


def identity_optic(x: FinObject, u: FinObject, flavor=CARTESIAN) -> Optic:
    """The identity < lambda^-1_x | lambda_u >_I."""
    return Optic(
        x, u, x, u, UNIT,
        _tagged(lunit_inv(x), flavor),
        _tagged(lunit(u), flavor),
        flavor,
    )


def adapter(f: FinMorphism, g: FinMorphism, flavor=CARTESIAN) -> Optic:
    """The optic of a pair of plain arrows: < f ; lambda^-1 | lambda ; g >_I."""
    alpha = compose(_tagged(f, flavor), _tagged(lunit_inv(f.target), flavor))
    beta = compose(_tagged(lunit(g.source), flavor), _tagged(g, flavor))
    return Optic(f.source, g.target, f.target, g.source, UNIT, alpha, beta, flavor)


def compose_optics(o1: Optic, o2: Optic) -> Optic:
    """Componentwise composition; the residual is m1 (x) m2."""
    if (o1.y, o1.v) != (o2.x, o2.u):
        raise TypeMismatch("optic boundaries do not match")
    if o1.flavor != o2.flavor:
        raise TypeMismatch("optic flavors do not match")
    flavor = o1.flavor
    m1, m2, z, w = o1.m, o2.m, o2.y, o2.v
    alpha = compose(
        compose(o1.alpha, act_left(m1, o2.alpha)),
        _tagged(assoc_inv(m1, m2, z), flavor),
    )
    beta = compose(
        compose(_tagged(assoc(m1, m2, w), flavor), act_left(m1, o2.beta)),
        o1.beta,
    )
    return Optic(o1.x, o1.u, z, w, product(m1, m2), alpha, beta, flavor)


# --- lens round trips ---------------------------------------------------------


def to_lens(o: Optic) -> Lens:
    """Extract the canonical (get, put) pair of a cartesian optic."""
    if o.flavor != CARTESIAN:
        raise TypeMismatch("to_lens needs a cartesian optic; see to_mlens")
    get = compose(o.alpha, proj2(o.m, o.y))
    xv = product(o.x, o.v)
    put = morphism(xv, o.u, lambda e: o.beta((o.alpha(e[0])[0], e[1])))
    return Lens(get, put)


def from_lens(l: Lens) -> Optic:
    """Embed a (get, put) pair with residual x."""
    if is_kleisli(l.put.tag):
        return from_mlens(l)
    x, y = l.x, l.y
    alpha = morphism(x, product(x, y), lambda e: (e, l.get(e)))
    return Optic(x, l.u, y, l.v, x, alpha, l.put, CARTESIAN)


def from_mlens(l: Lens) -> Optic:
    """Embed a monadic (pure get, effectful put) lens with residual x."""
    if not is_kleisli(l.put.tag):
        raise TypeMismatch("from_mlens needs an effectful put")
    tag = l.put.tag
    monad = tag.monad
    x, y = l.x, l.y
    xy = product(x, y)
    alpha = FinMorphism(
        x, xy, (monad.unit_value((e, l.get(e)), xy) for e in x.elements), tag
    )
    return Optic(x, l.u, y, l.v, x, alpha, l.put, tag)


def to_mlens(o: Optic) -> Lens:
    """Extract (get, put) from a mixed optic, or fail with NotRepresentable.

    The candidate get is alpha followed by the projection under T; it must be
    pure (each value hit by exactly one unit element).  The put rebuilds the
    residual through alpha and binds beta against it.
    """
    if o.flavor == CARTESIAN:
        raise TypeMismatch("to_mlens needs a mixed optic; see to_lens")
    monad = o.flavor.monad
    proj = proj2(o.m, o.y)
    get_vals = []
    for e in o.x.elements:
        t = monad.map_value(o.alpha(e), proj, o.alpha.target, o.y)
        pure = monad.is_pure_value(t, o.y)
        if pure is None:
            raise NotRepresentable(f"get is not pure at {e!r}")
        get_vals.append(pure)
    get = FinMorphism(o.x, o.y, get_vals)
    xv = product(o.x, o.v)

    def put_val(e):
        ex, ev = e
        k = morphism(
            o.alpha.target, o.u, lambda my: o.beta((my[0], ev)), o.flavor
        )
        return monad.bind_value(o.alpha(ex), k)

    put = FinMorphism(xv, o.u, (put_val(e) for e in xv.elements), o.flavor)
    return Lens(get, put)


def compose_lenses(l1: Lens, l2: Lens) -> Lens:
    """Direct canonical composition of (possibly monadic) lenses."""
    get = compose(l1.get, l2.get)
    xw = product(l1.x, l2.v)
    if not is_kleisli(l1.put.tag) and not is_kleisli(l2.put.tag):
        put = morphism(xw, l1.u, lambda e: l1.put((e[0], l2.put((l1.get(e[0]), e[1])))))
        return Lens(get, put)
    tag = l1.put.tag if is_kleisli(l1.put.tag) else l2.put.tag
    monad = tag.monad
    p1 = l1.put if is_kleisli(l1.put.tag) else monad.pure_lift(l1.put)
    p2 = l2.put if is_kleisli(l2.put.tag) else monad.pure_lift(l2.put)

    def put_val(e):
        ex, ew = e
        inner = p2((l1.get(ex), ew))
        k = morphism(l2.u, l1.u, lambda ev: p1((ex, ev)), tag)
        return monad.bind_value(inner, k)

    put = FinMorphism(xw, l1.u, (put_val(e) for e in xw.elements), tag)
    return Lens(get, put)


# --- coend equality oracle ----------------------------------------------------

EQUAL = "Equal"
DISTINCT_WITHIN_BOUND = "DistinctWithinBound"


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self):
        self.parent = {}

    def find(self, k):
        parent = self.parent
        if k not in parent:
            parent[k] = k
            return k
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _state_key(m: FinObject, alpha: FinMorphism, beta: FinMorphism):
    return (m.name, alpha.values, beta.values)


class ZigzagPartition:
    """The full sliding-relation partition of representatives with bounded
    residuals.  Built once per (boundary, flavor, residual set); membership
    queries and class counting are then O(1) per representative.
    """

    def __init__(self, x, u, y, v, flavor, residuals, bounds=None):
        self.boundary = (x, u, y, v)
        self.flavor = flavor
        self.residuals = list(residuals)
        self.bounds = bounds or default_bounds()
        self.uf = _UnionFind()
        self._build(x, u, y, v, flavor)

    def _homs(self, a, b, tag):
        return enumerate_homs(tag, a, b, self.bounds)

    def _build(self, x, u, y, v, flavor):
        tag = BASE if flavor == CARTESIAN else flavor
        seen_names = set()
        residuals = []
        for m in self.residuals:
            if m.name not in seen_names:
                seen_names.add(m.name)
                residuals.append(m)
        self.residuals = residuals
        for m in residuals:
            my, mv = product(m, y, self.bounds), product(m, v, self.bounds)
            for alpha in self._homs(x, my, tag):
                for beta in self._homs(mv, u, tag):
                    self.uf.find(_state_key(m, alpha, beta))
        for n in residuals:
            ny, nv = product(n, y, self.bounds), product(n, v, self.bounds)
            for m in residuals:
                my, mv = product(m, y, self.bounds), product(m, v, self.bounds)
                for f in self._homs(n, m, BASE):
                    fy = act(f, y, self.bounds)
                    fv = act(f, v, self.bounds)
                    if flavor != CARTESIAN:
                        fy = flavor.monad.pure_lift(fy)
                        fv = flavor.monad.pure_lift(fv)
                    for alpha in self._homs(x, ny, tag):
                        left_alpha = compose(alpha, fy)
                        for beta in self._homs(mv, u, tag):
                            self.uf.union(
                                _state_key(m, left_alpha, beta),
                                _state_key(n, alpha, compose(fv, beta)),
                            )

    def key(self, o: Optic):
        k = _state_key(o.m, o.alpha, o.beta)
        if k not in self.uf.parent:
            raise BoundExceeded(
                f"residual {o.m.name} outside the partition's residual set"
            )
        return self.uf.find(k)

    def count_classes(self) -> int:
        roots = {self.uf.find(k) for k in list(self.uf.parent)}
        return len(roots)


_PARTITION_CACHE: dict = {}


def _flavor_key(flavor):
    if flavor == CARTESIAN:
        return CARTESIAN
    return ("kleisli", flavor.monad.id)


def _partition(x, u, y, v, flavor, residuals, bounds=None):
    key = (
        x.name, u.name, y.name, v.name,
        _flavor_key(flavor),
        tuple(sorted({m.name for m in residuals})),
    )
    part = _PARTITION_CACHE.get(key)
    if part is None:
        part = ZigzagPartition(x, u, y, v, flavor, residuals, bounds)
        _PARTITION_CACHE[key] = part
    return part


def default_residuals(x: FinObject, residual_bound: int, universe=None, extra=()):
    """Universe members within the cardinality bound, plus explicit extras."""
    from .tambara import Universe  # late import; tambara depends on us too

    members: Iterable[FinObject]
    if universe is None:
        members = [UNIT, x]
    elif isinstance(universe, Universe):
        members = universe.objects
    else:
        members = universe
    out = []
    for m in members:
        if len(m) <= residual_bound:
            out.append(m)
    for m in extra:
        if all(m.name != o.name for o in out):
            out.append(m)
    return out


def zigzag_equal(
    o1: Optic,
    o2: Optic,
    residual_bound: Optional[int] = None,
    universe=None,
) -> str:
    """Decide coend equality by exhausting sliding moves over bounded residuals.

    ``Equal`` is always sound.  ``DistinctWithinBound`` is exact for cartesian
    optics once the bound reaches |x| (canonical-form completeness) and a
    bounded verdict otherwise.  The input residuals join the search space even
    when they exceed the bound, so freshly composed optics can always be
    tested.
    """
    if o1.boundary() != o2.boundary():
        raise TypeMismatch("optics have different boundaries")
    if _flavor_key(o1.flavor) != _flavor_key(o2.flavor):
        raise TypeMismatch("optics have different flavors")
    x, u, y, v = o1.boundary()
    if residual_bound is None:
        residual_bound = max(len(x), 6)
    residuals = default_residuals(x, residual_bound, universe, extra=(o1.m, o2.m))
    part = _partition(x, u, y, v, o1.flavor, residuals)
    return EQUAL if part.key(o1) == part.key(o2) else DISTINCT_WITHIN_BOUND


def count_classes(
    x: FinObject,
    u: FinObject,
    y: FinObject,
    v: FinObject,
    flavor=CARTESIAN,
    residual_bound: Optional[int] = None,
    universe=None,
) -> int:
    """Number of sliding-equivalence classes with residual card <= bound."""
    if residual_bound is None:
        residual_bound = max(len(x), 6)
    residuals = default_residuals(x, residual_bound, universe)
    part = _partition(x, u, y, v, flavor, residuals)
    return part.count_classes()


def all_lenses(x: FinObject, u: FinObject, y: FinObject, v: FinObject, bounds=None):
    """Every cartesian lens on the given boundary, in canonical order."""
    xv = product(x, v, bounds)
    for get in enumerate_homs(BASE, x, y, bounds):
        for put in enumerate_homs(BASE, xv, u, bounds):
            yield Lens(get, put)


def all_optic_reps(x, u, y, v, residuals, bounds=None):
    """Every representative (m, alpha, beta) over the given residuals."""
    for m in residuals:
        my, mv = product(m, y, bounds), product(m, v, bounds)
        for alpha in enumerate_homs(BASE, x, my, bounds):
            for beta in enumerate_homs(BASE, mv, u, bounds):
                yield Optic(x, u, y, v, m, alpha, beta)
