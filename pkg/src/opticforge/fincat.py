"""Finite sets, finite categories and the cartesian action structure.

Everything downstream computes inside one fixed, concrete model: objects are
named finite sets whose elements are structural tokens (atoms, the unit token
``*``, or nested pairs), morphisms are tabulated functions, and the acting
monoidal category is the cartesian one on those sets.  Because elements are
structural, all coherence maps (unitors, associator, braiding, diagonal,
terminal) are given by formulas instead of stored tables.
"""

from __future__ import annotations

import itertools
import os
import threading
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import BoundExceeded, InvalidDeclaration, TypeMismatch

# An element token is an atom (str), the unit token "*", or a pair of tokens.
Elem = object

UNIT_ELEM = "*"


def format_elem(e: Elem) -> str:
    if isinstance(e, tuple):
        return f"({format_elem(e[0])},{format_elem(e[1])})"
    return str(e)


@dataclass(frozen=True)
class Bounds:
    """Configurable universe bounds.

    ``max_object_card`` gates objects built by ``product``; ``max_hom_size``
    gates hom-set enumeration and monad value spaces (which behave like
    tabulated function spaces rather than universe objects).
    """

    max_object_card: int = 16
    max_hom_size: int = 65536


_DEFAULT_BOUNDS = Bounds(
    max_object_card=int(os.environ.get("OPTICFORGE_UNIVERSE_BOUND", "16"))
)


def default_bounds() -> Bounds:
    return _DEFAULT_BOUNDS


def set_default_bounds(bounds: Bounds) -> None:
    global _DEFAULT_BOUNDS
    _DEFAULT_BOUNDS = bounds


class FinObject:
    """A named finite set with a canonical element order.

    Objects are interned by name: constructing the same name twice returns
    the same instance, and a name clash with different elements is an error.
    Equality and hashing go through the name.
    """

    __slots__ = ("name", "elements", "index", "factors")

    def __init__(self, name: str, elements: tuple, factors=None):
        self.name = name
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.factors = factors
        if len(self.index) != len(self.elements):
            raise InvalidDeclaration(f"duplicate elements in {name!r}")

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinObject) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return f"FinObject({self.name!r}, {len(self)} elems)"


_REGISTRY: dict[str, FinObject] = {}
_REGISTRY_LOCK = threading.Lock()


def _intern(obj: FinObject) -> FinObject:
    with _REGISTRY_LOCK:
        existing = _REGISTRY.get(obj.name)
        if existing is None:
            _REGISTRY[obj.name] = obj
            return obj
    if existing.elements != obj.elements:
        raise InvalidDeclaration(
            f"object name {obj.name!r} already used with different elements"
        )
    return existing


def obj(name: str, elements) -> FinObject:
    """Declare (or fetch) a named finite set of atom tokens."""
    return _intern(FinObject(name, tuple(elements)))


UNIT = _intern(FinObject("I", (UNIT_ELEM,)))


def unit_object() -> FinObject:
    return UNIT


def product(a: FinObject, b: FinObject, bounds: Optional[Bounds] = None) -> FinObject:
    """Cartesian product object, elements in lexicographic (a-major) order."""
    bounds = bounds or default_bounds()
    if len(a) * len(b) > bounds.max_object_card:
        raise BoundExceeded(
            f"|{a.name}|*|{b.name}| = {len(a) * len(b)} exceeds object bound "
            f"{bounds.max_object_card}"
        )
    name = f"({a.name}*{b.name})"
    existing = _REGISTRY.get(name)
    if existing is not None:
        return existing
    elems = tuple((ea, eb) for ea in a.elements for eb in b.elements)
    return _intern(FinObject(name, elems, factors=(a, b)))


# --- category tags -----------------------------------------------------------

BASE = "base"


@dataclass(frozen=True)
class KleisliTag:
    """Marks morphisms of the Kleisli category of a strong monad."""

    monad: object  # StrongMonad; kept loose to avoid an import cycle

    def __repr__(self):
        return f"Kleisli({self.monad.id})"


def same_tag(t1, t2) -> bool:
    return t1 == t2


def is_kleisli(tag) -> bool:
    return isinstance(tag, KleisliTag)


# --- morphisms ---------------------------------------------------------------


class FinMorphism:
    """A tabulated function between finite objects.

    For a Kleisli-tagged morphism, ``target`` is the declared codomain and the
    stored values live in ``T(target)``.
    """

    __slots__ = ("source", "target", "values", "tag", "_hash")

    def __init__(self, source: FinObject, target: FinObject, values, tag=BASE):
        self.source = source
        self.target = target
        self.values = tuple(values)
        self.tag = tag
        if len(self.values) != len(source):
            raise TypeMismatch(
                f"table has {len(self.values)} entries for |{source.name}| = {len(source)}"
            )
        space = self.value_space()
        for v in self.values:
            if v not in space.index:
                raise TypeMismatch(
                    f"value {format_elem(v)} not an element of {space.name}"
                )
        self._hash = hash((source.name, target.name, self.values, _tag_key(tag)))

    def value_space(self) -> FinObject:
        if is_kleisli(self.tag):
            return self.tag.monad.apply(self.target)
        return self.target

    def __call__(self, e: Elem) -> Elem:
        return self.values[self.source.index[e]]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.values == other.values
            and self.tag == other.tag
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self):
        kind = "~>" if is_kleisli(self.tag) else "->"
        return f"<{self.source.name} {kind} {self.target.name}>"

    def table_str(self) -> str:
        pairs = ", ".join(
            f"{format_elem(e)}->{format_elem(v)}"
            for e, v in zip(self.source.elements, self.values)
        )
        return "{" + pairs + "}"


def _tag_key(tag):
    if is_kleisli(tag):
        return ("kleisli", tag.monad.id)
    return BASE


def morphism(source, target, mapping, tag=BASE) -> FinMorphism:
    """Build a morphism from a dict (or callable) on source elements."""
    if callable(mapping) and not isinstance(mapping, dict):
        values = tuple(mapping(e) for e in source.elements)
    else:
        values = tuple(mapping[e] for e in source.elements)
    return FinMorphism(source, target, values, tag)


def identity(x: FinObject) -> FinMorphism:
    return FinMorphism(x, x, x.elements)


def compose(f: FinMorphism, g: FinMorphism) -> FinMorphism:
    """Diagrammatic-order composite: apply ``f``, then ``g``.

    Handles all tag combinations: base;base, base;kleisli, kleisli;base
    (post-apply under the monad's functor action), kleisli;kleisli (bind).
    """
    if f.target != g.source:
        raise TypeMismatch(
            f"cannot compose {f.target.name} with {g.source.name}"
        )
    fk, gk = is_kleisli(f.tag), is_kleisli(g.tag)
    if not fk and not gk:
        return FinMorphism(f.source, g.target, (g(v) for v in f.values))
    if fk and gk and f.tag != g.tag:
        raise TypeMismatch("cannot compose Kleisli morphisms of different monads")
    monad = f.tag.monad if fk else g.tag.monad
    if not fk:
        values = (g(v) for v in f.values)
    elif not gk:
        values = (monad.tmap(g)(v) for v in f.values)
    else:
        values = (monad.bind_value(v, g) for v in f.values)
    return FinMorphism(f.source, g.target, values, KleisliTag(monad))


def pmor(f: FinMorphism, g: FinMorphism, bounds: Optional[Bounds] = None) -> FinMorphism:
    """Base product morphism f x g (both factors must be base-tagged)."""
    if is_kleisli(f.tag) or is_kleisli(g.tag):
        raise TypeMismatch("pmor takes base morphisms; use monad strength instead")
    src = product(f.source, g.source, bounds)
    tgt = product(f.target, g.target, bounds)
    return FinMorphism(src, tgt, (((f(e[0]), g(e[1]))) for e in src.elements))


def act(f: FinMorphism, x: FinObject, bounds: Optional[Bounds] = None) -> FinMorphism:
    """The action of a base morphism on the right factor's carrier: f (x) id_x."""
    return pmor(f, identity(x), bounds)


def act_left(m: FinObject, f: FinMorphism, bounds: Optional[Bounds] = None) -> FinMorphism:
    """m (.) f, for f of either tag; Kleisli case routes through strength."""
    if not is_kleisli(f.tag):
        return pmor(identity(m), f, bounds)
    monad = f.tag.monad
    src = product(m, f.source, bounds)
    tgt = product(m, f.target, bounds)
    values = (monad.strength_value(e[0], f(e[1]), m, f.target) for e in src.elements)
    return FinMorphism(src, tgt, values, f.tag)


# --- actegory structure maps -------------------------------------------------


def lunit(x: FinObject) -> FinMorphism:
    """lambda_x : I (.) x -> x."""
    return morphism(product(UNIT, x), x, lambda e: e[1])


def lunit_inv(x: FinObject) -> FinMorphism:
    return morphism(x, product(UNIT, x), lambda e: (UNIT_ELEM, e))


def runit(x: FinObject) -> FinMorphism:
    """rho_x : x (.) I -> x."""
    return morphism(product(x, UNIT), x, lambda e: e[0])


def runit_inv(x: FinObject) -> FinMorphism:
    return morphism(x, product(x, UNIT), lambda e: (e, UNIT_ELEM))


def assoc(m: FinObject, n: FinObject, x: FinObject, bounds=None) -> FinMorphism:
    """a_{m,n,x} : (m (x) n) (.) x -> m (.) (n (.) x)."""
    src = product(product(m, n, bounds), x, bounds)
    tgt = product(m, product(n, x, bounds), bounds)
    return morphism(src, tgt, lambda e: (e[0][0], (e[0][1], e[1])))


def assoc_inv(m: FinObject, n: FinObject, x: FinObject, bounds=None) -> FinMorphism:
    src = product(m, product(n, x, bounds), bounds)
    tgt = product(product(m, n, bounds), x, bounds)
    return morphism(src, tgt, lambda e: ((e[0], e[1][0]), e[1][1]))


def braid(a: FinObject, b: FinObject, bounds=None) -> FinMorphism:
    """sigma_{a,b} : a x b -> b x a."""
    return morphism(product(a, b, bounds), product(b, a, bounds), lambda e: (e[1], e[0]))


def diag(x: FinObject, bounds=None) -> FinMorphism:
    """Delta_x : x -> x x x."""
    return morphism(x, product(x, x, bounds), lambda e: (e, e))


def term(x: FinObject) -> FinMorphism:
    """!_x : x -> I."""
    return morphism(x, UNIT, lambda e: UNIT_ELEM)


def proj1(a: FinObject, b: FinObject, bounds=None) -> FinMorphism:
    return morphism(product(a, b, bounds), a, lambda e: e[0])


def proj2(a: FinObject, b: FinObject, bounds=None) -> FinMorphism:
    return morphism(product(a, b, bounds), b, lambda e: e[1])


def act_structure_maps(m: FinObject, n: FinObject, x: FinObject, bounds=None) -> dict:
    """The tabulated unitors/associator for (m, n, x) plus inverses."""
    return {
        "lunit": lunit(x),
        "lunit_inv": lunit_inv(x),
        "runit": runit(x),
        "runit_inv": runit_inv(x),
        "assoc": assoc(m, n, x, bounds),
        "assoc_inv": assoc_inv(m, n, x, bounds),
    }


# --- hom enumeration ---------------------------------------------------------

_HOM_CACHE: dict = {}


def hom_size(tag, a: FinObject, b: FinObject) -> int:
    if is_kleisli(tag):
        return len(tag.monad.apply(b)) ** len(a)
    return len(b) ** len(a)


def enumerate_homs(tag, a: FinObject, b: FinObject, bounds: Optional[Bounds] = None):
    """All morphisms a -> b under the tag, lexicographic in value tables."""
    bounds = bounds or default_bounds()
    size = hom_size(tag, a, b)
    if size > bounds.max_hom_size:
        raise BoundExceeded(
            f"hom({a.name}, {b.name}) has {size} entries, over bound "
            f"{bounds.max_hom_size}"
        )
    key = (_tag_key(tag), a.name, b.name)
    cached = _HOM_CACHE.get(key)
    if cached is not None:
        return cached
    space = tag.monad.apply(b) if is_kleisli(tag) else b
    homs = tuple(
        FinMorphism(a, b, values, tag)
        for values in itertools.product(space.elements, repeat=len(a))
    )
    _HOM_CACHE[key] = homs
    return homs


def iter_isos(a: FinObject, b: FinObject) -> Iterator[FinMorphism]:
    """All base bijections a -> b (empty when cardinalities differ)."""
    if len(a) != len(b):
        return
    for perm in itertools.permutations(b.elements):
        yield FinMorphism(a, b, perm)
