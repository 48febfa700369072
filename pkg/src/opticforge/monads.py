"""Strong monads on the finite cartesian base, and their Kleisli plumbing.

Four built-in shells: Identity, Maybe, Writer over a user-declared finite
monoid, and State over a user-declared finite set.  All are strong and
finite-preserving; Writer over a non-commutative monoid supplies the
non-commutative effect needed to exercise the monoidal failure of the
Kleisli category.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import BoundExceeded, InvalidDeclaration, TypeMismatch
from .fincat import (
    BASE,
    Elem,
    FinMorphism,
    FinObject,
    KleisliTag,
    UNIT_ELEM,
    _intern,
    compose,
    default_bounds,
    identity,
    morphism,
)


class StrongMonad:
    """A finite strong monad given by object map, unit, mult and strength.

    Value spaces ``T a`` are ordinary interned objects but are gated by the
    hom-size bound rather than the object-cardinality bound: they are
    tabulated function-space-like data, not universe members.
    """

    id: str

    def apply(self, a: FinObject) -> FinObject:
        obj = self._apply(a)
        if len(obj) > default_bounds().max_hom_size:
            raise BoundExceeded(
                f"|{self.id}({a.name})| = {len(obj)} exceeds the hom bound"
            )
        return obj

    # subclass surface -------------------------------------------------------
    def _apply(self, a: FinObject) -> FinObject:
        raise NotImplementedError

    def unit_value(self, e: Elem, a: FinObject) -> Elem:
        raise NotImplementedError

    def bind_value(self, t: Elem, k: FinMorphism) -> Elem:
        """Bind a T-value against a Kleisli morphism's table."""
        raise NotImplementedError

    def map_value(self, t: Elem, f: Callable[[Elem], Elem], a: FinObject, b: FinObject) -> Elem:
        raise NotImplementedError

    def strength_value(self, em: Elem, t: Elem, m: FinObject, a: FinObject) -> Elem:
        """st : m x T a -> T (m x a) applied to one pair."""
        return self.map_value(t, lambda e: (em, e), a, self._pair_target(m, a))

    def _pair_target(self, m, a):
        from .fincat import product

        return product(m, a)

    # derived operations -----------------------------------------------------
    def tag(self) -> KleisliTag:
        return KleisliTag(self)

    def unit(self, a: FinObject) -> FinMorphism:
        """The pure identity a ~> a, i.e. unit as a Kleisli morphism."""
        return FinMorphism(a, a, (self.unit_value(e, a) for e in a.elements), self.tag())

    def unit_arrow(self, a: FinObject) -> FinMorphism:
        """unit as a base morphism a -> T a."""
        return FinMorphism(a, self.apply(a), (self.unit_value(e, a) for e in a.elements))

    def mult_arrow(self, a: FinObject) -> FinMorphism:
        """mult as a base morphism T T a -> T a."""
        ta = self.apply(a)
        tta = self.apply(ta)
        ident = self.pure_lift(identity(a))
        return FinMorphism(tta, ta, (self.bind_value(t, ident) for t in tta.elements))

    def tmap(self, g: FinMorphism) -> Callable[[Elem], Elem]:
        """The functor action on a base morphism, as a value map T a -> T b."""
        if g.tag != BASE:
            raise TypeMismatch("tmap expects a base morphism")
        return lambda t: self.map_value(t, g, g.source, g.target)

    def pure_lift(self, f: FinMorphism) -> FinMorphism:
        """Lift a base morphism to the Kleisli category: f ; unit."""
        if g_is_kleisli(f):
            raise TypeMismatch("pure_lift expects a base morphism")
        return FinMorphism(
            f.source,
            f.target,
            (self.unit_value(f(e), f.target) for e in f.source.elements),
            self.tag(),
        )

    def strength_arrow(self, m: FinObject, a: FinObject) -> FinMorphism:
        """st_{m,a} : m x T a -> T (m x a) as a base morphism."""
        from .fincat import product

        src = product(m, self.apply(a))
        tgt = self.apply(product(m, a))
        return FinMorphism(
            src, tgt, (self.strength_value(e[0], e[1], m, a) for e in src.elements)
        )

    def is_pure_value(self, t: Elem, a: FinObject):
        """Return the unique e with unit(e) == t, or None."""
        hits = [e for e in a.elements if self.unit_value(e, a) == t]
        return hits[0] if len(hits) == 1 else None

    def __repr__(self):
        return f"StrongMonad({self.id})"


def g_is_kleisli(f: FinMorphism) -> bool:
    return isinstance(f.tag, KleisliTag)


# --- Identity -----------------------------------------------------------------


class IdentityMonad(StrongMonad):
    id = "Identity"

    def _apply(self, a):
        return a

    def unit_value(self, e, a):
        return e

    def bind_value(self, t, k):
        return k(t)

    def map_value(self, t, f, a, b):
        return f(t)

    def strength_value(self, em, t, m, a):
        return (em, t)


# --- Maybe --------------------------------------------------------------------

NOTHING = "nothing"


class MaybeMonad(StrongMonad):
    id = "Maybe"

    def _apply(self, a):
        name = f"Maybe({a.name})"
        elems = tuple(("just", e) for e in a.elements) + (NOTHING,)
        return _intern_monad_obj(name, elems)

    def unit_value(self, e, a):
        return ("just", e)

    def bind_value(self, t, k):
        if t == NOTHING:
            return NOTHING
        return k(t[1])

    def map_value(self, t, f, a, b):
        if t == NOTHING:
            return NOTHING
        return ("just", f(t[1]))


# --- Writer -------------------------------------------------------------------


@dataclass(frozen=True)
class Monoid:
    """A finite monoid on a declared carrier (table-checked on construction)."""

    carrier: FinObject
    unit: Elem
    op: dict

    def __post_init__(self):
        if self.unit not in self.carrier.index:
            raise InvalidDeclaration("monoid unit not in carrier")
        for a in self.carrier.elements:
            for b in self.carrier.elements:
                if (a, b) not in self.op:
                    raise InvalidDeclaration(f"monoid op missing ({a},{b})")
        for a in self.carrier.elements:
            if self.op[(self.unit, a)] != a or self.op[(a, self.unit)] != a:
                raise InvalidDeclaration("monoid unit law fails")
        for a in self.carrier.elements:
            for b in self.carrier.elements:
                for c in self.carrier.elements:
                    if self.op[(self.op[(a, b)], c)] != self.op[(a, self.op[(b, c)])]:
                        raise InvalidDeclaration("monoid associativity fails")

    def mul(self, a, b):
        return self.op[(a, b)]


class WriterMonad(StrongMonad):
    def __init__(self, monoid: Monoid, name: str = None):
        self.monoid = monoid
        self.id = name or f"Writer[{monoid.carrier.name}]"

    def _apply(self, a):
        name = f"{self.id}({a.name})"
        elems = tuple((w, e) for w in self.monoid.carrier.elements for e in a.elements)
        return _intern_monad_obj(name, elems)

    def unit_value(self, e, a):
        return (self.monoid.unit, e)

    def bind_value(self, t, k):
        w1, e = t
        w2, r = k(e)
        return (self.monoid.mul(w1, w2), r)

    def map_value(self, t, f, a, b):
        return (t[0], f(t[1]))

    def strength_value(self, em, t, m, a):
        return (t[0], (em, t[1]))


# --- State --------------------------------------------------------------------


class StateMonad(StrongMonad):
    """State over a finite state set; T a values encode functions S -> a x S
    as right-nested pair trees in state order."""

    def __init__(self, states: FinObject, name: str = None):
        self.states = states
        self.id = name or f"State[{states.name}]"

    def _apply(self, a):
        import itertools as _it

        name = f"{self.id}({a.name})"
        results = tuple((e, s) for e in a.elements for s in self.states.elements)
        elems = tuple(
            self._encode(combo)
            for combo in _it.product(results, repeat=len(self.states))
        )
        return _intern_monad_obj(name, elems)

    def _encode(self, results):
        if len(results) == 1:
            return results[0]
        return (results[0], self._encode(results[1:]))

    def _decode(self, t):
        out = []
        n = len(self.states)
        for _ in range(n - 1):
            out.append(t[0])
            t = t[1]
        out.append(t)
        return out

    def run(self, t, s):
        return self._decode(t)[self.states.index[s]]

    def unit_value(self, e, a):
        return self._encode(tuple((e, s) for s in self.states.elements))

    def bind_value(self, t, k):
        results = []
        for s in self.states.elements:
            e, s1 = self.run(t, s)
            results.append(self.run(k(e), s1))
        return self._encode(tuple(results))

    def map_value(self, t, f, a, b):
        results = []
        for s in self.states.elements:
            e, s1 = self.run(t, s)
            results.append((f(e), s1))
        return self._encode(tuple(results))

    def strength_value(self, em, t, m, a):
        results = []
        for s in self.states.elements:
            e, s1 = self.run(t, s)
            results.append(((em, e), s1))
        return self._encode(tuple(results))


def _intern_monad_obj(name, elems):
    from .fincat import FinObject

    return _intern(FinObject(name, elems))


# --- built-in constructors ----------------------------------------------------

IDENTITY = IdentityMonad()
MAYBE = MaybeMonad()


def writer_monad(monoid: Monoid, name: str = None) -> WriterMonad:
    return WriterMonad(monoid, name)


def state_monad(states: FinObject, name: str = None) -> StateMonad:
    return StateMonad(states, name)


def monad_ops(monad: StrongMonad) -> dict:
    """The standard operation bundle for a monad."""
    return {
        "apply": monad.apply,
        "pure_lift": monad.pure_lift,
        "bind": monad.bind_value,
        "strength": monad.strength_arrow,
    }


def kleisli_compose(f: FinMorphism, g: FinMorphism) -> FinMorphism:
    return compose(f, g)
