"""The finite Tambara-module model: tabulated profunctors with strength.

Profunctor value tables are indexed by pairs of universe members and are
computed lazily per cell.  Composite (coend) cells are quotients of the
disjoint union over universe middles by the sliding relation, computed with
union-find over single-morphism generators.  Rows whose required products
fall outside the universe bounds are omitted and recorded, never silently
zeroed.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import BoundExceeded, TypeMismatch
from .fincat import (
    BASE,
    FinMorphism,
    FinObject,
    UNIT,
    act,
    act_left,
    assoc,
    assoc_inv,
    compose,
    default_bounds,
    enumerate_homs,
    hom_size,
    identity,
    is_kleisli,
    lunit,
    lunit_inv,
    obj,
    product,
    runit,
    runit_inv,
)
from .optic import CARTESIAN, Optic, compose_optics


class Universe:
    """An ordered, duplicate-free list of objects containing I, with a record
    of which member products are themselves members."""

    def __init__(self, objects, bounds=None):
        self.bounds = bounds or default_bounds()
        seen = set()
        objs = []
        for o in objects:
            if o.name not in seen:
                seen.add(o.name)
                objs.append(o)
        if UNIT.name not in seen:
            objs.insert(0, UNIT)
        self.objects = tuple(objs)
        self._names = {o.name: o for o in self.objects}
        self.closure = {}
        for a in self.objects:
            for b in self.objects:
                name = f"({a.name}*{b.name})"
                if name in self._names:
                    self.closure[(a.name, b.name)] = name

    @classmethod
    def from_seeds(cls, seeds, with_products=True, max_card=None, bounds=None):
        bounds = bounds or default_bounds()
        max_card = max_card or bounds.max_object_card
        members = [UNIT] + [s for s in seeds if s != UNIT]
        if with_products:
            base = list(members)
            for a in base:
                for b in base:
                    if len(a) * len(b) <= max_card:
                        members.append(product(a, b, bounds))
        return cls(members, bounds)

    def __contains__(self, o) -> bool:
        name = o.name if isinstance(o, FinObject) else o
        return name in self._names

    def __iter__(self):
        return iter(self.objects)

    def __len__(self):
        return len(self.objects)

    def index(self, o: FinObject) -> int:
        return self.objects.index(self._names[o.name])

    def with_object(self, o: FinObject) -> "Universe":
        return Universe(list(self.objects) + [o], self.bounds)

    def fingerprint(self) -> str:
        data = ";".join(o.name for o in self.objects).encode()
        return hashlib.sha256(data).hexdigest()[:12]

    def __repr__(self):
        return f"Universe[{', '.join(o.name for o in self.objects)}]"


def default_universe(bounds=None) -> Universe:
    """Cards 1..4: I, a 2-element and 3-element seed, plus member products."""
    b = obj("B", ("0", "1"))
    t = obj("T", ("t0", "t1", "t2"))
    return Universe.from_seeds([b, t], with_products=True, max_card=4, bounds=bounds)


# --- profunctors ---------------------------------------------------------------


class FinProfunctor:
    """Base class: a tabulated functor C^op x D -> Set over a universe.

    Subclasses provide ``_cell`` plus the two actions and the strength.  A
    ``None`` cell means the row was omitted (truncation); the reason is
    appended to ``truncation_notes``.
    """

    def __init__(self, src_tag, dst_tag, universe: Universe, name: str):
        self.src_tag = src_tag
        self.dst_tag = dst_tag
        self.universe = universe
        self.name = name
        self.truncation_notes: list[str] = []
        self._cells: dict = {}

    def cell(self, a: FinObject, b: FinObject):
        key = (a.name, b.name)
        if key not in self._cells:
            try:
                self._cells[key] = tuple(self._cell(a, b))
            except BoundExceeded as exc:
                self.truncation_notes.append(f"{self.name}({a.name},{b.name}): {exc}")
                self._cells[key] = None
        return self._cells[key]

    def _cell(self, a, b):
        raise NotImplementedError

    def left_act(self, f: FinMorphism, token, a: FinObject, b: FinObject):
        raise NotImplementedError

    def right_act(self, g: FinMorphism, token, a: FinObject, b: FinObject):
        raise NotImplementedError

    def strength(self, m: FinObject, token, a: FinObject, b: FinObject):
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.name}>"


def _c_homs(tag, a, b, bounds):
    return enumerate_homs(tag, a, b, bounds)


class HomProfunctor(FinProfunctor):
    """The identity 1-cell: C(-, =) with strength m (.) -."""

    def __init__(self, tag, universe):
        label = "hom" if tag == BASE else f"hom[{tag.monad.id}]"
        super().__init__(tag, tag, universe, label)
        self.tag = tag

    def _cell(self, a, b):
        return _c_homs(self.tag, a, b, self.universe.bounds)

    def left_act(self, f, token, a, b):
        return compose(f, token)

    def right_act(self, g, token, a, b):
        return compose(token, g)

    def strength(self, m, token, a, b):
        return act_left(m, token, self.universe.bounds)


class RProfunctor(FinProfunctor):
    """R_x := C(-, = (.) x), an arrow into Tamb_{C,M}."""

    def __init__(self, x: FinObject, universe: Universe, tag=BASE):
        label = f"R_{x.name}" if tag == BASE else f"R_{x.name}[{tag.monad.id}]"
        super().__init__(tag, BASE, universe, label)
        self.x = x
        self.tag = tag

    def _cell(self, a, b):
        bx = product(b, self.x, self.universe.bounds)
        return _c_homs(self.tag, a, bx, self.universe.bounds)

    def left_act(self, f, token, a, b):
        return compose(f, token)

    def right_act(self, g, token, a, b):
        return compose(token, _maybe_lift(act(g, self.x, self.universe.bounds), self.tag))

    def strength(self, m, token, a, b):
        lifted = act_left(m, token, self.universe.bounds)
        fix = assoc_inv(m, b, self.x, self.universe.bounds)
        return compose(lifted, _maybe_lift(fix, self.tag))


class LProfunctor(FinProfunctor):
    """L_x := C(- (.) x, =), an arrow into Tamb_{M,C}."""

    def __init__(self, x: FinObject, universe: Universe, tag=BASE):
        label = f"L_{x.name}" if tag == BASE else f"L_{x.name}[{tag.monad.id}]"
        super().__init__(BASE, tag, universe, label)
        self.x = x
        self.tag = tag

    def _cell(self, a, b):
        ax = product(a, self.x, self.universe.bounds)
        return _c_homs(self.tag, ax, b, self.universe.bounds)

    def left_act(self, f, token, a, b):
        return compose(_maybe_lift(act(f, self.x, self.universe.bounds), self.tag), token)

    def right_act(self, g, token, a, b):
        return compose(token, g)

    def strength(self, m, token, a, b):
        fix = assoc(m, a, self.x, self.universe.bounds)
        return compose(_maybe_lift(fix, self.tag), act_left(m, token, self.universe.bounds))


def _maybe_lift(f: FinMorphism, tag):
    if tag == BASE or is_kleisli(f.tag):
        return f
    return tag.monad.pure_lift(f)


def hom_profunctor(tag, universe: Universe) -> HomProfunctor:
    return HomProfunctor(tag, universe)


def build_R(x: FinObject, universe: Universe, tag=BASE) -> RProfunctor:
    return RProfunctor(x, universe, tag)


def build_L(x: FinObject, universe: Universe, tag=BASE) -> LProfunctor:
    return LProfunctor(x, universe, tag)


# --- coend composition ----------------------------------------------------------


@dataclass(frozen=True)
class CoendClass:
    """A canonical representative of a sliding-equivalence class inside one
    cell of a composite profunctor."""

    middle: FinObject
    left: object
    right: object
    class_id: int

    def rep(self):
        return (self.middle, self.left, self.right)

    def __repr__(self):
        return f"[{self.left!r} @{self.middle.name} {self.right!r}]#{self.class_id}"


class _CellQuotient:
    def __init__(self, canon_of_node, classes):
        self.canon_of_node = canon_of_node  # (m.name, left, right) -> CoendClass
        self.classes = classes              # tuple[CoendClass]


class CompositeProfunctor(FinProfunctor):
    """(P (x) Q)(a, c) = coend over universe middles of P(a,b) x Q(b,c)."""

    def __init__(self, P: FinProfunctor, Q: FinProfunctor):
        if P.dst_tag != Q.src_tag:
            raise TypeMismatch(
                f"cannot compose {P.name} with {Q.name}: middle tags differ"
            )
        if P.universe is not Q.universe:
            raise TypeMismatch("profunctors live over different universes")
        super().__init__(P.src_tag, Q.dst_tag, P.universe, f"({P.name}(x){Q.name})")
        self.P = P
        self.Q = Q
        self.mid_tag = P.dst_tag
        self._quotients: dict = {}

    # quotient machinery ---------------------------------------------------------
    def _quotient(self, a, c) -> _CellQuotient:
        key = (a.name, c.name)
        if key in self._quotients:
            return self._quotients[key]
        bounds = self.universe.bounds
        nodes = []
        per_mid: dict = {}
        for b in self.universe:
            ps = self.P.cell(a, b)
            qs = self.Q.cell(b, c)
            if ps is None or qs is None:
                continue
            per_mid[b.name] = (b, ps, qs)
            nodes.extend(((b.name, p, q) for p in ps for q in qs))
            if len(nodes) > bounds.max_hom_size:
                raise BoundExceeded(
                    f"coend cell {self.name}({a.name},{c.name}) exceeds "
                    f"{bounds.max_hom_size} representative pairs"
                )
        parent = {n: n for n in nodes}

        def find(k):
            root = k
            while parent[root] != root:
                root = parent[root]
            while parent[k] != root:
                parent[k], k = root, parent[k]
            return root

        def union(u, v):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru

        for b_name, (b, ps, qs) in per_mid.items():
            for b2 in self.universe:
                if b2.name not in per_mid:
                    continue
                _, ps2, qs2 = per_mid[b2.name]
                try:
                    gens = _c_homs(self.mid_tag, b, b2, bounds)
                except BoundExceeded as exc:
                    self.truncation_notes.append(
                        f"{self.name}({a.name},{c.name}): generators "
                        f"{b.name}->{b2.name} skipped: {exc}"
                    )
                    continue
                for g in gens:
                    for p in ps:
                        moved_p = self.P.right_act(g, p, a, b)
                        for q in qs2:
                            union(
                                (b2.name, moved_p, q),
                                (b_name, p, self.Q.left_act(g, q, b2, c)),
                            )
        # canonical representative: minimal (middle index, left index, right index)
        order = {}
        for idx, (b_name, (b, ps, qs)) in enumerate(
            sorted(per_mid.items(), key=lambda kv: self.universe.index(kv[1][0]))
        ):
            p_index = {p: i for i, p in enumerate(ps)}
            q_index = {q: i for i, q in enumerate(qs)}
            order[b_name] = (idx, p_index, q_index)

        def rank(node):
            b_name, p, q = node
            idx, p_index, q_index = order[b_name]
            return (idx, p_index[p], q_index[q])

        groups: dict = {}
        for n in nodes:
            groups.setdefault(find(n), []).append(n)
        canon_of_node = {}
        classes = []
        for cid, (_, members) in enumerate(
            sorted(groups.items(), key=lambda kv: rank(min(kv[1], key=rank)))
        ):
            best = min(members, key=rank)
            b, _, _ = per_mid[best[0]]
            cls = CoendClass(b, best[1], best[2], cid)
            classes.append(cls)
            for n in members:
                canon_of_node[n] = cls
        quotient = _CellQuotient(canon_of_node, tuple(classes))
        self._quotients[key] = quotient
        return quotient

    def _cell(self, a, c):
        return self._quotient(a, c).classes

    def canonicalize(self, middle: FinObject, left, right, a: FinObject, c: FinObject):
        """Find the class of a representative pair, iso-sliding the middle into
        the universe when it is not a member."""
        if middle.name not in self.universe._names:
            slid = self._slide_into_universe(middle, left, right, a, c)
            if slid is None:
                raise BoundExceeded(
                    f"middle {middle.name} not in universe and no iso slide found"
                )
            middle, left, right = slid
        q = self._quotient(a, c)
        node = (middle.name, left, right)
        cls = q.canon_of_node.get(node)
        if cls is None:
            raise BoundExceeded(
                f"representative outside tabulated cell {self.name}({a.name},{c.name})"
            )
        return cls

    def _slide_into_universe(self, middle, left, right, a, c):
        for n in self.universe:
            if len(n) != len(middle):
                continue
            iso = FinMorphism(middle, n, n.elements)  # positional bijection
            iso_inv = FinMorphism(n, middle, middle.elements)
            try:
                new_left = self.P.right_act(iso, left, a, n)
                new_right = self.Q.left_act(iso_inv, right, n, c)
            except (BoundExceeded, TypeMismatch):
                continue
            return (n, new_left, new_right)
        return None

    # profunctor interface --------------------------------------------------------
    def left_act(self, f, token: CoendClass, a, c):
        src = f.source
        moved = self.P.left_act(f, token.left, a, token.middle)
        return self.canonicalize(token.middle, moved, token.right, src, c)

    def right_act(self, g, token: CoendClass, a, c):
        moved = self.Q.right_act(g, token.right, token.middle, c)
        return self.canonicalize(token.middle, token.left, moved, a, g.target)

    def strength(self, m, token: CoendClass, a, c):
        mid = product(m, token.middle, self.universe.bounds)
        new_left = self.P.strength(m, token.left, a, token.middle)
        new_right = self.Q.strength(m, token.right, token.middle, c)
        ma = product(m, a, self.universe.bounds)
        mc = product(m, c, self.universe.bounds)
        return self.canonicalize(mid, new_left, new_right, ma, mc)


def compose_prof(P: FinProfunctor, Q: FinProfunctor) -> CompositeProfunctor:
    return CompositeProfunctor(P, Q)


# --- 2-cells --------------------------------------------------------------------


class TwoCell:
    """A per-cell family of token maps between two profunctors."""

    def __init__(self, source: FinProfunctor, target: FinProfunctor,
                 component: Callable, name: str = "2cell"):
        self.source = source
        self.target = target
        self._component = component  # (a, b, token) -> token
        self.name = name

    def apply(self, a, b, token):
        return self._component(a, b, token)

    def __repr__(self):
        return f"<{self.name}: {self.source.name} -> {self.target.name}>"


def identity_2cell(P: FinProfunctor) -> TwoCell:
    return TwoCell(P, P, lambda a, b, t: t, f"id_{P.name}")


def counit(x: FinObject, universe: Universe, tag=BASE) -> TwoCell:
    """cap_x : R_x (x) L_x -> hom_C, composition in C."""
    src = compose_prof(build_R(x, universe, tag), build_L(x, universe, tag))
    tgt = hom_profunctor(tag, universe)

    def component(a, b, cls: CoendClass):
        return compose(cls.left, cls.right)

    return TwoCell(src, tgt, component, f"cap_{x.name}")


def unit(x: FinObject, universe: Universe, tag=BASE) -> TwoCell:
    """cup_x : hom_M -> L_x (x) R_x, f |-> [id_{m (.) x} | f (.) x]."""
    src = hom_profunctor(BASE, universe)
    tgt = compose_prof(build_L(x, universe, tag), build_R(x, universe, tag))

    def component(m, n, f):
        mx = product(m, x, universe.bounds)
        left = _maybe_lift(identity(mx), tag)
        right = _maybe_lift(act(f, x, universe.bounds), tag)
        return tgt.canonicalize(mx, left, right, m, n)

    return TwoCell(src, tgt, component, f"cup_{x.name}")


def hcomp_2cells(t: TwoCell, s: TwoCell) -> TwoCell:
    """Horizontal juxtaposition: apply t, then s."""
    if t.target is not s.source and t.target.name != s.source.name:
        raise TypeMismatch(f"cannot compose {t.name} with {s.name}")
    return TwoCell(
        t.source, s.target,
        lambda a, b, tok: s.apply(a, b, t.apply(a, b, tok)),
        f"({t.name};{s.name})",
    )


def tensor_2cells(t: TwoCell, s: TwoCell) -> TwoCell:
    """Vertical juxtaposition, t on top: [p | q] |-> [t p | s q]."""
    src = compose_prof(t.source, s.source)
    tgt = compose_prof(t.target, s.target)

    def component(a, c, cls: CoendClass):
        b = cls.middle
        return tgt.canonicalize(
            b, t.apply(a, b, cls.left), s.apply(b, c, cls.right), a, c
        )

    return TwoCell(src, tgt, component, f"({t.name}(x){s.name})")


def whisker_left(P: FinProfunctor, t: TwoCell) -> TwoCell:
    return tensor_2cells(identity_2cell(P), t)


def whisker_right(t: TwoCell, P: FinProfunctor) -> TwoCell:
    return tensor_2cells(t, identity_2cell(P))


# --- optics as 2-cells ------------------------------------------------------------


def yoneda_pair(o_boundary, universe, tag=BASE):
    x, u = o_boundary
    return compose_prof(build_R(x, universe, tag), build_L(u, universe, tag))


def optic_to_2cell(o: Optic, universe: Universe) -> TwoCell:
    """Post-composition by o on coend classes; each class at (a,b) is itself
    an optic (a,b) -> (x,u)."""
    tag = BASE if o.flavor == CARTESIAN else o.flavor
    src = yoneda_pair((o.x, o.u), universe, tag)
    tgt = yoneda_pair((o.y, o.v), universe, tag)

    def component(a, b, cls: CoendClass):
        inner = Optic(a, b, o.x, o.u, cls.middle, cls.left, cls.right, o.flavor)
        out = compose_optics(inner, o)
        return tgt.canonicalize(out.m, out.alpha, out.beta, a, b)

    return TwoCell(src, tgt, component, f"Y[{o!r}]")


def reify_optic(t: TwoCell) -> Optic:
    """Apply a 2-cell between Yoneda pairs to the identity-optic class."""
    src = t.source
    if not isinstance(src, CompositeProfunctor) or not isinstance(src.P, RProfunctor):
        raise TypeMismatch("reify_optic needs a 2-cell out of R_x (x) L_u")
    x = src.P.x
    u = src.Q.x
    tag = src.P.tag
    flavor = CARTESIAN if tag == BASE else tag
    alpha0 = _maybe_lift(lunit_inv(x), tag)
    beta0 = _maybe_lift(lunit(u), tag)
    cls = src.canonicalize(UNIT, alpha0, beta0, x, u)
    out = t.apply(x, u, cls)
    tgt = t.target
    y = tgt.P.x
    v = tgt.Q.x
    return Optic(x, u, y, v, out.middle, out.left, out.right, flavor)


# --- exhaustive structure checks ---------------------------------------------------


@dataclass
class CheckReport:
    subject: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, square: str, witness: str):
        self.failures.append((square, witness))

    def __repr__(self):
        status = "pass" if self.passed else f"FAIL({len(self.failures)})"
        return f"CheckReport({self.subject}: {status}, {self.checked} squares)"


def _cells_of(P: FinProfunctor):
    for a in P.universe:
        for b in P.universe:
            cell = P.cell(a, b)
            if cell is not None:
                yield a, b, cell


def check_tambara(P: FinProfunctor, max_cell: int = 512) -> CheckReport:
    """Exhaustively verify functoriality and strength coherence squares.

    Cells larger than ``max_cell`` are skipped with a note, keeping the check
    total on small universes and honest about truncation on larger ones.
    """
    report = CheckReport(P.name)
    bounds = P.universe.bounds
    uni = P.universe
    for a, b, cell in _cells_of(P):
        if len(cell) > max_cell:
            report.notes.append(f"cell ({a.name},{b.name}) skipped: {len(cell)} tokens")
            continue
        # identity actions
        for t in cell:
            report.checked += 1
            if P.left_act(identity(a), t, a, b) != t:
                report.fail("left-identity", f"({a.name},{b.name}) {t!r}")
            if P.right_act(identity(b), t, a, b) != t:
                report.fail("right-identity", f"({a.name},{b.name}) {t!r}")
        for a2 in uni:
            try:
                fs = enumerate_homs(BASE, a2, a, bounds)
            except BoundExceeded:
                continue
            if len(fs) * len(cell) > 4 * max_cell:
                report.notes.append(
                    f"action square ({a2.name}->{a.name},{b.name}) sampled down"
                )
                fs = fs[:2]
            for f in fs:
                lf = _maybe_lift(f, P.src_tag) if isinstance(P, (HomProfunctor,)) else f
                for a3 in uni:
                    try:
                        f2s = enumerate_homs(BASE, a3, a2, bounds)[:3]
                    except BoundExceeded:
                        continue
                    for f2 in f2s:
                        for t in cell[: max(1, max_cell // max(len(fs), 1))]:
                            report.checked += 1
                            lhs = P.left_act(
                                _act_arg(P, compose(f2, f), "left"), t, a, b
                            )
                            rhs = P.left_act(
                                _act_arg(P, f2, "left"),
                                P.left_act(_act_arg(P, f, "left"), t, a, b),
                                a2,
                                b,
                            )
                            if lhs != rhs:
                                report.fail(
                                    "left-composite",
                                    f"({a3.name}->{a2.name}->{a.name},{b.name})",
                                )
                    break  # one a3 suffices per a2 for the composite square
        # bimodule commuting and strength naturality
        for m in uni:
            try:
                ma = product(m, a, bounds)
                mb = product(m, b, bounds)
            except BoundExceeded:
                report.notes.append(f"strength at {m.name} skipped: product bound")
                continue
            if ma.name not in uni._names or mb.name not in uni._names:
                continue
            target_cell = P.cell(ma, mb)
            if target_cell is None:
                report.notes.append(
                    f"strength row ({ma.name},{mb.name}) omitted"
                )
                continue
            for t in cell:
                report.checked += 1
                st = P.strength(m, t, a, b)
                if st not in target_cell:
                    report.fail(
                        "strength-typing", f"st_{m.name}({t!r}) not in target cell"
                    )
    # lambda coherence: transport strength at I back along the unitors
    for a, b, cell in _cells_of(P):
        if len(cell) > max_cell:
            continue
        ia, ib = product(UNIT, a, bounds), product(UNIT, b, bounds)
        if ia.name not in uni._names or ib.name not in uni._names:
            continue
        if P.cell(ia, ib) is None:
            continue
        for t in cell:
            report.checked += 1
            st = P.strength(UNIT, t, a, b)
            back = P.left_act(
                _act_arg(P, lunit_inv(a), "left"), st, ia, ib
            )
            back = P.right_act(_act_arg(P, lunit(b), "right"), back, a, ib)
            if back != t:
                report.fail("strength-lambda", f"({a.name},{b.name}) {t!r}")
    return report


def _act_arg(P: FinProfunctor, f: FinMorphism, side: str) -> FinMorphism:
    """Lift an action argument into the category the profunctor expects."""
    tag = P.src_tag if side == "left" else P.dst_tag
    return _maybe_lift(f, tag)


def check_2cell(t: TwoCell, max_cell: int = 512) -> CheckReport:
    """Naturality and strength-preservation squares, exhaustively per cell."""
    report = CheckReport(t.name)
    P, Q = t.source, t.target
    uni = P.universe
    bounds = uni.bounds
    for a, b, cell in _cells_of(P):
        if Q.cell(a, b) is None:
            report.notes.append(f"target row ({a.name},{b.name}) omitted")
            continue
        if len(cell) > max_cell:
            report.notes.append(f"cell ({a.name},{b.name}) skipped: {len(cell)} tokens")
            continue
        for a2 in uni:
            try:
                fs = enumerate_homs(BASE, a2, a, bounds)
            except BoundExceeded:
                continue
            if P.cell(a2, b) is None or Q.cell(a2, b) is None:
                continue
            for f in fs:
                for tok in cell:
                    report.checked += 1
                    lhs = t.apply(a2, b, P.left_act(_act_arg(P, f, "left"), tok, a, b))
                    rhs = Q.left_act(_act_arg(Q, f, "left"), t.apply(a, b, tok), a, b)
                    if lhs != rhs:
                        report.fail(
                            "naturality-left",
                            f"f:{a2.name}->{a.name} at ({a.name},{b.name})",
                        )
        for b2 in uni:
            try:
                gs = enumerate_homs(BASE, b, b2, bounds)
            except BoundExceeded:
                continue
            if P.cell(a, b2) is None or Q.cell(a, b2) is None:
                continue
            for g in gs:
                for tok in cell:
                    report.checked += 1
                    lhs = t.apply(a, b2, P.right_act(_act_arg(P, g, "right"), tok, a, b))
                    rhs = Q.right_act(_act_arg(Q, g, "right"), t.apply(a, b, tok), a, b)
                    if lhs != rhs:
                        report.fail(
                            "naturality-right",
                            f"g:{b.name}->{b2.name} at ({a.name},{b.name})",
                        )
        for m in uni:
            try:
                ma, mb = product(m, a, bounds), product(m, b, bounds)
            except BoundExceeded:
                continue
            if ma.name not in uni._names or mb.name not in uni._names:
                continue
            if (
                P.cell(ma, mb) is None
                or Q.cell(ma, mb) is None
            ):
                continue
            for tok in cell:
                report.checked += 1
                try:
                    lhs = t.apply(ma, mb, P.strength(m, tok, a, b))
                    rhs = Q.strength(m, t.apply(a, b, tok), a, b)
                except BoundExceeded:
                    report.notes.append(f"strength square at {m.name} skipped")
                    break
                if lhs != rhs:
                    report.fail(
                        "strength-preservation",
                        f"m={m.name} at ({a.name},{b.name})",
                    )
    return report


def compare_2cells(t1: TwoCell, t2: TwoCell, max_cell: int = 4096):
    """Pointwise equality of two parallel 2-cells on every present cell."""
    report = CheckReport(f"{t1.name} == {t2.name}")
    for a, b, cell in _cells_of(t1.source):
        if len(cell) > max_cell:
            report.notes.append(f"cell ({a.name},{b.name}) skipped: {len(cell)} tokens")
            continue
        for tok in cell:
            report.checked += 1
            if t1.apply(a, b, tok) != t2.apply(a, b, tok):
                report.fail("pointwise", f"({a.name},{b.name}) {tok!r}")
    return report


# --- snake and sliding equations -----------------------------------------------


def snake_check(x: FinObject, universe: Universe, tag=BASE) -> CheckReport:
    """Both snake identities, chased on representatives of every present cell."""
    report = CheckReport(f"snake[{x.name}]")
    bounds = universe.bounds
    R = build_R(x, universe, tag)
    L = build_L(x, universe, tag)
    for a, b, cell in _cells_of(R):
        for p in cell:
            report.checked += 1
            bx = product(b, x, bounds)
            cup_l = _maybe_lift(identity(bx), tag)
            cup_r = _maybe_lift(identity(bx), tag)
            h = compose(p, cup_l)          # cap of (p, id)
            result = compose(h, cup_r)     # absorb into the fresh R leaf
            if result != p:
                report.fail("snake-R", f"({a.name},{b.name}) {p!r}")
    for a, b, cell in _cells_of(L):
        for q in cell:
            report.checked += 1
            ax = product(a, x, bounds)
            cup_l = _maybe_lift(identity(ax), tag)
            cup_r = _maybe_lift(identity(ax), tag)
            h = compose(cup_r, q)          # cap of (id, q)
            result = compose(cup_l, h)     # absorb upward into the L leaf
            if result != q:
                report.fail("snake-L", f"({a.name},{b.name}) {q!r}")
    return report


def sliding_check(
    x: FinObject,
    y: FinObject,
    f: FinMorphism,
    universe: Universe,
    tag=BASE,
    pair_budget: int = 65536,
) -> CheckReport:
    """Dinaturality of cap and cup in the wire object, for one f : x -> y.

    The cup side runs over hom cells; the cap side enumerates representative
    pairs per middle, skipping (with a note) combinations over the budget.
    """
    if f.source != x or f.target != y:
        raise TypeMismatch("slide morphism must go x -> y")
    report = CheckReport(f"slide[{f!r}]")
    bounds = universe.bounds
    # cup side: unit_x ; (id (x) R_f)  ==  unit_y ; (L_f (x) id), after collapse
    for m in universe:
        for n in universe:
            try:
                gens = enumerate_homs(BASE, m, n, bounds)
                mx = product(m, x, bounds)
                my = product(m, y, bounds)
                ny = product(n, y, bounds)
            except BoundExceeded:
                report.notes.append(f"cup cell ({m.name},{n.name}) skipped")
                continue
            fy = _maybe_lift(act(f, y, bounds), tag)  # unused for base; keeps tags honest
            for g in gens:
                report.checked += 1
                lhs = compose(
                    _maybe_lift(identity(mx), tag),
                    compose(
                        _maybe_lift(act(g, x, bounds), tag),
                        _maybe_lift(act_left(n, f, bounds), tag),
                    ),
                )
                rhs = compose(
                    _maybe_lift(act_left(m, f, bounds), tag),
                    compose(
                        _maybe_lift(identity(my), tag),
                        _maybe_lift(act(g, y, bounds), tag),
                    ),
                )
                if lhs != rhs:
                    report.fail("slide-cup", f"g:{m.name}->{n.name}")
    # cap side: (R_f (x) id) ; cap_y  ==  (id (x) L_f) ; cap_x  for f : x -> y
    for a in universe:
        for b in universe:
            for c in universe:
                try:
                    cx = product(c, x, bounds)
                    cy = product(c, y, bounds)
                    ps = enumerate_homs(tag, a, cx, bounds)
                    qs = enumerate_homs(tag, cy, b, bounds)
                except BoundExceeded:
                    report.notes.append(
                        f"cap middle {c.name} at ({a.name},{b.name}) skipped"
                    )
                    continue
                if len(ps) * len(qs) > pair_budget:
                    report.notes.append(
                        f"cap middle {c.name} at ({a.name},{b.name}) over budget"
                    )
                    continue
                cf = _maybe_lift(act_left(c, f, bounds), tag)
                for p in ps:
                    moved = compose(p, cf)
                    for q in qs:
                        report.checked += 1
                        if compose(moved, q) != compose(p, compose(cf, q)):
                            report.fail(
                                "slide-cap", f"middle {c.name} at ({a.name},{b.name})"
                            )
    return report


# --- actegory-coherence isomorphisms ---------------------------------------------


def r_unit_iso_check(universe: Universe) -> CheckReport:
    """R_I == hom via the right unitor, pointwise bijection commuting with acts."""
    report = CheckReport("R_I ~ hom")
    bounds = universe.bounds
    R = build_R(UNIT, universe)
    H = hom_profunctor(BASE, universe)
    for a, b, cell in _cells_of(R):
        homs = H.cell(a, b)
        fwd = {}
        for p in cell:
            report.checked += 1
            image = compose(p, runit(b))
            fwd[p] = image
            if image not in homs:
                report.fail("R_I-typing", f"({a.name},{b.name})")
            if compose(image, runit_inv(b)) != p:
                report.fail("R_I-roundtrip", f"({a.name},{b.name})")
        if len(set(fwd.values())) != len(cell) or len(cell) != len(homs):
            report.fail("R_I-bijectivity", f"({a.name},{b.name})")
    return report


def r_fuse_check(x: FinObject, m: FinObject, universe: Universe) -> CheckReport:
    """R_x (x) R_m == R_{m (.) x}: collapse/expand are mutually inverse and
    commute with both actions."""
    report = CheckReport(f"R_{x.name}(x)R_{m.name} ~ R_({m.name}(.){x.name})")
    bounds = universe.bounds
    mx = product(m, x, bounds)
    comp = compose_prof(build_R(x, universe), build_R(m, universe))
    fused = build_R(mx, universe)

    def collapse(cls: CoendClass, a, b):
        # (p : a -> c (.) x, q : c -> b (x) m)  |->  p ; (q (.) x) ; a_{b,m,x}
        return compose(
            compose(cls.left, act(cls.right, x, bounds)),
            assoc(b, m, x, bounds),
        )

    def expand(r, a, b):
        bm = product(b, m, bounds)
        return comp.canonicalize(
            bm, compose(r, assoc_inv(b, m, x, bounds)), identity(bm), a, b
        )

    for a in universe:
        for b in universe:
            ccell = comp.cell(a, b)
            fcell = fused.cell(a, b)
            if ccell is None or fcell is None:
                report.notes.append(f"cell ({a.name},{b.name}) omitted")
                continue
            images = set()
            for cls in ccell:
                report.checked += 1
                r = collapse(cls, a, b)
                images.add(r)
                if r not in fcell:
                    report.fail("fuse-typing", f"({a.name},{b.name})")
                if expand(r, a, b) != cls:
                    report.fail("fuse-roundtrip", f"({a.name},{b.name}) {cls!r}")
            if len(images) != len(ccell) or len(ccell) != len(fcell):
                report.fail(
                    "fuse-bijectivity",
                    f"({a.name},{b.name}): {len(ccell)} classes vs {len(fcell)}",
                )
            # action compatibility, spot-checked over all generators of small cells
            if ccell and len(ccell) <= 64:
                for a2 in universe:
                    try:
                        fs = enumerate_homs(BASE, a2, a, bounds)
                    except BoundExceeded:
                        continue
                    if comp.cell(a2, b) is None or fused.cell(a2, b) is None:
                        continue
                    for fmor in fs:
                        for cls in ccell:
                            report.checked += 1
                            lhs = collapse(comp.left_act(fmor, cls, a, b), a2, b)
                            rhs = compose(fmor, collapse(cls, a, b))
                            if lhs != rhs:
                                report.fail("fuse-naturality", f"({a.name},{b.name})")
    return report


def l_fuse_check(m: FinObject, x: FinObject, universe: Universe) -> CheckReport:
    """L_m (x) L_x == L_{m (.) x} via the associator."""
    report = CheckReport(f"L_{m.name}(x)L_{x.name} ~ L_({m.name}(.){x.name})")
    bounds = universe.bounds
    mx = product(m, x, bounds)
    comp = compose_prof(build_L(m, universe), build_L(x, universe))
    fused = build_L(mx, universe)

    def collapse(cls: CoendClass, a, b):
        # (p : a (.) m -> c, q : c (.) x -> b) |-> a^-1 ; (p (.) x) ; q
        return compose(
            assoc_inv(a, m, x, bounds),
            compose(act(cls.left, x, bounds), cls.right),
        )

    def expand(r, a, b):
        am = product(a, m, bounds)
        return comp.canonicalize(
            am, identity(am), compose(assoc(a, m, x, bounds), r), a, b
        )

    for a in universe:
        for b in universe:
            ccell = comp.cell(a, b)
            fcell = fused.cell(a, b)
            if ccell is None or fcell is None:
                report.notes.append(f"cell ({a.name},{b.name}) omitted")
                continue
            images = set()
            for cls in ccell:
                report.checked += 1
                r = collapse(cls, a, b)
                images.add(r)
                if r not in fcell:
                    report.fail("lfuse-typing", f"({a.name},{b.name})")
                if expand(r, a, b) != cls:
                    report.fail("lfuse-roundtrip", f"({a.name},{b.name})")
            if len(images) != len(ccell) or len(ccell) != len(fcell):
                report.fail("lfuse-bijectivity", f"({a.name},{b.name})")
    return report


def prof_unit_check(P: FinProfunctor) -> CheckReport:
    """hom (x) P == P pointwise via the action-collapse map."""
    report = CheckReport(f"hom(x){P.name} ~ {P.name}")
    uni = P.universe
    comp = compose_prof(hom_profunctor(P.src_tag, uni), P)
    for a, b, ccell in _cells_of(comp):
        pcell = P.cell(a, b)
        if pcell is None:
            continue
        images = set()
        for cls in ccell:
            report.checked += 1
            img = P.left_act(cls.left, cls.right, cls.middle, b)
            images.add(img)
            if img not in pcell:
                report.fail("unit-typing", f"({a.name},{b.name})")
        if len(images) != len(ccell) or len(ccell) != len(pcell):
            report.fail(
                "unit-bijectivity",
                f"({a.name},{b.name}): {len(ccell)} vs {len(pcell)}",
            )
    return report


# --- full-faithfulness search ------------------------------------------------------


def arrows_ff_search(x: FinObject, y: FinObject, universe: Universe,
                     gate: int = 256) -> CheckReport:
    """Find every strength-preserving natural family R_x -> R_y by forcing
    from its value on the universal element, and match each against R_f.

    Gated on the determining hom-set size; the expected outcome is exactly
    one transformation per f : x -> y.
    """
    report = CheckReport(f"arrows_ff[{x.name}->{y.name}]")
    bounds = universe.bounds
    R_x = build_R(x, universe)
    R_y = build_R(y, universe)
    ix, iy = product(UNIT, x, bounds), product(UNIT, y, bounds)
    candidates = enumerate_homs(BASE, ix, iy, bounds)
    if len(candidates) > gate:
        report.notes.append(f"gate exceeded: {len(candidates)} candidates")
        return report

    def forced_w(w, b):
        # transport t(id_{I (.) x}) = w to t(id_{b (.) x})
        st = compose(act_left(b, w, bounds), assoc_inv(b, UNIT, y, bounds))
        st = compose(st, act(runit(b), y, bounds))
        return compose(act_left(b, lunit_inv(x), bounds), st)

    found = []
    for w in candidates:
        ws = {b.name: forced_w(w, b) for b in universe}

        def component(a, b, p, _ws=ws):
            return compose(p, _ws[b.name])

        t = TwoCell(R_x, R_y, component, f"cand[{w.table_str()}]")
        rep = check_2cell(t, max_cell=4096)
        report.checked += rep.checked
        if rep.passed:
            found.append((w, t))
    homs = enumerate_homs(BASE, x, y, bounds)
    if len(found) != len(homs):
        report.fail(
            "count",
            f"found {len(found)} transformations, expected {len(homs)}",
        )
    matched = set()
    for w, t in found:
        f = compose(compose(lunit_inv(x), w), lunit(y))
        img = compose(lunit_inv(x), act_left(UNIT, f, bounds))
        if img != w:
            report.fail("shape", f"candidate {w.table_str()} is not R_f")
        matched.add(f.values)
    if len(matched) != len(found):
        report.fail("injectivity", "two transformations collapse to one arrow")
    return report
