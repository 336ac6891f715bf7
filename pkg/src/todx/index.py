"""Post-ordering index: groups of equalities sharing a left-hand side.

Groups key on the canonical form of the left-hand side (variables
renumbered by first occurrence), so alpha-renamed copies land in one
group.  Three retrieval modes answer the same queries identically:

* ``off``     checks each equality with a direct fail-fast closure
              comparison (the baseline),
* ``on``      keeps one diagram per equality,
* ``shared``  keeps one diagram per group.

One index is single-threaded; independent indexes may run in parallel.
"""

from __future__ import annotations

import enum
from typing import Optional, Union

from .forcing import TpoStore
from .ordering import TermOrder, make_order
from .stats import Stats
from .terms import Signature, Substitution, Term
from .tod import Equality, Tod


class DuplicateEqualityError(ValueError):
    """The canonical (lhs, rhs) pair is already live in the index."""


class MalformedEqualityError(ValueError):
    """The right-hand side uses variables the left-hand side lacks."""


class UnknownEqualityError(KeyError):
    """No equality with the given id."""


class IndexMode(enum.Enum):
    OFF = "off"
    PER_EQUALITY = "on"
    SHARED_BY_LHS = "shared"

    @classmethod
    def parse(cls, text: Union[str, "IndexMode"]) -> "IndexMode":
        if isinstance(text, IndexMode):
            return text
        for m in cls:
            if m.value == text:
                return m
        raise ValueError(f"unknown index mode {text!r}")


def canonicalize_term(sig: Signature, t: Term,
                      mapping: dict) -> Term:
    """Rebuild ``t`` with variables renumbered by first occurrence.

    ``mapping`` (old vid -> new vid) is extended in place, so a second
    call continues the numbering.  Repeated shared subterms are rebuilt
    once: by the time a subterm recurs, its variables are all mapped,
    so its canonical form is fixed.
    """
    memo: dict[int, Term] = {}

    def go(u: Term) -> Term:
        if u.ground:
            return u
        if u.sym is None:
            new = mapping.get(u.vid)
            if new is None:
                new = len(mapping)
                mapping[u.vid] = new
            return sig.var(new)
        r = memo.get(u.tid)
        if r is None:
            r = sig.app(u.sym, [go(a) for a in u.args])
            memo[u.tid] = r
        return r

    return go(t)


def canonicalize_equality(sig: Signature, lhs: Term, rhs: Term):
    """Canonicalize an equality over its left-hand side.

    Returns (lhs', rhs', old->new vid mapping).  Raises if the rhs
    introduces variables absent from the lhs: such an equality can never
    satisfy the ordering condition, and the demodulation workflow never
    produces one.
    """
    mapping: dict[int, int] = {}
    lhs_c = canonicalize_term(sig, lhs, mapping)
    n_lhs = len(mapping)
    rhs_c = canonicalize_term(sig, rhs, mapping)
    if len(mapping) != n_lhs:
        raise MalformedEqualityError(
            "right-hand side uses variables not in the left-hand side")
    return lhs_c, rhs_c, mapping


class _Group:
    __slots__ = ("key", "eqs", "tod", "tods")

    def __init__(self, key: Term):
        self.key = key
        self.eqs: list[Equality] = []
        self.tod: Optional[Tod] = None          # shared mode
        self.tods: dict[int, Tod] = {}          # per-equality mode


class PostOrderingIndex:
    """Retrieves the equalities a query substitution orders."""

    def __init__(self, signature: Signature, order: Union[str, TermOrder],
                 mode: Union[str, IndexMode] = IndexMode.SHARED_BY_LHS):
        self.signature = signature
        self.order = make_order(order, signature) if isinstance(order, str) else order
        self.mode = IndexMode.parse(mode)
        self.stats = Stats()
        self._tpo_store = TpoStore(self.order)
        self._groups: dict[Term, _Group] = {}
        self._eq_group: dict[int, _Group] = {}
        self._next_id = 1

    # -- maintenance -----------------------------------------------------------

    def insert(self, lhs: Term, rhs: Term) -> int:
        """Add an equality; returns its id.

        Pre-ordered equalities are accepted; their diagram nodes
        simplify away on first retrieval.
        """
        lhs_c, rhs_c, _ = canonicalize_equality(self.signature, lhs, rhs)
        group = self._groups.get(lhs_c)
        if group is None:
            group = _Group(lhs_c)
            self._groups[lhs_c] = group
            if self.mode is IndexMode.SHARED_BY_LHS:
                group.tod = Tod(self.order, self.stats, self._tpo_store)
                self.stats.tods += 1
        for other in group.eqs:
            if not other.deleted and other.rhs is rhs_c:
                raise DuplicateEqualityError(
                    f"equality {lhs_c!r} = {rhs_c!r} already live as {other.eq_id}")
        eq_id = self._next_id
        self._next_id += 1
        eq = Equality(eq_id, lhs_c, rhs_c)
        group.eqs.append(eq)
        self._eq_group[eq_id] = group
        if self.mode is IndexMode.SHARED_BY_LHS:
            group.tod.insert(eq)
        elif self.mode is IndexMode.PER_EQUALITY:
            tod = Tod(self.order, self.stats, self._tpo_store)
            self.stats.tods += 1
            tod.insert(eq)
            group.tods[eq_id] = tod
        self.stats.demodulators += 1
        return eq_id

    def remove(self, eq_id: int) -> None:
        """Lazy deletion: flag the equality, keep the structures."""
        group = self._eq_group.get(eq_id)
        if group is None:
            raise UnknownEqualityError(eq_id)
        eq = next(e for e in group.eqs if e.eq_id == eq_id)
        if not eq.deleted:
            eq.deleted = True
            self.stats.demodulators -= 1

    def equality(self, eq_id: int) -> Equality:
        group = self._eq_group.get(eq_id)
        if group is None:
            raise UnknownEqualityError(eq_id)
        return next(e for e in group.eqs if e.eq_id == eq_id)

    # -- retrieval ---------------------------------------------------------------

    def query(self, lhs: Term, sigma: Substitution,
              want: str = "all") -> list:
        """Ids of live group members ordered under ``sigma``.

        ``lhs`` is canonicalized before lookup and ``sigma`` is carried
        along into the canonical variable numbering; bindings for
        variables outside the lhs are ignored.  An unknown lhs yields an
        empty result.  ``want`` is "all" or "first".
        """
        if want not in ("all", "first"):
            raise ValueError(f"want must be 'all' or 'first', not {want!r}")
        first_only = want == "first"
        mapping: dict[int, int] = {}
        key = canonicalize_term(self.signature, lhs, mapping)
        group = self._groups.get(key)
        if group is None:
            return []
        sigma_c = Substitution(
            {new: img for old, new in mapping.items()
             if (img := sigma.get(old)) is not None})
        self.stats.queries += 1
        if self.mode is IndexMode.SHARED_BY_LHS:
            return group.tod.retrieve(sigma_c, first_only)
        if self.mode is IndexMode.PER_EQUALITY:
            results: list[int] = []
            for eq in group.eqs:
                results.extend(group.tods[eq.eq_id].retrieve(sigma_c, first_only))
                if first_only and results:
                    break
            return results
        # baseline: fail-fast closure comparison per live equality
        st = self.stats
        results = []
        steps = [0]
        finished = True
        for eq in group.eqs:
            if eq.deleted:
                continue
            if self.order.greater_unidirectional(eq.lhs, sigma_c,
                                                 eq.rhs, sigma_c, steps):
                results.append(eq.eq_id)
                st.answers += 1
                if first_only:
                    finished = False
                    break
        st.naive_comparisons += steps[0]
        if finished:
            st.answers += 1
        return results

    # -- introspection ------------------------------------------------------------

    def snapshot_stats(self) -> Stats:
        """A consistent copy of the counters."""
        return self.stats.snapshot()

    def groups(self):
        """(canonical lhs, live member count) pairs, in creation order."""
        return [(g.key, sum(not e.deleted for e in g.eqs))
                for g in self._groups.values()]

    def tods(self):
        """All diagrams owned by the index (for validation in tests)."""
        out = []
        for g in self._groups.values():
            if g.tod is not None:
                out.append(g.tod)
            out.extend(g.tods.values())
        return out
