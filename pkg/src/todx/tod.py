"""Term ordering diagrams: a lazily specialized index for ordering checks.

A diagram is a rooted dag of evaluation nodes (term comparisons and
positivity checks) and success nodes.  Retrieving with a query
substitution walks the diagram, and on the way rewrites the parts it
touches into cheaper equivalents: comparisons expand by the order's
definition, nodes whose outcome the path already determines are
bypassed, and multi-parent nodes are split so every processed node is
reached by exactly one path.  The diagram after a retrieval accepts the
same success sets as before, it is just faster to walk.

A diagram is mutated during retrieval, so all operations on one diagram
are single-threaded; distinct diagrams may be used concurrently.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .forcing import PartialOrdering, TpoStore, force_positivity_label, force_term_label
from .ordering import Cmp3, TermOrder
from .stats import Stats
from .terms import LinearExpr, Sign3, Substitution, Term, term_weight

STEP_CAP = 10 ** 6


class StepCapExceededError(RuntimeError):
    """A retrieval exceeded the diagnostic step budget.

    Transformations strictly shrink the diagram measure, so hitting the
    cap indicates a transformation loop bug, never a big input.
    """


class TodStructureError(RuntimeError):
    """A structural precondition or invariant does not hold."""


class DuplicateEqualityError(ValueError):
    """An equality id was inserted twice into one diagram."""


class UnknownEqualityError(KeyError):
    """No equality with the given id."""


class NodeKind(enum.Enum):
    ROOT = "root"
    EXIT = "exit"
    TERM = "term"
    POS = "pos"
    SUCCESS = "success"


class EdgeLabel(enum.Enum):
    GT = ">"
    EQ = "="
    GEQ = ">="
    NGE = "!>="
    NEXT = "."

    def __repr__(self) -> str:
        return self.value


_GT, _EQ, _GEQ, _NGE, _NEXT = (EdgeLabel.GT, EdgeLabel.EQ, EdgeLabel.GEQ,
                               EdgeLabel.NGE, EdgeLabel.NEXT)

_TERM_LABELS = (_GT, _EQ, _NGE)
_POS_LABELS = (_GT, _GEQ, _NGE)

_CMP_EDGE = {
    Cmp3.GREATER: _GT,
    Cmp3.EQUAL: _EQ,
    Cmp3.NOT_GREATER_EQUAL: _NGE,
}
_SIGN_EDGE = {
    Sign3.POSITIVE: _GT,
    Sign3.NON_NEGATIVE: _GEQ,
    Sign3.NOT_NON_NEGATIVE: _NGE,
}


@dataclass
class Equality:
    """An indexed equality; deletion is a flag, never a structure change."""

    eq_id: int
    lhs: Term
    rhs: Term
    deleted: bool = False


class TodNode:
    __slots__ = ("kind", "lhs", "rhs", "expr", "eq", "visited", "tpo",
                 "out", "parents", "nid")

    def __init__(self, kind: NodeKind, nid: int, lhs: Optional[Term] = None,
                 rhs: Optional[Term] = None, expr: Optional[LinearExpr] = None,
                 eq: Optional[Equality] = None):
        self.kind = kind
        self.lhs = lhs
        self.rhs = rhs
        self.expr = expr
        self.eq = eq
        self.visited = False
        self.tpo: Optional[PartialOrdering] = None
        self.out: dict[EdgeLabel, TodNode] = {}
        self.parents: list[tuple[TodNode, EdgeLabel]] = []
        self.nid = nid

    def label(self) -> str:
        k = self.kind
        if k is NodeKind.TERM:
            return f"{self.lhs!r} cmp {self.rhs!r}"
        if k is NodeKind.POS:
            return f"{self.expr!r} pos 0"
        if k is NodeKind.SUCCESS:
            return f"eq {self.eq.eq_id}"
        return k.value

    def __repr__(self) -> str:
        flag = "*" if self.visited else ""
        return f"<{self.nid}{flag} {self.label()}>"


class Tod:
    """One term ordering diagram over a fixed order."""

    def __init__(self, order: TermOrder, stats: Optional[Stats] = None,
                 tpo_store: Optional[TpoStore] = None):
        self.order = order
        self.stats = stats if stats is not None else Stats()
        self.tpo_store = tpo_store if tpo_store is not None else TpoStore(order)
        # audit hook: called as (node, sigma, label) whenever a label is
        # forced during retrieval, before the node is bypassed
        self.forcing_audit = None
        self._next_nid = 0
        self._eqs: dict[int, Equality] = {}
        self.root = self._node(NodeKind.ROOT)
        self.exit = self._node(NodeKind.EXIT)
        self.root.visited = True
        self.root.tpo = self.tpo_store.empty
        self._link(self.root, _NEXT, self.exit)

    # -- construction helpers -------------------------------------------------

    def _node(self, kind: NodeKind, **kw) -> TodNode:
        n = TodNode(kind, self._next_nid, **kw)
        self._next_nid += 1
        return n

    def _link(self, src: TodNode, label: EdgeLabel, dst: TodNode) -> None:
        src.out[label] = dst
        dst.parents.append((src, label))

    def _unlink_out(self, src: TodNode) -> list:
        """Remove all outgoing edges of ``src``; return the old targets."""
        old = []
        for label, dst in src.out.items():
            dst.parents.remove((src, label))
            old.append(dst)
        src.out = {}
        return old

    def _cleanup(self, candidates) -> None:
        """Drop nodes left without incoming edges, cascading; exit stays."""
        stack = [n for n in candidates if not n.parents and n.kind is not NodeKind.EXIT]
        while stack:
            n = stack.pop()
            if n.parents or n.kind is NodeKind.EXIT:
                continue
            stack.extend(self._unlink_out(n))

    # -- index operations ------------------------------------------------------

    def insert(self, eq: Equality) -> None:
        """Splice a comparison for ``eq`` immediately before the exit node.

        The old exit object becomes the new comparison node, so the
        rewiring cost does not depend on the diagram size.
        """
        if eq.eq_id in self._eqs:
            raise DuplicateEqualityError(f"equality {eq.eq_id} already inserted")
        self._eqs[eq.eq_id] = eq
        cmp_node = self.exit
        cmp_node.kind = NodeKind.TERM
        cmp_node.lhs = eq.lhs
        cmp_node.rhs = eq.rhs
        succ = self._node(NodeKind.SUCCESS, eq=eq)
        new_exit = self._node(NodeKind.EXIT)
        self.exit = new_exit
        self._link(cmp_node, _GT, succ)
        self._link(cmp_node, _EQ, new_exit)
        self._link(cmp_node, _NGE, new_exit)
        self._link(succ, _NEXT, new_exit)
        self.stats.nodes_created.term += 1
        self.stats.nodes_created.success += 1

    def mark_deleted(self, eq_id: int) -> None:
        try:
            self._eqs[eq_id].deleted = True
        except KeyError:
            raise UnknownEqualityError(eq_id) from None

    def equality(self, eq_id: int) -> Equality:
        try:
            return self._eqs[eq_id]
        except KeyError:
            raise UnknownEqualityError(eq_id) from None

    # -- evaluation ------------------------------------------------------------

    def evaluate_node(self, node: TodNode, sigma: Substitution,
                      _steps=None) -> EdgeLabel:
        """The edge a substitution takes out of an evaluation node."""
        if node.kind is NodeKind.TERM:
            c = self.order.compare_closure(node.lhs, sigma, node.rhs, sigma, _steps)
            return _CMP_EDGE[c]
        if node.kind is NodeKind.POS:
            return _SIGN_EDGE[node.expr.subst(sigma).sign(self.order.signature.w0)]
        raise TodStructureError(f"{node!r} is not an evaluation node")

    def _edge_constraints(self, node: TodNode, label: EdgeLabel) -> list:
        if node.kind is not NodeKind.TERM:
            return []
        rel = {_GT: Cmp3.GREATER, _EQ: Cmp3.EQUAL,
               _NGE: Cmp3.NOT_GREATER_EQUAL}[label]
        return [(node.lhs, rel, node.rhs)]

    def _tpo_at(self, prev: TodNode, arrival: EdgeLabel,
                node: TodNode) -> PartialOrdering:
        """Closure of the path formula for the path arriving at ``node``."""
        new_terms = (node.lhs, node.rhs) if node.kind is NodeKind.TERM else ()
        return self.tpo_store.extend(prev.tpo,
                                     self._edge_constraints(prev, arrival),
                                     new_terms)

    def _forced(self, node: TodNode, tpo: PartialOrdering) -> Optional[EdgeLabel]:
        if node.kind is NodeKind.TERM:
            c = force_term_label(tpo, node.lhs, node.rhs)
            return None if c is None else _CMP_EDGE[c]
        sg = force_positivity_label(node.expr, self.order.signature.w0)
        return None if sg is None else _SIGN_EDGE[sg]

    # -- generic transformations ----------------------------------------------

    def replicate_node(self, node: TodNode, via: tuple) -> TodNode:
        """Split off a copy that takes every incoming edge except ``via``.

        The copy shares the outgoing edge targets; the original keeps
        only the traversal edge, restoring the single-path property.
        """
        if node.kind is NodeKind.EXIT:
            raise TodStructureError("cannot replicate the exit node")
        if len(node.parents) < 2:
            raise TodStructureError("replication needs multiple incoming edges")
        if via not in node.parents:
            raise TodStructureError("traversal edge is not incoming")
        copy = self._node(node.kind, lhs=node.lhs, rhs=node.rhs,
                          expr=node.expr, eq=node.eq)
        copy.parents = [p for p in node.parents if p != via]
        node.parents = [via]
        for src, label in copy.parents:
            src.out[label] = copy
        for label, dst in node.out.items():
            copy.out[label] = dst
            dst.parents.append((copy, label))
        created = self.stats.nodes_created
        if node.kind is NodeKind.TERM:
            created.term += 1
        elif node.kind is NodeKind.POS:
            created.pos += 1
        elif node.kind is NodeKind.SUCCESS:
            created.success += 1
        return copy

    def remove_forced(self, node: TodNode, label: EdgeLabel) -> TodNode:
        """Bypass a node whose outcome is forced; prune what that orphans."""
        if node.visited:
            raise TodStructureError("forced removal applies to unvisited nodes")
        if len(node.parents) != 1:
            raise TodStructureError("forced removal needs a single incoming edge")
        if label not in node.out:
            raise TodStructureError(f"node has no {label!r} edge")
        (src, in_label), = node.parents
        target = node.out[label]
        node.parents = []
        old_targets = self._unlink_out(node)
        src.out[in_label] = target
        target.parents.append((src, in_label))
        self._cleanup(old_targets)
        return target

    # -- order-specific transformations -----------------------------------------

    def _check_expandable(self, node: TodNode) -> None:
        if node.kind is not NodeKind.TERM:
            raise TodStructureError("only term comparisons expand")
        if node.visited:
            raise TodStructureError("expansion applies to unvisited nodes")
        if len(node.parents) != 1:
            raise TodStructureError("expansion needs a single incoming edge")
        if node.lhs.sym is None or node.rhs.sym is None:
            raise TodStructureError("both comparison sides must be applications")

    def _replace_with(self, node: TodNode, target: TodNode) -> TodNode:
        (src, in_label), = node.parents
        node.parents = []
        old_targets = self._unlink_out(node)
        src.out[in_label] = target
        target.parents.append((src, in_label))
        self._cleanup(t for t in old_targets if t is not target)
        return target

    def transform_kbo(self, node: TodNode) -> TodNode:
        """Expand a comparison of two applications by the KBO definition.

        The node becomes a positivity check on the weight difference;
        for equal head symbols a chain of argument comparisons hangs off
        its >= edge.  The check stays even when its sign is statically
        known: forcing removes it on the same visit.
        """
        self._check_expandable(node)
        s, t = node.lhs, node.rhs
        n1, n2, n3 = node.out[_GT], node.out[_EQ], node.out[_NGE]
        memo = self.order.memoize_weights
        expr = term_weight(s, memo) - term_weight(t, memo)
        old_targets = self._unlink_out(node)
        node.kind = NodeKind.POS
        node.expr = expr
        node.lhs = node.rhs = None
        created = self.stats.nodes_created
        created.pos += 1
        fs, gs = s.sym, t.sym
        if fs.precedence > gs.precedence:
            self._link(node, _GT, n1)
            self._link(node, _GEQ, n1)
            self._link(node, _NGE, n3)
        elif gs.precedence > fs.precedence:
            self._link(node, _GT, n1)
            self._link(node, _GEQ, n3)
            self._link(node, _NGE, n3)
        else:
            nxt = n2
            for a, b in zip(reversed(s.args), reversed(t.args)):
                c = self._node(NodeKind.TERM, lhs=a, rhs=b)
                created.term += 1
                self._link(c, _GT, n1)
                self._link(c, _EQ, nxt)
                self._link(c, _NGE, n3)
                nxt = c
            self._link(node, _GT, n1)
            self._link(node, _GEQ, nxt)
            self._link(node, _NGE, n3)
        self._cleanup(old_targets)
        return node

    def transform_lpo(self, node: TodNode) -> TodNode:
        """Expand a comparison of two applications by the LPO definition."""
        self._check_expandable(node)
        s, t = node.lhs, node.rhs
        n1, n2, n3 = node.out[_GT], node.out[_EQ], node.out[_NGE]
        fs, gs = s.sym, t.sym
        created = self.stats.nodes_created

        if fs.precedence > gs.precedence:
            # s beats every argument of t, left to right.
            if not t.args:
                return self._replace_with(node, n1)
            old_targets = self._unlink_out(node)
            nxt = n1
            for b in reversed(t.args[1:]):
                c = self._node(NodeKind.TERM, lhs=s, rhs=b)
                created.term += 1
                self._link(c, _GT, nxt)
                self._link(c, _EQ, n3)
                self._link(c, _NGE, n3)
                nxt = c
            node.rhs = t.args[0]
            self._link(node, _GT, nxt)
            self._link(node, _EQ, n3)
            self._link(node, _NGE, n3)
            self._cleanup(old_targets)
            return node

        if gs.precedence > fs.precedence:
            # Some argument of s reaches t.
            if not s.args:
                return self._replace_with(node, n3)
            old_targets = self._unlink_out(node)
            nxt = n3
            for a in reversed(s.args[1:]):
                c = self._node(NodeKind.TERM, lhs=a, rhs=t)
                created.term += 1
                self._link(c, _GT, n1)
                self._link(c, _EQ, n1)
                self._link(c, _NGE, nxt)
                nxt = c
            node.lhs = s.args[0]
            self._link(node, _GT, n1)
            self._link(node, _EQ, n1)
            self._link(node, _NGE, nxt)
            self._cleanup(old_targets)
            return node

        # Equal heads: lexicographic grid.  Middle column compares the
        # argument pairs; a > there detours through "s beats the remaining
        # t arguments" (left column), a !>= through "some remaining s
        # argument reaches t" (right column).
        k = len(s.args)
        if k == 0:
            return self._replace_with(node, n2)
        old_targets = self._unlink_out(node)
        gt_cont, eq_cont, nge_cont = n1, n2, n3
        for i in range(k - 1, 0, -1):
            left = self._node(NodeKind.TERM, lhs=s, rhs=t.args[i])
            self._link(left, _GT, gt_cont)
            self._link(left, _EQ, n3)
            self._link(left, _NGE, n3)
            right = self._node(NodeKind.TERM, lhs=s.args[i], rhs=t)
            self._link(right, _GT, n1)
            self._link(right, _EQ, n1)
            self._link(right, _NGE, nge_cont)
            mid = self._node(NodeKind.TERM, lhs=s.args[i], rhs=t.args[i])
            self._link(mid, _GT, gt_cont)
            self._link(mid, _EQ, eq_cont)
            self._link(mid, _NGE, nge_cont)
            created.term += 3
            gt_cont, eq_cont, nge_cont = left, mid, right
        node.lhs, node.rhs = s.args[0], t.args[0]
        self._link(node, _GT, gt_cont)
        self._link(node, _EQ, eq_cont)
        self._link(node, _NGE, nge_cont)
        self._cleanup(old_targets)
        return node

    def _transform(self, node: TodNode) -> TodNode:
        if self.order.kind == "kbo":
            return self.transform_kbo(node)
        return self.transform_lpo(node)

    # -- retrieval ---------------------------------------------------------------

    def retrieve(self, sigma: Substitution, first_only: bool = False) -> list:
        """Equality ids ordered under ``sigma``, specializing on the way.

        Results appear in success-node encounter order, which in a shared
        diagram is insertion order.
        """
        st = self.stats
        results: list[int] = []
        prev = self.root
        arrival = _NEXT
        node = self.root.out[_NEXT]
        steps = 0
        while True:
            steps += 1
            if steps > STEP_CAP:
                raise StepCapExceededError(f"retrieval exceeded {STEP_CAP} steps")
            kind = node.kind
            if kind is NodeKind.EXIT:
                st.answers += 1
                return results
            if kind is NodeKind.SUCCESS:
                if not node.visited:
                    if len(node.parents) > 1:
                        self.replicate_node(node, (prev, arrival))
                    node.visited = True
                    node.tpo = self.tpo_store.extend(
                        prev.tpo, self._edge_constraints(prev, arrival))
                    st.nodes_processed.success += 1
                st.nodes_traversed.success += 1
                eq = node.eq
                if not eq.deleted:
                    results.append(eq.eq_id)
                    st.answers += 1
                    if first_only:
                        return results
                prev, arrival, node = node, _NEXT, node.out[_NEXT]
                continue
            if not node.visited:
                if len(node.parents) > 1:
                    self.replicate_node(node, (prev, arrival))
                tpo = self._tpo_at(prev, arrival, node)
                forced = self._forced(node, tpo)
                if forced is not None:
                    if self.forcing_audit is not None:
                        self.forcing_audit(node, sigma, forced)
                    if kind is NodeKind.TERM:
                        st.nodes_processed.term += 1
                    else:
                        st.nodes_processed.pos += 1
                    node = self.remove_forced(node, forced)
                    continue
                if (kind is NodeKind.TERM and node.lhs.sym is not None
                        and node.rhs.sym is not None):
                    node = self._transform(node)
                    continue
                if kind is NodeKind.TERM:
                    st.nodes_processed.term += 1
                else:
                    st.nodes_processed.pos += 1
                node.visited = True
                node.tpo = tpo
            if node.kind is NodeKind.TERM:
                st.nodes_traversed.term += 1
            else:
                st.nodes_traversed.pos += 1
            label = self.evaluate_node(node, sigma)
            prev, arrival, node = node, label, node.out[label]

    # -- introspection ------------------------------------------------------------

    def nodes(self) -> list:
        """All nodes reachable from the root, in a stable order."""
        seen = {self.root.nid}
        queue = deque([self.root])
        order = [self.root]
        while queue:
            n = queue.popleft()
            for label in (_GT, _EQ, _GEQ, _NGE, _NEXT):
                m = n.out.get(label)
                if m is not None and m.nid not in seen:
                    seen.add(m.nid)
                    order.append(m)
                    queue.append(m)
        return order

    def structure(self) -> list:
        """A canonical serialization for golden tests and determinism checks."""
        nodes = self.nodes()
        index = {n.nid: i for i, n in enumerate(nodes)}
        out = []
        for n in nodes:
            edges = tuple(sorted((label.value, index[dst.nid])
                                 for label, dst in n.out.items()))
            out.append((n.kind.value, n.label(), n.visited, edges))
        return out

    def validate(self) -> None:
        """Check the structural diagram invariants; raise on violation."""
        nodes = self.nodes()
        ids = {id(n) for n in nodes}
        if self.exit not in nodes:
            raise TodStructureError("exit not reachable from root")
        expected = {
            NodeKind.ROOT: {_NEXT},
            NodeKind.SUCCESS: {_NEXT},
            NodeKind.TERM: set(_TERM_LABELS),
            NodeKind.POS: set(_POS_LABELS),
            NodeKind.EXIT: set(),
        }
        roots = [n for n in nodes if n.kind is NodeKind.ROOT]
        exits = [n for n in nodes if n.kind is NodeKind.EXIT]
        if roots != [self.root] or exits != [self.exit]:
            raise TodStructureError("diagram must have one root and one exit")
        edges = set()
        for n in nodes:
            if set(n.out) != expected[n.kind]:
                raise TodStructureError(
                    f"{n!r} has edges {set(n.out)}, wants {expected[n.kind]}")
            for label, dst in n.out.items():
                if id(dst) not in ids:
                    raise TodStructureError(f"{n!r} targets unreachable node")
                if (n, label) not in dst.parents:
                    raise TodStructureError(f"missing parent entry for {dst!r}")
                edges.add((id(n), label))
            if n.visited and n.kind is not NodeKind.ROOT:
                if len(n.parents) != 1:
                    raise TodStructureError(f"visited {n!r} has multiple parents")
                if not n.parents[0][0].visited:
                    raise TodStructureError(f"visited {n!r} under unvisited parent")
        for n in nodes:
            for src, label in n.parents:
                if id(src) not in ids or src.out.get(label) is not n:
                    raise TodStructureError(f"stale parent entry on {n!r}")
        # acyclicity and exit reachability
        color: dict[int, int] = {}
        order: list[TodNode] = []

        def visit(start: TodNode) -> None:
            stack = [(start, iter(start.out.values()))]
            color[id(start)] = 1
            while stack:
                n, it = stack[-1]
                advanced = False
                for m in it:
                    c = color.get(id(m), 0)
                    if c == 1:
                        raise TodStructureError("cycle detected")
                    if c == 0:
                        color[id(m)] = 1
                        stack.append((m, iter(m.out.values())))
                        advanced = True
                        break
                if not advanced:
                    color[id(n)] = 2
                    order.append(n)
                    stack.pop()

        visit(self.root)
        reaches_exit = {id(self.exit)}
        for n in order:
            if n is self.exit:
                continue
            if any(id(dst) in reaches_exit for dst in n.out.values()):
                reaches_exit.add(id(n))
        for n in nodes:
            if id(n) not in reaches_exit:
                raise TodStructureError(f"exit unreachable from {n!r}")

    def root_path(self, node: TodNode) -> list:
        """The unique path root -> node for a visited node (for tests)."""
        path = []
        n = node
        while n.kind is not NodeKind.ROOT:
            (src, label), = n.parents
            path.append((src.nid, label))
            n = src
        path.reverse()
        return path
