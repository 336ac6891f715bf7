"""Three-valued KBO and LPO comparisons over plain and closure terms.

Verdicts come from the set {greater, equal, not-greater-or-equal}; the
last value deliberately merges "smaller" and "incomparable", which is
all a post-ordering check needs.  A closure term is a (term,
substitution) pair compared without materializing the instance: the
substitution is consulted only when the traversal reaches a variable.

All comparisons are pure functions over immutable terms.  The weight
memoization cache lives in the shared terms and follows the same
single-writer contract as the interner.
"""

from __future__ import annotations

import enum

from .terms import (EMPTY_SUBST, LinearExpr, Sign3, Signature, Substitution,
                    Term, term_weight)


class Cmp3(enum.Enum):
    """Result of a term comparison."""

    GREATER = ">"
    EQUAL = "="
    NOT_GREATER_EQUAL = "!>="

    def __repr__(self) -> str:
        return self.value


_GT = Cmp3.GREATER
_EQ = Cmp3.EQUAL
_NGE = Cmp3.NOT_GREATER_EQUAL


def _deref(s: Term, sigma: Substitution):
    """Resolve a closure-term pair to its effective (term, substitution).

    Variables look up their image once (simultaneous application:
    variables inside the image stay free).  Ground terms drop the
    substitution so shared fast paths apply.
    """
    if sigma.is_empty:
        return s, sigma
    if s.sym is None:
        img = sigma.get(s.vid)
        return (s, EMPTY_SUBST) if img is None else (img, EMPTY_SUBST)
    if s.ground:
        return s, EMPTY_SUBST
    return s, sigma


def closure_equal(s: Term, sigma: Substitution, t: Term, theta: Substitution) -> bool:
    """Whether s*sigma and t*theta denote the same term, without building it."""
    s, sigma = _deref(s, sigma)
    t, theta = _deref(t, theta)
    if sigma.is_empty and theta.is_empty:
        return s is t
    if s.sym is None or t.sym is None:
        # A variable survived deref with an empty substitution while the
        # other side is a non-ground application: never equal.
        return False
    if s.sym is not t.sym:
        return False
    for a, b in zip(s.args, t.args):
        if not closure_equal(a, sigma, b, theta):
            return False
    return True


def closure_weight(s: Term, sigma: Substitution, memoize: bool = True) -> LinearExpr:
    """Weight of the instance s*sigma computed on the uninstantiated pair."""
    s, sigma = _deref(s, sigma)
    if sigma.is_empty:
        return term_weight(s, memoize)
    const = s.sym.weight
    acc: dict[int, int] = {}
    for a in s.args:
        w = closure_weight(a, sigma, memoize)
        const += w.constant
        for v, c in w.coeffs.items():
            acc[v] = acc.get(v, 0) + c
    return LinearExpr(const, acc)


class TermOrder:
    """Common surface of the two simplification orders."""

    kind = ""

    def __init__(self, signature: Signature, memoize_weights: bool = True):
        self.signature = signature
        self.memoize_weights = memoize_weights

    def compare(self, s: Term, t: Term, _steps=None) -> Cmp3:
        raise NotImplementedError

    def compare_closure(self, s: Term, sigma: Substitution,
                        t: Term, theta: Substitution, _steps=None) -> Cmp3:
        raise NotImplementedError

    def greater_unidirectional(self, s: Term, sigma: Substitution,
                               t: Term, theta: Substitution, _steps=None) -> bool:
        """Certify s*sigma > t*theta, failing as soon as that is impossible.

        With the three-valued verdict set the fail-fast comparison and the
        full one coincide (equality falls out for free along the way), so
        this is the greater-projection of ``compare_closure``.
        """
        return self.compare_closure(s, sigma, t, theta, _steps) is _GT

    def weight(self, t: Term) -> LinearExpr:
        return term_weight(t, self.memoize_weights)


class KboOrder(TermOrder):
    """Knuth-Bendix order: weights first, then precedence, then arguments.

    Variable cases resolve uniformly through the weight-difference sign:
    when either side is a variable the precedence and argument rules are
    inapplicable, so the verdict is the sign plus structural equality.
    Under weights >= 1 this yields the standard relation.
    """

    kind = "kbo"

    def compare(self, s: Term, t: Term, _steps=None) -> Cmp3:
        if _steps is not None:
            _steps[0] += 1
        if s is t:
            return _EQ
        e = self.weight(s) - self.weight(t)
        sg = e.sign(self.signature.w0)
        if sg is Sign3.POSITIVE:
            return _GT
        if sg is Sign3.NOT_NON_NEGATIVE:
            return _NGE
        if s.sym is None or t.sym is None:
            return _NGE
        if s.sym.precedence > t.sym.precedence:
            return _GT
        if s.sym is not t.sym:
            return _NGE
        for a, b in zip(s.args, t.args):
            if a is not b:
                return _GT if self.compare(a, b, _steps) is _GT else _NGE
        return _EQ

    def compare_closure(self, s: Term, sigma: Substitution,
                        t: Term, theta: Substitution, _steps=None) -> Cmp3:
        if _steps is not None:
            _steps[0] += 1
        s, sigma = _deref(s, sigma)
        t, theta = _deref(t, theta)
        if sigma.is_empty and theta.is_empty:
            return self.compare(s, t, _steps)
        memo = self.memoize_weights
        e = closure_weight(s, sigma, memo) - closure_weight(t, theta, memo)
        sg = e.sign(self.signature.w0)
        if sg is Sign3.POSITIVE:
            return _GT
        if sg is Sign3.NOT_NON_NEGATIVE:
            return _NGE
        if s.sym is None or t.sym is None:
            # Variable with empty substitution vs. a non-ground instance:
            # equal instances were ruled out above, greater is impossible.
            return _NGE
        if s.sym.precedence > t.sym.precedence:
            return _GT
        if s.sym is not t.sym:
            return _NGE
        for a, b in zip(s.args, t.args):
            if not closure_equal(a, sigma, b, theta):
                c = self.compare_closure(a, sigma, b, theta, _steps)
                return _GT if c is _GT else _NGE
        return _EQ


class LpoOrder(TermOrder):
    """Lexicographic path order, purely precedence based."""

    kind = "lpo"

    def compare(self, s: Term, t: Term, _steps=None) -> Cmp3:
        if _steps is not None:
            _steps[0] += 1
        if s is t:
            return _EQ
        if s.sym is None:
            return _NGE
        if t.sym is None:
            for a in s.args:
                if self.compare(a, t, _steps) is not _NGE:
                    return _GT
            return _NGE
        if s.sym is t.sym:
            args_s, args_t = s.args, t.args
            k = len(args_s)
            i = 0
            while i < k and args_s[i] is args_t[i]:
                i += 1
            if i == k:
                return _EQ
            if self.compare(args_s[i], args_t[i], _steps) is _GT:
                for l in range(i + 1, k):
                    if self.compare(s, args_t[l], _steps) is not _GT:
                        return _NGE
                return _GT
            for j in range(i + 1, k):
                if self.compare(args_s[j], t, _steps) is not _NGE:
                    return _GT
            return _NGE
        if s.sym.precedence > t.sym.precedence:
            for b in t.args:
                if self.compare(s, b, _steps) is not _GT:
                    return _NGE
            return _GT
        for a in s.args:
            if self.compare(a, t, _steps) is not _NGE:
                return _GT
        return _NGE

    def compare_closure(self, s: Term, sigma: Substitution,
                        t: Term, theta: Substitution, _steps=None) -> Cmp3:
        if _steps is not None:
            _steps[0] += 1
        s, sigma = _deref(s, sigma)
        t, theta = _deref(t, theta)
        if sigma.is_empty and theta.is_empty:
            return self.compare(s, t, _steps)
        if s.sym is None:
            return _NGE
        if t.sym is not None:
            if s.sym is t.sym:
                args_s, args_t = s.args, t.args
                k = len(args_s)
                i = 0
                while i < k and closure_equal(args_s[i], sigma, args_t[i], theta):
                    i += 1
                if i == k:
                    return _EQ
                if self.compare_closure(args_s[i], sigma, args_t[i], theta, _steps) is _GT:
                    for l in range(i + 1, k):
                        if self.compare_closure(s, sigma, args_t[l], theta, _steps) is not _GT:
                            return _NGE
                    return _GT
                for j in range(i + 1, k):
                    if self.compare_closure(args_s[j], sigma, t, theta, _steps) is not _NGE:
                        return _GT
                return _NGE
            if s.sym.precedence > t.sym.precedence:
                for b in t.args:
                    if self.compare_closure(s, sigma, b, theta, _steps) is not _GT:
                        return _NGE
                return _GT
        for a in s.args:
            if self.compare_closure(a, sigma, t, theta, _steps) is not _NGE:
                return _GT
        return _NGE


def make_order(kind: str, signature: Signature,
               memoize_weights: bool = True) -> TermOrder:
    if kind == "kbo":
        return KboOrder(signature, memoize_weights)
    if kind == "lpo":
        return LpoOrder(signature, memoize_weights)
    raise ValueError(f"unknown order kind {kind!r}")
