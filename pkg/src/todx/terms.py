"""Signatures, interned first-order terms, substitutions, and weight arithmetic.

Terms are perfectly shared: building the same tree twice through one
``Signature`` returns the same object, so structural equality is an
identity check.  Signatures and terms are immutable once built; the
interner is mutated only while constructing new terms and carries a
single-writer contract.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union


class SignatureError(ValueError):
    """Invalid signature declaration."""


class UnknownSymbolError(SignatureError):
    """Symbol name not declared in the signature."""


class ArityError(SignatureError):
    """Application with the wrong number of arguments."""


@dataclass(frozen=True, slots=True)
class Symbol:
    """A function symbol with weight and precedence parameters."""

    name: str
    arity: int
    weight: int
    precedence: int
    index: int

    def __repr__(self) -> str:
        return self.name


class Term:
    """An interned term: a variable or a symbol application.

    Never construct directly; use ``Signature.var`` / ``Signature.app``.
    Equality and hashing are by identity, which coincides with
    structural equality thanks to interning.
    """

    __slots__ = ("sym", "args", "vid", "ground", "tid", "_weight")

    def __init__(self, sym: Optional[Symbol], args: tuple, vid: int,
                 ground: bool, tid: int):
        self.sym = sym
        self.args = args
        self.vid = vid
        self.ground = ground
        self.tid = tid
        self._weight: Optional[LinearExpr] = None

    @property
    def is_var(self) -> bool:
        return self.sym is None

    def __repr__(self) -> str:
        if self.sym is None:
            return f"x{self.vid}"
        if not self.args:
            return self.sym.name
        return f"{self.sym.name}({','.join(map(repr, self.args))})"

    def subterms(self) -> Iterator["Term"]:
        """Yield this term and all its subterms, depth first."""
        stack = [self]
        while stack:
            t = stack.pop()
            yield t
            stack.extend(reversed(t.args))


# A raw term tree for Signature.intern: an int is a variable id, a str is a
# constant name, and a pair (name, [raw, ...]) is an application.
RawTerm = Union[int, str, tuple]


class Signature:
    """A fixed set of function symbols plus the term interner over them.

    Every symbol weight must be at least 1 and at least one constant must
    exist, so the smallest constant weight ``w0`` is positive and the
    weight of any ground term is at least ``w0``.
    """

    def __init__(self, symbols: Iterable[tuple]):
        syms = []
        by_name: dict[str, Symbol] = {}
        precs = set()
        for i, decl in enumerate(symbols):
            name, arity, weight, precedence = decl
            if arity < 0:
                raise SignatureError(f"negative arity for {name}")
            if weight < 1:
                raise SignatureError(
                    f"symbol {name} has weight {weight}; weights must be >= 1")
            if precedence in precs:
                raise SignatureError(
                    f"duplicate precedence {precedence} (at symbol {name})")
            if name in by_name:
                raise SignatureError(f"duplicate symbol name {name}")
            sym = Symbol(name, arity, weight, precedence, i)
            syms.append(sym)
            by_name[name] = sym
            precs.add(precedence)
        consts = [s.weight for s in syms if s.arity == 0]
        if not consts:
            raise SignatureError("signature must contain at least one constant")
        self._symbols = tuple(syms)
        self._by_name = by_name
        self.w0 = min(consts)
        self._apps: dict[tuple, Term] = {}
        self._vars: dict[int, Term] = {}
        self._next_tid = 0

    @property
    def symbols(self) -> tuple:
        return self._symbols

    def symbol(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol {name!r}") from None

    def has_symbol(self, name: str) -> bool:
        return name in self._by_name

    def _new_tid(self) -> int:
        tid = self._next_tid
        self._next_tid = tid + 1
        return tid

    def var(self, vid: int) -> Term:
        t = self._vars.get(vid)
        if t is None:
            t = Term(None, (), vid, False, self._new_tid())
            self._vars[vid] = t
        return t

    def app(self, f: Union[Symbol, str], args: Sequence[Term] = ()) -> Term:
        if isinstance(f, str):
            f = self.symbol(f)
        args = tuple(args)
        if len(args) != f.arity:
            raise ArityError(
                f"{f.name} expects {f.arity} arguments, got {len(args)}")
        key = (f.index,) + tuple(a.tid for a in args)
        t = self._apps.get(key)
        if t is None:
            t = Term(f, args, -1, all(a.ground for a in args), self._new_tid())
            self._apps[key] = t
        return t

    def intern(self, raw: RawTerm) -> Term:
        """Intern a raw term tree (see ``RawTerm``)."""
        if isinstance(raw, Term):
            return raw
        if isinstance(raw, int):
            return self.var(raw)
        if isinstance(raw, str):
            return self.app(raw, ())
        name, raw_args = raw
        return self.app(name, [self.intern(a) for a in raw_args])

    def apply(self, t: Term, subst: "Substitution") -> Term:
        """Instantiate ``t`` with ``subst`` (simultaneous, non-recursive).

        Shared subterms are rebuilt once, so the cost is linear in the
        dag size of ``t``.
        """
        if t.ground or subst.is_empty:
            return t
        memo: dict[int, Term] = {}

        def go(u: Term) -> Term:
            if u.ground:
                return u
            if u.sym is None:
                img = subst.get(u.vid)
                return u if img is None else img
            r = memo.get(u.tid)
            if r is None:
                r = self.app(u.sym, [go(a) for a in u.args])
                memo[u.tid] = r
            return r

        return go(t)


class Substitution:
    """A finite mapping from variable ids to terms.

    Identity bindings are dropped on construction, so the empty
    substitution is exactly the one with no bindings.
    """

    __slots__ = ("_m",)

    def __init__(self, bindings: Union[Mapping[int, Term], Iterable[tuple]] = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        self._m = {v: t for v, t in items if not (t.sym is None and t.vid == v)}

    @property
    def is_empty(self) -> bool:
        return not self._m

    def get(self, vid: int) -> Optional[Term]:
        return self._m.get(vid)

    def image(self, var: Term) -> Term:
        return self._m.get(var.vid, var)

    def items(self):
        return self._m.items()

    def __len__(self) -> int:
        return len(self._m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self._m == other._m

    def __hash__(self) -> int:
        return hash(frozenset((v, t.tid) for v, t in self._m.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"x{v}->{t!r}" for v, t in sorted(self._m.items()))
        return "{" + inner + "}"


EMPTY_SUBST = Substitution()


def occurrences(t: Term, p: Union[Symbol, int]) -> int:
    """Count occurrences of a symbol or a variable id in ``t``."""
    n = 0
    if isinstance(p, int):
        for u in t.subterms():
            if u.sym is None and u.vid == p:
                n += 1
    else:
        for u in t.subterms():
            if u.sym is p:
                n += 1
    return n


class Sign3(enum.Enum):
    """Verdict of a positivity check over all groundings."""

    POSITIVE = ">"
    NON_NEGATIVE = ">="
    NOT_NON_NEGATIVE = "!>="

    def __repr__(self) -> str:
        return self.value


class LinearExpr:
    """An integer linear expression over variables plus a constant.

    Zero coefficients are dropped on construction, so comparing against
    the zero expression is a cheap structural check.  Instances are
    immutable and hashable.
    """

    __slots__ = ("constant", "_coeffs", "_hash")

    def __init__(self, constant: int = 0, coeffs: Union[Mapping[int, int], Iterable[tuple]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self.constant = constant
        self._coeffs = tuple(sorted((v, c) for v, c in items if c != 0))
        self._hash = hash((constant, self._coeffs))

    @classmethod
    def of_const(cls, c: int) -> "LinearExpr":
        return cls(c, ())

    @classmethod
    def of_var(cls, vid: int, coeff: int = 1) -> "LinearExpr":
        return cls(0, ((vid, coeff),))

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    @property
    def is_zero(self) -> bool:
        return self.constant == 0 and not self._coeffs

    def __add__(self, other: "LinearExpr") -> "LinearExpr":
        acc = dict(self._coeffs)
        for v, c in other._coeffs:
            acc[v] = acc.get(v, 0) + c
        return LinearExpr(self.constant + other.constant, acc)

    def __sub__(self, other: "LinearExpr") -> "LinearExpr":
        acc = dict(self._coeffs)
        for v, c in other._coeffs:
            acc[v] = acc.get(v, 0) - c
        return LinearExpr(self.constant - other.constant, acc)

    def __neg__(self) -> "LinearExpr":
        return LinearExpr(-self.constant, [(v, -c) for v, c in self._coeffs])

    def scaled(self, k: int) -> "LinearExpr":
        return LinearExpr(self.constant * k, [(v, c * k) for v, c in self._coeffs])

    def subst(self, sigma: Substitution) -> "LinearExpr":
        """Replace every variable by the weight of its image under sigma."""
        if sigma.is_empty or not self._coeffs:
            return self
        const = self.constant
        acc: dict[int, int] = {}
        for v, c in self._coeffs:
            img = sigma.get(v)
            if img is None:
                acc[v] = acc.get(v, 0) + c
            else:
                w = term_weight(img)
                const += c * w.constant
                for v2, c2 in w._coeffs:
                    acc[v2] = acc.get(v2, 0) + c * c2
        return LinearExpr(const, acc)

    def sign(self, w0: int) -> Sign3:
        """Classify the expression over all groundings with |x| >= w0.

        A negative coefficient admits arbitrarily negative values;
        otherwise the minimum is attained with every variable at w0.
        """
        total = self.constant
        for _, c in self._coeffs:
            if c < 0:
                return Sign3.NOT_NON_NEGATIVE
            total += c * w0
        if total > 0:
            return Sign3.POSITIVE
        if total == 0:
            return Sign3.NON_NEGATIVE
        return Sign3.NOT_NON_NEGATIVE

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearExpr):
            return NotImplemented
        return self.constant == other.constant and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        parts = []
        for v, c in self._coeffs:
            if c == 1:
                parts.append(f"+ x{v}")
            elif c == -1:
                parts.append(f"- x{v}")
            elif c >= 0:
                parts.append(f"+ {c}*x{v}")
            else:
                parts.append(f"- {-c}*x{v}")
        if self.constant or not parts:
            parts.append(f"+ {self.constant}" if self.constant >= 0
                         else f"- {-self.constant}")
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]


ZERO = LinearExpr.of_const(0)


def term_weight(t: Term, memoize: bool = True) -> LinearExpr:
    """The weight |t|: symbol weights summed plus one unit per variable.

    With ``memoize`` the result is cached in the shared term; weights are
    signature constants, so cached values never need invalidation.
    """
    if memoize:
        w = t._weight
        if w is not None:
            return w
    if t.sym is None:
        w = LinearExpr.of_var(t.vid)
    else:
        const = t.sym.weight
        acc: dict[int, int] = {}
        for a in t.args:
            wa = term_weight(a, memoize)
            const += wa.constant
            for v, c in wa._coeffs:
                acc[v] = acc.get(v, 0) + c
        w = LinearExpr(const, acc)
    if memoize:
        t._weight = w
    return w


def subst_linear(sigma: Substitution, e: LinearExpr) -> LinearExpr:
    """Apply a substitution to a linear expression: x becomes |x sigma|."""
    return e.subst(sigma)
