"""Reference implementations written directly from the order definitions.

These deliberately avoid the library's comparison code paths: weights
are recomputed on every call from scratch, the argument rules search
over every split position, and nothing is memoized.  Slow but obviously
faithful, which is what a test oracle should be.
"""

from __future__ import annotations

from itertools import product

from todx import Cmp3, Sign3


def ref_weight(t):
    """(constant, {vid: coeff}) computed by a fresh traversal."""
    const = 0
    coeffs: dict[int, int] = {}
    stack = [t]
    while stack:
        u = stack.pop()
        if u.sym is None:
            coeffs[u.vid] = coeffs.get(u.vid, 0) + 1
        else:
            const += u.sym.weight
            stack.extend(u.args)
    return const, coeffs


def ref_sign(const, coeffs, w0):
    if any(c < 0 for c in coeffs.values()):
        return Sign3.NOT_NON_NEGATIVE
    low = const + w0 * sum(coeffs.values())
    if low > 0:
        return Sign3.POSITIVE
    if low == 0:
        return Sign3.NON_NEGATIVE
    return Sign3.NOT_NON_NEGATIVE


def _ref_weight_diff_sign(s, t, w0):
    cs, xs = ref_weight(s)
    ct, xt = ref_weight(t)
    coeffs = dict(xs)
    for v, c in xt.items():
        coeffs[v] = coeffs.get(v, 0) - c
    return ref_sign(cs - ct, coeffs, w0)


def ref_kbo(sig, s, t):
    """KBO verdict by literal application of the three defining cases."""
    if s is t:
        return Cmp3.EQUAL
    sg = _ref_weight_diff_sign(s, t, sig.w0)
    if sg is Sign3.POSITIVE:
        return Cmp3.GREATER
    if sg is Sign3.NON_NEGATIVE and s.sym is not None and t.sym is not None:
        if s.sym.precedence > t.sym.precedence:
            return Cmp3.GREATER
        if s.sym is t.sym:
            n = len(s.args)
            for i in range(n):
                if (all(s.args[j] is t.args[j] for j in range(i))
                        and ref_kbo(sig, s.args[i], t.args[i]) is Cmp3.GREATER):
                    return Cmp3.GREATER
    return Cmp3.NOT_GREATER_EQUAL


def _ref_lpo_greater(s, t):
    if s.sym is None:
        return False
    if any(a is t or _ref_lpo_greater(a, t) for a in s.args):
        return True
    if t.sym is None:
        return False
    if s.sym is t.sym:
        n = len(s.args)
        for i in range(n):
            if (all(s.args[j] is t.args[j] for j in range(i))
                    and _ref_lpo_greater(s.args[i], t.args[i])
                    and all(_ref_lpo_greater(s, t.args[k])
                            for k in range(i + 1, n))):
                return True
    if s.sym.precedence > t.sym.precedence:
        if all(_ref_lpo_greater(s, b) for b in t.args):
            return True
    return False


def ref_lpo(sig, s, t):
    if s is t:
        return Cmp3.EQUAL
    return Cmp3.GREATER if _ref_lpo_greater(s, t) else Cmp3.NOT_GREATER_EQUAL


def ref_compare(sig, kind, s, t):
    return ref_kbo(sig, s, t) if kind == "kbo" else ref_lpo(sig, s, t)


def brute_sign(expr, w0, span=6):
    """Classify a linear expression by enumerating a grid of groundings.

    Assigns every variable each value in {w0, ..., w0+span-1}; returns
    (verdict, witness) where the witness is an assignment with a
    negative value when one exists on the grid.
    """
    coeffs = expr.coeffs
    if any(c < 0 for c in coeffs.values()):
        # some grounding family is unbounded below
        pass
    vids = sorted(coeffs)
    values = []
    witness = None
    for combo in product(range(w0, w0 + span), repeat=len(vids)):
        val = expr.constant + sum(c * v for c, v in zip(
            (coeffs[x] for x in vids), combo))
        values.append(val)
        if val < 0 and witness is None:
            witness = dict(zip(vids, combo))
    if any(c < 0 for c in coeffs.values()):
        return Sign3.NOT_NON_NEGATIVE, witness
    if all(v > 0 for v in values):
        return Sign3.POSITIVE, witness
    if all(v >= 0 for v in values):
        return Sign3.NON_NEGATIVE, witness
    return Sign3.NOT_NON_NEGATIVE, witness
