"""Sparse multivariate polynomials with exact Gaussian-rational coefficients.

Variables are :class:`FormalVar` amplitudes ``a_jk`` and their formal
conjugates ``a*_jk``; the two are independent polynomial variables. A
polynomial stores a sorted tuple of variables (its ring) and a dict from
exponent tuples (one entry per ring variable) to coefficients.

Coefficients are ``(re, im)`` pairs of ``int`` or ``Fraction``. Plain pairs
keep the inner loops of multiplication and evaluation fast; use
:func:`gauss` to convert numbers in and :func:`gauss_to_complex` to get a
float out. Zero coefficients are never stored.
"""

from __future__ import annotations

import json
import operator
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from ..errors import InvalidInput

ZERO = (0, 0)
ONE = (1, 0)


class FormalVar(NamedTuple):
    state: int
    component: int
    conjugated: bool = False

    def conj(self) -> "FormalVar":
        return FormalVar(self.state, self.component, not self.conjugated)

    def __str__(self):
        star = "*" if self.conjugated else ""
        return f"a{star}_{self.state}{self.component}"


def gauss(value) -> tuple:
    """Convert an int, Fraction, float, complex or ``(re, im)`` pair to an exact pair.

    Floats are converted exactly (every binary float is a rational).
    """
    if isinstance(value, tuple):
        re, im = value
        return (_rational(re), _rational(im))
    if isinstance(value, (complex, np.complexfloating)):
        return (_rational(value.real), _rational(value.imag))
    return (_rational(value), 0)


def _rational(x):
    if isinstance(x, int):
        return x
    if isinstance(x, Rational):
        f = Fraction(x)
        return f.numerator if f.denominator == 1 else f
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise InvalidInput("non-finite value")
        return _rational(Fraction(float(x)))
    if isinstance(x, np.integer):
        return int(x)
    raise InvalidInput(f"cannot convert {x!r} to an exact rational")


def gmul(a, b):
    ar, ai = a
    br, bi = b
    return (ar * br - ai * bi, ar * bi + ai * br)


def gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def gdiv(a, b):
    br, bi = b
    den = Fraction(br * br + bi * bi)
    if den == 0:
        raise ZeroDivisionError("division by zero Gaussian rational")
    ar, ai = a
    return (_rational((ar * br + ai * bi) / den), _rational((ai * br - ar * bi) / den))


def gconj(a):
    return (a[0], -a[1])


def gauss_to_complex(a) -> complex:
    return complex(float(a[0]), float(a[1]))


def _is_zero(c) -> bool:
    return c[0] == 0 and c[1] == 0


_add = operator.add


class SparsePoly:
    """Immutable sparse polynomial; see the module docstring for the layout."""

    __slots__ = ("vars", "terms", "_arrays")

    def __init__(self, variables: Iterable[FormalVar] = (), terms: Mapping | None = None):
        self.vars = tuple(variables)
        self.terms = {} if terms is None else dict(terms)
        self._arrays = None

    # -- construction -------------------------------------------------------

    @classmethod
    def _raw(cls, variables, terms):
        p = cls.__new__(cls)
        p.vars = variables
        p.terms = terms
        p._arrays = None
        return p

    @classmethod
    def zero(cls) -> "SparsePoly":
        return cls._raw((), {})

    @classmethod
    def const(cls, value) -> "SparsePoly":
        c = gauss(value)
        return cls._raw((), {} if _is_zero(c) else {(): c})

    @classmethod
    def var(cls, v: FormalVar) -> "SparsePoly":
        return cls._raw((v,), {(1,): ONE})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Mapping[FormalVar, int], object]]) -> "SparsePoly":
        """Build from ``(monomial, coefficient)`` pairs, monomial as ``{var: power}``."""
        items = [(dict(m), gauss(c)) for m, c in terms]
        variables = tuple(sorted({v for m, _ in items for v, e in m.items() if e}))
        pos = {v: i for i, v in enumerate(variables)}
        out = {}
        for m, c in items:
            key = [0] * len(variables)
            for v, e in m.items():
                if e < 0:
                    raise InvalidInput("negative exponent")
                if e:
                    key[pos[v]] += e
            key = tuple(key)
            out[key] = gadd(out.get(key, ZERO), c)
        return cls._raw(variables, {k: c for k, c in out.items() if not _is_zero(c)})

    # -- ring alignment -----------------------------------------------------

    def _embed(self, variables: tuple) -> dict:
        if variables == self.vars:
            return self.terms
        pos = [variables.index(v) for v in self.vars]
        n = len(variables)
        out = {}
        for key, c in self.terms.items():
            k = [0] * n
            for p, e in zip(pos, key):
                k[p] = e
            out[tuple(k)] = c
        return out

    def _align(self, other: "SparsePoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        variables = tuple(sorted(set(self.vars) | set(other.vars)))
        return variables, self._embed(variables), other._embed(variables)

    def pruned(self) -> "SparsePoly":
        """Same polynomial with unused variables dropped from the ring."""
        used = [i for i in range(len(self.vars)) if any(k[i] for k in self.terms)]
        if len(used) == len(self.vars):
            return self
        variables = tuple(self.vars[i] for i in used)
        return SparsePoly._raw(variables, {tuple(k[i] for i in used): c for k, c in self.terms.items()})

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, SparsePoly):
            return other
        return SparsePoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        variables, a, b = self._align(other)
        out = dict(a)
        for k, c in b.items():
            prev = out.get(k)
            if prev is None:
                out[k] = c
            else:
                s = (prev[0] + c[0], prev[1] + c[1])
                if s[0] == 0 and s[1] == 0:
                    del out[k]
                else:
                    out[k] = s
        return SparsePoly._raw(variables, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.vars, {k: (-c[0], -c[1]) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return SparsePoly.zero()
        variables, a, b = self._align(other)
        out = {}
        get = out.get
        for ka, (ar, ai) in a.items():
            for kb, (br, bi) in b.items():
                k = tuple(map(_add, ka, kb))
                re = ar * br - ai * bi
                im = ar * bi + ai * br
                prev = get(k)
                if prev is None:
                    out[k] = (re, im)
                else:
                    out[k] = (prev[0] + re, prev[1] + im)
        return SparsePoly._raw(variables, {k: c for k, c in out.items() if c[0] != 0 or c[1] != 0})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise InvalidInput("exponent must be a non-negative integer")
        result = SparsePoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "SparsePoly":
        c = gauss(c)
        if _is_zero(c):
            return SparsePoly.zero()
        return SparsePoly._raw(self.vars, {k: gmul(v, c) for k, v in self.terms.items()})

    def conj(self) -> "SparsePoly":
        """Swap every variable with its formal conjugate and conjugate coefficients."""
        swapped = [v.conj() for v in self.vars]
        variables = tuple(sorted(swapped))
        perm = [swapped.index(v) for v in variables]
        return SparsePoly._raw(
            variables,
            {tuple(k[i] for i in perm): (c[0], -c[1]) for k, c in self.terms.items()},
        )

    # -- inspection ---------------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> frozenset:
        """Variables that actually occur (ring variables with all-zero exponents are ignored)."""
        return frozenset(v for i, v in enumerate(self.vars) if any(k[i] for k in self.terms))

    def degree(self, v: FormalVar) -> int:
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        return max((k[i] for k in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def constant_value(self):
        """The coefficient of the empty monomial (``ZERO`` if absent)."""
        return self.terms.get((0,) * len(self.vars), ZERO)

    def is_constant(self) -> bool:
        return all(not any(k) for k in self.terms)

    def monomials(self) -> list[tuple[dict, tuple]]:
        return [({v: e for v, e in zip(self.vars, k) if e}, c) for k, c in self.terms.items()]

    def collect(self, v: FormalVar) -> dict[int, "SparsePoly"]:
        """Split into ``{power: coefficient polynomial}`` with respect to ``v``."""
        if v not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(v)
        variables = self.vars[:i] + self.vars[i + 1:]
        groups: dict[int, dict] = {}
        for k, c in self.terms.items():
            groups.setdefault(k[i], {})[k[:i] + k[i + 1:]] = c
        return {e: SparsePoly._raw(variables, t) for e, t in groups.items()}

    def _canonical(self):
        return sorted(
            (tuple((v.state, v.component, int(v.conjugated), e) for v, e in zip(self.vars, k) if e), c)
            for k, c in self.terms.items()
        )

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                other = SparsePoly.const(other)
            except InvalidInput:
                return NotImplemented
        a, b = self.pruned(), other.pruned()
        if set(a.vars) != set(b.vars) or len(a.terms) != len(b.terms):
            return False
        _, ta, tb = a._align(b)
        return ta == tb

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "SparsePoly(0)"
        parts = []
        for mono, c in self._canonical()[:8]:
            m = "*".join(
                f"{FormalVar(j, k, bool(cj))}" + (f"^{e}" if e > 1 else "") for j, k, cj, e in mono
            )
            parts.append(f"({c[0]}{'+' if c[1] >= 0 else ''}{c[1]}i){'*' + m if m else ''}")
        more = f" + ... [{len(self.terms)} terms]" if len(self.terms) > 8 else ""
        return "SparsePoly(" + " + ".join(parts) + more + ")"

    # -- evaluation ---------------------------------------------------------

    def partial_evaluate(self, assignment: Mapping[FormalVar, object]) -> "SparsePoly":
        """Substitute exact values for the assigned variables.

        Values may be anything :func:`gauss` accepts; unassigned variables
        stay symbolic.
        """
        assigned = []
        free = []
        for i, v in enumerate(self.vars):
            if v in assignment:
                assigned.append(i)
            else:
                free.append(i)
        if not assigned:
            return self
        maxdeg = [0] * len(self.vars)
        for k in self.terms:
            for i in assigned:
                if k[i] > maxdeg[i]:
                    maxdeg[i] = k[i]
        tables = {}
        for i in assigned:
            val = gauss(assignment[self.vars[i]])
            pw = [ONE]
            for _ in range(maxdeg[i]):
                pw.append(gmul(pw[-1], val))
            tables[i] = pw
        plan = [(i, tables[i]) for i in assigned if maxdeg[i]]
        out = {}
        get = out.get
        for k, (re, im) in self.terms.items():
            for i, pw in plan:
                e = k[i]
                if e:
                    pr, pi = pw[e]
                    re, im = re * pr - im * pi, re * pi + im * pr
            nk = tuple(k[i] for i in free)
            prev = get(nk)
            out[nk] = (re, im) if prev is None else (prev[0] + re, prev[1] + im)
        variables = tuple(self.vars[i] for i in free)
        return SparsePoly._raw(variables, {k: c for k, c in out.items() if c[0] != 0 or c[1] != 0})

    def evaluate(self, assignment: Mapping[FormalVar, object]) -> tuple:
        """Exact value; every occurring variable must be assigned."""
        rest = self.partial_evaluate(assignment)
        if rest.variables():
            missing = sorted(str(v) for v in rest.variables())
            raise InvalidInput(f"unassigned variables: {missing}")
        return rest.constant_value()

    def _float_arrays(self):
        if self._arrays is None:
            keys = list(self.terms)
            exps = np.array(keys, dtype=np.int16).reshape(len(keys), len(self.vars))
            coeffs = np.array([gauss_to_complex(self.terms[k]) for k in keys], dtype=complex)
            self._arrays = (exps, coeffs)
        return self._arrays

    def evaluate_float(self, values: Mapping[FormalVar, complex], with_scale: bool = False):
        """Floating-point value, optionally with the absolute majorant ``sum |c| prod |x|^e``.

        The majorant is the natural error scale of the evaluation and is what
        "scale-normalized" values in this package are divided by.
        """
        exps, coeffs = self._float_arrays()
        prod = coeffs.copy()
        absprod = np.abs(coeffs) if with_scale else None
        for i, v in enumerate(self.vars):
            col = exps[:, i]
            top = int(col.max(initial=0))
            if top == 0:
                continue
            x = complex(values[v])
            pw = x ** np.arange(top + 1)
            prod *= pw[col]
            if with_scale:
                absprod *= np.abs(pw)[col]
        value = complex(prod.sum())
        if with_scale:
            return value, float(absprod.sum())
        return value

    # -- serialization ------------------------------------------------------

    def to_json_obj(self) -> list:
        out = []
        for mono, (re, im) in self._canonical():
            fr, fi = Fraction(re), Fraction(im)
            out.append({
                "exponents": [list(t) for t in mono],
                "coeff": [fr.numerator, fr.denominator, fi.numerator, fi.denominator],
            })
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, data: list) -> "SparsePoly":
        terms = []
        for entry in data:
            nr, dr, ni, di = entry["coeff"]
            mono = {}
            for j, k, cj, e in entry["exponents"]:
                v = FormalVar(int(j), int(k), bool(cj))
                mono[v] = mono.get(v, 0) + int(e)
            terms.append((mono, (Fraction(nr, dr), Fraction(ni, di))))
        return cls.from_terms(terms)

    @classmethod
    def from_json(cls, text: str) -> "SparsePoly":
        return cls.from_json_obj(json.loads(text))


def amp(state: int, component: int) -> SparsePoly:
    return SparsePoly.var(FormalVar(state, component, False))


def amp_conj(state: int, component: int) -> SparsePoly:
    return SparsePoly.var(FormalVar(state, component, True))
