"""Variable elimination on the span determinant.

``D_A = det(M^dag M)`` is built as an exact polynomial in the amplitudes
``a_jk`` and their formal conjugates. Each orthogonality constraint
``<a_p, a_q> = 0`` is written ``x*y + R = 0`` with ``x = a*_pc`` (the pivot),
``y`` the partner coefficient and ``R`` free of ``x`` and ``conj(x)``. If
``D`` has degree ``e`` in ``x`` and ``f`` in ``conj(x)``, then

    y^e conj(y)^f D  =  sum_{s,t} mu_st (x y)^s (conj(x) conj(y))^t y^(e-s) conj(y)^(f-t)

and replacing ``x y -> -R`` and ``conj(x) conj(y) -> -conj(R)`` removes the
pivot. Before the next constraint on the same vector ``a_p`` the remaining
partners are primed, ``a'_j = y a_j - a_jc a_q``, so the eliminated
component cannot come back.

Fully expanding the result is out of reach already at (d, n, N) = (2, 2, 3)
(after two steps the term count is beyond memory), so the eliminated
polynomial is kept staged: the expanded ``D_A`` plus the recorded steps.
:class:`EliminatedPoly` evaluates that exactly without division, evaluates
it in floating point, and expands it when the result is small enough.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from ..errors import BadConstraint, DegeneratePivot, InstanceTooLarge, InvalidInput, NumericalError
from ..linalg import check_dims, haar_orthonormal_columns, tensor_index, tensor_unindex
from .poly import ONE, FormalVar, SparsePoly, amp, amp_conj, gauss, gmul

SUPPORTED_INSTANCE = (2, 2, 3)

# Half-width of the integer box used for random Gaussian specializations.
_SPECIALIZATION_BOUND = 2**20


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def poly_det(matrix: Sequence[Sequence[SparsePoly]]) -> SparsePoly:
    """Leibniz determinant of a small square matrix of polynomials."""
    n = len(matrix)
    total = SparsePoly.zero()
    for perm in itertools.permutations(range(n)):
        term = SparsePoly.const(_permutation_sign(perm))
        for r in range(n):
            entry = matrix[r][perm[r]]
            if entry.is_zero():
                term = SparsePoly.zero()
                break
            term = term * entry
        if not term.is_zero():
            total = total + term
    return total


def symbolic_pair_operator(i: int, j: int, dims: Sequence[int], party: int) -> list[list[SparsePoly]]:
    """``Tr_{not party} |psi_i><psi_j|`` with formal amplitudes."""
    d = dims[party]
    total = math.prod(dims)
    out = [[SparsePoly.zero() for _ in range(d)] for _ in range(d)]
    for k1 in range(total):
        m1 = tensor_unindex(k1, dims)
        for b in range(d):
            m2 = list(m1)
            m2[party] = b
            k2 = tensor_index(m2, dims)
            out[m1[party]][b] = out[m1[party]][b] + amp(i, k1) * amp_conj(j, k2)
    return out


def symbolic_span_rows(dims: Sequence[int], n_states: int, party: int) -> list[list[SparsePoly]]:
    """Rows of the span matrix: ``vec(A_ij)`` for ordered pairs, then ``vec(I)``."""
    d = dims[party]
    rows = []
    for i in range(n_states):
        for j in range(n_states):
            if i != j:
                a = symbolic_pair_operator(i, j, dims, party)
                rows.append([a[r][c] for r in range(d) for c in range(d)])
    rows.append([SparsePoly.const(1 if r == c else 0) for r in range(d) for c in range(d)])
    return rows


@lru_cache(maxsize=4)
def symbolic_span_det(d: int = 2, n: int = 2, n_states: int = 3, party: int = 0) -> SparsePoly:
    """``D_A = det(M^dag M)`` as an exact polynomial (only (2, 2, 3) is accepted).

    Expanded through Cauchy-Binet, ``det(M^dag M) = sum_S conj(det M_S) det M_S``
    over all ``d^2``-row subsets ``S``, which keeps intermediate sizes small.
    """
    if (d, n, n_states) != SUPPORTED_INSTANCE:
        raise InstanceTooLarge(
            f"symbolic determinant is limited to (d, n, N) = {SUPPORTED_INSTANCE}, got {(d, n, n_states)}"
        )
    if not 0 <= party < n:
        raise InvalidInput(f"party {party} out of range for {n} parties")
    dims = check_dims([d] * n)
    rows = symbolic_span_rows(dims, n_states, party)
    cols = d * d
    total = SparsePoly.zero()
    for subset in itertools.combinations(range(len(rows)), cols):
        minor = poly_det([rows[r] for r in subset])
        if not minor.is_zero():
            total = total + minor.conj() * minor
    return total


# --- single-step elimination -------------------------------------------------

def split_constraint(constraint: SparsePoly, pivot: FormalVar) -> tuple[SparsePoly, SparsePoly]:
    """Write ``constraint = pivot * partner + remainder``.

    Raises :class:`BadConstraint` unless the constraint is linear in the
    pivot and neither partner nor remainder involves the pivot or its
    conjugate.
    """
    parts = constraint.collect(pivot)
    if set(parts) - {0, 1} or 1 not in parts:
        raise BadConstraint(f"constraint is not linear in {pivot}")
    partner = parts[1]
    remainder = parts.get(0, SparsePoly.zero())
    banned = {pivot, pivot.conj()}
    if partner.variables() & banned or remainder.variables() & banned:
        raise BadConstraint(f"partner or remainder still involves {pivot} or its conjugate")
    return partner, remainder


def substitute_pivot(
    p: SparsePoly,
    pivot: FormalVar,
    partner: SparsePoly,
    remainder: SparsePoly,
    degrees: tuple[int, int] | None = None,
    conjugates: tuple[SparsePoly, SparsePoly] | None = None,
) -> tuple[SparsePoly, SparsePoly, tuple[int, int]]:
    """Homogenized substitution of ``pivot*partner -> -remainder`` (and its conjugate).

    ``degrees`` is ``(deg in pivot, deg in conj(pivot))``; by default it is
    read off ``p``. Passing larger values is allowed and only adds partner
    factors. ``conjugates`` gives ``(conj(partner), conj(remainder))``
    explicitly; it is needed when partner and remainder have been partially
    evaluated, since formal conjugates are independent of the plain
    variables. Returns ``(result, multiplier, degrees)``.
    """
    cpivot = pivot.conj()
    if degrees is None:
        degrees = (p.degree(pivot), p.degree(cpivot))
    e, f = degrees
    if p.degree(pivot) > e or p.degree(cpivot) > f:
        raise InvalidInput("requested degrees are below the pivot degrees of p")
    cpartner, cremainder = conjugates if conjugates is not None else (partner.conj(), remainder.conj())
    neg_r, neg_cr = -remainder, -cremainder
    r_pows = [SparsePoly.const(1)]
    y_pows = [SparsePoly.const(1)]
    for _ in range(e):
        r_pows.append(r_pows[-1] * neg_r)
        y_pows.append(y_pows[-1] * partner)
    cr_pows = [SparsePoly.const(1)]
    cy_pows = [SparsePoly.const(1)]
    for _ in range(f):
        cr_pows.append(cr_pows[-1] * neg_cr)
        cy_pows.append(cy_pows[-1] * cpartner)
    result = SparsePoly.zero()
    for s, by_s in p.collect(pivot).items():
        for t, mu in by_s.collect(cpivot).items():
            factor = (r_pows[s] * y_pows[e - s]) * (cr_pows[t] * cy_pows[f - t])
            result = result + mu * factor
    multiplier = y_pows[e] * cy_pows[f]
    return result, multiplier, degrees


def eliminate_variable(
    p: SparsePoly,
    constraint: SparsePoly,
    pivot: FormalVar,
    partner: FormalVar | SparsePoly | None = None,
) -> tuple[SparsePoly, SparsePoly]:
    """Eliminate ``pivot`` (and its conjugate) from ``p`` using ``constraint = 0``.

    ``partner`` defaults to the coefficient of ``pivot`` in the constraint;
    when given it must match that coefficient. Returns ``(result, multiplier)``
    with ``result == multiplier * p`` wherever the constraint holds.
    """
    y, r = split_constraint(constraint, pivot)
    if partner is not None:
        expected = SparsePoly.var(partner) if isinstance(partner, FormalVar) else partner
        if expected != y:
            raise BadConstraint(f"coefficient of {pivot} in the constraint is not the given partner")
    result, multiplier, _ = substitute_pivot(p, pivot, y, r)
    return result, multiplier


# --- constraints -------------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """``<left_vec, right_vec> = 0`` where ``left`` is the vector whose components get eliminated."""

    left: int
    right: int
    left_vec: tuple[SparsePoly, ...]
    right_vec: tuple[SparsePoly, ...]
    primed: bool = False

    @property
    def poly(self) -> SparsePoly:
        total = SparsePoly.zero()
        for a, b in zip(self.left_vec, self.right_vec):
            if not b.is_zero():
                total = total + a.conj() * b
        return total


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[Constraint, ...]

    @property
    def polys(self) -> list[SparsePoly]:
        return [c.poly for c in self.constraints]

    @property
    def vectors(self) -> dict[tuple[int, int], tuple[SparsePoly, ...]]:
        """Right-hand vectors keyed by ``(left, right)``; primed ones are ``a'_right``."""
        return {(c.left, c.right): c.right_vec for c in self.constraints}

    def without(self, used: Constraint) -> "ConstraintSet":
        return ConstraintSet(tuple(c for c in self.constraints if c is not used))

    def __len__(self):
        return len(self.constraints)


def initial_constraints(n_states: int, total_dim: int) -> ConstraintSet:
    """All ``<a_p, a_q> = 0`` for ``p < q``, ordered by ``p`` then ``q``."""
    vecs = [tuple(amp(j, k) for k in range(total_dim)) for j in range(n_states)]
    return ConstraintSet(tuple(
        Constraint(p, q, vecs[p], vecs[q]) for p in range(n_states) for q in range(p + 1, n_states)
    ))


def prime_constraints(cs: ConstraintSet, used: Constraint, component: int) -> ConstraintSet:
    """Replace ``a_j`` by ``a'_j = y a_j - a_jc a_q`` in the remaining constraints on ``used.left``.

    ``y = used.right_vec[component]`` is the partner just pivoted on. The
    coefficient of ``conj(a_{left, component})`` in every primed constraint
    cancels identically, so the eliminated variable is not reintroduced.
    """
    partner_vec = used.right_vec
    y = partner_vec[component]
    if y.is_zero():
        raise DegeneratePivot(f"partner component {component} is symbolically zero")
    out = []
    for c in cs.constraints:
        if c is used or c.left != used.left:
            out.append(c)
            continue
        coef = c.right_vec[component]
        new_vec = tuple(y * v - coef * w for v, w in zip(c.right_vec, partner_vec))
        out.append(replace(c, right_vec=new_vec, primed=True))
    return ConstraintSet(tuple(out))


def choose_pivot(constraint: Constraint) -> int:
    """Lowest component whose partner coefficient is not symbolically zero."""
    for k, y in enumerate(constraint.right_vec):
        if not y.is_zero():
            return k
    raise DegeneratePivot(f"every partner coefficient of <a_{constraint.left}, a_{constraint.right}> is zero")


# --- staged result -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EliminationStep:
    """One pivot elimination.

    ``pivot`` is the conjugated amplitude ``a*_pc`` that multiplies the
    partner in the constraint. ``sigma`` is the degree of the polynomial in
    the plain amplitude ``a_pc`` and ``tau`` its degree in ``a*_pc``; the
    multiplier is ``partner^tau * conj(partner)^sigma``.
    """

    pivot: FormalVar
    partner: SparsePoly
    remainder: SparsePoly
    sigma: int
    tau: int
    constraint: tuple[int, int] = (0, 0)
    partner_conj: SparsePoly = field(init=False, repr=False)
    remainder_conj: SparsePoly = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "partner_conj", self.partner.conj())
        object.__setattr__(self, "remainder_conj", self.remainder.conj())

    @property
    def slot(self) -> FormalVar:
        """The unconjugated amplitude being eliminated."""
        return self.pivot.conj() if self.pivot.conjugated else self.pivot

    @property
    def multiplier(self) -> SparsePoly:
        return self.partner**self.tau * self.partner_conj**self.sigma

    def degrees(self) -> tuple[int, int]:
        """``(deg in pivot, deg in conj(pivot))`` as used by :func:`substitute_pivot`."""
        return (self.tau, self.sigma) if self.pivot.conjugated else (self.sigma, self.tau)


@dataclass(frozen=True, eq=False)
class EliminationTrace:
    steps: tuple[EliminationStep, ...]

    @property
    def eliminated(self) -> tuple[FormalVar, ...]:
        return tuple(s.slot for s in self.steps)

    def multiplier_product(self) -> SparsePoly:
        out = SparsePoly.const(1)
        for s in self.steps:
            out = out * s.multiplier
        return out

    def multiplier_value(self, point: Mapping[FormalVar, object]) -> tuple:
        value = ONE
        for s in self.steps:
            value = gmul(value, s.multiplier.evaluate(point))
        return value

    def multiplier_value_float(self, point: Mapping[FormalVar, complex]) -> complex:
        value = 1.0 + 0j
        for s in self.steps:
            y = s.partner.evaluate_float(point)
            cy = s.partner_conj.evaluate_float(point)
            value *= y**s.tau * cy**s.sigma
        return value


@dataclass(frozen=True, eq=False)
class EliminatedPoly:
    """``base`` after the substitutions recorded in ``steps`` (applied in order)."""

    base: SparsePoly
    steps: tuple[EliminationStep, ...] = ()

    def extend(self, step: EliminationStep) -> "EliminatedPoly":
        return EliminatedPoly(self.base, self.steps + (step,))

    def variables(self) -> frozenset:
        current = set(self.base.variables())
        for s in self.steps:
            current -= {s.pivot, s.pivot.conj()}
            for q in (s.partner, s.partner_conj, s.remainder, s.remainder_conj):
                current |= q.variables()
        return frozenset(current)

    def slots(self) -> frozenset:
        """Amplitude slots ``(state, component)`` mentioned, conjugate or not."""
        return frozenset((v.state, v.component) for v in self.variables())

    def specialize(self, assignment: Mapping[FormalVar, object], level: int | None = None) -> SparsePoly:
        """Exact partial evaluation without division.

        Values for eliminated pivots are ignored: the staged polynomial does
        not depend on them.
        """
        level = len(self.steps) if level is None else level
        if level == 0:
            return self.base.partial_evaluate(assignment)
        step = self.steps[level - 1]
        banned = (step.pivot, step.pivot.conj())
        inner_asg = {v: x for v, x in assignment.items() if v not in banned}
        inner = self.specialize(inner_asg, level - 1)
        y = step.partner.partial_evaluate(inner_asg)
        r = step.remainder.partial_evaluate(inner_asg)
        cy = step.partner_conj.partial_evaluate(inner_asg)
        cr = step.remainder_conj.partial_evaluate(inner_asg)
        result, _, _ = substitute_pivot(inner, step.pivot, y, r, step.degrees(), (cy, cr))
        return result

    def evaluate(self, point: Mapping[FormalVar, object]) -> tuple:
        rest = self.specialize(point)
        if rest.variables():
            raise InvalidInput(f"unassigned variables: {sorted(map(str, rest.variables()))}")
        return rest.constant_value()

    def evaluate_float(self, point: Mapping[FormalVar, complex], with_scale: bool = False, level: int | None = None):
        """Floating-point value through the rational substitution ``pivot = -R / partner``.

        The scale is the product of ``|partner|`` powers with the base
        polynomial's absolute majorant at the substituted point. Raises
        :class:`NumericalError` if a partner vanishes at the point.
        """
        level = len(self.steps) if level is None else level
        if level == 0:
            return self.base.evaluate_float(point, with_scale=with_scale)
        step = self.steps[level - 1]
        y = step.partner.evaluate_float(point)
        cy = step.partner_conj.evaluate_float(point)
        if y == 0 or cy == 0:
            raise NumericalError(f"partner of {step.pivot} vanishes at this point")
        sub = dict(point)
        sub[step.pivot] = -step.remainder.evaluate_float(point) / y
        sub[step.pivot.conj()] = -step.remainder_conj.evaluate_float(point) / cy
        e, f = step.degrees()
        factor = y**e * cy**f
        inner = self.evaluate_float(sub, with_scale=with_scale, level=level - 1)
        if with_scale:
            return inner[0] * factor, inner[1] * abs(factor)
        return inner * factor

    def expand(self, max_terms: int = 200_000) -> SparsePoly:
        """Fully expanded polynomial; :class:`InstanceTooLarge` past ``max_terms``."""
        p = self.base
        for step in self.steps:
            if len(p) > max_terms:
                raise InstanceTooLarge(f"intermediate polynomial has {len(p)} terms (limit {max_terms})")
            p, _, _ = substitute_pivot(p, step.pivot, step.partner, step.remainder, step.degrees())
        if len(p) > max_terms:
            raise InstanceTooLarge(f"expanded polynomial has {len(p)} terms (limit {max_terms})")
        return p


def _random_gauss_int(rng: random.Random, bound: int) -> tuple:
    return (rng.randint(-bound, bound), rng.randint(-bound, bound))


def staged_degrees(poly: EliminatedPoly, pivot: FormalVar, rng: random.Random, trials: int = 2) -> tuple[int, int]:
    """Degrees of a staged polynomial in ``pivot`` and ``conj(pivot)``.

    Read exactly from the expanded base when there are no steps; otherwise
    every other variable is specialized to random Gaussian integers and the
    largest degree seen over ``trials`` specializations is returned. A top
    coefficient can vanish at a random point only with probability at most
    ``deg / 2^21`` per trial.
    """
    cpivot = pivot.conj()
    if not poly.steps:
        return poly.base.degree(pivot), poly.base.degree(cpivot)
    others = (poly.variables() | poly.base.variables()) - {pivot, cpivot}
    best = (0, 0)
    for _ in range(trials):
        asg = {v: _random_gauss_int(rng, _SPECIALIZATION_BOUND) for v in sorted(others)}
        spec = poly.specialize(asg)
        best = (max(best[0], spec.degree(pivot)), max(best[1], spec.degree(cpivot)))
    return best


def run_elimination(
    d: int = 2, n: int = 2, n_states: int = 3, party: int = 0, seed: int = 0
) -> tuple[EliminatedPoly, EliminationTrace]:
    """Impose every orthogonality constraint on ``D_A``.

    Constraints on ``a_0`` come first, then ``a_1``, and so on; each removes
    the lowest not-yet-eliminated component of the left vector. ``seed``
    drives the random specializations used to read off pivot degrees.
    """
    base = symbolic_span_det(d, n, n_states, party)
    rng = random.Random(seed)
    cs = initial_constraints(n_states, d**n)
    staged = EliminatedPoly(base)
    for p in range(n_states):
        while True:
            pending = [c for c in cs.constraints if c.left == p]
            if not pending:
                break
            con = pending[0]
            comp = choose_pivot(con)
            pivot = FormalVar(p, comp, True)
            partner, remainder = split_constraint(con.poly, pivot)
            e, f = staged_degrees(staged, pivot, rng)
            step = EliminationStep(pivot, partner, remainder, sigma=f, tau=e, constraint=(con.left, con.right))
            staged = staged.extend(step)
            cs = prime_constraints(cs, con, comp).without(con)
    return staged, EliminationTrace(staged.steps)


# --- identity testing and sample points ---------------------------------------

def _random_gauss_rational(rng: random.Random, bound: int = 1000, den: int = 97) -> tuple:
    return (
        Fraction(rng.randint(-bound, bound), rng.randint(1, den)),
        Fraction(rng.randint(-bound, bound), rng.randint(1, den)),
    )


def pit_check(lhs: SparsePoly, rhs: SparsePoly, trials: int = 10, rng=None) -> bool:
    """Randomized identity test: exact evaluation at random Gaussian-rational points.

    A ``False`` answer is certain. A ``True`` answer is wrong with probability
    at most ``(deg / ~2000)^trials`` (Schwartz-Zippel over the sampled box).
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    variables = sorted(lhs.variables() | rhs.variables())
    for _ in range(trials):
        point = {v: _random_gauss_rational(rng) for v in variables}
        if lhs.evaluate(point) != rhs.evaluate(point):
            return False
    return True


def conjugate_closed_point(values: Mapping[tuple[int, int], object]) -> dict:
    """Map ``{(state, component): value}`` to formal variables, conjugates included."""
    out = {}
    for (j, k), x in values.items():
        g = gauss(x)
        out[FormalVar(j, k, False)] = g
        out[FormalVar(j, k, True)] = (g[0], -g[1])
    return out


def float_point(states) -> dict:
    """Formal-variable assignment for a numeric ``(N, D)`` amplitude array."""
    out = {}
    for j, row in enumerate(states):
        for k, x in enumerate(row):
            x = complex(x)
            out[FormalVar(j, k, False)] = x
            out[FormalVar(j, k, True)] = x.conjugate()
    return out


def random_orthogonal_gaussian_integers(n_states: int, total_dim: int, rng, bound: int = 3) -> list[list[tuple]]:
    """Mutually orthogonal (not normalized) vectors with Gaussian-integer entries.

    Exact Gram-Schmidt over the Gaussian rationals, then each vector is
    scaled by the lcm of its denominators.
    """
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    basis: list[list[tuple]] = []
    while len(basis) < n_states:
        v = [_random_gauss_int(rng, bound) for _ in range(total_dim)]
        for u in basis:
            num = _inner(u, v)
            den = _inner(u, u)
            coef = _gdiv_exact(num, den)
            v = [(a[0] - (coef[0] * b[0] - coef[1] * b[1]), a[1] - (coef[0] * b[1] + coef[1] * b[0])) for a, b in zip(v, u)]
        if all(x == (0, 0) for x in v):
            continue
        lcm = 1
        for re, im in v:
            lcm = math.lcm(lcm, Fraction(re).denominator, Fraction(im).denominator)
        basis.append([(int(re * lcm), int(im * lcm)) for re, im in v])
    return basis


def _inner(u, v):
    re = sum(a[0] * b[0] + a[1] * b[1] for a, b in zip(u, v))
    im = sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(u, v))
    return (re, im)


def _gdiv_exact(a, b):
    den = Fraction(b[0] * b[0] + b[1] * b[1])
    return ((a[0] * b[0] + a[1] * b[1]) / den, (a[1] * b[0] - a[0] * b[1]) / den)


# --- constrained-point checks -------------------------------------------------

@dataclass(frozen=True)
class PointCheck:
    """Scale-normalized values of ``D_A`` and its eliminated form at one point.

    ``identity_residual`` is ``|D'_A - D_A * prod(multipliers)|`` divided by
    the scale of ``D'_A``.
    """

    kind: str
    base_value: float
    eliminated_value: float
    identity_residual: float


def degenerate_point(rng) -> np.ndarray:
    """Orthonormal ``[2, 2]`` triple whose party-0 span has rank 3.

    ``{|0>|u>, |0>|v>, |1>|w>}`` with ``u`` orthogonal to ``v`` has
    ``A_01 = 0`` and the remaining pair operators only reach the off-diagonal
    units, so ``D_A`` vanishes. A random local unitary on each party makes
    every amplitude generic.
    """
    rng = np.random.default_rng(rng)
    uv = haar_orthonormal_columns(2, 2, rng)
    w = haar_orthonormal_columns(2, 1, rng)[:, 0]
    e0, e1 = np.eye(2)
    states = np.array([np.kron(e0, uv[:, 0]), np.kron(e0, uv[:, 1]), np.kron(e1, w)])
    local = np.kron(haar_orthonormal_columns(2, 2, rng), haar_orthonormal_columns(2, 2, rng))
    return states @ local.T


def constrained_points(n_points: int, seed: int, degenerate_every: int = 2) -> list[tuple[str, np.ndarray]]:
    """Orthonormal ``[2, 2]`` triples: Haar frames, with every ``degenerate_every``-th point degenerate."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n_points):
        if degenerate_every and k % degenerate_every == degenerate_every - 1:
            out.append(("degenerate", degenerate_point(rng)))
        else:
            out.append(("haar", haar_orthonormal_columns(4, 3, rng).T))
    return out


def check_point(staged: EliminatedPoly, states, kind: str = "point") -> PointCheck:
    point = float_point(states)
    base, base_scale = staged.base.evaluate_float(point, with_scale=True)
    value, scale = staged.evaluate_float(point, with_scale=True)
    multipliers = EliminationTrace(staged.steps).multiplier_value_float(point)
    if scale == 0.0 or base_scale == 0.0:
        raise NumericalError("zero evaluation scale")
    return PointCheck(
        kind=kind,
        base_value=abs(base) / base_scale,
        eliminated_value=abs(value) / scale,
        identity_residual=abs(value - base * multipliers) / scale,
    )


def check_points(staged: EliminatedPoly, n_points: int, seed: int) -> list[PointCheck]:
    return [check_point(staged, states, kind) for kind, states in constrained_points(n_points, seed)]
