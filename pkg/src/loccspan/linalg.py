"""Dense complex linear algebra kernel.

Vectors and matrices are plain numpy ``complex128`` arrays. Multipartite
indices use a big-endian convention everywhere in the package: party 0 is
the most significant digit of the flat basis index, which is also numpy's
C-order when a state is reshaped to ``dims``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidIndex, InvalidInput, NumericalError, ShapeError

# Decades on either side of the rank threshold that count as the gray zone.
GRAY_ZONE_FACTOR = 10.0


def check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    """Return ``dims`` as a tuple after checking every local dimension is >= 2."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise InvalidInput("dimension list must name at least one party")
    if any(d < 2 for d in dims):
        raise InvalidInput(f"every local dimension must be >= 2, got {list(dims)}")
    return dims


def tensor_index(indices: Sequence[int], dims: Sequence[int]) -> int:
    """Flatten per-party basis indices, party 0 most significant.

    >>> tensor_index([2, 1], [3, 3])
    7
    """
    if len(indices) != len(dims):
        raise InvalidIndex(f"got {len(indices)} indices for {len(dims)} parties")
    k = 0
    for m, d in zip(indices, dims):
        if not 0 <= m < d:
            raise InvalidIndex(f"index {m} out of range for local dimension {d}")
        k = k * d + m
    return k


def tensor_unindex(k: int, dims: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`tensor_index`."""
    total = math.prod(dims)
    if not 0 <= k < total:
        raise InvalidIndex(f"flat index {k} out of range for total dimension {total}")
    out = []
    for d in reversed(dims):
        k, m = divmod(k, d)
        out.append(m)
    return tuple(reversed(out))


def partial_trace_keep(matrix, dims: Sequence[int], keep: int) -> np.ndarray:
    """Trace out every party except ``keep``.

    Returns the ``dims[keep] x dims[keep]`` reduced operator. ``matrix`` must
    be square with side ``prod(dims)``.
    """
    dims = tuple(dims)
    m = np.asarray(matrix, dtype=complex)
    total = math.prod(dims)
    if m.shape != (total, total):
        raise ShapeError(f"expected a {total}x{total} matrix for dims {list(dims)}, got {m.shape}")
    if not 0 <= keep < len(dims):
        raise ShapeError(f"party {keep} out of range for {len(dims)} parties")
    n = len(dims)
    t = m.reshape(dims + dims)
    # Move the kept row/column axes to the front, then trace the rest pairwise.
    t = np.moveaxis(t, (keep, n + keep), (0, 1))
    rest = total // dims[keep]
    t = t.reshape(dims[keep], dims[keep], rest, rest)
    return np.trace(t, axis1=2, axis2=3)


def split_party(vectors, dims: Sequence[int], party: int) -> np.ndarray:
    """Reshape state vectors to ``(N, d_party, rest)`` with ``party`` in front."""
    dims = tuple(dims)
    v = np.asarray(vectors, dtype=complex)
    t = v.reshape((v.shape[0],) + dims)
    t = np.moveaxis(t, party + 1, 1)
    return t.reshape(v.shape[0], dims[party], -1)


def apply_local(op, vectors, dims: Sequence[int], party: int) -> np.ndarray:
    """Apply ``op`` (acting on ``party``) tensored with identities to each row vector."""
    dims = tuple(dims)
    v = np.asarray(vectors, dtype=complex)
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[party], dims[party]):
        raise ShapeError(f"local operator must be {dims[party]}x{dims[party]}, got {op.shape}")
    t = v.reshape((v.shape[0],) + dims)
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [party + 1])), 0, party + 1)
    return t.reshape(v.shape)


@dataclass(frozen=True)
class RankResult:
    rank: int
    singular_values: tuple[float, ...]
    tolerance_used: float
    ambiguous: bool

    @property
    def accepted(self) -> tuple[float, ...]:
        return self.singular_values[: self.rank]

    @property
    def rejected(self) -> tuple[float, ...]:
        return self.singular_values[self.rank:]


def numerical_rank(matrix, tol: float = 1e-8) -> RankResult:
    """Count singular values above ``tol * sigma_max * max(rows, cols)``.

    A decision is flagged ambiguous when any singular value lies within one
    decade of the threshold. The zero matrix has rank 0 and is never
    ambiguous; its reported threshold is ``tol`` itself.
    """
    if tol <= 0:
        raise InvalidInput(f"tolerance must be positive, got {tol}")
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix has non-finite entries")
    if m.size == 0:
        return RankResult(0, (), tol, False)
    try:
        sv = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    sv = np.sort(sv)[::-1]
    smax = float(sv[0])
    if smax == 0.0:
        return RankResult(0, tuple(float(s) for s in sv), tol, False)
    tau = tol * smax * max(m.shape)
    rank = int(np.count_nonzero(sv > tau))
    lo, hi = tau / GRAY_ZONE_FACTOR, tau * GRAY_ZONE_FACTOR
    ambiguous = bool(np.any((sv >= lo) & (sv <= hi)))
    return RankResult(rank, tuple(float(s) for s in sv), float(tau), ambiguous)


def as_generator(rng) -> np.random.Generator:
    """Accept a ``Generator``, an integer seed, or ``None``."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def haar_orthonormal_columns(rows: int, cols: int, rng=None) -> np.ndarray:
    """Sample a Haar-random orthonormal ``cols``-frame in ``C^rows``.

    The returned ``rows x cols`` matrix has orthonormal columns. A complex
    Ginibre matrix is QR-factored and the phases of ``R``'s diagonal are
    absorbed into ``Q`` so the result is exactly unitarily invariant.
    """
    if cols > rows:
        raise ShapeError(f"cannot fit {cols} orthonormal vectors in dimension {rows}")
    if cols < 1:
        raise ShapeError("need at least one column")
    gen = as_generator(rng)
    z = gen.standard_normal((rows, cols)) + 1j * gen.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases[np.newaxis, :]
