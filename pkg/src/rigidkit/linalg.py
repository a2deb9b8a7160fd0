"""Prime-field arithmetic and dense rank computation.

The elimination kernels come in two flavours: a compiled Cython module
(``rigidkit._ckernels``) and a pure-Python fallback. The compiled one is
used when it imports; set ``RIGIDKIT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from rigidkit import _pykernels

try:
    from rigidkit import _ckernels
except ImportError:  # extension not built
    _ckernels = None

DEFAULT_PRIME = (1 << 61) - 1
MAX_PRIME = (1 << 63) - 1

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["native"] = _ckernels

if _ckernels is not None and not os.environ.get("RIGIDKIT_PURE_PYTHON"):
    _active = "native"
else:
    _active = "python"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    """Select the elimination kernel for subsequent calls."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    _active = name


def _kernels(backend: str | None):
    return _BACKENDS[backend or _active]


def is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not 2 <= p <= MAX_PRIME:
        raise ValueError(f"modulus must lie in [2, 2**63 - 1], got {p}")
    if not is_probable_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(prime)."""

    value: int
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.prime)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.prime != self.prime:
                raise ValueError("field elements over different primes")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.prime)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.prime)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.prime)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.prime)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, self.prime - 2, self.prime), self.prime)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.prime).inverse()

    def __int__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    """A rows x cols matrix over GF(prime), stored as a uint64 array."""

    data: np.ndarray
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.uint64)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if arr.size and int(arr.max()) >= self.prime:
            raise ValueError("matrix entries must be reduced modulo the prime")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], prime: int = DEFAULT_PRIME,
                  cols: int | None = None) -> DenseMatrix:
        if not rows:
            return cls(np.zeros((0, cols or 0), dtype=np.uint64), prime)
        reduced = [[int(x) % prime for x in row] for row in rows]
        return cls(np.array(reduced, dtype=np.uint64), prime)

    @classmethod
    def zeros(cls, rows: int, cols: int, prime: int = DEFAULT_PRIME) -> DenseMatrix:
        return cls(np.zeros((rows, cols), dtype=np.uint64), prime)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> list[int]:
        return [int(x) for x in self.data.ravel()]

    def submatrix(self, row_indices: Iterable[int]) -> DenseMatrix:
        idx = list(row_indices)
        return DenseMatrix(self.data[idx, :] if idx else np.zeros((0, self.cols), np.uint64),
                           self.prime)

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.prime == other.prime and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols}, prime={self.prime})"


def rank(m: DenseMatrix, backend: str | None = None) -> int:
    """Rank of ``m`` over its prime field; ``m`` is left untouched."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(_kernels(backend).rank_mod(m.data, m.prime))


def row_basis(m: DenseMatrix, backend: str | None = None) -> list[int]:
    """Indices of a greedy (ascending) maximal independent set of rows."""
    if m.rows == 0 or m.cols == 0:
        return []
    return [int(i) for i in _kernels(backend).row_basis_mod(m.data, m.prime)]
