# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Native Gaussian elimination over Z/pZ for p < 2**63.

Both kernels take a C-contiguous uint64 matrix whose entries are already
reduced mod p and never write to it.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cdef extern from *:
    """
    static inline unsigned long long rk_mulmod(unsigned long long a,
                                               unsigned long long b,
                                               unsigned long long p) {
        return (unsigned long long)(((unsigned __int128)a * b) % p);
    }
    """
    unsigned long long rk_mulmod(unsigned long long a, unsigned long long b,
                                 unsigned long long p) nogil


cdef inline uint64_t _inverse(uint64_t a, uint64_t p) noexcept nogil:
    # Fermat; p is prime
    cdef uint64_t result = 1
    cdef uint64_t e = p - 2
    while e:
        if e & 1:
            result = rk_mulmod(result, a, p)
        a = rk_mulmod(a, a, p)
        e >>= 1
    return result


cdef inline void _axpy(uint64_t* dst, const uint64_t* src, uint64_t f,
                       Py_ssize_t start, Py_ssize_t stop, uint64_t p) noexcept nogil:
    # dst[j] -= f * src[j]
    cdef Py_ssize_t j
    cdef uint64_t t
    for j in range(start, stop):
        if src[j]:
            t = dst[j] + (p - rk_mulmod(f, src[j], p))
            if t >= p:
                t -= p
            dst[j] = t


cdef uint64_t* _copy(const uint64_t[:, ::1] m) except NULL:
    cdef Py_ssize_t size = m.shape[0] * m.shape[1]
    cdef uint64_t* work = <uint64_t*> malloc(max(size, 1) * sizeof(uint64_t))
    if work == NULL:
        raise MemoryError()
    if size:
        memcpy(work, &m[0, 0], size * sizeof(uint64_t))
    return work


def rank_mod(const uint64_t[:, ::1] m, uint64_t p):
    """Rank of ``m`` over GF(p) by row reduction on a scratch copy."""
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef uint64_t inv, f, tmp
    cdef uint64_t* w
    if rows == 0 or cols == 0:
        return 0
    w = _copy(m)
    with nogil:
        for c in range(cols):
            piv = -1
            for i in range(r, rows):
                if w[i * cols + c]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, cols):
                    tmp = w[r * cols + j]
                    w[r * cols + j] = w[piv * cols + j]
                    w[piv * cols + j] = tmp
            inv = _inverse(w[r * cols + c], p)
            for j in range(c, cols):
                w[r * cols + j] = rk_mulmod(w[r * cols + j], inv, p)
            for i in range(r + 1, rows):
                f = w[i * cols + c]
                if f:
                    _axpy(w + i * cols, w + r * cols, f, c, cols, p)
            r += 1
            if r == rows:
                break
    free(w)
    return r


def row_basis_mod(const uint64_t[:, ::1] m, uint64_t p):
    """Greedy row basis in ascending row order.

    Row ``i`` is kept iff it is independent of the rows kept before it.
    """
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t i, j, b, nb = 0, lead
    cdef uint64_t inv, f
    cdef uint64_t* w
    cdef Py_ssize_t* pivot_col
    cdef Py_ssize_t* basis_row
    cdef char* keep
    if rows == 0 or cols == 0:
        return []
    w = _copy(m)
    pivot_col = <Py_ssize_t*> malloc(rows * sizeof(Py_ssize_t))
    basis_row = <Py_ssize_t*> malloc(rows * sizeof(Py_ssize_t))
    keep = <char*> malloc(rows)
    if pivot_col == NULL or basis_row == NULL or keep == NULL:
        free(w); free(pivot_col); free(basis_row); free(keep)
        raise MemoryError()
    with nogil:
        for i in range(rows):
            keep[i] = 0
            # earlier basis rows vanish on every earlier pivot column
            for b in range(nb):
                f = w[i * cols + pivot_col[b]]
                if f:
                    _axpy(w + i * cols, w + basis_row[b] * cols, f, 0, cols, p)
            lead = -1
            for j in range(cols):
                if w[i * cols + j]:
                    lead = j
                    break
            if lead < 0:
                continue
            inv = _inverse(w[i * cols + lead], p)
            for j in range(lead, cols):
                w[i * cols + j] = rk_mulmod(w[i * cols + j], inv, p)
            pivot_col[nb] = lead
            basis_row[nb] = i
            nb += 1
            keep[i] = 1
    out = [i for i in range(rows) if keep[i]]
    free(w); free(pivot_col); free(basis_row); free(keep)
    return out
