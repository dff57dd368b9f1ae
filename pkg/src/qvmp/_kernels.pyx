# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled amplitude kernels.

Same contract as the pure-NumPy backend: 1-D complex128 state of length
2**n, bit q of the index is qubit q. Controlled kernels enumerate only the
matching stratum via a carry trick that increments across the free bits.
"""
from libc.math cimport sqrt

NAME = "cython"


cdef inline Py_ssize_t _popcount(Py_ssize_t x) nogil:
    cdef Py_ssize_t c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def apply_h(double complex[::1] state, Py_ssize_t qubit, bint swapped):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t bit = (<Py_ssize_t>1) << qubit
    cdef Py_ssize_t base, i, j
    cdef double complex a, b
    cdef double inv = 1.0 / sqrt(2.0)
    with nogil:
        base = 0
        while base < n:
            for i in range(base, base + bit):
                j = i + bit
                a = state[i]
                b = state[j]
                if swapped:
                    state[i] = (b - a) * inv
                    state[j] = (a + b) * inv
                else:
                    state[i] = (a + b) * inv
                    state[j] = (a - b) * inv
            base += 2 * bit


def apply_mcx(double complex[::1] state, Py_ssize_t target_mask,
              Py_ssize_t ctrl_mask, Py_ssize_t ctrl_val):
    """NOT on every bit of target_mask where the control bits match.

    Joint action pairs s with s ^ target_mask; anchoring the lowest target
    bit at 0 visits each pair once.
    """
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t anchor = target_mask & (-target_mask)
    cdef Py_ssize_t fixed = ctrl_mask | anchor
    cdef Py_ssize_t count = n >> _popcount(fixed)
    cdef Py_ssize_t free_mask = (n - 1) & ~fixed
    cdef Py_ssize_t s = ctrl_val
    cdef Py_ssize_t k, j
    cdef double complex tmp
    if target_mask == 0:
        return
    with nogil:
        for k in range(count):
            j = s ^ target_mask
            tmp = state[s]
            state[s] = state[j]
            state[j] = tmp
            s = (((s | fixed) + 1) & free_mask) | ctrl_val


def apply_phase(double complex[::1] state, Py_ssize_t mask, Py_ssize_t val):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t count = n >> _popcount(mask)
    cdef Py_ssize_t free_mask = (n - 1) & ~mask
    cdef Py_ssize_t s = val
    cdef Py_ssize_t k
    with nogil:
        for k in range(count):
            state[s] = -state[s]
            s = (((s | mask) + 1) & free_mask) | val
