# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled split-search kernel.

Mirror of _split_py with the identical floating-point operation order
(see the contract documented there); the two kernels must return
bit-identical thresholds and objectives. Compile without -ffast-math.
"""

from libc.math cimport log2
from libc.stdlib cimport free, malloc

import numpy as np


cdef double _objective(long* left, long* total, long n_left, long n,
                       int n_classes) nogil:
    cdef long n_right = n - n_left
    cdef double ent_left = 0.0
    cdef double ent_right = 0.0
    cdef double p
    cdef long k
    cdef int c
    for c in range(n_classes):
        k = left[c]
        if k:
            p = <double>k / <double>n_left
            ent_left -= p * log2(p)
    for c in range(n_classes):
        k = total[c] - left[c]
        if k:
            p = <double>k / <double>n_right
            ent_right -= p * log2(p)
    return (<double>n_left / <double>n) * ent_left + \
           (<double>n_right / <double>n) * ent_right


def scan_single(double[::1] values, long[::1] labels, int n_classes):
    cdef long n = values.shape[0]
    if n < 2 or values[0] == values[n - 1]:
        return None
    cdef long* counts = <long*>malloc(2 * n_classes * sizeof(long))
    if counts == NULL:
        raise MemoryError()
    cdef long* total = counts
    cdef long* left = counts + n_classes
    cdef long i
    cdef int c
    cdef double v, prev, obj
    cdef double best_t = 0.0
    cdef double best_obj = 0.0
    cdef bint found = False
    with nogil:
        for c in range(2 * n_classes):
            counts[c] = 0
        for i in range(n):
            total[labels[i]] += 1
        left[labels[0]] += 1
        prev = values[0]
        for i in range(1, n):
            v = values[i]
            if v != prev:
                obj = _objective(left, total, i, n, n_classes)
                if not found or obj < best_obj:
                    found = True
                    best_t = v
                    best_obj = obj
                prev = v
            left[labels[i]] += 1
    free(counts)
    return (best_t, best_obj) if found else None


def scan_dual(double[::1] values, long[::1] labels1, int c1,
              long[::1] labels2, int c2):
    cdef long n = values.shape[0]
    if n < 2 or values[0] == values[n - 1]:
        return None, None
    cdef long* counts = <long*>malloc(2 * (c1 + c2) * sizeof(long))
    if counts == NULL:
        raise MemoryError()
    cdef long* total1 = counts
    cdef long* left1 = counts + c1
    cdef long* total2 = counts + 2 * c1
    cdef long* left2 = counts + 2 * c1 + c2
    cdef long i
    cdef int c
    cdef double v, prev, o1, o2
    cdef double best_t1 = 0.0, best_t2 = 0.0
    cdef double best_o1 = 0.0, best_o2 = 0.0
    cdef bint found = False
    with nogil:
        for c in range(2 * (c1 + c2)):
            counts[c] = 0
        for i in range(n):
            total1[labels1[i]] += 1
            total2[labels2[i]] += 1
        left1[labels1[0]] += 1
        left2[labels2[0]] += 1
        prev = values[0]
        for i in range(1, n):
            v = values[i]
            if v != prev:
                o1 = _objective(left1, total1, i, n, c1)
                o2 = _objective(left2, total2, i, n, c2)
                if not found:
                    found = True
                    best_t1 = v
                    best_t2 = v
                    best_o1 = o1
                    best_o2 = o2
                else:
                    if o1 < best_o1:
                        best_o1 = o1
                        best_t1 = v
                    if o2 < best_o2:
                        best_o2 = o2
                        best_t2 = v
                prev = v
            left1[labels1[i]] += 1
            left2[labels2[i]] += 1
    free(counts)
    if not found:
        return None, None
    return (best_t1, best_o1), (best_t2, best_o2)


def scan_joint(double[::1] values, long[::1] labels1, int c1,
               long[::1] labels2, int c2):
    cdef long n = values.shape[0]
    if n < 2 or values[0] == values[n - 1]:
        return None
    cdef long* counts = <long*>malloc(2 * (c1 + c2) * sizeof(long))
    if counts == NULL:
        raise MemoryError()
    cdef long* total1 = counts
    cdef long* left1 = counts + c1
    cdef long* total2 = counts + 2 * c1
    cdef long* left2 = counts + 2 * c1 + c2
    cdef long i
    cdef int c
    cdef double v, prev, obj
    cdef double best_t = 0.0
    cdef double best_obj = 0.0
    cdef bint found = False
    with nogil:
        for c in range(2 * (c1 + c2)):
            counts[c] = 0
        for i in range(n):
            total1[labels1[i]] += 1
            total2[labels2[i]] += 1
        left1[labels1[0]] += 1
        left2[labels2[0]] += 1
        prev = values[0]
        for i in range(1, n):
            v = values[i]
            if v != prev:
                obj = _objective(left1, total1, i, n, c1) + \
                      _objective(left2, total2, i, n, c2)
                if not found or obj < best_obj:
                    found = True
                    best_t = v
                    best_obj = obj
                prev = v
            left1[labels1[i]] += 1
            left2[labels2[i]] += 1
    free(counts)
    return (best_t, best_obj) if found else None
