# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Cython implementations of the elementwise hot loops.

Same contract as `_kernels_py` (see that module for the mode codes); the
loops below keep the per-element operation order identical to the NumPy
fallback so both backends produce bitwise-equal output.
"""

BACKEND = "cython"


def apply_filter(spec, a, b, mode, out):
    if mode == 4:
        _apply_2d(spec, a, out)
    elif mode == 3:
        _apply_lowpass(spec, a, b, out)
    else:
        _apply_pair(spec, a, b, mode, out)
    return out


def accumulate(acc, spec, a, b, mode):
    if mode == 4:
        _acc_2d(acc, spec, a)
    elif mode == 3:
        _acc_lowpass(acc, spec, a, b)
    else:
        _acc_pair(acc, spec, a, b, mode)
    return acc


def hard_threshold(double[::1] x, double threshold):
    """Zero entries with |x| <= threshold in place; return the kept count."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef Py_ssize_t kept = 0
    cdef double v
    with nogil:
        for i in range(n):
            v = x[i]
            if (v if v >= 0.0 else -v) > threshold:
                kept += 1
            else:
                x[i] = 0.0
    return kept


def clamp(double[::1] x, double lo, double hi):
    """Clamp in place to [lo, hi]."""
    cdef Py_ssize_t i, n = x.shape[0]
    with nogil:
        for i in range(n):
            if x[i] < lo:
                x[i] = lo
            elif x[i] > hi:
                x[i] = hi
    return x


cdef void _apply_pair(double complex[:, :, ::1] spec, double[:, ::1] a,
                      double[:, ::1] b, int mode,
                      double complex[:, :, ::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t n0 = spec.shape[0], n1 = spec.shape[1], n2 = spec.shape[2]
    if mode == 0:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    out[i, j, k] = spec[i, j, k] * a[i, j] * b[i, k]
    elif mode == 1:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    out[i, j, k] = spec[i, j, k] * a[i, j] * b[j, k]
    else:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    out[i, j, k] = spec[i, j, k] * a[i, k] * b[j, k]


cdef void _apply_lowpass(double complex[:, :, ::1] spec, double[:, ::1] a,
                         double[::1] b, double complex[:, :, ::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t n0 = spec.shape[0], n1 = spec.shape[1], n2 = spec.shape[2]
    for i in range(n0):
        for j in range(n1):
            for k in range(n2):
                out[i, j, k] = spec[i, j, k] * a[i, j] * b[k]


cdef void _apply_2d(double complex[:, ::1] spec, double[:, ::1] a,
                    double complex[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n0 = spec.shape[0], n1 = spec.shape[1]
    for i in range(n0):
        for j in range(n1):
            out[i, j] = spec[i, j] * a[i, j]


cdef void _acc_pair(double complex[:, :, ::1] acc, double complex[:, :, ::1] spec,
                    double[:, ::1] a, double[:, ::1] b, int mode) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t n0 = spec.shape[0], n1 = spec.shape[1], n2 = spec.shape[2]
    if mode == 0:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    acc[i, j, k] = acc[i, j, k] + spec[i, j, k] * a[i, j] * b[i, k]
    elif mode == 1:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    acc[i, j, k] = acc[i, j, k] + spec[i, j, k] * a[i, j] * b[j, k]
    else:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    acc[i, j, k] = acc[i, j, k] + spec[i, j, k] * a[i, k] * b[j, k]


cdef void _acc_lowpass(double complex[:, :, ::1] acc, double complex[:, :, ::1] spec,
                       double[:, ::1] a, double[::1] b) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t n0 = spec.shape[0], n1 = spec.shape[1], n2 = spec.shape[2]
    for i in range(n0):
        for j in range(n1):
            for k in range(n2):
                acc[i, j, k] = acc[i, j, k] + spec[i, j, k] * a[i, j] * b[k]


cdef void _acc_2d(double complex[:, ::1] acc, double complex[:, ::1] spec,
                  double[:, ::1] a) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n0 = spec.shape[0], n1 = spec.shape[1]
    for i in range(n0):
        for j in range(n1):
            acc[i, j] = acc[i, j] + spec[i, j] * a[i, j]
