# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: BLAS-backed matrix products plus fused elementwise loops.

Mirrors the calling convention of _np_kernels exactly; the backend selector
picks whichever is available.
"""

from libc.math cimport isfinite, sqrt, tanh

from scipy.linalg.cython_blas cimport dgemm

RELU, TANH, IDENTITY = 0, 1, 2

NAME = "compiled"

cdef double ONE = 1.0
cdef double ZERO = 0.0
cdef char TRANS = b'T'
cdef char NOTRANS = b'N'


def affine_forward(double[:, ::1] x, double[:, ::1] w, double[::1] b,
                   double[:, ::1] z):
    """z = x @ w.T + b  for x (n, in), w (out, in), b (out,), z (n, out)."""
    cdef int n = x.shape[0], k = x.shape[1], o = w.shape[0]
    cdef Py_ssize_t i, j
    # Row-major Z = X @ W.T via column-major BLAS on the transposed views.
    dgemm(&TRANS, &NOTRANS, &o, &n, &k, &ONE, &w[0, 0], &k, &x[0, 0], &k,
          &ZERO, &z[0, 0], &o)
    with nogil:
        for i in range(n):
            for j in range(o):
                z[i, j] += b[j]


def activate(int code, double[:, ::1] z, double[:, ::1] a):
    """a = activation(z), elementwise."""
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = z.shape[0], m = z.shape[1]
    with nogil:
        if code == 0:
            for i in range(n):
                for j in range(m):
                    a[i, j] = z[i, j] if z[i, j] > 0.0 else 0.0
        elif code == 1:
            for i in range(n):
                for j in range(m):
                    a[i, j] = tanh(z[i, j])
        else:
            for i in range(n):
                for j in range(m):
                    a[i, j] = z[i, j]


def act_backward(int code, double[:, ::1] z, double[:, ::1] a,
                 double[:, ::1] da, double[:, ::1] dz):
    """dz = da * activation'(z); `a` is the already-computed activation."""
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = z.shape[0], m = z.shape[1]
    with nogil:
        if code == 0:
            for i in range(n):
                for j in range(m):
                    dz[i, j] = da[i, j] if z[i, j] > 0.0 else 0.0
        elif code == 1:
            for i in range(n):
                for j in range(m):
                    dz[i, j] = da[i, j] * (1.0 - a[i, j] * a[i, j])
        else:
            for i in range(n):
                for j in range(m):
                    dz[i, j] = da[i, j]


def matmul_dx(double[:, ::1] dz, double[:, ::1] w, double[:, ::1] dx):
    """dx = dz @ w  for dz (n, out), w (out, in), dx (n, in)."""
    cdef int n = dz.shape[0], o = dz.shape[1], k = w.shape[1]
    dgemm(&NOTRANS, &NOTRANS, &k, &n, &o, &ONE, &w[0, 0], &k, &dz[0, 0], &o,
          &ZERO, &dx[0, 0], &k)


def grad_weights(double[:, ::1] dz, double[:, ::1] x, double[:, ::1] dw,
                 double[::1] db):
    """dw = dz.T @ x and db = dz.sum(axis=0)."""
    cdef int n = dz.shape[0], o = dz.shape[1], k = x.shape[1]
    cdef Py_ssize_t i, j
    cdef double s
    dgemm(&NOTRANS, &TRANS, &k, &o, &n, &ONE, &x[0, 0], &k, &dz[0, 0], &o,
          &ZERO, &dw[0, 0], &k)
    with nogil:
        for j in range(o):
            s = 0.0
            for i in range(n):
                s += dz[i, j]
            db[j] = s


def adam_update(double[::1] p, double[::1] g, double[::1] m, double[::1] v,
                long t, double lr, double beta1, double beta2, double eps):
    """Bias-corrected Adam step on flat arrays; returns False on non-finite g.

    The parameter array is untouched when the gradient is rejected.
    """
    cdef Py_ssize_t i, n = p.shape[0]
    cdef double c1 = 1.0 - beta1 ** t
    cdef double c2 = 1.0 - beta2 ** t
    cdef double mhat, vhat
    cdef bint ok = True
    with nogil:
        for i in range(n):
            if not isfinite(g[i]):
                ok = False
                break
        if ok:
            for i in range(n):
                m[i] = beta1 * m[i] + (1.0 - beta1) * g[i]
                v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i]
                mhat = m[i] / c1
                vhat = v[i] / c2
                p[i] -= lr * mhat / (sqrt(vhat) + eps)
    return bool(ok)


def polyak(double[::1] target, double[::1] source, double tau):
    """target = (1 - tau) * target + tau * source, elementwise."""
    cdef Py_ssize_t i, n = target.shape[0]
    with nogil:
        for i in range(n):
            target[i] = (1.0 - tau) * target[i] + tau * source[i]
