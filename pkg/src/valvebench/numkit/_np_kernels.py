"""Numpy reference kernels: the fallback backend when the compiled core is absent.

All arrays are C-contiguous float64. Activation codes: 0=relu, 1=tanh,
2=identity. Every function writes into caller-provided output buffers so the
two backends share one calling convention.
"""

import numpy as np

RELU, TANH, IDENTITY = 0, 1, 2

NAME = "numpy"


def affine_forward(x, w, b, z):
    """z = x @ w.T + b  for x (n, in), w (out, in), b (out,), z (n, out)."""
    np.matmul(x, w.T, out=z)
    z += b


def activate(code, z, a):
    """a = activation(z), elementwise."""
    if code == RELU:
        np.maximum(z, 0.0, out=a)
    elif code == TANH:
        np.tanh(z, out=a)
    else:
        np.copyto(a, z)


def act_backward(code, z, a, da, dz):
    """dz = da * activation'(z); `a` is the already-computed activation."""
    if code == RELU:
        np.multiply(da, z > 0.0, out=dz)
    elif code == TANH:
        np.multiply(da, 1.0 - a * a, out=dz)
    else:
        np.copyto(dz, da)


def matmul_dx(dz, w, dx):
    """dx = dz @ w  for dz (n, out), w (out, in), dx (n, in)."""
    np.matmul(dz, w, out=dx)


def grad_weights(dz, x, dw, db):
    """dw = dz.T @ x and db = dz.sum(axis=0)."""
    np.matmul(dz.T, x, out=dw)
    np.sum(dz, axis=0, out=db)


def adam_update(p, g, m, v, t, lr, beta1, beta2, eps):
    """Bias-corrected Adam step on flat arrays; returns False on non-finite g.

    The parameter array is untouched when the gradient is rejected.
    """
    if not np.all(np.isfinite(g)):
        return False
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * (g * g)
    mhat = m / (1.0 - beta1**t)
    vhat = v / (1.0 - beta2**t)
    p -= lr * mhat / (np.sqrt(vhat) + eps)
    return True


def polyak(target, source, tau):
    """target = (1 - tau) * target + tau * source, elementwise."""
    target *= 1.0 - tau
    target += tau * source
