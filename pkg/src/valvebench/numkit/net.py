"""Dense multilayer perceptrons with exact reverse-mode gradients.

Everything is 64-bit and deterministic: identical seeds give bitwise-identical
parameters and outputs. Networks are plain data (weight/bias arrays plus an
activation code per layer); the training-side helpers (Adam, Polyak updates)
mutate them in place.
"""

import hashlib

import numpy as np

from ..errors import ContractViolation, NumericFault
from ._backend import kernels

ACTIVATIONS = {"relu": 0, "tanh": 1, "identity": 2}
ACTIVATION_NAMES = {v: k for k, v in ACTIVATIONS.items()}


class Layer:
    __slots__ = ("w", "b", "act")

    def __init__(self, w, b, act):
        w = np.ascontiguousarray(w, dtype=np.float64)
        b = np.ascontiguousarray(b, dtype=np.float64)
        if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
            raise ContractViolation(
                f"layer shapes inconsistent: w {w.shape}, b {b.shape}"
            )
        if act not in ACTIVATION_NAMES:
            raise ContractViolation(f"unknown activation code {act!r}")
        self.w = w
        self.b = b
        self.act = act

    @property
    def out_dim(self):
        return self.w.shape[0]

    @property
    def in_dim(self):
        return self.w.shape[1]


class DenseNet:
    """A chain of affine layers with relu/tanh/identity activations."""

    def __init__(self, layers):
        if not layers:
            raise ContractViolation("a net needs at least one layer")
        for prev, nxt in zip(layers, layers[1:]):
            if prev.out_dim != nxt.in_dim:
                raise ContractViolation(
                    f"layer dims do not chain: {prev.out_dim} -> {nxt.in_dim}"
                )
        self.layers = list(layers)

    @classmethod
    def create(cls, dims, activations, rng, final_bound=None):
        """Seeded init: uniform +-1/sqrt(fan_in) weights and biases per layer.

        `final_bound` overrides the last layer's range (small actor heads).
        """
        if len(activations) != len(dims) - 1:
            raise ContractViolation("need one activation per layer")
        layers = []
        for k, act in enumerate(activations):
            fan_in, fan_out = dims[k], dims[k + 1]
            bound = 1.0 / np.sqrt(fan_in)
            if final_bound is not None and k == len(activations) - 1:
                bound = final_bound
            w = rng.uniform(-bound, bound, size=(fan_out, fan_in))
            b = rng.uniform(-bound, bound, size=fan_out)
            layers.append(Layer(w, b, ACTIVATIONS[act]))
        return cls(layers)

    @property
    def input_dim(self):
        return self.layers[0].in_dim

    @property
    def output_dim(self):
        return self.layers[-1].out_dim

    def copy(self):
        return DenseNet(
            [Layer(l.w.copy(), l.b.copy(), l.act) for l in self.layers]
        )

    def param_arrays(self):
        """All parameter arrays in a fixed order (w0, b0, w1, b1, ...)."""
        out = []
        for l in self.layers:
            out.append(l.w)
            out.append(l.b)
        return out

    def forward(self, x):
        return forward(self, x)


class GradientSet:
    """Per-layer weight/bias gradients, shape-congruent with one net."""

    __slots__ = ("dws", "dbs")

    def __init__(self, dws, dbs):
        self.dws = dws
        self.dbs = dbs

    @classmethod
    def zeros_like(cls, net):
        return cls(
            [np.zeros_like(l.w) for l in net.layers],
            [np.zeros_like(l.b) for l in net.layers],
        )

    def arrays(self):
        out = []
        for dw, db in zip(self.dws, self.dbs):
            out.append(dw)
            out.append(db)
        return out


class AdamState:
    """First/second moment buffers plus the shared step counter."""

    def __init__(self, moments, t=0, beta1=0.9, beta2=0.999, eps=1e-8):
        self.moments = moments  # list of (m, v) pairs, one per param array
        self.t = t
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

    @classmethod
    def for_net(cls, net, beta1=0.9, beta2=0.999, eps=1e-8):
        moments = [
            (np.zeros_like(p), np.zeros_like(p)) for p in net.param_arrays()
        ]
        return cls(moments, beta1=beta1, beta2=beta2, eps=eps)

    @classmethod
    def for_array(cls, arr, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls(
            [(np.zeros_like(arr), np.zeros_like(arr))],
            beta1=beta1,
            beta2=beta2,
            eps=eps,
        )


class Workspace:
    """Preallocated forward/backward buffers for one net at a fixed batch."""

    def __init__(self, net, batch):
        self.batch = batch
        self.zs = [np.empty((batch, l.out_dim)) for l in net.layers]
        self.acts = [np.empty((batch, l.out_dim)) for l in net.layers]
        self.dzs = [np.empty((batch, l.out_dim)) for l in net.layers]
        self.dxs = [np.empty((batch, l.in_dim)) for l in net.layers]
        self.grads = GradientSet.zeros_like(net)


def _as_batch(x, dim, what):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim == 1:
        if x.shape[0] != dim:
            raise ContractViolation(
                f"{what} has length {x.shape[0]}, expected {dim}"
            )
        return x[None, :], True
    if x.ndim == 2:
        if x.shape[1] != dim:
            raise ContractViolation(
                f"{what} has width {x.shape[1]}, expected {dim}"
            )
        return x, False
    raise ContractViolation(f"{what} must be 1-D or 2-D")


def forward_cached(net, x, ws):
    """Forward pass writing into workspace buffers; returns the output view."""
    cur = x
    for k, l in enumerate(net.layers):
        kernels.affine_forward(cur, l.w, l.b, ws.zs[k])
        kernels.activate(l.act, ws.zs[k], ws.acts[k])
        cur = ws.acts[k]
    return cur


def backward_cached(net, x, ws, upstream, want_dx=False):
    """Backprop through cached activations.

    Returns (ws.grads, dX or None). Gradients are of sum_i upstream_i . out_i
    and overwrite the workspace GradientSet.
    """
    da = upstream
    for k in range(len(net.layers) - 1, -1, -1):
        l = net.layers[k]
        kernels.act_backward(l.act, ws.zs[k], ws.acts[k], da, ws.dzs[k])
        inp = ws.acts[k - 1] if k > 0 else x
        kernels.grad_weights(ws.dzs[k], inp, ws.grads.dws[k], ws.grads.dbs[k])
        if k > 0 or want_dx:
            kernels.matmul_dx(ws.dzs[k], l.w, ws.dxs[k])
            da = ws.dxs[k]
    return ws.grads, (ws.dxs[0] if want_dx else None)


def forward(net, x):
    """Evaluate the net on a vector (or a batch of row vectors)."""
    xb, single = _as_batch(x, net.input_dim, "input")
    ws = Workspace(net, xb.shape[0])
    out = forward_cached(net, xb, ws)
    return out[0].copy() if single else out.copy()


def backward(net, x, upstream):
    """Exact gradients of (upstream . forward(x)) w.r.t. params and input."""
    xb, single = _as_batch(x, net.input_dim, "input")
    ub, usingle = _as_batch(upstream, net.output_dim, "upstream")
    if xb.shape[0] != ub.shape[0]:
        raise ContractViolation("input and upstream batch sizes differ")
    ws = Workspace(net, xb.shape[0])
    forward_cached(net, xb, ws)
    grads, dx = backward_cached(net, xb, ws, ub, want_dx=True)
    dx = dx.copy()
    return grads, (dx[0] if single else dx)


def adam_step(net, grads, state, lr):
    """In-place bias-corrected Adam update of the net's parameters."""
    if not lr > 0.0:
        raise ContractViolation(f"lr must be positive, got {lr}")
    params = net.param_arrays()
    garrs = grads.arrays()
    if len(params) != len(garrs):
        raise ContractViolation("gradient set does not match the net")
    state.t += 1
    for (p, g, (m, v)) in zip(params, garrs, state.moments):
        if p.shape != g.shape:
            raise ContractViolation(
                f"gradient shape {g.shape} != param shape {p.shape}"
            )
        ok = kernels.adam_update(
            p.reshape(-1),
            g.reshape(-1),
            m.reshape(-1),
            v.reshape(-1),
            state.t,
            lr,
            state.beta1,
            state.beta2,
            state.eps,
        )
        if not ok:
            state.t -= 1
            raise NumericFault("non-finite gradient rejected by adam_step")


def adam_step_array(arr, grad, state, lr):
    """Adam update for a single standalone parameter array."""
    if not lr > 0.0:
        raise ContractViolation(f"lr must be positive, got {lr}")
    if arr.shape != grad.shape:
        raise ContractViolation("gradient shape mismatch")
    state.t += 1
    m, v = state.moments[0]
    ok = kernels.adam_update(
        arr.reshape(-1),
        grad.reshape(-1),
        m.reshape(-1),
        v.reshape(-1),
        state.t,
        lr,
        state.beta1,
        state.beta2,
        state.eps,
    )
    if not ok:
        state.t -= 1
        raise NumericFault("non-finite gradient rejected by adam_step")


def soft_update(target, source, tau):
    """Polyak blend: target <- (1 - tau) * target + tau * source."""
    if not 0.0 < tau <= 1.0:
        raise ContractViolation(f"tau must be in (0, 1], got {tau}")
    tp = target.param_arrays()
    sp = source.param_arrays()
    if len(tp) != len(sp) or any(a.shape != b.shape for a, b in zip(tp, sp)):
        raise ContractViolation("target and source nets are not congruent")
    for t_arr, s_arr in zip(tp, sp):
        kernels.polyak(t_arr.reshape(-1), s_arr.reshape(-1), tau)


def param_digest(*nets_or_arrays):
    """Stable hex digest over parameter bytes; used for purity checks."""
    h = hashlib.sha256()
    for item in nets_or_arrays:
        arrays = (
            item.param_arrays() if isinstance(item, DenseNet) else [item]
        )
        for a in arrays:
            h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


def net_to_payload(net):
    """Plain-data description of a net (shapes, activations, parameters)."""
    return {
        "dims": [net.input_dim] + [l.out_dim for l in net.layers],
        "acts": [ACTIVATION_NAMES[l.act] for l in net.layers],
        "arrays": net.param_arrays(),
    }


def net_from_payload(payload):
    dims = payload["dims"]
    acts = payload["acts"]
    arrays = payload["arrays"]
    layers = []
    for k, act in enumerate(acts):
        w = np.asarray(arrays[2 * k], dtype=np.float64).reshape(
            dims[k + 1], dims[k]
        )
        b = np.asarray(arrays[2 * k + 1], dtype=np.float64)
        layers.append(Layer(w, b, ACTIVATIONS[act]))
    return DenseNet(layers)
