"""Dense float64 tensors with reverse-mode automatic differentiation.

Every operation records a backward closure on the output tensor; calling
``backward`` on a scalar walks the recorded graph once in reverse
topological order and accumulates gradients into the leaves.  All values
are checked for NaN/Inf eagerly so numerical blow-ups surface at the op
that produced them, not epochs later.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np


class ShapeError(ValueError):
    """Raised when operand shapes are incompatible."""


class NonFiniteError(FloatingPointError):
    """Raised when an operation produces NaN or Inf."""


LOG_FLOOR = 1e-12


class Tensor:
    """An n-d float64 array, optionally carrying a gradient.

    ``grad`` has the same shape as ``data`` and is allocated lazily on the
    first backward accumulation.  Tensors created by operations hold a
    ``_backward`` closure plus parent links; leaves hold neither.
    """

    __slots__ = ("data", "requires_grad", "grad", "_backward", "_parents")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad = None
        self._backward: Callable[[], None] | None = None
        self._parents: tuple[Tensor, ...] = ()

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f"item() needs a scalar, got shape {self.shape}")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data

    def _accumulate(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def backward(self) -> None:
        backward(self)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # operator sugar; float operands scale/shift, tensor operands are strict
    def __add__(self, other):
        if isinstance(other, Tensor):
            return add(self, other)
        return shift(self, float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Tensor):
            return add(self, neg(other))
        return shift(self, -float(other))

    def __rsub__(self, other):
        return shift(neg(self), float(other))

    def __mul__(self, other):
        if isinstance(other, Tensor):
            return mul(self, other)
        return scale(self, float(other))

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, key):
        return tslice(self, key)


def _check_finite(arr: np.ndarray, op: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"non-finite value produced by '{op}'")


def _make(data: np.ndarray, parents: Sequence[Tensor], op: str,
          backward_fn: Callable[[Tensor], None] | None) -> Tensor:
    _check_finite(data, op)
    out = Tensor(data)
    if backward_fn is not None and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = lambda: backward_fn(out)
    return out


def _same_shape(a: Tensor, b: Tensor, op: str) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"'{op}' needs matching shapes, got {a.shape} and {b.shape}")


# ---------------------------------------------------------------------------
# elementwise


def add(a: Tensor, b: Tensor) -> Tensor:
    _same_shape(a, b, "add")

    def bw(out):
        if a.requires_grad:
            a._accumulate(out.grad)
        if b.requires_grad:
            b._accumulate(out.grad)

    return _make(a.data + b.data, (a, b), "add", bw)


def mul(a: Tensor, b: Tensor) -> Tensor:
    _same_shape(a, b, "mul")

    def bw(out):
        if a.requires_grad:
            a._accumulate(out.grad * b.data)
        if b.requires_grad:
            b._accumulate(out.grad * a.data)

    return _make(a.data * b.data, (a, b), "mul", bw)


def neg(a: Tensor) -> Tensor:
    def bw(out):
        a._accumulate(-out.grad)

    return _make(-a.data, (a,), "neg", bw)


def scale(a: Tensor, c: float) -> Tensor:
    def bw(out):
        a._accumulate(out.grad * c)

    return _make(a.data * c, (a,), "scale", bw)


def shift(a: Tensor, c: float) -> Tensor:
    def bw(out):
        a._accumulate(out.grad)

    return _make(a.data + c, (a,), "shift", bw)


# ---------------------------------------------------------------------------
# linear algebra


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim not in (1, 2) or b.data.ndim not in (1, 2):
        raise ShapeError(f"matmul supports 1-d/2-d operands, got {a.shape} and {b.shape}")
    if a.data.shape[-1] != b.data.shape[0]:
        raise ShapeError(f"matmul inner dims differ: {a.shape} vs {b.shape}")

    def bw(out):
        g = out.grad
        ad, bd = a.data, b.data
        if a.requires_grad:
            if ad.ndim == 1 and bd.ndim == 1:
                a._accumulate(g * bd)
            elif ad.ndim == 1:           # (m,) @ (m,k) -> (k,)
                a._accumulate(g @ bd.T)
            elif bd.ndim == 1:           # (n,m) @ (m,) -> (n,)
                a._accumulate(np.outer(g, bd))
            else:
                a._accumulate(g @ bd.T)
        if b.requires_grad:
            if ad.ndim == 1 and bd.ndim == 1:
                b._accumulate(g * ad)
            elif ad.ndim == 1:
                b._accumulate(np.outer(ad, g))
            elif bd.ndim == 1:
                b._accumulate(ad.T @ g)
            else:
                b._accumulate(ad.T @ g)

    return _make(np.matmul(a.data, b.data), (a, b), "matmul", bw)


def transpose(a: Tensor) -> Tensor:
    if a.data.ndim != 2:
        raise ShapeError(f"transpose needs a 2-d tensor, got {a.shape}")

    def bw(out):
        a._accumulate(out.grad.T)

    return _make(a.data.T.copy(), (a,), "transpose", bw)


# ---------------------------------------------------------------------------
# shape manipulation


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise ShapeError("concat of zero tensors")
    sizes = [t.data.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def bw(out):
        for t, s, e in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                idx = [slice(None)] * out.grad.ndim
                idx[axis] = slice(s, e)
                t._accumulate(out.grad[tuple(idx)])

    return _make(np.concatenate([t.data for t in tensors], axis=axis),
                 tensors, "concat", bw)


def stack(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise ShapeError("stack of zero tensors")
    first = tensors[0].shape
    for t in tensors[1:]:
        if t.shape != first:
            raise ShapeError(f"stack needs identical shapes, got {first} and {t.shape}")

    def bw(out):
        for i, t in enumerate(tensors):
            if t.requires_grad:
                t._accumulate(np.take(out.grad, i, axis=axis))

    return _make(np.stack([t.data for t in tensors], axis=axis),
                 tensors, "stack", bw)


def tslice(a: Tensor, key) -> Tensor:
    def bw(out):
        g = np.zeros_like(a.data)
        g[key] += out.grad
        a._accumulate(g)

    return _make(a.data[key].copy(), (a,), "slice", bw)


# ---------------------------------------------------------------------------
# reductions


def tsum(a: Tensor, axis: int | None = None) -> Tensor:
    def bw(out):
        if axis is None:
            a._accumulate(np.full_like(a.data, float(out.grad)))
        else:
            a._accumulate(np.broadcast_to(np.expand_dims(out.grad, axis), a.data.shape).copy())

    return _make(np.sum(a.data, axis=axis), (a,), "sum", bw)


def tmean(a: Tensor, axis: int | None = None) -> Tensor:
    n = a.data.size if axis is None else a.data.shape[axis]
    if n == 0:
        raise ShapeError("mean over an empty axis")

    def bw(out):
        if axis is None:
            a._accumulate(np.full_like(a.data, float(out.grad) / n))
        else:
            a._accumulate(np.broadcast_to(np.expand_dims(out.grad / n, axis), a.data.shape).copy())

    return _make(np.mean(a.data, axis=axis), (a,), "mean", bw)


def tmax(a: Tensor, axis: int) -> Tensor:
    """Max along an axis; backward routes to the first argmax (subgradient)."""
    idx = np.argmax(a.data, axis=axis)

    def bw(out):
        g = np.zeros_like(a.data)
        np.put_along_axis(g, np.expand_dims(idx, axis),
                          np.expand_dims(out.grad, axis), axis=axis)
        a._accumulate(g)

    return _make(np.max(a.data, axis=axis), (a,), "max", bw)


# ---------------------------------------------------------------------------
# nonlinearities and normalizers


def sigmoid(a: Tensor) -> Tensor:
    y = 1.0 / (1.0 + np.exp(-a.data))

    def bw(out):
        a._accumulate(out.grad * y * (1.0 - y))

    return _make(y, (a,), "sigmoid", bw)


def tanh(a: Tensor) -> Tensor:
    y = np.tanh(a.data)

    def bw(out):
        a._accumulate(out.grad * (1.0 - y * y))

    return _make(y, (a,), "tanh", bw)


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0

    def bw(out):
        a._accumulate(out.grad * mask)

    return _make(a.data * mask, (a,), "relu", bw)


def softmax(a: Tensor, axis: int = -1) -> Tensor:
    z = a.data - np.max(a.data, axis=axis, keepdims=True)
    e = np.exp(z)
    y = e / np.sum(e, axis=axis, keepdims=True)

    def bw(out):
        dot = np.sum(out.grad * y, axis=axis, keepdims=True)
        a._accumulate(y * (out.grad - dot))

    return _make(y, (a,), "softmax", bw)


def softmin(a: Tensor, axis: int = -1) -> Tensor:
    """softmin(x) = softmax(-x): larger weight for smaller entries."""
    return softmax(neg(a), axis=axis)


def log_clamped(a: Tensor, floor: float = LOG_FLOOR) -> Tensor:
    """log(max(x, floor)); the clamp's derivative is zero below the floor."""
    clamped = np.maximum(a.data, floor)
    live = a.data >= floor

    def bw(out):
        a._accumulate(out.grad * live / clamped)

    return _make(np.log(clamped), (a,), "log", bw)


def gather_rows(table: Tensor, ids: Sequence[int], frozen_row: int | None = None) -> Tensor:
    """Row lookup ``table[ids]``; gradients never reach ``frozen_row``."""
    idx = np.asarray(ids, dtype=np.intp)
    if table.data.ndim != 2:
        raise ShapeError(f"gather_rows needs a 2-d table, got {table.shape}")
    if idx.size and (idx.min() < 0 or idx.max() >= table.data.shape[0]):
        raise IndexError(f"row id out of range for table with {table.data.shape[0]} rows")

    def bw(out):
        g = np.zeros_like(table.data)
        np.add.at(g, idx, out.grad)
        if frozen_row is not None:
            g[frozen_row] = 0.0
        table._accumulate(g)

    return _make(table.data[idx], (table,), "gather_rows", bw)


def dropout(a: Tensor, p: float, rng: np.random.Generator) -> Tensor:
    """Inverted dropout: kept units are scaled by 1/(1-p) so inference
    needs no rescaling."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {p}")
    if p == 0.0:
        return a
    mask = (rng.random(a.shape) >= p) / (1.0 - p)

    def bw(out):
        a._accumulate(out.grad * mask)

    return _make(a.data * mask, (a,), "dropout", bw)


# ---------------------------------------------------------------------------
# reverse pass


def backward(loss: Tensor) -> None:
    """Populate ``grad`` on every requires_grad ancestor of a scalar loss.

    Each graph node is visited exactly once, in reverse topological order;
    a tensor used k times accumulates the sum of its k path gradients.
    """
    if loss.data.size != 1:
        raise ShapeError(f"backward needs a scalar loss, got shape {loss.shape}")

    topo: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, int]] = [(loss, 0)]
    visited.add(id(loss))
    while stack:
        node, i = stack[-1]
        if i < len(node._parents):
            stack[-1] = (node, i + 1)
            p = node._parents[i]
            if p.requires_grad and id(p) not in visited:
                visited.add(id(p))
                stack.append((p, 0))
        else:
            topo.append(node)
            stack.pop()

    loss._accumulate(np.ones_like(loss.data))
    for node in reversed(topo):
        if node._backward is not None:
            node._backward()


def check_gradients(f: Callable[[Tensor], Tensor], x: Tensor, h: float = 1e-5) -> float:
    """Compare reverse-mode gradients of a scalar function against central
    differences and return the worst relative error over coordinates of x.

    Relative error per coordinate: |a - n| / max(|a|, |n|, 1e-8).
    """
    if h <= 0:
        raise ValueError("step size h must be positive")
    probe = Tensor(x.data.copy(), requires_grad=True)
    out = f(probe)
    if out.data.size != 1:
        raise ShapeError(f"check_gradients needs a scalar-valued f, got shape {out.shape}")
    backward(out)
    analytic = probe.grad.copy() if probe.grad is not None else np.zeros_like(probe.data)

    numeric = np.zeros_like(x.data)
    flat = x.data.reshape(-1)
    nflat = numeric.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        pert = x.data.copy().reshape(-1)
        pert[i] = orig + h
        fp = f(Tensor(pert.reshape(x.data.shape))).item()
        pert[i] = orig - h
        fm = f(Tensor(pert.reshape(x.data.shape))).item()
        nflat[i] = (fp - fm) / (2.0 * h)

    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    rel = np.abs(analytic - numeric) / denom
    return float(rel.max()) if rel.size else 0.0
