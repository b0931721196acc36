"""Minimal tanh multilayer perceptron with hand-written backprop and Adam."""

from __future__ import annotations

from typing import Sequence

import numpy as np


class MLP:
    """Fully connected network, tanh on hidden layers, linear output."""

    def __init__(self, sizes: Sequence[int], rng: np.random.Generator,
                 out_scale: float = 1.0):
        self.sizes = tuple(int(s) for s in sizes)
        self.W: list[np.ndarray] = []
        self.b: list[np.ndarray] = []
        last = len(self.sizes) - 2
        for k, (fan_in, fan_out) in enumerate(zip(self.sizes[:-1], self.sizes[1:])):
            gain = out_scale if k == last else 1.0
            lim = gain * np.sqrt(6.0 / (fan_in + fan_out))
            self.W.append(rng.uniform(-lim, lim, size=(fan_in, fan_out)))
            self.b.append(np.zeros(fan_out))

    @property
    def params(self) -> list[np.ndarray]:
        out = []
        for W, b in zip(self.W, self.b):
            out += [W, b]
        return out

    def forward(self, x: np.ndarray, keep: bool = False):
        acts = [x]
        h = x
        n = len(self.W)
        for k in range(n):
            h = h @ self.W[k] + self.b[k]
            if k < n - 1:
                h = np.tanh(h)
            acts.append(h)
        return (h, acts) if keep else h

    def backward(self, acts: list[np.ndarray], dout: np.ndarray) -> list[np.ndarray]:
        """Gradients (ordered like :attr:`params`) given dLoss/dOutput."""
        n = len(self.W)
        grads: list[np.ndarray] = [None] * (2 * n)
        delta = dout
        for k in range(n - 1, -1, -1):
            grads[2 * k] = acts[k].T @ delta
            grads[2 * k + 1] = delta.sum(axis=0)
            if k > 0:
                delta = (delta @ self.W[k].T) * (1.0 - acts[k] ** 2)
        return grads

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "layers": [{"shape": list(W.shape), "W": W.ravel().tolist(), "b": b.tolist()}
                       for W, b in zip(self.W, self.b)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MLP":
        net = cls.__new__(cls)
        net.sizes = tuple(d["sizes"])
        net.W = [np.asarray(L["W"], dtype=float).reshape(L["shape"]) for L in d["layers"]]
        net.b = [np.asarray(L["b"], dtype=float) for L in d["layers"]]
        return net


class Adam:
    def __init__(self, params: list[np.ndarray], lr: float = 3e-4,
                 betas=(0.9, 0.999), eps: float = 1e-8):
        self.params = params
        self.lr = lr
        self.b1, self.b2 = betas
        self.eps = eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads: list[np.ndarray]) -> None:
        self.t += 1
        c1 = 1.0 - self.b1 ** self.t
        c2 = 1.0 - self.b2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.b1
            m += (1.0 - self.b1) * g
            v *= self.b2
            v += (1.0 - self.b2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
