"""Uniform morphisms on words, the p-Cantor and Thue-Morse sequences."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Hashable, Sequence

import numpy as np

from .ffield import check_prime
from .laurent import LaurentSeries

__all__ = [
    "UniformMorphism1D",
    "iterate_fixed_point",
    "cantor_image",
    "cantor_morphism",
    "cantor_sequence",
    "cantor_series",
    "thue_morse_morphism",
    "thue_morse_sequence",
    "thue_morse_series",
    "quadratic_check",
    "named_series",
]


@dataclass(frozen=True)
class UniformMorphism1D:
    images: dict[Hashable, tuple]
    width: int = field(init=False)

    def __post_init__(self):
        widths = {len(w) for w in self.images.values()}
        if len(widths) != 1:
            raise ValueError(f"images have differing lengths {sorted(widths)}")
        object.__setattr__(self, "width", widths.pop())
        for w in self.images.values():
            for a in w:
                if a not in self.images:
                    raise ValueError(f"image letter {a!r} outside the alphabet")

    def apply(self, word: Sequence) -> list:
        out = []
        for a in word:
            out.extend(self.images[a])
        return out


def iterate_fixed_point(m: UniformMorphism1D, start, length: int) -> list:
    """First ``length`` letters of the fixed point of ``m`` grown from ``start``."""
    if m.images[start][0] != start:
        raise ValueError(f"{start!r} is not prolongable: its image starts with {m.images[start][0]!r}")
    word = [start]
    while len(word) < length:
        if m.width == 1:
            word = word * length
            break
        word = m.apply(word)
    return word[:length]


def cantor_image(p: int, n: int) -> list[int]:
    check_prime(p)
    if p == 2:
        raise ValueError("the Cantor morphism needs an odd prime")
    if not 0 <= n < p:
        raise ValueError(f"letter {n} outside F_{p}")
    half = (p - 1) // 2
    return [n * comb(half, i // 2) % p if i % 2 == 0 else 0 for i in range(p)]


def cantor_morphism(p: int) -> UniformMorphism1D:
    return UniformMorphism1D({n: tuple(cantor_image(p, n)) for n in range(p)})


def cantor_sequence(p: int, length: int) -> list[int]:
    return iterate_fixed_point(cantor_morphism(p), 1, length)


def cantor_series(p: int) -> LaurentSeries:
    """``t^(-1) * sum c_i t^(-i)``, extended in blocks of powers of p."""
    m = cantor_morphism(p)

    def produce(n: int) -> list[int]:
        size = 1
        while size < n:
            size *= p
        return iterate_fixed_point(m, 1, size)

    return LaurentSeries.from_source(p, -1, produce, block=p)


def thue_morse_morphism() -> UniformMorphism1D:
    return UniformMorphism1D({0: (0, 1), 1: (1, 0)})


def thue_morse_sequence(length: int) -> list[int]:
    return iterate_fixed_point(thue_morse_morphism(), 0, length)


def thue_morse_series() -> LaurentSeries:
    """``sum_{n>=1} tau_n t^(-n)`` over F_2 where ``tau_1`` is the fixed point's first letter."""
    def produce(n: int) -> list[int]:
        size = 1
        while size < n:
            size *= 2
        return thue_morse_sequence(size)

    return LaurentSeries.from_source(2, -1, produce, block=2)


def _conv(a: np.ndarray, b: np.ndarray, n: int, p: int) -> np.ndarray:
    return np.convolve(a[:n], b[:n])[:n] % p


def _frobenius(c: np.ndarray, p: int, n: int) -> np.ndarray:
    # image of sum c_i t^-i under t -> t^p, truncated to n coefficients
    out = np.zeros(n, dtype=np.int64)
    idx = np.arange(0, n, p)
    out[idx] = c[: len(idx)]
    return out


def quadratic_check(p: int, n_terms: int = 1000) -> bool:
    """Check ``T^2 (1 + t^-2) = 1`` and ``T = T^p * sum C(h,i) t^(-2i)`` for ``T = t * cantor``.

    Here ``h = (p-1)/2``.  Both identities are compared on ``n_terms``
    coefficients; ``T^p`` is computed by repeated multiplication and also
    compared with its Frobenius form ``T(t^p)``.
    """
    if n_terms < p * p:
        raise ValueError("need at least p^2 coefficients")
    c = np.array(cantor_sequence(p, n_terms), dtype=np.int64)
    sq = _conv(c, c, n_terms, p)
    lhs = sq.copy()
    lhs[2:] = (lhs[2:] + sq[:-2]) % p
    one = np.zeros(n_terms, dtype=np.int64)
    one[0] = 1
    if not np.array_equal(lhs, one):
        return False

    power = one.copy()
    base, e = c.copy(), p
    while e:
        if e & 1:
            power = _conv(power, base, n_terms, p)
        base = _conv(base, base, n_terms, p)
        e >>= 1
    if not np.array_equal(power, _frobenius(c, p, n_terms)):
        return False
    half = (p - 1) // 2
    weights = np.zeros(n_terms, dtype=np.int64)
    for i in range(half + 1):
        if 2 * i < n_terms:
            weights[2 * i] = comb(half, i) % p
    return bool(np.array_equal(_conv(power, weights, n_terms, p), c))


def named_series(spec: str) -> LaurentSeries:
    """Resolve ``"cantor:p=<p>"``, ``"thue-morse"`` or ``"file:<path>"``."""
    from .laurent import parse_series

    if spec == "thue-morse":
        return thue_morse_series()
    if spec.startswith("cantor:"):
        key, _, val = spec[len("cantor:"):].partition("=")
        if key != "p" or not val.isdigit():
            raise ValueError(f"bad generator {spec!r}; expected cantor:p=<prime>")
        return cantor_series(int(val))
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        if not lines or not lines[0].startswith("p="):
            raise ValueError("series file must start with a 'p=<prime>' line")
        p = int(lines[0][2:])
        return parse_series(" ".join(lines[1:]), p)
    raise ValueError(f"unknown series {spec!r}")
