"""Free *-polynomials, the functions h_t, and randomized nc convexity tests.

Words are tuples of integer letters: 2j stands for x_j and 2j+1 for x_j*
(j counted from 0).  The text form used in JSON writes letters 1-based,
e.g. "12*1" is x_1 x_2* x_1; separators (spaces, commas or dots) are
required once d > 9.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, herm_part, lambda_min, random_isometry
from .point import NcPoint, compress

_TOKEN = re.compile(r"(\d+)(\*?)")


def _flip(letter: int) -> int:
    return letter ^ 1


def word_from_str(s: str, d: int) -> tuple:
    s = s.strip()
    if not s:
        return ()
    if re.search(r"[\s,.]", s):
        parts = [p for p in re.split(r"[\s,.]+", s) if p]
    else:
        parts = re.findall(r"\d\*?", s)
        if "".join(parts) != s:
            raise ValueError(f"bad word {s!r}")
    out = []
    for p in parts:
        m = _TOKEN.fullmatch(p)
        if m is None:
            raise ValueError(f"bad letter {p!r}")
        j = int(m.group(1)) - 1
        if not 0 <= j < d:
            raise ValueError(f"letter {p!r} out of range for d={d}")
        out.append(2 * j + (1 if m.group(2) else 0))
    return tuple(out)


def word_to_str(w: tuple, d: int) -> str:
    toks = [f"{l // 2 + 1}{'*' if l % 2 else ''}" for l in w]
    return ("" if d <= 9 else " ").join(toks)


@dataclass(frozen=True)
class FreePoly:
    d: int
    terms: dict = field(default_factory=dict)   # word tuple -> complex

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            w = tuple(int(l) for l in w)
            if any(l < 0 or l >= 2 * self.d for l in w):
                raise ValueError(f"word {w} uses a letter outside d={self.d}")
            c = complex(c)
            if not np.isfinite(c):
                raise ValueError("coefficients must be finite")
            if c != 0:
                clean[w] = clean.get(w, 0) + c
        object.__setattr__(self, "terms", {w: c for w, c in clean.items() if c != 0})

    # constructors
    @classmethod
    def unit(cls, d: int, c=1.0) -> "FreePoly":
        return cls(d, {(): c})

    @classmethod
    def letter(cls, d: int, j: int, star: bool = False) -> "FreePoly":
        return cls(d, {(2 * j + int(star),): 1.0})

    @classmethod
    def word(cls, d: int, w, c=1.0) -> "FreePoly":
        if isinstance(w, str):
            w = word_from_str(w, d)
        return cls(d, {tuple(w): c})

    @classmethod
    def parse(cls, d: int, terms) -> "FreePoly":
        """From [(word string, coefficient)] pairs."""
        out = {}
        for w, c in terms:
            key = word_from_str(w, d)
            out[key] = out.get(key, 0) + complex(c)
        return cls(d, out)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    # arithmetic
    def _same(self, other):
        if isinstance(other, FreePoly):
            if other.d != self.d:
                raise ValueError("letter counts differ")
            return other
        return FreePoly.unit(self.d, other)

    def __add__(self, other):
        other = self._same(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return FreePoly(self.d, t)

    __radd__ = __add__

    def __neg__(self):
        return FreePoly(self.d, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if not isinstance(other, FreePoly):
            return FreePoly(self.d, {w: c * complex(other) for w, c in self.terms.items()})
        return self.multiply(other)

    def __rmul__(self, s):
        return FreePoly(self.d, {w: c * complex(s) for w, c in self.terms.items()})

    def multiply(self, other: "FreePoly") -> "FreePoly":
        other = self._same(other)
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                t[w1 + w2] = t.get(w1 + w2, 0) + c1 * c2
        return FreePoly(self.d, t)

    def __pow__(self, k: int):
        out = FreePoly.unit(self.d)
        for _ in range(int(k)):
            out = out.multiply(self)
        return out

    def adjoint(self) -> "FreePoly":
        return FreePoly(self.d, {tuple(_flip(l) for l in reversed(w)): np.conj(c)
                                 for w, c in self.terms.items()})

    def hermitian_letters(self) -> "FreePoly":
        """The same polynomial with x_j* identified with x_j."""
        t = {}
        for w, c in self.terms.items():
            key = tuple(l & ~1 for l in w)
            t[key] = t.get(key, 0) + c
        return FreePoly(self.d, t)

    def is_selfadjoint(self, hermitian: bool = False, tol: float = 1e-12) -> bool:
        a, b = (self, self.adjoint())
        if hermitian:
            a, b = a.hermitian_letters(), b.hermitian_letters()
        keys = set(a.terms) | set(b.terms)
        return all(abs(a.terms.get(k, 0) - b.terms.get(k, 0)) <= tol for k in keys)

    def __eq__(self, other):
        if not isinstance(other, FreePoly) or other.d != self.d:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys)

    def __hash__(self):
        return hash((self.d, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    # evaluation
    def eval(self, x: NcPoint) -> np.ndarray:
        if x.d != self.d:
            raise ValueError(f"polynomial has {self.d} letters, point has {x.d} coordinates")
        n = x.level
        letters = []
        for m in x.mats:
            letters += [m, m.conj().T]
        out = np.zeros((n, n), dtype=complex)
        # share prefixes: evaluate words in sorted order with a running stack
        cache = {(): np.eye(n, dtype=complex)}
        for w in sorted(self.terms, key=len):
            if w not in cache:
                k = len(w) - 1
                while w[:k] not in cache:
                    k -= 1
                acc = cache[w[:k]]
                for i in range(k, len(w)):
                    acc = acc @ letters[w[i]]
                    cache[w[:i + 1]] = acc
            out += self.terms[w] * cache[w]
        return out

    def __call__(self, x: NcPoint) -> np.ndarray:
        return self.eval(x)

    def __repr__(self):
        parts = [f"({c:.4g})*{word_to_str(w, self.d) or '1'}" for w, c in sorted(self.terms.items())]
        return f"FreePoly(d={self.d}: {' + '.join(parts) or '0'})"


def words_up_to(d: int, degree: int, hermitian: bool = False):
    """All words of length <= degree, shortest first."""
    letters = [2 * j for j in range(d)] if hermitian else list(range(2 * d))
    out = [()]
    frontier = [()]
    for _ in range(degree):
        frontier = [w + (l,) for w in frontier for l in letters]
        out += frontier
    return out


def evaluate(f, x: NcPoint) -> np.ndarray:
    """Evaluate a FreePoly or any object exposing eval(point)."""
    return f.eval(x)


@dataclass(frozen=True)
class HT:
    """h_t(x) = x^2 (1 - t x)^{-1} in one self-adjoint letter."""

    t: float
    d: int = 1

    def __post_init__(self):
        if not -1.0 <= self.t <= 1.0:
            raise ValueError("h_t needs t in [-1, 1]")

    def eval(self, x: NcPoint) -> np.ndarray:
        if x.d != self.d:
            raise ValueError("h_t acts on a single letter")
        X = x.mats[0]
        n = X.shape[0]
        M = np.eye(n) - self.t * X
        if np.linalg.cond(M) > 1e12:
            raise ValueError("1 - t x is singular at this point")
        return herm_part(X @ X @ np.linalg.inv(M))

    __call__ = eval

    def truncation(self, D: int) -> FreePoly:
        """sum_{k <= D} t^k x^{k+2}."""
        return FreePoly(self.d, {(0,) * (k + 2): self.t ** k for k in range(D + 1)})

    def tail_bound(self, D: int, radius: float) -> float:
        """Operator-norm bound on h_t - truncation(D) over ||X|| <= radius."""
        q = abs(self.t) * radius
        if q >= 1:
            return np.inf
        return abs(self.t) ** (D + 1) * radius ** (D + 3) / (1 - q)

    def safe_degree(self, radius: float, eps: float, cap: int = 200) -> int:
        """Smallest D whose tail bound is at most eps."""
        for D in range(cap + 1):
            if self.tail_bound(D, radius) <= eps:
                return D
        raise ValueError("no truncation degree reaches the requested accuracy")

    def is_selfadjoint(self, hermitian: bool = True, tol: float = 0.0) -> bool:
        return True

    @property
    def degree(self):
        return np.inf


def h_t(t: float) -> HT:
    return HT(float(t))


# --- convexity testing -----------------------------------------------------


@dataclass
class ConvexityVerdict:
    status: str                     # "ConvexUpTo" | "CounterexampleFound"
    level: int
    witness: dict | None = None
    tests: int = 0

    @property
    def convex(self) -> bool:
        return self.status == "ConvexUpTo"

    def to_dict(self):
        from .io import mat_to_json, point_to_json
        doc = {"status": self.status, "level": self.level, "tests": self.tests, "witness": None}
        if self.witness is not None:
            w = self.witness
            doc["witness"] = {k: (point_to_json(v) if isinstance(v, NcPoint) else
                                  mat_to_json(v) if isinstance(v, np.ndarray) else v)
                              for k, v in w.items()}
        return doc


def _lincomb(x: NcPoint, y: NcPoint, lam: float) -> NcPoint:
    return NcPoint([lam * a + (1 - lam) * b for a, b in zip(x.mats, y.mats)])


def midpoint_gap(f, x: NcPoint, y: NcPoint, lam: float) -> float:
    """lambda_min of lam f(x) + (1-lam) f(y) - f(lam x + (1-lam) y)."""
    D = lam * f.eval(x) + (1 - lam) * f.eval(y) - f.eval(_lincomb(x, y, lam))
    return lambda_min(herm_part(D))


def compression_gap(f, x: NcPoint, alpha: np.ndarray) -> float:
    """lambda_min of alpha* f(x) alpha - f(alpha* x alpha)."""
    D = alpha.conj().T @ f.eval(x) @ alpha - f.eval(compress(x, alpha))
    return lambda_min(herm_part(D))


def test_nc_convexity(f, K, max_level: int = 3, samples: int = 40, seed: int = 0,
                      tol: Tolerances = DEFAULT_TOL) -> ConvexityVerdict:
    """Randomized search for a violation of nc convexity of f over K.

    A violation is reported only when an eigenvalue gap falls below
    -eps_psd * scale, where scale is the size of the values involved.
    """
    from .ncset import sample_member

    if isinstance(f, FreePoly) and not f.is_selfadjoint(hermitian=K.hermitian):
        raise ValueError("convexity test needs a self-adjoint function")
    rng = np.random.default_rng(seed)
    count = 0
    for level in range(1, max_level + 1):
        for _ in range(samples):
            x = sample_member(K, level, rng)
            y = sample_member(K, level, rng)
            fx, fy = f.eval(x), f.eval(y)
            scale = max(1.0, float(np.max(np.abs(fx))), float(np.max(np.abs(fy))))
            lams = [0.5] + list(rng.uniform(0, 1, 8))
            for lam in lams:
                count += 1
                g = midpoint_gap(f, x, y, float(lam))
                if g < -tol.eps_psd * scale:
                    return ConvexityVerdict("CounterexampleFound", level,
                                            {"form": "midpoint", "x": x, "y": y, "lambda": float(lam),
                                             "eigen_gap": float(g)}, count)
            if level >= 2:
                p = int(rng.integers(1, level))
                alpha = random_isometry(level, p, rng)
                count += 1
                g = compression_gap(f, x, alpha)
                if g < -tol.eps_psd * scale:
                    return ConvexityVerdict("CounterexampleFound", level,
                                            {"form": "compression", "x": x, "alpha": alpha,
                                             "eigen_gap": float(g)}, count)
    return ConvexityVerdict("ConvexUpTo", max_level, None, count)


test_nc_convexity.__test__ = False  # keep pytest from collecting it
