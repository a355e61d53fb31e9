"""Exact rotation matrices for the free group on Q1, Q2, D1..Db.

The base pair is the classical free pair of rotations with cosine 3/5 and
sine 4/5 about the z-axis (``a``) and the x-axis (``beta``). Generators are
conjugates of ``beta``: Q1 = beta, Q2 = a beta a^-1, D_j = a^(j+1) beta a^-(j+1).
Words are tuples of ``(symbol, exponent)`` with exponent +1 or -1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .structures import DEFAULT_GUARDS, Guards

F = Fraction
Matrix = tuple  # 3x3 tuple of tuples of Fraction

IDENTITY: Matrix = tuple(tuple(F(int(i == j)) for j in range(3)) for i in range(3))
ROT_A: Matrix = ((F(3, 5), F(-4, 5), F(0)), (F(4, 5), F(3, 5), F(0)), (F(0), F(0), F(1)))
ROT_BETA: Matrix = ((F(1), F(0), F(0)), (F(0), F(3, 5), F(-4, 5)), (F(0), F(4, 5), F(3, 5)))


def matmul(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def transpose(x: Matrix) -> Matrix:
    return tuple(tuple(x[j][i] for j in range(3)) for i in range(3))


def det(x: Matrix) -> Fraction:
    return (x[0][0] * (x[1][1] * x[2][2] - x[1][2] * x[2][1])
            - x[0][1] * (x[1][0] * x[2][2] - x[1][2] * x[2][0])
            + x[0][2] * (x[1][0] * x[2][1] - x[1][1] * x[2][0]))


def trace(x: Matrix) -> Fraction:
    return x[0][0] + x[1][1] + x[2][2]


def is_identity(x: Matrix) -> bool:
    return x == IDENTITY


def is_rotation(x: Matrix) -> bool:
    return matmul(transpose(x), x) == IDENTITY and det(x) == 1


def _check(x: Matrix) -> Matrix:
    if not is_rotation(x):
        raise ValueError("matrix is not a rotation")
    return x


def _mpow(x: Matrix, k: int) -> Matrix:
    if k < 0:
        x, k = transpose(x), -k
    out = IDENTITY
    for _ in range(k):
        out = matmul(out, x)
    return out


def generator_index(sym: str) -> int:
    """Power of ``a`` used to conjugate ``beta`` for this generator."""
    m = re.fullmatch(r"(Q|D)(\d+)", sym)
    if not m:
        raise ValueError(f"unknown generator {sym!r}")
    kind, i = m.group(1), int(m.group(2))
    if kind == "Q":
        if i not in (1, 2):
            raise ValueError(f"unknown generator {sym!r}")
        return i - 1
    if i < 1:
        raise ValueError(f"unknown generator {sym!r}")
    return i + 1


_GEN_CACHE: dict[str, Matrix] = {}


def gen_matrix(sym: str) -> Matrix:
    if sym not in _GEN_CACHE:
        p = generator_index(sym)
        _GEN_CACHE[sym] = _check(matmul(matmul(_mpow(ROT_A, p), ROT_BETA), _mpow(ROT_A, -p)))
    return _GEN_CACHE[sym]


def gen_matrices(b: int) -> dict[str, Matrix]:
    syms = ["Q1", "Q2"] + [f"D{j}" for j in range(1, b + 1)]
    return {s: gen_matrix(s) for s in syms}


def reduce(word) -> tuple:
    out = []
    for sym, e in word:
        if out and out[-1] == (sym, -e):
            out.pop()
        else:
            out.append((sym, e))
    return tuple(out)


def inverse(word) -> tuple:
    return tuple((sym, -e) for sym, e in reversed(word))


def word_matrix(word, check: bool = True) -> Matrix:
    """Exact product of generator matrices (inverse = transpose)."""
    out = IDENTITY
    for sym, e in word:
        g = gen_matrix(sym)
        out = matmul(out, g if e > 0 else transpose(g))
    return _check(out) if check else out


def in_normal_closure(word) -> bool:
    """Membership in the normal closure of <Q1, Q2>: drop Q-letters, reduce, test empty."""
    return reduce(x for x in word if not x[0].startswith("Q")) == ()


def delta_sq(x: Matrix) -> Fraction:
    """Squared maximal displacement of a unit vector: 2(1 - cos theta) = 3 - trace."""
    _check(x)
    return 3 - trace(x)


def axis(x: Matrix):
    """Primitive integer vector spanning the fixed line, or None for the identity."""
    _check(x)
    if is_identity(x):
        return None
    m = [[x[i][j] - (i == j) for j in range(3)] for i in range(3)]
    for r1, r2 in ((0, 1), (0, 2), (1, 2)):
        u, v = m[r1], m[r2]
        c = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
        if any(c):
            break
    else:
        raise ValueError("rotation has no unique axis")
    den = 1
    for q in c:
        den = den * q.denominator // _gcd(den, q.denominator)
    ints = [int(q * den) for q in c]
    g = 0
    for n in ints:
        g = _gcd(g, abs(n))
    ints = [n // g for n in ints]
    if next(n for n in ints if n) < 0:
        ints = [-n for n in ints]
    return tuple(F(n) for n in ints)


def _gcd(p, q):
    while q:
        p, q = q, p % q
    return p


def word_key(word):
    return (len(word), tuple((s[0], int(s[1:]), e < 0) for s, e in word))


def normal_pool(depth: int, b: int, guards: Guards = DEFAULT_GUARDS) -> list[tuple]:
    """Conjugates u q u^-1 with q in {Q1, Q2}^+-1 and |u| <= depth, reduced, deduplicated.

    Sorted by (length, letters), so the pool for a smaller depth is a prefix.
    """
    syms = ["Q1", "Q2"] + [f"D{j}" for j in range(1, b + 1)]
    letters = [(s, e) for s in syms for e in (1, -1)]
    conj = [(q, e) for q in ("Q1", "Q2") for e in (1, -1)]
    us, level = [()], [()]
    for _ in range(depth):
        level = [u + (x,) for u in level for x in letters if not (u and u[-1] == (x[0], -x[1]))]
        us.extend(level)
        guards.check("max_pool", len(us) * len(conj))
    pool = {reduce(u + (q,) + inverse(u)) for u in us for q in conj}
    return sorted(pool, key=word_key)


@dataclass(frozen=True)
class ApproxResult:
    word: tuple
    delta_sq: Fraction
    baseline: Fraction
    pool_size: int

    @property
    def delta_sq_float(self) -> float:
        return float(self.delta_sq)


def _float_matrix(word) -> np.ndarray:
    out = np.eye(3)
    for sym, e in word:
        g = np.array(gen_matrix(sym), dtype=float)
        out = out @ (g if e > 0 else g.T)
    return out


def approx_search(d, depth: int, target: Fraction | None = None, b: int | None = None,
                  pair_cap: int = 400, triple_cap: int = 120, max_power: int = 48,
                  guards: Guards = DEFAULT_GUARDS) -> ApproxResult:
    """Search members m of the normal closure minimising delta_sq(d * m).

    Candidates: the empty word; every pool conjugate; products of two among
    the first ``pair_cap`` pool elements; products of three among the first
    ``triple_cap``; and powers m^k, 2 <= |k| <= max_power, of the first
    ``triple_cap`` elements (axis alignment followed by powering, as in the
    density argument). The pool for a smaller depth is a prefix of the pool
    for a larger one, so every candidate family grows with ``depth`` and the
    optimum is non-increasing. Floats prescreen; the winner is chosen by
    exact arithmetic, ties broken by shorter word then letters. ``target`` is
    informational only.
    """
    d = reduce(d)
    if b is None:
        b = max([int(s[1:]) for s, _ in d if s.startswith("D")] + [1])
    dm = word_matrix(d)
    baseline = delta_sq(dm)
    pool = normal_pool(depth, b, guards) if depth > 0 else []
    # (float scores, index -> word) per candidate family
    families = [(np.array([float(baseline)]), lambda i: ())]
    if pool:
        D = np.array(dm, dtype=float)
        mats = np.array([_float_matrix(w) for w in pool])

        def score(xs):
            # 3 - trace(D X), trace(D X) = sum_ij D_ij X_ji
            return 3 - np.einsum("ij,nji->n", D, xs)

        families.append((score(mats), lambda i: pool[i]))
        pm = mats[:pair_cap]
        n2 = len(pm)
        pairs = np.einsum("aij,bjk->abik", pm, pm).reshape(-1, 3, 3)
        families.append((score(pairs), lambda i: pool[i // n2] + pool[i % n2]))
        head = mats[:triple_cap]
        n3 = len(head)
        dm1m2 = np.einsum("ij,ajk,bkl->abil", D, head, head).reshape(-1, 3, 3)
        tri = 3 - np.einsum("nil,mli->nm", dm1m2, head).reshape(-1)
        families.append((tri, lambda i: pool[i // (n3 * n3)] + pool[i // n3 % n3] + pool[i % n3]))
        exps = [k for k in range(-max_power, max_power + 1) if abs(k) >= 2]
        powers = np.array([np.linalg.matrix_power(m if k > 0 else m.T, abs(k))
                           for m in head for k in exps])
        families.append((score(powers), lambda i: (pool[i // len(exps)] if exps[i % len(exps)] > 0
                                                   else inverse(pool[i // len(exps)]))
                         * abs(exps[i % len(exps)])))
    lo = min(float(s.min()) for s, _ in families)
    exact = []
    for s, word_at in families:
        for i in np.flatnonzero(s <= lo + 1e-9):
            w = reduce(word_at(int(i)))
            exact.append((delta_sq(matmul(dm, word_matrix(w))), word_key(w), w))
    best = min(exact)
    assert in_normal_closure(best[2])
    return ApproxResult(best[2], best[0], baseline, len(pool))
