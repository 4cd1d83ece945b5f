"""Linear algebra over prime fields: characteristic and minimal polynomials,
rational canonical form, and invariant-subspace enumeration.

Polynomials are coefficient tuples, lowest degree first, with no trailing
zeros; the zero polynomial is the empty tuple.  All arithmetic is mod p.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BadParams, ParseError, QgcaError, TooLarge

SUBSPACE_ENUMERATION_BOUND = 2 ** 20
SUBSPACE_FAMILY_BOUND = 20000

Poly = tuple[int, ...]
Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# polynomial helpers

def p_norm(coeffs: Sequence[int], p: int) -> Poly:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def p_deg(f: Poly) -> int:
    return len(f) - 1


def p_add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return p_norm([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                   for i in range(n)], p)


def p_sub(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return p_norm([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)
                   for i in range(n)], p)


def p_mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return p_norm(out, p)


def p_divmod(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(f)
    quo = [0] * max(len(f) - len(g) + 1, 0)
    inv_lead = pow(g[-1], p - 2, p)
    for i in range(len(rem) - len(g), -1, -1):
        c = rem[i + len(g) - 1] % p
        if c == 0:
            continue
        factor = c * inv_lead % p
        quo[i] = factor
        for j, b in enumerate(g):
            rem[i + j] = (rem[i + j] - factor * b) % p
    return p_norm(quo, p), p_norm(rem, p)


def p_div(f: Poly, g: Poly, p: int) -> Poly:
    quo, rem = p_divmod(f, g, p)
    if rem:
        raise QgcaError(f"inexact polynomial division: {f} / {g} mod {p}")
    return quo


def p_monic(f: Poly, p: int) -> Poly:
    if not f:
        return ()
    inv = pow(f[-1], p - 2, p)
    return tuple(c * inv % p for c in f)


def p_gcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, p_divmod(f, g, p)[1]
    return p_monic(f, p)


def p_lcm(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    return p_monic(p_div(p_mul(f, g, p), p_gcd(f, g, p), p), p)


def p_eval(f: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def p_str(f: Poly) -> str:
    if not f:
        return "0"
    parts = []
    for e in range(len(f) - 1, -1, -1):
        c = f[e]
        if c == 0:
            continue
        if e == 0:
            parts.append(str(c))
        else:
            x = "x" if e == 1 else f"x^{e}"
            parts.append(x if c == 1 else f"{c}{x}")
    return " + ".join(parts)


def part_coprime(f: Poly, g: Poly, p: int) -> Poly:
    """Largest monic divisor of f coprime to g."""
    f = p_monic(f, p)
    while True:
        d = p_gcd(f, g, p)
        if p_deg(d) <= 0:
            return f
        f = p_div(f, d, p)


def coprime_lcm_split(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    """Split lcm(f, g) = F * G with F | f, G | g and gcd(F, G) = 1.

    Works with gcd manipulations only: exclusive factors stay whole, shared
    irreducible factors go, at full multiplicity, to the side that carries
    the higher power (ties to F).
    """
    f, g = p_monic(f, p), p_monic(g, p)
    a = part_coprime(f, g, p)      # f-exclusive primes, full multiplicity
    b = part_coprime(g, f, p)
    fs, gs = p_div(f, a, p), p_div(g, b, p)
    c = p_gcd(fs, gs, p)
    u = p_div(fs, c, p)            # support: primes heavier in f
    v = p_div(gs, c, p)            # support: primes heavier in g
    heavy_f = p_div(fs, part_coprime(fs, u, p), p)
    heavy_g = p_div(gs, part_coprime(gs, v, p), p)
    ties = part_coprime(fs, p_mul(u, v, p), p)
    big_f = p_mul(a, p_mul(heavy_f, ties, p), p)
    big_g = p_mul(b, heavy_g, p)
    if p_deg(p_gcd(big_f, big_g, p)) != 0 or \
            p_mul(big_f, big_g, p) != p_lcm(f, g, p):
        raise QgcaError("coprime lcm split failed")  # pragma: no cover
    return big_f, big_g


def companion_matrix(f: Poly, p: int) -> "MatrixFp":
    """Companion matrix of a monic polynomial of degree >= 1."""
    f = p_monic(f, p)
    n = p_deg(f)
    if n < 1:
        raise BadParams("companion matrix needs degree >= 1")
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = (-f[i]) % p
    return MatrixFp.from_rows(p, rows)


# ---------------------------------------------------------------------------
# matrices

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True, eq=True)
class MatrixFp:
    """Square matrix over the prime field F_p, entries reduced mod p."""

    p: int
    n: int
    rows: tuple[Vec, ...]

    @classmethod
    def from_rows(cls, p: int, rows) -> "MatrixFp":
        if not _is_prime(p):
            raise BadParams(f"modulus {p} is not prime")
        rows = tuple(tuple(int(v) % p for v in row) for row in rows)
        n = len(rows)
        if any(len(r) != n for r in rows) or n == 0:
            raise ParseError("matrix must be square and nonempty")
        return cls(p, n, rows)

    @classmethod
    def identity(cls, p: int, n: int) -> "MatrixFp":
        return cls.from_rows(p, [[1 if i == j else 0 for j in range(n)]
                                 for i in range(n)])

    def vec(self, v: Sequence[int]) -> Vec:
        p = self.p
        return tuple(sum(r[j] * v[j] for j in range(self.n)) % p
                     for r in self.rows)

    def mul(self, other: "MatrixFp") -> "MatrixFp":
        p, n = self.p, self.n
        rows = [[sum(self.rows[i][k] * other.rows[k][j] for k in range(n)) % p
                 for j in range(n)] for i in range(n)]
        return MatrixFp(p, n, tuple(tuple(r) for r in rows))

    def neg(self) -> "MatrixFp":
        return MatrixFp(self.p, self.n,
                        tuple(tuple((-v) % self.p for v in r) for r in self.rows))


def char_poly(m: MatrixFp) -> Poly:
    """Monic characteristic polynomial det(xI - M), by the division-free
    Samuelson-Berkowitz recurrence."""
    p, n, A = m.p, m.n, m.rows
    prev = [1]                      # descending coeffs, leading first
    for r in range(1, n + 1):
        a = A[r - 1][r - 1]
        R = A[r - 1][:r - 1]
        C = [A[i][r - 1] for i in range(r - 1)]
        q = [1, (-a) % p]
        vec = list(C)
        for k in range(2, r + 1):
            if k > 2:
                vec = [sum(A[i][j] * vec[j] for j in range(r - 1)) % p
                       for i in range(r - 1)]
            q.append((-sum(R[j] * vec[j] for j in range(r - 1))) % p)
        cur = [0] * (r + 1)
        for i in range(r + 1):
            s = 0
            for j in range(max(0, i - r), min(i, r - 1) + 1):
                s += q[i - j] * prev[j]
            cur[i] = s % p
        prev = cur
    return p_norm(list(reversed(prev)), p)


def _local_min_poly(apply_fn: Callable[[Vec], Vec], v: Vec, p: int) -> Poly:
    """Minimal monic f with f(A)v = 0, tracking Krylov dependencies."""
    basis: list[tuple[Vec, list[int]]] = []   # echelon vectors with combos
    w, k = v, 0
    while True:
        combo = [0] * (k + 1)
        combo[k] = 1
        red = list(w)
        for bv, bc in basis:
            pivot = next(i for i, x in enumerate(bv) if x)
            c = red[pivot]
            if c:
                factor = c * pow(bv[pivot], p - 2, p) % p
                for i in range(len(red)):
                    red[i] = (red[i] - factor * bv[i]) % p
                for i in range(len(bc)):
                    combo[i] = (combo[i] - factor * bc[i]) % p
        if not any(red):
            # 0 = sum_j combo[j] A^j v with combo[k] = 1: monic of degree k
            return p_norm(combo, p)
        basis.append((tuple(red), combo))
        w = apply_fn(w)
        k += 1


def min_poly(m: MatrixFp) -> Poly:
    """Minimal polynomial as the lcm of Krylov-local polynomials."""
    p, n = m.p, m.n
    acc: Poly = (1,)
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        acc = p_lcm(acc, _local_min_poly(m.vec, e, p), p)
        if p_deg(acc) == n:
            break
    return acc


def char_roots(m: MatrixFp) -> list[int]:
    """Eigenvalue scan: roots of the characteristic polynomial in F_p."""
    f = char_poly(m)
    return [x for x in range(m.p) if p_eval(f, x, m.p) == 0]


def poly_apply_vec(f: Poly, apply_fn: Callable[[Vec], Vec], v: Vec,
                   p: int) -> Vec:
    """f(A) v, evaluated with repeated applications of A."""
    acc = tuple(0 for _ in v)
    w = v
    for k, c in enumerate(f):
        if c:
            acc = tuple((a + c * x) % p for a, x in zip(acc, w))
        if k + 1 < len(f):
            w = apply_fn(w)
    return acc


# ---------------------------------------------------------------------------
# row echelon machinery

def rref(rows: Sequence[Vec], p: int) -> tuple[Vec, ...]:
    """Canonical reduced row echelon basis of the span of ``rows``."""
    work = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    width = len(rows[0]) if rows else 0
    col = 0
    while work and col < width:
        pivot_row = next((r for r in work if r[col] % p != 0), None)
        if pivot_row is None:
            col += 1
            continue
        work.remove(pivot_row)
        inv = pow(pivot_row[col], p - 2, p)
        pivot_row = [v * inv % p for v in pivot_row]
        for r in work:
            c = r[col] % p
            if c:
                for i in range(width):
                    r[i] = (r[i] - c * pivot_row[i]) % p
        work = [r for r in work if any(v % p for v in r)]
        for r in out:
            c = r[col] % p
            if c:
                for i in range(width):
                    r[i] = (r[i] - c * pivot_row[i]) % p
        out.append(pivot_row)
        col += 1
    out.sort(key=lambda r: next(i for i, v in enumerate(r) if v))
    return tuple(tuple(r) for r in out)


def in_span(basis: Sequence[Vec], v: Vec, p: int) -> bool:
    red = list(v)
    for row in basis:
        pivot = next(i for i, x in enumerate(row) if x)
        c = red[pivot] % p
        if c:
            for i in range(len(red)):
                red[i] = (red[i] - c * row[i]) % p
    return not any(x % p for x in red)


# ---------------------------------------------------------------------------
# rational canonical form

@dataclass(frozen=True)
class RcfResult:
    """Invariant factors in ascending divisibility order (last = minimal
    polynomial); simple means a single companion block."""

    invariant_factors: tuple[Poly, ...]
    simple: bool


def rcf(m: MatrixFp) -> RcfResult:
    """Rational canonical form via cyclic vectors and iterated deflation.

    Each round finds a maximal-order vector of the operator induced on the
    quotient by the invariant subspace accumulated so far; its minimal
    polynomial is the next invariant factor, largest first.
    """
    p, n = m.p, m.n
    w_basis: tuple[Vec, ...] = ()
    factors_desc: list[Poly] = []

    def reduce(v: Vec) -> Vec:
        red = list(v)
        for row in w_basis:
            pivot = next(i for i, x in enumerate(row) if x)
            c = red[pivot] % p
            if c:
                for i in range(n):
                    red[i] = (red[i] - c * row[i]) % p
        return tuple(red)

    def q_apply(v: Vec) -> Vec:
        return reduce(m.vec(v))

    while len(w_basis) < n:
        dim_q = n - len(w_basis)
        # independent representatives of the quotient from reduced unit vectors
        reps: list[Vec] = []
        span: list[Vec] = list(w_basis)
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            if not in_span(tuple(span), e, p):
                reps.append(reduce(e))
                span = list(rref(span + [e], p))
            if len(reps) == dim_q:
                break
        v: Vec | None = None
        mu: Poly = (1,)
        for u in reps:
            fu = _local_min_poly(q_apply, u, p)
            if p_divmod(mu, fu, p)[1] == ():       # fu divides mu: nothing new
                continue
            if v is None:
                v, mu = u, fu
                continue
            big_f, big_g = coprime_lcm_split(mu, fu, p)
            w1 = poly_apply_vec(p_div(mu, big_f, p), q_apply, v, p)
            w2 = poly_apply_vec(p_div(fu, big_g, p), q_apply, u, p)
            v = tuple((a + b) % p for a, b in zip(w1, w2))
            mu = p_mul(big_f, big_g, p)
            if p_deg(mu) == dim_q:
                break
        factors_desc.append(mu)
        new_rows = list(w_basis)
        w = v
        for _ in range(p_deg(mu)):
            new_rows.append(w)
            w = m.vec(w)
        w_basis = rref(new_rows, p)

    factors = tuple(reversed(factors_desc))
    prod: Poly = (1,)
    for f in factors:
        prod = p_mul(prod, f, p)
    if prod != char_poly(m):
        raise QgcaError("invariant factors do not multiply to the "
                        "characteristic polynomial")  # pragma: no cover
    for a, b in zip(factors, factors[1:]):
        if p_divmod(b, a, p)[1] != ():
            raise QgcaError("invariant factors fail the divisibility "
                            "chain")  # pragma: no cover
    if factors[-1] != min_poly(m):
        raise QgcaError("largest invariant factor is not the minimal "
                        "polynomial")  # pragma: no cover
    return RcfResult(factors, simple=len(factors) == 1)


# ---------------------------------------------------------------------------
# invariant subspaces

def cyclic_subspace(m: MatrixFp, v: Vec) -> tuple[Vec, ...]:
    """RREF basis of span{v, Mv, M^2 v, ...}."""
    rows = [v]
    w = m.vec(v)
    while not in_span(rref(rows, m.p), w, m.p):
        rows.append(w)
        w = m.vec(w)
    return rref(rows, m.p)


def invariant_subspaces(m: MatrixFp,
                        family_bound: int = SUBSPACE_FAMILY_BOUND
                        ) -> list[tuple[Vec, ...]]:
    """All nonzero proper M-invariant subspaces, as canonical RREF bases.

    Strategy: cyclic subspaces of every (projective) vector, then sums of
    pairs swept to a fixed point.  Every invariant subspace is a sum of
    cyclic subspaces of its members, so the sweep is exhaustive.
    """
    p, n = m.p, m.n
    if p ** n > SUBSPACE_ENUMERATION_BOUND:
        raise TooLarge(f"{p}^{n} vectors exceed bound {SUBSPACE_ENUMERATION_BOUND}")
    family: dict[tuple[Vec, ...], None] = {}

    def digits(value: int) -> Vec:
        out = []
        for _ in range(n):
            value, r = divmod(value, p)
            out.append(r)
        return tuple(reversed(out))

    for idx in range(1, p ** n):
        v = digits(idx)
        lead = next(x for x in v if x)
        if lead != 1:          # one representative per scalar line
            continue
        basis = cyclic_subspace(m, v)
        if len(basis) < n:
            family.setdefault(basis, None)

    frontier = list(family)
    while frontier:
        fresh = []
        for x in frontier:
            for y in list(family):
                s = rref(list(x) + list(y), p)
                if len(s) < n and s not in family:
                    family[s] = None
                    fresh.append(s)
                if len(family) > family_bound:
                    raise TooLarge(
                        f"invariant subspace family exceeds {family_bound}")
        frontier = fresh

    for basis in family:       # re-verify invariance of everything returned
        for row in basis:
            if not in_span(basis, m.vec(row), p):
                raise QgcaError("sum sweep produced a non-invariant "
                                "subspace")  # pragma: no cover
    return sorted(family, key=lambda b: (len(b), b))


EXHAUSTIVE_VECTOR_BOUND = 2 ** 14
EXHAUSTIVE_SUBSPACE_BOUND = 200000


def _gaussian_subspace_count(p: int, n: int) -> int:
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (n - i) - 1
            den *= p ** (k - i) - 1
        total += num // den
    return total


def invariant_subspaces_exhaustive(m: MatrixFp) -> list[tuple[Vec, ...]]:
    """Independent enumeration strategy: every subspace, generated as a
    reduced-echelon basis (pivot columns then free entries), filtered for
    invariance.  Feasible only for small spaces; used to cross-check
    :func:`invariant_subspaces`."""
    from itertools import combinations, product as iproduct

    p, n = m.p, m.n
    if p ** n > EXHAUSTIVE_VECTOR_BOUND:
        raise TooLarge(f"{p}^{n} exceeds exhaustive bound {EXHAUSTIVE_VECTOR_BOUND}")
    if _gaussian_subspace_count(p, n) > EXHAUSTIVE_SUBSPACE_BOUND:
        raise TooLarge("too many subspaces for exhaustive enumeration")
    out = []
    for k in range(1, n):
        for pivots in combinations(range(n), k):
            free = [(i, j) for i in range(k) for j in range(n)
                    if j > pivots[i] and j not in pivots]
            for values in iproduct(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for i in range(k):
                    rows[i][pivots[i]] = 1
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                basis = tuple(tuple(r) for r in rows)
                if all(in_span(basis, m.vec(r), p) for r in basis):
                    out.append(basis)
    return sorted(out, key=lambda b: (len(b), b))


# ---------------------------------------------------------------------------
# matrix file format: line 1 = "p N", then N rows of N residues

def parse_matrix(text: str) -> MatrixFp:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ParseError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError('matrix header must be "p N"')
    try:
        p, n = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError('matrix header must be "p N" with integers') from None
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, got {len(lines) - 1}")
    rows = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != n:
            raise ParseError(f"bad matrix row {line!r}")
        try:
            rows.append([int(v) for v in parts])
        except ValueError:
            raise ParseError(f"bad matrix row {line!r}") from None
    return MatrixFp.from_rows(p, rows)


def format_matrix(m: MatrixFp) -> str:
    lines = [f"{m.p} {m.n}"]
    for row in m.rows:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def load_matrix(path) -> MatrixFp:
    from pathlib import Path
    return parse_matrix(Path(path).read_text())
