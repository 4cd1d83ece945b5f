"""Independent brute-force oracles used to cross-check the library.

These deliberately avoid the library's own enumeration strategies: closed
subsets by bitmask scan, pushforwards by full preimage enumeration, and
invariant factors by Smith normal form of xI - M over F_p[x].
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from qgca.matfp import MatrixFp, Poly, p_divmod, p_monic, p_mul, p_norm, p_sub


def closed_subsets_bitmask(rows) -> list[tuple[int, ...]]:
    """Every operation-closed subset of a table, by scanning all 2^N masks."""
    n = len(rows)
    out = []
    for mask in range(1, 1 << n):
        elems = [i for i in range(n) if mask >> i & 1]
        if all(mask >> rows[a][b] & 1 for a in elems for b in elems):
            out.append(tuple(elems))
    return out


def subgroups_bitmask(rows, identity: int, inverse,
                      rho=None) -> list[tuple[int, ...]]:
    """Every (rho-invariant) subgroup, by scanning all 2^N masks."""
    n = len(rows)
    out = []
    for mask in range(1, 1 << n):
        if not mask >> identity & 1:
            continue
        elems = [i for i in range(n) if mask >> i & 1]
        if not all(mask >> rows[a][b] & 1 for a in elems for b in elems):
            continue
        if not all(mask >> inverse[a] & 1 for a in elems):
            continue
        if rho is not None and not all(mask >> rho[a] & 1 for a in elems):
            continue
        out.append(tuple(elems))
    return out


def pushforward_bruteforce(m, rule, word) -> Fraction:
    """Mass of the full preimage of a cylinder: every candidate word one
    longer, filtered by stepping."""
    from qgca.automaton import step
    n = rule.alphabet_size
    total = Fraction(0)
    w = tuple(word)
    for cand in product(range(n), repeat=len(w) + 1):
        if step(rule, cand) == w:
            total += m.eval(cand)
    return total


def xi_table_bruteforce(rule, length: int) -> dict[tuple, tuple]:
    """Map xi(w) -> w over every word of the given length."""
    from qgca.automaton import xi
    out = {}
    for w in product(range(rule.alphabet_size), repeat=length):
        out[xi(rule, w)] = w
    return out


# ---------------------------------------------------------------------------
# Smith normal form of xI - M over F_p[x]

def _poly_matrix_of(m: MatrixFp) -> list[list[Poly]]:
    n, p = m.n, m.p
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            base = ((-m.rows[i][j]) % p,)
            if i == j:
                row.append(p_norm((base[0], 1), p))
            else:
                row.append(p_norm(base, p))
        out.append(row)
    return out


def snf_invariant_factors(m: MatrixFp) -> tuple[Poly, ...]:
    """Nonconstant diagonal entries of the Smith normal form of xI - M,
    monic, in ascending divisibility order."""
    from qgca.matfp import p_add

    p = m.p
    E = _poly_matrix_of(m)
    n = m.n

    for k in range(n):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    if E[i][j] and (best is None
                                    or len(E[i][j]) < len(E[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            bi, bj = best
            if bi != k:
                E[k], E[bi] = E[bi], E[k]
            if bj != k:
                for row in E:
                    row[k], row[bj] = row[bj], row[k]
            changed = False
            for i in range(k + 1, n):
                if E[i][k]:
                    q, _ = p_divmod(E[i][k], E[k][k], p)
                    if q:
                        for j in range(k, n):
                            E[i][j] = p_sub(E[i][j], p_mul(q, E[k][j], p), p)
                    if E[i][k]:
                        changed = True
            for j in range(k + 1, n):
                if E[k][j]:
                    q, _ = p_divmod(E[k][j], E[k][k], p)
                    if q:
                        for i in range(k, n):
                            E[i][j] = p_sub(E[i][j], p_mul(q, E[i][k], p), p)
                    if E[k][j]:
                        changed = True
            if changed:
                continue
            off = [(i, j) for i in range(k + 1, n) for j in range(k + 1, n)
                   if E[i][j] and p_divmod(E[i][j], E[k][k], p)[1]]
            if off:
                i = off[0][0]
                for j in range(k, n):
                    E[k][j] = p_add(E[k][j], E[i][j], p)
                continue
            break

    factors = [p_monic(E[i][i], p) for i in range(n) if E[i][i]]
    return tuple(f for f in factors if len(f) >= 2)
