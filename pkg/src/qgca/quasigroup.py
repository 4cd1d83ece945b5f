"""Finite quasigroups: Latin-square validation, duals, subquasigroup search,
and the built-in example tables used throughout the tool.

A quasigroup is stored as a table of symbol indices whose rows and columns
are all permutations (a Latin square).  Symbols are user-facing names; every
computation runs on dense indices 0..N-1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (BadEntry, BadParams, DuplicateInColumn, DuplicateInRow,
                     OrderTooLarge, ParseError, UnknownName)

SUBQUASIGROUP_ORDER_BOUND = 64


@dataclass(frozen=True, eq=False)
class Quasigroup:
    """A finite set with a binary operation whose table is a Latin square.

    ``table[i, j]`` is the index of ``symbols[i] * symbols[j]``.  Instances
    are immutable and always valid; construct them through
    :func:`validate_latin` or :func:`builtin`.
    """

    symbols: tuple[str, ...]
    table: np.ndarray

    @property
    def order(self) -> int:
        return len(self.symbols)

    @cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.table.tolist())

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise ParseError(f"unknown symbol name {name!r}") from None

    def word(self, text: str | Iterable[str]) -> tuple[int, ...]:
        """Parse a whitespace-separated sequence of symbol names."""
        names = text.split() if isinstance(text, str) else list(text)
        return tuple(self.index(n) for n in names)

    def names(self, word: Iterable[int]) -> str:
        return " ".join(self.symbols[s] for s in word)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quasigroup):
            return NotImplemented
        return self.symbols == other.symbols and np.array_equal(self.table, other.table)

    def __repr__(self) -> str:
        return f"Quasigroup(order={self.order}, symbols={self.symbols[:4]}...)"


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int32)
    arr.flags.writeable = False
    return arr


def validate_latin(table, symbols: Sequence[str] | None = None) -> Quasigroup:
    """Validate an N x N index table as a Latin square and wrap it.

    Reports the first offending entry, row, or column: entries must lie in
    0..N-1, and every row and column must be a permutation.
    """
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ParseError(f"table must be square and nonempty, got shape {arr.shape}")
    n = arr.shape[0]
    if symbols is None:
        symbols = tuple(str(i) for i in range(n))
    else:
        symbols = tuple(symbols)
    if len(symbols) != n:
        raise ParseError(f"{len(symbols)} symbols for a {n}x{n} table")
    if len(set(symbols)) != n:
        raise ParseError("symbol names must be distinct")

    bad = np.argwhere((arr < 0) | (arr >= n))
    if bad.size:
        r, c = (int(v) for v in bad[0])
        raise BadEntry(r, c)
    for r in range(n):
        seen: dict[int, int] = {}
        for c, v in enumerate(arr[r].tolist()):
            if v in seen:
                raise DuplicateInRow(r, seen[v], c)
            seen[v] = c
    for c in range(n):
        seen = {}
        for r, v in enumerate(arr[:, c].tolist()):
            if v in seen:
                raise DuplicateInColumn(c, seen[v], r)
            seen[v] = r
    return Quasigroup(symbols, _freeze(arr))


def dual(q: Quasigroup) -> Quasigroup:
    """The dual operation: ``a ^ b`` is the unique c with ``a * c = b``."""
    inv_rows = np.argsort(q.table, axis=1)
    return Quasigroup(q.symbols, _freeze(inv_rows))


def associativity_witness(q: Quasigroup) -> tuple[int, int, int] | None:
    """First triple (a, b, c) with (a*b)*c != a*(b*c), or None."""
    t = q.table
    left = t[t, :]                      # left[a, b, c] = (a*b)*c
    right = t[:, t]                     # right[a, b, c] = a*(b*c)
    bad = np.argwhere(left != right)
    if bad.size:
        return tuple(int(v) for v in bad[0])
    return None


def is_associative(q: Quasigroup) -> bool:
    return associativity_witness(q) is None


def closure(q: Quasigroup, seed: Iterable[int]) -> frozenset[int]:
    """Smallest subset containing ``seed`` and closed under the operation."""
    members = set(seed)
    rows = q.rows
    changed = True
    while changed:
        changed = False
        mem = list(members)
        for a in mem:
            ra = rows[a]
            for b in mem:
                v = ra[b]
                if v not in members:
                    members.add(v)
                    changed = True
    return frozenset(members)


def subquasigroups(q: Quasigroup, include_trivial: bool = False) -> list[tuple[int, ...]]:
    """All closed subsets, found by closing seeds of size <= 2 and sweeping
    pairwise union-closures to a fixed point.

    By default only proper subsets of size >= 2 are returned;
    ``include_trivial`` adds idempotent singletons and the full set.
    """
    n = q.order
    if n > SUBQUASIGROUP_ORDER_BOUND:
        raise OrderTooLarge(n, SUBQUASIGROUP_ORDER_BOUND)
    family: set[frozenset[int]] = set()
    for a in range(n):
        family.add(closure(q, (a,)))
        for b in range(a + 1, n):
            family.add(closure(q, (a, b)))
    # union-closure sweep
    while True:
        additions: set[frozenset[int]] = set()
        fam = list(family)
        for i, x in enumerate(fam):
            for y in fam[i + 1:]:
                if x <= y or y <= x:
                    continue
                u = closure(q, x | y)
                if u not in family:
                    additions.add(u)
        if not additions:
            break
        family |= additions
    family.add(frozenset(range(n)))

    def keep(s: frozenset[int]) -> bool:
        if include_trivial:
            return True
        return 1 < len(s) < n

    out = [tuple(sorted(s)) for s in family if keep(s)]
    out.sort(key=lambda s: (len(s), s))
    return out


# ---------------------------------------------------------------------------
# built-in tables

_D7_SYMBOLS = ("a1", "a2", "b1", "b2", "c1", "c2", "c3")
_D7_TABLE = (
    (0, 1, 4, 5, 3, 2, 6),
    (1, 0, 5, 4, 2, 6, 3),
    (4, 6, 2, 3, 5, 0, 1),
    (6, 4, 3, 2, 0, 1, 5),
    (2, 3, 6, 0, 1, 5, 4),
    (3, 5, 0, 1, 6, 4, 2),
    (5, 2, 1, 6, 4, 3, 0),
)

QUATERNION_SYMBOLS = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")


def _quaternion_mul(a: int, b: int) -> int:
    # element 2*axis + sign, axes (1, i, j, k), sign 1 means negated
    sa, xa = a % 2, a // 2
    sb, xb = b % 2, b // 2
    s = sa ^ sb
    if xa == 0:
        return 2 * xb + s
    if xb == 0:
        return 2 * xa + s
    if xa == xb:
        return s ^ 1
    third = {(1, 2): (3, 0), (2, 3): (1, 0), (3, 1): (2, 0),
             (2, 1): (3, 1), (3, 2): (1, 1), (1, 3): (2, 1)}
    xc, flip = third[(xa, xb)]
    return 2 * xc + (s ^ flip)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _cyclic(n: int) -> Quasigroup:
    if n < 1:
        raise BadParams(f"cyclic order must be positive, got {n}")
    idx = np.arange(n)
    return Quasigroup(tuple(str(i) for i in range(n)),
                      _freeze((idx[:, None] + idx[None, :]) % n))


def _ledrappier(p: int, c0: int, c1: int) -> Quasigroup:
    if not _is_prime(p):
        raise BadParams(f"ledrappier modulus must be prime, got {p}")
    if not (0 < c0 % p and 0 < c1 % p):
        raise BadParams("ledrappier coefficients must be nonzero mod p")
    idx = np.arange(p)
    table = (c0 * idx[:, None] + c1 * idx[None, :]) % p
    return Quasigroup(tuple(str(i) for i in range(p)), _freeze(table))


def _quaternion() -> Quasigroup:
    table = [[_quaternion_mul(a, b) for b in range(8)] for a in range(8)]
    return Quasigroup(QUATERNION_SYMBOLS, _freeze(np.array(table)))


def _nonabelian21() -> Quasigroup:
    # semidirect product Z/7 x| Z/3: (i,j)*(k,l) = (i + k*2^j mod 7, j+l mod 3)
    def name(i, j):
        if i == 0 and j == 0:
            return "e"
        if j == 0:
            return f"a{i}"
        if i == 0:
            return f"b{j}"
        return f"a{i}b{j}"

    symbols = tuple(name(i, j) for i in range(7) for j in range(3))
    table = np.empty((21, 21), dtype=np.int64)
    for u in range(21):
        i, j = divmod(u, 3)
        for v in range(21):
            k, l = divmod(v, 3)
            table[u, v] = ((i + k * pow(2, j, 7)) % 7) * 3 + (j + l) % 3
    return Quasigroup(symbols, _freeze(table))


def product(left: Quasigroup, right: Quasigroup) -> Quasigroup:
    """Componentwise product; combined index is left_index * |right| + right_index."""
    nl, nr = left.order, right.order
    lt = left.table.astype(np.int64)
    rt = right.table.astype(np.int64)
    li, ri = np.divmod(np.arange(nl * nr), nr)
    table = lt[np.ix_(li, li)] * nr + rt[np.ix_(ri, ri)]
    symbols = tuple(f"({left.symbols[a]},{right.symbols[b]})"
                    for a in range(nl) for b in range(nr))
    return Quasigroup(symbols, _freeze(table))


def builtin(name: str, params: Sequence = ()) -> Quasigroup:
    """Construct a named example table.

    Recognized: ``D7``, ``ledrappier p c0 c1``, ``quaternion``, ``cyclic n``,
    ``nonabelian21``, and ``product a b`` whose factors are Quasigroups or
    nested spec strings (see :func:`builtin_from_spec`).
    """
    ps = list(params)

    def want(k):
        if len(ps) != k:
            raise BadParams(f"{name} takes {k} parameter(s), got {len(ps)}")

    if name == "D7":
        want(0)
        return validate_latin(_D7_TABLE, _D7_SYMBOLS)
    if name == "ledrappier":
        want(3)
        return _ledrappier(*(int(v) for v in ps))
    if name == "quaternion":
        want(0)
        return _quaternion()
    if name == "cyclic":
        want(1)
        return _cyclic(int(ps[0]))
    if name == "nonabelian21":
        want(0)
        return _nonabelian21()
    if name == "product":
        want(2)
        factors = [f if isinstance(f, Quasigroup) else builtin_from_spec(str(f))
                   for f in ps]
        return product(*factors)
    raise UnknownName(name)


_SPEC_ARITY = {"D7": 0, "quaternion": 0, "nonabelian21": 0,
               "cyclic": 1, "ledrappier": 3}


def builtin_from_spec(text: str) -> Quasigroup:
    """Parse a builtin spec such as ``product cyclic 2 quaternion``.

    Tokens may be separated by whitespace or commas; ``product`` consumes two
    nested specs.
    """
    tokens = text.replace(",", " ").split()

    def parse(pos: int) -> tuple[Quasigroup, int]:
        if pos >= len(tokens):
            raise BadParams(f"truncated builtin spec {text!r}")
        tok = tokens[pos]
        if tok == "product":
            left, pos = parse(pos + 1)
            right, pos = parse(pos)
            return product(left, right), pos
        if tok in _SPEC_ARITY:
            k = _SPEC_ARITY[tok]
            args = tokens[pos + 1:pos + 1 + k]
            if len(args) != k:
                raise BadParams(f"{tok} needs {k} parameter(s) in {text!r}")
            return builtin(tok, args), pos + 1 + k
        raise UnknownName(tok)

    q, end = parse(0)
    if end != len(tokens):
        raise BadParams(f"trailing tokens in builtin spec {text!r}")
    return q


# ---------------------------------------------------------------------------
# table file format: line 1 = "N sym1 ... symN", then N rows of N symbol names

def parse_table(text: str) -> Quasigroup:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ParseError("empty table file")
    head = lines[0].split()
    try:
        n = int(head[0])
    except ValueError:
        raise ParseError(f"first token must be the order, got {head[0]!r}") from None
    symbols = head[1:]
    if len(symbols) != n:
        raise ParseError(f"header declares {n} symbols but lists {len(symbols)}")
    if len(set(symbols)) != n:
        raise ParseError("symbol names must be distinct")
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} table rows, got {len(lines) - 1}")
    where = {s: i for i, s in enumerate(symbols)}
    table = []
    for r, line in enumerate(lines[1:]):
        row = line.split()
        if len(row) != n:
            raise ParseError(f"row {r} has {len(row)} entries, expected {n}")
        for name in row:
            if name not in where:
                raise ParseError(f"row {r} uses unknown name {name!r}")
        table.append([where[name] for name in row])
    return validate_latin(table, symbols)


def format_table(q: Quasigroup) -> str:
    lines = [" ".join([str(q.order), *q.symbols])]
    for row in q.rows:
        lines.append(" ".join(q.symbols[v] for v in row))
    return "\n".join(lines) + "\n"


def load_table(path) -> Quasigroup:
    from pathlib import Path
    return parse_table(Path(path).read_text())
