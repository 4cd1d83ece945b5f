"""Cellular-automaton rules on finite one-sided words.

Everything here runs on finite words: a length-n word determines images of
the local map down to length 1, which is all the constructions need.  The
nearest-neighbour case (left radius 0, right radius 1) is the workhorse;
general rules exist mainly to be recoded down to it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import (NotBipermutative, ParseError, PeriodTooLarge,
                     TableTooLarge, WordTooShort)
from .quasigroup import Quasigroup, validate_latin

RULE_TABLE_BOUND = 2 ** 24
PERIODIC_STATE_BOUND = 2 ** 20
_SMALL_ALPHABET = 512


@dataclass(frozen=True, eq=False)
class LocalRule:
    """Dense lookup table for a local map on ``left_radius + right_radius + 1``
    neighbours over an alphabet of indices 0..N-1."""

    alphabet_size: int
    left_radius: int
    right_radius: int
    table: np.ndarray  # shape (N,) * arity, read-only

    @property
    def arity(self) -> int:
        return self.left_radius + self.right_radius + 1

    @property
    def is_rnnca(self) -> bool:
        return self.left_radius == 0 and self.right_radius == 1

    def apply(self, *neighbourhood: int) -> int:
        return int(self.table[neighbourhood])

    @cached_property
    def _pair_rows(self) -> tuple[tuple[int, ...], ...] | None:
        # fast python-int lookup for nearest-neighbour rules on small alphabets
        if self.arity == 2 and self.alphabet_size <= _SMALL_ALPHABET:
            return tuple(tuple(r) for r in self.table.tolist())
        return None

    @cached_property
    def _solve_rows(self) -> np.ndarray:
        """right_solve[a, v] = the b with table[a, b] = v (bipermutative only)."""
        if not self.is_rnnca or not is_right_permutative(self):
            raise NotBipermutative("rule has no right-cancellation table")
        return np.argsort(self.table, axis=1)

    @cached_property
    def _solve_rows_small(self) -> tuple[tuple[int, ...], ...] | None:
        if self.alphabet_size <= _SMALL_ALPHABET:
            return tuple(tuple(r) for r in self._solve_rows.tolist())
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalRule):
            return NotImplemented
        return (self.alphabet_size == other.alphabet_size
                and self.left_radius == other.left_radius
                and self.right_radius == other.right_radius
                and np.array_equal(self.table, other.table))

    def __repr__(self) -> str:
        return (f"LocalRule(N={self.alphabet_size}, l={self.left_radius}, "
                f"r={self.right_radius})")


def make_rule(alphabet_size: int, left_radius: int, right_radius: int,
              table) -> LocalRule:
    n, arity = alphabet_size, left_radius + right_radius + 1
    if n ** arity > RULE_TABLE_BOUND:
        raise TableTooLarge(n ** arity, RULE_TABLE_BOUND)
    arr = np.ascontiguousarray(table, dtype=np.int32).reshape((n,) * arity)
    if arr.min() < 0 or arr.max() >= n:
        raise ParseError("rule table entries must lie in 0..N-1")
    arr.flags.writeable = False
    return LocalRule(n, left_radius, right_radius, arr)


def from_quasigroup(q: Quasigroup) -> LocalRule:
    """Nearest-neighbour rule phi(a, b) = a * b."""
    return make_rule(q.order, 0, 1, q.table)


def rule_quasigroup(rule: LocalRule,
                    symbols: Sequence[str] | None = None) -> Quasigroup:
    """View a bipermutative nearest-neighbour rule as its quasigroup table."""
    if not rule.is_rnnca:
        raise NotBipermutative("only nearest-neighbour rules have a table view")
    return validate_latin(rule.table, symbols)


def is_left_permutative(rule: LocalRule) -> bool:
    """True when the leftmost coordinate acts bijectively for every fixed rest."""
    n = rule.alphabet_size
    flat = rule.table.reshape(n, -1)
    return bool((np.sort(flat, axis=0) == np.arange(n)[:, None]).all())


def is_right_permutative(rule: LocalRule) -> bool:
    """True when the rightmost coordinate acts bijectively for every fixed rest."""
    n = rule.alphabet_size
    flat = rule.table.reshape(-1, n)
    return bool((np.sort(flat, axis=1) == np.arange(n)[None, :]).all())


def is_bipermutative(rule: LocalRule) -> bool:
    return is_left_permutative(rule) and is_right_permutative(rule)


def _require_bipermutative(rule: LocalRule) -> None:
    if not rule.is_rnnca:
        raise NotBipermutative("rule is not nearest-neighbour")
    if not is_bipermutative(rule):
        raise NotBipermutative("rule is not bipermutative")


def step(rule: LocalRule, word: Sequence[int]) -> tuple[int, ...]:
    """One application of the rule; the word shrinks by arity - 1."""
    w = tuple(word)
    m = rule.arity - 1
    if len(w) < m + 1:
        raise WordTooShort(len(w), m + 1)
    rows = rule._pair_rows
    if rows is not None:
        return tuple(rows[w[i]][w[i + 1]] for i in range(len(w) - 1))
    t = rule.table
    return tuple(int(t[w[i:i + m + 1]]) for i in range(len(w) - m))


def step_periodic(rule: LocalRule, word: Sequence[int]) -> tuple[int, ...]:
    """Step a periodic point given by one period; the period length is kept."""
    w = tuple(word)
    if not w:
        raise WordTooShort(0, 1)
    m = rule.arity - 1
    ext = w + w * ((m + len(w) - 1) // len(w))
    t = rule.table
    return tuple(int(t[ext[i:i + m + 1]]) for i in range(len(w)))


def orbit_period(rule: LocalRule, word: Sequence[int]) -> tuple[int, int]:
    """(preperiod, period) of the rule acting on the periodic point word^inf."""
    w = tuple(word)
    if not w:
        raise WordTooShort(0, 1)
    n = rule.alphabet_size
    if n ** len(w) > PERIODIC_STATE_BOUND:
        raise PeriodTooLarge(n, len(w), PERIODIC_STATE_BOUND)
    seen: dict[tuple[int, ...], int] = {}
    cur, t = w, 0
    while cur not in seen:
        seen[cur] = t
        cur = step_periodic(rule, cur)
        t += 1
    first = seen[cur]
    return first, t - first


def fiber_preimages(rule: LocalRule, word: Sequence[int]) -> list[tuple[int, ...]]:
    """The N preimages of ``word`` under one step, indexed by first symbol.

    Preimage b is rebuilt by right-cancellation: x0 = b and x_{i+1} is the
    unique symbol with phi(x_i, x_{i+1}) = word_i.
    """
    _require_bipermutative(rule)
    w = tuple(word)
    solve = rule._solve_rows_small
    out = []
    if solve is not None:
        for b in range(rule.alphabet_size):
            x = [b]
            for v in w:
                x.append(solve[x[-1]][v])
            out.append(tuple(x))
    else:
        arr = rule._solve_rows
        for b in range(rule.alphabet_size):
            x = [b]
            for v in w:
                x.append(int(arr[x[-1], v]))
            out.append(tuple(x))
    return out


def tau(rule: LocalRule, word: Sequence[int]) -> tuple[int, ...]:
    """The fiber companion whose first symbol is incremented mod N.

    The identification of the alphabet with Z/N is fixed to table index
    order, so tau cycles each fiber in index order.
    """
    w = tuple(word)
    if len(w) < 2:
        raise WordTooShort(len(w), 2)
    _require_bipermutative(rule)
    image = step(rule, w)
    b = (w[0] + 1) % rule.alphabet_size
    return fiber_preimages(rule, image)[b]


def xi(rule: LocalRule, word: Sequence[int]) -> tuple[int, ...]:
    """Trajectory-of-first-symbols map: output t is (step^t word)[0]."""
    if not rule.is_rnnca:
        raise NotBipermutative("rule is not nearest-neighbour")
    cur = tuple(word)
    out = []
    while cur:
        out.append(cur[0])
        cur = step(rule, cur) if len(cur) > 1 else ()
    return tuple(out)


def xi_inverse(rule: LocalRule, word: Sequence[int]) -> tuple[int, ...]:
    """The unique preimage of ``word`` under :func:`xi`.

    Column t of the space-time triangle is recovered from column t-1 by
    right-cancellation, left to right.
    """
    _require_bipermutative(rule)
    b = tuple(word)
    n = len(b)
    if n == 0:
        return ()
    small = rule._solve_rows_small
    if small is not None:
        solve = lambda a, v: small[a][v]
    else:
        arr = rule._solve_rows
        solve = lambda a, v: int(arr[a, v])
    col = list(b)                 # col[t] = (step^t a)[j] for current column j
    out = [col[0]]
    for _ in range(n - 1):
        col = [solve(col[t], col[t + 1]) for t in range(len(col) - 1)]
        out.append(col[0])
    return tuple(out)


def dual_rule(rule: LocalRule) -> LocalRule:
    """Nearest-neighbour rule of the dual operation a ^ b (solve a * c = b)."""
    _require_bipermutative(rule)
    return make_rule(rule.alphabet_size, 0, 1, rule._solve_rows)


# ---------------------------------------------------------------------------
# block recoding to a nearest-neighbour rule

def _pack(base: int, block_word: Sequence[int]) -> int:
    v = 0
    for s in block_word:
        v = v * base + s
    return v


def _unpack(base: int, block: int, value: int) -> tuple[int, ...]:
    out = []
    for _ in range(block):
        value, r = divmod(value, base)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True, eq=False)
class BlockRecoding:
    """Nearest-neighbour recoding of a wider rule over blocks of ``block``
    symbols; ``encode . step == step_gamma . encode`` exactly on words."""

    rule: LocalRule            # the recoded RNNCA over alphabet N**block
    block: int
    base_alphabet: int

    def pack(self, block_word: Sequence[int]) -> int:
        return _pack(self.base_alphabet, block_word)

    def unpack(self, value: int) -> tuple[int, ...]:
        return _unpack(self.base_alphabet, self.block, value)

    def encode(self, word: Sequence[int]) -> tuple[int, ...]:
        w = tuple(word)
        m = self.block
        return tuple(self.pack(w[i:i + m]) for i in range(0, len(w) - m + 1, m))

    def decode(self, word: Sequence[int]) -> tuple[int, ...]:
        out: list[int] = []
        for v in word:
            out.extend(self.unpack(v))
        return tuple(out)


def recode_block(rule: LocalRule) -> BlockRecoding:
    """Recode a rule with ``left_radius + right_radius >= 1`` to a
    nearest-neighbour rule over non-overlapping blocks.

    For blocks u, v, the recoded local map is the full step of the rule on
    the concatenated word u + v, which is again one block.  Bipermutativity
    transfers in both directions.
    """
    m = rule.left_radius + rule.right_radius
    if m < 1:
        raise ParseError("recode needs left_radius + right_radius >= 1")
    n = rule.alphabet_size
    if m == 1 and rule.is_rnnca:
        return BlockRecoding(rule, 1, n)
    big = n ** m
    if big * big > RULE_TABLE_BOUND:
        raise TableTooLarge(big * big, RULE_TABLE_BOUND)
    table = np.empty((big, big), dtype=np.int32)
    blocks = [_unpack(n, m, v) for v in range(big)]
    for u in range(big):
        for v in range(big):
            table[u, v] = _pack(n, step(rule, blocks[u] + blocks[v]))
    gamma = make_rule(big, 0, 1, table)
    return BlockRecoding(gamma, m, n)


# ---------------------------------------------------------------------------
# rule file format
#
# Either a single line "quasigroup <path>" (table file, resolved relative to
# the rule file) or: line 1 = "N l r", then one line per neighbourhood,
# "t_1 ... t_arity out", all as indices, in any order, each exactly once.

def parse_rule(text: str, resolve: Callable[[str], Quasigroup] | None = None
               ) -> LocalRule:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ParseError("empty rule file")
    head = lines[0].split()
    if head[0] == "quasigroup":
        if len(head) != 2:
            raise ParseError("quasigroup line takes one path")
        if resolve is None:
            raise ParseError("no table resolver supplied for quasigroup rule")
        return from_quasigroup(resolve(head[1]))
    if len(head) != 3:
        raise ParseError('rule header must be "N l r"')
    try:
        n, l, r = (int(v) for v in head)
    except ValueError:
        raise ParseError('rule header must be "N l r" with integers') from None
    if n < 1 or l < 0 or r < 0:
        raise ParseError("need N >= 1, l >= 0, r >= 0")
    arity = l + r + 1
    if n ** arity > RULE_TABLE_BOUND:
        raise TableTooLarge(n ** arity, RULE_TABLE_BOUND)
    table = np.full((n,) * arity, -1, dtype=np.int64)
    if len(lines) != 1 + n ** arity:
        raise ParseError(f"expected {n ** arity} neighbourhood lines, "
                         f"got {len(lines) - 1}")
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != arity + 1:
            raise ParseError(f"bad neighbourhood line {line!r}")
        try:
            vals = [int(v) for v in parts]
        except ValueError:
            raise ParseError(f"bad neighbourhood line {line!r}") from None
        nbhd, out = tuple(vals[:arity]), vals[arity]
        if not all(0 <= v < n for v in nbhd) or not 0 <= out < n:
            raise ParseError(f"indices out of range in {line!r}")
        if table[nbhd] != -1:
            raise ParseError(f"duplicate neighbourhood {nbhd}")
        table[nbhd] = out
    return make_rule(n, l, r, table)


def format_rule(rule: LocalRule) -> str:
    n = rule.alphabet_size
    lines = [f"{n} {rule.left_radius} {rule.right_radius}"]
    flat = rule.table.reshape(-1)
    arity = rule.arity
    for i, out in enumerate(flat.tolist()):
        nbhd = []
        v = i
        for _ in range(arity):
            v, r = divmod(v, n)
            nbhd.append(r)
        nbhd.reverse()
        lines.append(" ".join(str(x) for x in (*nbhd, out)))
    return "\n".join(lines) + "\n"


def load_rule(path) -> LocalRule:
    from pathlib import Path
    from .quasigroup import load_table
    p = Path(path)
    return parse_rule(p.read_text(),
                      resolve=lambda rel: load_table(p.parent / rel))
