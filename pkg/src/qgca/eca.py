"""Endomorphic cellular automata on product group shifts: affine
decomposition, kernel words and the induced alphabet permutation, invariant
subgroups, subgroup lattices, and the lemma audits that cross-check the
combinatorial and linear-algebra views of the kernel."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .automaton import LocalRule, is_bipermutative, make_rule
from .errors import (AlphabetMismatch, AperiodicKernelWord, BadParams,
                     NotBipermutative, NotEndomorphicCA, NotEndomorphism,
                     NotAffine, OrderTooLarge, TooLarge)
from .groups import GroupTable, elementary_abelian_group
from .matfp import (MatrixFp, Poly, RcfResult, Vec, char_roots,
                    invariant_subspaces, rcf)

INVARIANT_SUBGROUP_ORDER_BOUND = 64
DIRECT_QUADRUPLE_BOUND = 2 ** 20


# ---------------------------------------------------------------------------
# affine decomposition over abelian groups

@dataclass(frozen=True)
class AffineDecomposition:
    """phi(a, b) = phi0(a) + phi1(b) with both maps endomorphisms."""

    phi0: tuple[int, ...]
    phi1: tuple[int, ...]
    phi0_automorphism: bool
    phi1_automorphism: bool
    bipermutative: bool


def _check_alphabet(rule: LocalRule, g: GroupTable) -> None:
    if not rule.is_rnnca:
        raise NotBipermutative("rule is not nearest-neighbour")
    if rule.alphabet_size != g.order:
        raise AlphabetMismatch(rule.alphabet_size, g.order)


def decompose_affine(rule: LocalRule, g: GroupTable) -> AffineDecomposition:
    """Split a rule over an abelian group into its two endomorphism tables.

    phi0 is the action on the left neighbour (phi(. , e)) and phi1 on the
    right (phi(e, .)); the full table must factor through them, and each must
    respect the group operation.
    """
    _check_alphabet(rule, g)
    if not g.abelian:
        raise BadParams("affine decomposition needs an abelian group")
    t = rule.table.astype(np.int64)
    gt = g.table.astype(np.int64)
    e = g.identity
    phi0 = t[:, e]
    phi1 = t[e, :]
    expected = gt[phi0][:, phi1]
    bad = np.argwhere(t != expected)
    if bad.size:
        raise NotAffine(tuple(int(v) for v in bad[0]))
    for name, img in (("phi0", phi0), ("phi1", phi1)):
        lhs = img[gt]
        rhs = gt[img][:, img]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            raise NotEndomorphism(name, tuple(int(v) for v in bad[0]))
    auto0 = len(set(phi0.tolist())) == g.order
    auto1 = len(set(phi1.tolist())) == g.order
    biperm = is_bipermutative(rule)
    if biperm != (auto0 and auto1):  # pragma: no cover - mathematically forced
        raise NotEndomorphicCA(("bipermutativity", "automorphism", "mismatch", ""))
    return AffineDecomposition(tuple(int(v) for v in phi0),
                               tuple(int(v) for v in phi1),
                               auto0, auto1, biperm)


def affine_rho(g: GroupTable, dec: AffineDecomposition) -> tuple[int, ...]:
    """The kernel permutation predicted by the affine form: -phi1^{-1} . phi0."""
    if not (dec.phi0_automorphism and dec.phi1_automorphism):
        raise NotBipermutative("affine rho needs automorphism components")
    phi1_inv = [0] * g.order
    for a, img in enumerate(dec.phi1):
        phi1_inv[img] = a
    return tuple(g.inv(phi1_inv[dec.phi0[a]]) for a in range(g.order))


# ---------------------------------------------------------------------------
# kernel

def _verify_endomorphic(rule: LocalRule, g: GroupTable) -> None:
    """Check phi(a.a', b.b') = phi(a,b).phi(a',b') for all quadruples.

    The direct N^4 scan only runs when it fits the bound; otherwise the
    equivalent factored test is used: phi factors through phi(.,e) and
    phi(e,.), both are endomorphisms, and their images commute elementwise.
    Over a product group shift the two tests accept the same rules.
    """
    t = rule.table.astype(np.int64)
    gt = g.table.astype(np.int64)
    e = g.identity
    n = g.order
    if int(t[e, e]) != e:
        raise NotEndomorphicCA((e, e, e, e))
    phi0 = t[:, e]
    phi1 = t[e, :]
    bad = np.argwhere(t != gt[phi0][:, phi1])
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise NotEndomorphicCA((a, e, e, b))
    bad = np.argwhere(phi0[gt] != gt[phi0][:, phi0])
    if bad.size:
        a, a2 = (int(v) for v in bad[0])
        raise NotEndomorphicCA((a, a2, e, e))
    bad = np.argwhere(phi1[gt] != gt[phi1][:, phi1])
    if bad.size:
        b, b2 = (int(v) for v in bad[0])
        raise NotEndomorphicCA((e, e, b, b2))
    bad = np.argwhere(gt[phi0][:, phi1] != gt[phi1][:, phi0].T)
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise NotEndomorphicCA((e, a, b, e))
    if n ** 4 <= DIRECT_QUADRUPLE_BOUND:
        lhs = t[gt.reshape(n, n, 1, 1), gt.reshape(1, 1, n, n)]
        rhs = gt[t.reshape(n, 1, n, 1), t.reshape(1, n, 1, n)]
        bad = np.argwhere(lhs != rhs)
        if bad.size:  # pragma: no cover - factored test already accepted
            raise NotEndomorphicCA(tuple(int(v) for v in bad[0]))


@dataclass(frozen=True)
class KernelReport:
    """Kernel configurations of an endomorphic rule, one per alphabet symbol.

    zeta[a] is the period word of the unique kernel point with first symbol
    a; rho is the permutation with shift(zeta[a]) = zeta[rho(a)]; periods[a]
    is the length of zeta[a]'s cycle.
    """

    zeta: tuple[tuple[int, ...], ...]
    rho: tuple[int, ...]
    periods: tuple[int, ...]


def kernel(rule: LocalRule, g: GroupTable) -> KernelReport:
    """Solve phi(k_i, k_{i+1}) = e by right-cancellation from every start
    symbol; verifies the rule is an endomorphic CA first."""
    _check_alphabet(rule, g)
    if not is_bipermutative(rule):
        raise NotBipermutative("kernel needs a bipermutative rule")
    _verify_endomorphic(rule, g)
    n, e = g.order, g.identity
    t = rule.table
    rho = np.argmax(t == e, axis=1).tolist()
    if rho[e] != e:  # pragma: no cover - forced by phi(e,e) = e
        raise AperiodicKernelWord(e)

    zeta: list[tuple[int, ...] | None] = [None] * n
    periods = [0] * n
    visited = [False] * n
    for a in range(n):
        if visited[a]:
            continue
        cyc = [a]
        visited[a] = True
        x = rho[a]
        while x != a:
            if visited[x]:
                raise AperiodicKernelWord(a)
            visited[x] = True
            cyc.append(x)
            x = rho[x]
        length = len(cyc)
        doubled = cyc + cyc
        for i in range(length):
            if int(t[cyc[i], cyc[(i + 1) % length]]) != e:
                raise AperiodicKernelWord(a)  # pragma: no cover
        for off, b in enumerate(cyc):
            zeta[b] = tuple(doubled[off:off + length])
            periods[b] = length
    for a in range(n):
        za = zeta[a]
        if za[1:] + (za[0],) != zeta[rho[a]]:
            raise AperiodicKernelWord(a)  # pragma: no cover
    return KernelReport(tuple(zeta), tuple(rho), tuple(periods))


@dataclass(frozen=True)
class RhoOrbits:
    orbits: tuple[tuple[int, ...], ...]
    single_orbit: bool


def rho_orbits(rho, g: GroupTable) -> RhoOrbits:
    """Cycle decomposition of rho restricted to the non-identity symbols."""
    rho = tuple(int(v) for v in rho)
    n, e = g.order, g.identity
    if sorted(rho) != list(range(n)):
        raise BadParams("rho must be a permutation of the alphabet")
    if rho[e] != e:
        raise BadParams("rho must fix the identity")
    visited = [False] * n
    visited[e] = True
    orbits = []
    for a in range(n):
        if visited[a]:
            continue
        cyc = [a]
        visited[a] = True
        x = rho[a]
        while x != a:
            visited[x] = True
            cyc.append(x)
            x = rho[x]
        orbits.append(tuple(cyc))
    orbits.sort(key=lambda c: c[0])
    return RhoOrbits(tuple(orbits), len(orbits) == 1)


# ---------------------------------------------------------------------------
# subgroup lattices

def _sub_closure(g: GroupTable, rho, seed) -> frozenset[int]:
    members = set(seed)
    members.add(g.identity)
    changed = True
    while changed:
        changed = False
        mem = list(members)
        for a in mem:
            for v in (g.inv(a), rho[a]):
                if v not in members:
                    members.add(v)
                    changed = True
            row = g.rows[a]
            for b in mem:
                if row[b] not in members:
                    members.add(row[b])
                    changed = True
    return frozenset(members)


def invariant_subgroups(g: GroupTable, rho=None) -> list[tuple[int, ...]]:
    """All subgroups B with rho(B) = B, including the trivial ones.

    Seeds of size <= 2 are closed under the operation, inverses, and rho;
    the resulting family is then closed under pairwise union-closures.
    """
    n = g.order
    if n > INVARIANT_SUBGROUP_ORDER_BOUND:
        raise OrderTooLarge(n, INVARIANT_SUBGROUP_ORDER_BOUND)
    if rho is None:
        rho = tuple(range(n))
    else:
        rho = tuple(int(v) for v in rho)
        if sorted(rho) != list(range(n)) or rho[g.identity] != g.identity:
            raise BadParams("rho must be a permutation fixing the identity")
    family: set[frozenset[int]] = {frozenset({g.identity})}
    for a in range(n):
        family.add(_sub_closure(g, rho, (a,)))
        for b in range(a + 1, n):
            family.add(_sub_closure(g, rho, (a, b)))
    while True:
        additions = set()
        fam = list(family)
        for i, x in enumerate(fam):
            for y in fam[i + 1:]:
                if x <= y or y <= x:
                    continue
                u = _sub_closure(g, rho, x | y)
                if u not in family:
                    additions.add(u)
        if not additions:
            break
        family |= additions
    family.add(frozenset(range(n)))
    out = [tuple(sorted(s)) for s in family]
    out.sort(key=lambda s: (len(s), s))
    return out


def subgroups(g: GroupTable) -> list[tuple[int, ...]]:
    return invariant_subgroups(g, None)


def h_max(g: GroupTable) -> float:
    """log2 of the largest proper subgroup order."""
    best = max(len(s) for s in subgroups(g) if len(s) < g.order)
    return math.log2(best)


# ---------------------------------------------------------------------------
# linear view of rho on elementary abelian groups

def elementary_structure(g: GroupTable) -> tuple[int, int] | None:
    """(p, k) when g is elementary abelian of order p^k, else None."""
    if not g.abelian:
        return None
    n = g.order
    if n == 1:
        return None
    p = 2
    while n % p:
        p += 1
    k = 0
    rest = n
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1 or not _prime(p):
        return None
    for a in range(n):
        acc = a
        for _ in range(p - 1):
            acc = g.mul(acc, a)
        if acc != g.identity:
            return None
    return p, k


def _prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class LinearView:
    """Coordinates for an elementary abelian group plus rho as a matrix."""

    p: int
    k: int
    basis: tuple[int, ...]
    coords: dict[int, Vec]
    elements: dict[Vec, int]
    matrix: MatrixFp


def linear_view(g: GroupTable, rho) -> LinearView | None:
    """Express rho as a matrix over F_p when g is elementary abelian and rho
    is additive; None when either fails."""
    struct = elementary_structure(g)
    if struct is None:
        return None
    p, k = struct
    rho = tuple(int(v) for v in rho)
    gt = g.table.astype(np.int64)
    r = np.asarray(rho)
    if rho[g.identity] != g.identity:
        return None
    if not np.array_equal(r[gt], gt[r][:, r]):
        return None

    coords: dict[int, Vec] = {g.identity: (0,) * k}
    basis: list[int] = []
    for a in range(g.order):
        if a in coords:
            continue
        i = len(basis)
        basis.append(a)
        extended = dict(coords)
        for x, cx in coords.items():
            cur = x
            for t in range(1, p):
                cur = g.mul(cur, a)
                cv = list(cx)
                cv[i] = t
                extended[cur] = tuple(cv)
        coords = extended
        if len(coords) == g.order:
            break
    if len(basis) != k or len(coords) != g.order:
        return None
    cols = [coords[rho[b]] for b in basis]
    matrix = MatrixFp.from_rows(p, [[cols[j][i] for j in range(k)]
                                    for i in range(k)])
    elements = {v: a for a, v in coords.items()}
    for a in range(g.order):   # re-verify the matrix reproduces rho
        if matrix.vec(coords[a]) != coords[rho[a]]:
            return None  # pragma: no cover
    return LinearView(p, k, tuple(basis), coords, elements, matrix)


def subspace_to_subgroup(view: LinearView, basis_rows) -> tuple[int, ...]:
    """Element indices of the subgroup corresponding to a subspace basis."""
    p = view.p
    members = set()

    def walk(i: int, acc: Vec):
        if i == len(basis_rows):
            members.add(view.elements[acc])
            return
        row = basis_rows[i]
        cur = acc
        for t in range(p):
            walk(i + 1, cur)
            cur = tuple((x + y) % p for x, y in zip(cur, row))

    walk(0, (0,) * view.k)
    return tuple(sorted(members))


# ---------------------------------------------------------------------------
# rule builders for matrix examples

def affine_matrix_system(m0: MatrixFp, m1: MatrixFp | None = None
                         ) -> tuple[GroupTable, LocalRule]:
    """The product group (Z/p)^k with the rule phi(a, b) = M0 a + M1 b
    (M1 defaults to the identity)."""
    p, k = m0.p, m0.n
    if m1 is None:
        m1 = MatrixFp.identity(p, k)
    if (m1.p, m1.n) != (p, k):
        raise BadParams("component matrices must share modulus and size")
    g = elementary_abelian_group(p, k)
    n = g.order
    digits = np.empty((n, k), dtype=np.int64)
    v = np.arange(n)
    for pos in range(k - 1, -1, -1):
        digits[:, pos] = v % p
        v = v // p

    def images(mat: MatrixFp) -> np.ndarray:
        arr = np.asarray(mat.rows, dtype=np.int64)
        img_digits = digits @ arr.T % p
        out = np.zeros(n, dtype=np.int64)
        for pos in range(k):
            out = out * p + img_digits[:, pos]
        return out

    img0, img1 = images(m0), images(m1)
    gt = g.table.astype(np.int64)
    table = gt[img0][:, img1]
    return g, make_rule(n, 0, 1, table)


# ---------------------------------------------------------------------------
# lemma audits

@dataclass(frozen=True)
class LemmaAuditReport:
    """Both sides of the two claimed equivalences, computed independently.

    Kernel side: is the non-identity alphabet a single rho-orbit, and does a
    nontrivial proper rho-invariant subgroup exist?  Linear side (when rho is
    linear over an elementary abelian group): is the canonical form a single
    block, and does a nontrivial proper invariant subspace exist?
    """

    rho: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]
    single_orbit: bool
    subgroup_method: str
    has_invariant_subgroup: bool | None
    subgroup_witness: tuple[int, ...] | None
    kernel_lemma_verdict: str
    linear: bool
    invariant_factors: tuple[Poly, ...] | None
    simple: bool | None
    has_invariant_subspace: bool | None
    subspace_witness: tuple[Vec, ...] | None
    eigenvalues: tuple[int, ...] | None
    rcf_lemma_verdict: str | None


def lemma_audit(g: GroupTable, rule: LocalRule) -> LemmaAuditReport:
    """Audit the single-orbit and simple-form equivalences on one instance.

    Nothing is assumed: each side of each equivalence is computed by its own
    enumeration, and disagreements ship a witness.
    """
    kern = kernel(rule, g)
    orb = rho_orbits(kern.rho, g)
    view = linear_view(g, kern.rho)

    method = "unavailable"
    has_sub: bool | None = None
    witness: tuple[int, ...] | None = None
    if g.order <= INVARIANT_SUBGROUP_ORDER_BOUND:
        subs = invariant_subgroups(g, kern.rho)
        nontrivial = [s for s in subs if 1 < len(s) < g.order]
        has_sub = bool(nontrivial)
        witness = nontrivial[0] if nontrivial else None
        method = "enumeration"

    factors = simple = subspaces = sub_witness = eigen = rcf_verdict = None
    if view is not None:
        result: RcfResult = rcf(view.matrix)
        factors = result.invariant_factors
        simple = result.simple
        eigen = tuple(char_roots(view.matrix))
        try:
            spaces = invariant_subspaces(view.matrix)
        except TooLarge:
            spaces = None
        if spaces is not None:
            subspaces = bool(spaces)
            sub_witness = spaces[0] if spaces else None
            rcf_verdict = "AGREE" if simple == (not subspaces) else "DISAGREE"
            if has_sub is None:
                # subgroups of an elementary abelian group are subspaces
                has_sub = subspaces
                witness = (subspace_to_subgroup(view, sub_witness)
                           if sub_witness else None)
                method = "subspace"

    if has_sub is None:
        verdict = "UNDECIDED"
    else:
        verdict = "AGREE" if orb.single_orbit == (not has_sub) else "DISAGREE"

    return LemmaAuditReport(
        rho=kern.rho, orbits=orb.orbits, single_orbit=orb.single_orbit,
        subgroup_method=method, has_invariant_subgroup=has_sub,
        subgroup_witness=witness, kernel_lemma_verdict=verdict,
        linear=view is not None, invariant_factors=factors, simple=simple,
        has_invariant_subspace=subspaces, subspace_witness=sub_witness,
        eigenvalues=eigen, rcf_lemma_verdict=rcf_verdict)
