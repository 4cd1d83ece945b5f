import pytest

from qgca import matfp as mf
from qgca.errors import BadParams, ParseError, TooLarge

from oracles import snf_invariant_factors

M7 = mf.MatrixFp.from_rows(7, [[0, 0, 0, 1],
                               [1, 0, 0, 1],
                               [0, 1, 0, 1],
                               [0, 0, 1, 1]])


def random_matrix(p, n, rng):
    return mf.MatrixFp.from_rows(p, [[rng.randrange(p) for _ in range(n)]
                                     for _ in range(n)])


# ---------------------------------------------------------------------------
# polynomials

def test_poly_divmod_contract(rng):
    for p in (2, 3, 7):
        for _ in range(30):
            f = mf.p_norm([rng.randrange(p) for _ in range(rng.randrange(1, 7))], p)
            g = mf.p_norm([rng.randrange(p) for _ in range(rng.randrange(1, 5))], p)
            if not g:
                continue
            q, r = mf.p_divmod(f, g, p)
            assert mf.p_add(mf.p_mul(q, g, p), r, p) == f
            assert mf.p_deg(r) < mf.p_deg(g)


def test_poly_gcd_lcm_contract(rng):
    p = 5
    for _ in range(30):
        f = mf.p_norm([rng.randrange(p) for _ in range(rng.randrange(1, 6))], p)
        g = mf.p_norm([rng.randrange(p) for _ in range(rng.randrange(1, 6))], p)
        if not f or not g:
            continue
        d = mf.p_gcd(f, g, p)
        assert mf.p_divmod(f, d, p)[1] == ()
        assert mf.p_divmod(g, d, p)[1] == ()
        l = mf.p_lcm(f, g, p)
        assert mf.p_divmod(l, f, p)[1] == ()
        assert mf.p_divmod(l, g, p)[1] == ()


def test_coprime_lcm_split(rng):
    p = 3
    for _ in range(40):
        f = mf.p_monic(mf.p_norm(
            [rng.randrange(p) for _ in range(rng.randrange(2, 7))], p), p)
        g = mf.p_monic(mf.p_norm(
            [rng.randrange(p) for _ in range(rng.randrange(2, 7))], p), p)
        if mf.p_deg(f) < 1 or mf.p_deg(g) < 1:
            continue
        F, G = mf.coprime_lcm_split(f, g, p)
        assert mf.p_divmod(f, F, p)[1] == ()
        assert mf.p_divmod(g, G, p)[1] == ()
        assert mf.p_deg(mf.p_gcd(F, G, p)) == 0
        assert mf.p_mul(F, G, p) == mf.p_lcm(f, g, p)


def test_p_str():
    assert mf.p_str((6, 6, 6, 6, 1)) == "x^4 + 6x^3 + 6x^2 + 6x + 6"
    assert mf.p_str((1, 1)) == "x + 1"
    assert mf.p_str(()) == "0"


# ---------------------------------------------------------------------------
# characteristic and minimal polynomials

def test_char_poly_identity_f2():
    ident = mf.MatrixFp.identity(2, 2)
    assert mf.char_poly(ident) == (1, 0, 1)          # (x+1)^2 over F2
    assert mf.min_poly(ident) == (1, 1)              # x + 1


def test_companion_char_equals_min():
    for p, f in ((2, (1, 1, 1)), (7, (4, 2, 0, 1)), (3, (2, 0, 1, 1))):
        c = mf.companion_matrix(f, p)
        assert mf.char_poly(c) == mf.p_monic(f, p)
        assert mf.min_poly(c) == mf.p_monic(f, p)
        assert mf.rcf(c).simple


def test_m7_char_min_frozen():
    assert mf.char_poly(M7) == (6, 6, 6, 6, 1)
    assert mf.min_poly(M7) == (6, 6, 6, 6, 1)
    assert mf.char_poly(M7.neg()) == (6, 1, 6, 1, 1)


def test_char_roots_frozen():
    assert mf.char_roots(M7) == [5]
    assert mf.char_roots(M7.neg()) == [2]


def test_min_poly_annihilates_and_divides(rng):
    for p in (2, 3, 5):
        for n in (2, 3, 4):
            m = random_matrix(p, n, rng)
            f = mf.min_poly(m)
            c = mf.char_poly(m)
            assert mf.p_divmod(c, f, p)[1] == ()
            for i in range(n):
                e = tuple(1 if j == i else 0 for j in range(n))
                assert mf.poly_apply_vec(f, m.vec, e, p) == (0,) * n


def test_char_poly_against_snf_product(rng):
    for p in (2, 3, 5, 7):
        for n in (2, 3, 4, 5):
            m = random_matrix(p, n, rng)
            prod = (1,)
            for f in snf_invariant_factors(m):
                prod = mf.p_mul(prod, f, p)
            assert prod == mf.char_poly(m)


# ---------------------------------------------------------------------------
# rational canonical form

def test_rcf_identity_f2():
    result = mf.rcf(mf.MatrixFp.identity(2, 2))
    assert result.invariant_factors == ((1, 1), (1, 1))
    assert not result.simple


def test_rcf_m7_simple():
    for m in (M7, M7.neg()):
        result = mf.rcf(m)
        assert result.simple
        assert result.invariant_factors == (mf.char_poly(m),)


def test_rcf_matches_snf_oracle(rng):
    for p in (2, 3, 5, 7):
        for n in (2, 3, 4, 5, 6):
            for _ in range(4):
                m = random_matrix(p, n, rng)
                assert mf.rcf(m).invariant_factors == snf_invariant_factors(m)


def test_rcf_divisibility_and_min(rng):
    for _ in range(10):
        m = random_matrix(3, 5, rng)
        factors = mf.rcf(m).invariant_factors
        for a, b in zip(factors, factors[1:]):
            assert mf.p_divmod(b, a, 3)[1] == ()
        assert factors[-1] == mf.min_poly(m)


# ---------------------------------------------------------------------------
# invariant subspaces

def test_irreducible_companion_has_no_invariant_subspaces():
    c = mf.companion_matrix((1, 1, 1), 2)            # x^2 + x + 1, irreducible
    assert mf.invariant_subspaces(c) == []
    assert mf.invariant_subspaces_exhaustive(c) == []


def test_identity_f2_has_three_lines():
    ident = mf.MatrixFp.identity(2, 2)
    main = mf.invariant_subspaces(ident)
    assert len(main) == 3
    assert all(len(b) == 1 for b in main)
    assert main == mf.invariant_subspaces_exhaustive(ident)


def test_m7neg_invariant_subspaces_frozen():
    spaces = mf.invariant_subspaces(M7.neg())
    assert [len(b) for b in spaces] == [1, 3]
    line = spaces[0]
    assert mf.in_span(line, (1, 4, 6, 5), 7)         # the eigenvector of 2
    assert spaces == mf.invariant_subspaces_exhaustive(M7.neg())


def test_invariant_subspaces_strategies_agree(rng):
    for p, n in ((2, 3), (2, 4), (3, 3), (5, 2)):
        for _ in range(4):
            m = random_matrix(p, n, rng)
            assert mf.invariant_subspaces(m) == \
                mf.invariant_subspaces_exhaustive(m)


def test_invariant_subspaces_are_invariant(rng):
    m = random_matrix(3, 4, rng)
    for basis in mf.invariant_subspaces(m):
        for row in basis:
            assert mf.in_span(basis, m.vec(row), 3)


def test_invariant_subspaces_bound():
    with pytest.raises(TooLarge):
        mf.invariant_subspaces(mf.MatrixFp.identity(2, 21))


# ---------------------------------------------------------------------------
# files and construction

def test_matrix_from_rows_requires_prime():
    with pytest.raises(BadParams):
        mf.MatrixFp.from_rows(6, [[1]])


def test_matrix_file_roundtrip():
    text = mf.format_matrix(M7)
    again = mf.parse_matrix(text)
    assert again == M7
    assert mf.format_matrix(again) == text


def test_matrix_file_errors():
    with pytest.raises(ParseError):
        mf.parse_matrix("7\n")
    with pytest.raises(ParseError):
        mf.parse_matrix("7 2\n1 2\n")
    with pytest.raises(ParseError):
        mf.parse_matrix("7 1\n1 2\n")
