import itertools

import numpy as np
import pytest

from stronglie.gf import ext_field_gf
from stronglie.liering import (
    LieError,
    abelian,
    check_identity_I_on_ring,
    class3_rank2,
    extend_scalars,
    from_brackets,
    heisenberg,
    ideal_is_nilpotent_below,
    is_k_strong,
    is_n_engel,
    is_toastie,
    load_ring,
    lower_central_series,
    parse_ring,
    principal_ideal,
)


def test_jacobi_failure_reports_triple():
    with pytest.raises(LieError) as e:
        from_brackets(3, 3, {(0, 1): {0: 1}, (0, 2): {1: 1}})
    assert e.value.triple == (1, 2, 3)


def test_antisymmetry_failure():
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 1, 0] = 1
    with pytest.raises(LieError) as e:
        from stronglie.liering import liering_new

        liering_new(3, c)
    assert e.value.triple == (1, 2)


def test_ad_convention():
    h = heisenberg(5)
    x, y = h.basis(0), h.basis(1)
    assert h.bracket(x, y).tolist() == [0, 0, 1]
    assert (x @ h.ad(y) % 5).tolist() == h.bracket(x, y).tolist()


def test_principal_ideal_and_series():
    h = heisenberg(3)
    ideal = principal_ideal(h, h.basis(0))
    assert ideal.dim == 2
    assert ideal.contains(h.basis(2)) and not ideal.contains(h.basis(1))
    assert is_toastie(h, h.basis(0))
    c3 = class3_rank2(3)
    series = lower_central_series(c3, principal_ideal(c3, c3.basis(0)), 3)
    assert [s.dim for s in series][-1] == 0
    assert not ideal_is_nilpotent_below(c3, c3.basis(1), 2)


def test_heisenberg_oracles():
    h = heisenberg(3)
    assert is_k_strong(h, 2).holds
    r = check_identity_I_on_ring(h, 2)
    assert r.holds and r.exhaustive and r.checked == 729
    assert is_n_engel(h, 2).holds
    assert not is_n_engel(h, 1).holds


def test_class3():
    c3 = class3_rank2(3)
    strong2 = is_k_strong(c3, 2)
    assert not strong2.holds and strong2.witness is not None
    assert is_k_strong(c3, 3).holds
    assert is_n_engel(c3, 3).holds
    assert check_identity_I_on_ring(c3, 3).holds


def test_identity_by_explicit_brackets():
    # independent evaluation: [[[[v,x],x],y],y] vs [[[[v,y],y],x],x] over all x, y, v
    c3 = class3_rank2(3)
    br = c3.bracket
    basis = [c3.basis(i) for i in range(5)]
    rng = np.random.default_rng(1)
    for _ in range(200):
        x, y = rng.integers(0, 3, size=(2, 5))
        for v in basis:
            lhs = br(br(br(br(v, x), x), y), y)
            rhs = br(br(br(br(v, y), y), x), x)
            assert np.array_equal(lhs, rhs)


def test_identity_fails_on_non_engel_ring():
    # sl2-like ring over F_5: not 2-Engel, identity I with k=2 fails
    sl2 = from_brackets(5, 3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}})
    r = check_identity_I_on_ring(sl2, 2)
    assert not r.holds and r.witness is not None


def test_extend_scalars_matches_definition():
    h = heisenberg(3)
    f9 = ext_field_gf(3, 2, [1, 0, 1])
    big = extend_scalars(h, f9)
    assert big.dim == 6 and big.p == 3
    # [x (x) alpha, y (x) beta] = [x, y] (x) alpha*beta, slot-major coordinates
    for i, j in itertools.product(range(3), repeat=2):
        for s, t in itertools.product(range(2), repeat=2):
            u = big.basis(s * 3 + i)
            v = big.basis(t * 3 + j)
            alpha = np.eye(2, dtype=np.int64)[s]
            beta = np.eye(2, dtype=np.int64)[t]
            ab = f9.multiply(alpha, beta)
            want = np.concatenate([ab[q] * h.bracket(h.basis(i), h.basis(j)) for q in range(2)]) % 3
            assert np.array_equal(big.bracket(u, v), want)
    assert is_k_strong(big, 2).holds


def test_sampling_is_seeded():
    a = abelian(3, 13)
    r1 = is_k_strong(a, 1, seed=7, samples=50)
    r2 = is_k_strong(a, 1, seed=7, samples=50)
    assert not r1.exhaustive and r1.seed == 7
    assert r1.to_json() == r2.to_json()
    assert check_identity_I_on_ring(a, 2, seed=3, samples=50).holds


def test_ring_files():
    h = load_ring("heisenberg")
    assert h.p == 3 and h.dim == 3
    c5 = load_ring("class3", 5)
    assert c5.p == 5 and np.array_equal(c5.constants, class3_rank2(5).constants)
    assert load_ring("abelian").is_abelian()
    again = parse_ring(h.format())
    assert np.array_equal(again.constants, h.constants)
    with pytest.raises(LieError):
        load_ring("nonexistent")
    with pytest.raises(LieError, match="line 2"):
        parse_ring("p=3 dim=2\nx,q -> 1*e1\n")
    with pytest.raises(LieError, match="line 1"):
        parse_ring("dim=2\n")
