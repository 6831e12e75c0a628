import json

import pytest

from totient_strata import InvalidInput, LimitExceeded, RunConfig
from totient_strata.dickson import (
    DicksonWitness,
    admissible_check,
    construct_totient,
    forms,
    search_tuple,
    witness_json,
)
from totient_strata.invphi import inverse_phi
from totient_strata.sieve import v2

from . import oracles


def test_forms():
    assert forms(1) == ([30], [30])
    assert forms(2) == ([150, 90], [90, 150])
    assert forms(3) == ([750, 450, 270], [270, 450, 750])
    with pytest.raises(InvalidInput):
        forms(0)
    with pytest.raises(LimitExceeded):
        forms(15)


def test_form_products_share_totient():
    for k in range(1, 8):
        f, g = forms(k)
        assert len({a * b for a, b in zip(f, g)}) == 1
        assert f[0] * g[0] == 4 * 15 ** (k + 1)


def test_admissible():
    assert admissible_check(forms(2)[0])
    assert admissible_check(forms(5)[1])
    assert not admissible_check([1])
    assert all(admissible_check(f + g) for k in range(1, 13) for f, g in [forms(k)])
    with pytest.raises(InvalidInput):
        admissible_check([])


def _brute_admissible(coeffs):
    for p in range(2, len(coeffs) + 2):
        if not oracles.is_prime(p):
            continue
        if all(any((1 + c * (2 * t + 1)) % p == 0 for c in coeffs) for t in range(p)):
            return False
    return True


@pytest.mark.parametrize("coeffs", [[1], [2], [1, 2], [3, 6], [2, 4, 6], [6, 12, 18, 30], [1, 3, 5, 7, 9]])
def test_admissible_brute(coeffs):
    assert admissible_check(coeffs) == _brute_admissible(coeffs)


def _brute_search(k, bound):
    f, g = forms(k)
    for n in range(bound + 1):
        p = [1 + c * (2 * n + 1) for c in f]
        if all(oracles.is_prime(v) for v in p):
            break
    else:
        return None
    for m in range(bound + 1):
        q = [1 + c * (2 * m + 1) for c in g]
        if all(oracles.is_prime(v) for v in q) and all(a != b for a, b in zip(p, q)) \
                and len({a * b for a, b in zip(p, q)}) == k:
            return n, m
    return None


def test_search_examples():
    w = search_tuple(1, 10)
    assert w.n == 0 and w.p == (31,)
    assert w.q != w.p
    w = search_tuple(2, 100)
    assert w.n == 3 and w.p == (1051, 631)
    assert search_tuple(2, 0) is None
    assert search_tuple(2, -1) is None


@pytest.mark.parametrize("k", [1, 2, 3])
def test_search_matches_brute(k):
    w = search_tuple(k, 200)
    assert (w.n, w.m) == _brute_search(k, 200)


def test_witness_invariants():
    w = search_tuple(2, 100)
    w.check()
    assert w.totient == 4 * 27 * 125 * 7 * 13 == 1228500
    assert v2(w.totient) == 2
    assert all(oracles.phi(x) == w.totient for x in w.products)
    bad = DicksonWitness(w.k, w.n, w.m, w.p, (w.q[0], w.q[0]), w.totient)
    with pytest.raises(AssertionError):
        bad.check()


def test_construct_totient():
    w = search_tuple(2, 100)
    ver = construct_totient(w)
    assert ver.totient == 1228500 and ver.verified
    assert ver.multiplicity == inverse_phi(1228500).multiplicity >= 2
    w3 = search_tuple(3, 10**6)
    v3 = construct_totient(w3)
    assert v3.multiplicity >= 3 and v2(v3.totient) == 2


def test_square_product_is_not_a_preimage():
    # f_1(0) = g_1(0) = 31, but phi(31^2) = 930, not 900
    assert oracles.phi(31 * 31) == 930
    assert 961 not in inverse_phi(900)


def test_verification_out_of_range():
    w = search_tuple(2, 100)
    ver = construct_totient(w, RunConfig(invphi_limit=1000))
    assert ver.multiplicity is None and not ver.verified
    assert json.loads(witness_json(w, ver))["verified_multiplicity"] is None


def test_json_round_trip():
    w = search_tuple(3, 10**6)
    d = json.loads(witness_json(w))
    assert DicksonWitness.from_dict(d) == w
    big = DicksonWitness(1, 0, 0, (2**60,), (3,), 2**60)
    assert big.to_dict()["p"] == [str(2**60)]
    assert DicksonWitness.from_dict(json.loads(json.dumps(big.to_dict()))) == big
