import json

import pytest

from stronglie.conjecture import (
    check_variant_I,
    check_variant_II,
    orbit_representatives,
    search_variant_III,
    sign_of,
    variant_I_identity,
)
from stronglie.freealg import parse_poly, word_str
from stronglie.nilquot import verify_certificate
from stronglie.relations import paper_relation_set


def test_orbit_counts():
    assert [len(orbit_representatives(n)) for n in (1, 2, 3, 4)] == [1, 3, 10, 35]
    assert word_str(orbit_representatives(3)[0]) == "a^3*b^3"


def test_sign():
    assert sign_of(4, 5) == 4 and sign_of(3, 5) == 1 and sign_of(4, 2) == 1
    assert variant_I_identity(4, 3) == parse_poly("a^3*b^3 + b^3*a^3", 3)
    assert variant_I_identity(4, 2) == parse_poly("a^3*b^3 + b^3*a^3", 2)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_k3_variant_ii(p):
    rep = check_variant_II(3, p)
    assert rep.holds
    assert [r.monomial for r in rep.results] == ["a^2*b^2", "a*b*a*b", "a*b^2*a"]


def test_certificates_verify():
    p = 7
    rs = paper_relation_set(4, p, "all")
    rep = check_variant_II(4, p, certificates=True)
    for r in rep.results:
        assert r.member and r.certificate is not None
        ident = parse_poly(r.identity, p)
        assert verify_certificate(r.certificate, ident, rs)


def test_k4_short_char2_fails_everywhere():
    rep = check_variant_II(4, 2, "short")
    assert not rep.holds
    assert rep.checks == {"implies_variant_I": True, "variant_I": False}
    assert rep.char2_sign_collapse and rep.proviso


def test_k5_reduces_to_zero():
    rep = check_variant_II(5, 7)
    assert len(rep.results) == 35
    assert all(r.reduces_to_zero for r in rep.results)
    assert not rep.proviso


def test_report_json_is_deterministic():
    a = check_variant_II(4, 3).to_json(include_timings=False)
    b = check_variant_II(4, 3, jobs=3).to_json(include_timings=False)
    assert json.dumps(a) == json.dumps(b)
    assert a["version"] == 1 and a["holds"] and a["sign"] == 2
    assert "timings" not in a
    assert "timings" in check_variant_I(4, 3).to_json()


def test_relation_field_mismatch():
    with pytest.raises(ValueError):
        check_variant_I(4, 3, relations=paper_relation_set(4, 5))


def test_variant_iii_two_generators():
    res = search_variant_III(parse_poly("a^3*b^3", 3), [1, 0], 4, 3)
    assert res.alpha == 2 and res.dependent
    res = search_variant_III(parse_poly("a^3*b^3", 2), [1, 0], 4, 2, paper_relation_set(4, 2, "short"))
    assert res.alpha is None and not res.dependent
    res = search_variant_III(parse_poly("a^4*b^4", 5), [1, 0], 5, 5)
    assert res.degenerate and res.alpha is None


def test_variant_iii_three_generators():
    res = search_variant_III(parse_poly("a*b*c1", 3), [1, 0, 2], 2, 3)
    assert res.alpha == 2
    assert res.to_json()["experimental"] is True


def test_variant_iii_bad_pattern():
    with pytest.raises(ValueError):
        search_variant_III(parse_poly("a^2*b^3", 3), [1, 0], 4, 3)
    with pytest.raises(ValueError):
        search_variant_III(parse_poly("a^3*b^3", 3), [1, 0], 4, 5)
