import json

import pytest

from sqwalk import BondState, GraphTopology, build_diamond_with_leads, build_line, from_spec, partner, to_spec
from sqwalk.errors import SpecParseError, TopologyError
from sqwalk.specfile import load, shipped


def assert_reciprocal(g: GraphTopology):
    for j in range(g.num_sites):
        own, nbrs, inc = g.own_labels(j), g.neighbors(j), g.incoming_labels(j)
        assert len(own) == len(nbrs) == len(inc) == g.valence[j]
        assert len(set(own)) == len(own)
        for sigma, jp, sigma_p in zip(own, nbrs, inc):
            back = g.neighbors(jp).index(j)
            assert g.own_labels(jp)[back] == sigma_p
            assert g.incoming_labels(jp)[back] == sigma


def test_line_two_sites():
    g = build_line(2)
    assert g.num_bonds == 1
    assert len(g.states()) == 2


def test_line_seven_sites_reciprocal():
    g = build_line(7)
    assert g.num_sites == 7
    assert_reciprocal(g)


def test_line_window_of_point_interactions():
    m = 4
    g = build_line(2 * m + 1)
    assert g.num_sites == 2 * m + 1 and g.num_bonds == 2 * m


def test_line_partner_convention():
    g = build_line(6)
    for j in range(1, 4):
        assert g.partner(g.state(j + 1, "+1")) == g.state(j, "-1")


def test_line_rejects_tiny():
    with pytest.raises(TopologyError):
        build_line(1)


def test_diamond_counts(diamond):
    assert diamond.num_sites == 8
    assert diamond.num_bonds == 8
    k = {name: diamond.valence[diamond.site_id(name)] for name in "ABCD"}
    assert k == {"A": 3, "B": 2, "C": 2, "D": 3}
    assert_reciprocal(diamond)


def test_diamond_partner_a_b(diamond):
    into_b = diamond.state("B", "+")
    assert diamond.partner(into_b) == diamond.state("A", "+")
    assert diamond.site_id("A") == 0


def test_diamond_longer_leads():
    g = build_diamond_with_leads(3, 2)
    assert g.num_sites == 4 + 2 + 3 + 2
    assert_reciprocal(g)
    with pytest.raises(TopologyError):
        build_diamond_with_leads(0, 1)


def test_partner_involution(diamond):
    for s in diamond.states():
        assert partner(partner(s, diamond), diamond) == s
        assert partner(s, diamond) != s


def test_duplicate_direction_rejected():
    bonds = [(BondState(0, 1), BondState(1, 1)), (BondState(0, 1), BondState(2, 1))]
    with pytest.raises(TopologyError, match="reciprocity"):
        GraphTopology([1, 1, 1], bonds)


@pytest.mark.parametrize(
    "valence, bonds, free",
    [
        ([2, 2], [(BondState(0, 1), BondState(1, 1)), (BondState(0, 2), BondState(1, 2))], None),  # multi-bond
        ([1], [(BondState(0, 1), BondState(0, 1))], None),  # self loop
        ([2, 1], [(BondState(0, 1), BondState(1, 1))], None),  # dangling direction
        ([3, 1, 1, 1], [(BondState(0, d), BondState(d, 1)) for d in (1, 2, 3)], [True, False, False, False]),
        ([0], [], None),
    ],
)
def test_invalid_graphs(valence, bonds, free):
    with pytest.raises(TopologyError):
        GraphTopology(valence, bonds, free)


def test_unknown_names(diamond):
    with pytest.raises(TopologyError):
        diamond.state("Z", "+")
    with pytest.raises(TopologyError):
        diamond.state("A", "x")
    with pytest.raises(TopologyError):
        diamond.mark("nowhere")
    with pytest.raises(TopologyError):
        diamond.partner(BondState(0, 9))


def test_spec_round_trip():
    g = build_line(3)
    assert from_spec(to_spec(g)) == g
    d = build_diamond_with_leads(2, 1)
    assert from_spec(to_spec(d)) == d


def test_spec_undeclared_site():
    doc = json.loads(to_spec(build_line(3)))
    doc["bonds"][0]["a"]["site"] = 7
    with pytest.raises(SpecParseError, match="undeclared"):
        from_spec(json.dumps(doc))


def test_spec_duplicate_direction():
    doc = json.loads(to_spec(build_line(4)))
    doc["bonds"][1]["a"] = dict(doc["bonds"][0]["a"])
    with pytest.raises(SpecParseError):
        from_spec(json.dumps(doc))


def test_spec_reports_line_of_bad_json():
    with pytest.raises(SpecParseError) as info:
        from_spec('{\n "sites": [\n  ,]}')
    assert info.value.line == 3


def test_spec_missing_field():
    with pytest.raises(SpecParseError) as info:
        from_spec('{"sites": [{"id": 0}], "bonds": []}')
    assert "valence" in info.value.field


def test_shipped_diamond_matches_builder():
    g, coins = load(shipped("diamond_grover.json"))
    assert g == build_diamond_with_leads(1, 1)
    assert sorted(coins) == [0, 1, 2, 3]
