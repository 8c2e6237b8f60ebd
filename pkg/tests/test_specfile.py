import numpy as np
import pytest

from sqwalk.errors import SpecParseError
from sqwalk.specfile import dumps, load, loads, shipped, shipped_names
from sqwalk.verify import six_site_line, two_site_line


def test_shipped_files():
    assert shipped_names() == ["diamond_grover.json", "line_six_site.json", "line_two_site.json"]


@pytest.mark.parametrize("name", ["diamond_grover.json", "line_six_site.json", "line_two_site.json"])
def test_shipped_round_trip(name):
    g, coins = load(shipped(name))
    assert {"entry", "exit", "refl"} <= set(g.marks)
    g2, coins2 = loads(dumps(g, coins))
    assert g2 == g
    for j in coins:
        assert np.array_equal(coins[j].entries, coins2[j].entries)


def test_line_files_match_builders():
    assert load(shipped("line_two_site.json"))[0] == two_site_line()
    assert load(shipped("line_six_site.json"))[0] == six_site_line()


def test_grover_file_is_exact():
    _, coins = load(shipped("diamond_grover.json"))
    assert all(c.exact is not None for c in coins.values())


def test_top_level_must_be_object():
    with pytest.raises(SpecParseError):
        loads("[1, 2]")
