import numpy as np
import pytest

from normkit import illustrations
from normkit.illustrations import ALIASES, ILLUSTRATIONS, Check, rank_two, run


@pytest.mark.parametrize("name", sorted(ILLUSTRATIONS))
def test_every_check_passes(name):
    checks = run(name)[name]
    assert checks
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)


def test_aliases_resolve():
    for alias, name in ALIASES.items():
        assert list(run(alias)) == [name]
    assert set(run("all")) == set(ILLUSTRATIONS)
    with pytest.raises(KeyError):
        run("7.1")


def test_literal_weight_check_is_reported_not_raised():
    checks = rank_two(literal_second_weight=0.5)
    literal = [c for c in checks if "0.5" in c.name or "literal" in c.name]
    assert literal and not any(c.passed for c in literal)


def test_check_line_format():
    assert Check("x", np.bool_(True), "d").line() == "[PASS] x: d"
    assert Check("y", False).line() == "[FAIL] y"


def test_parabola_constants_are_consistent():
    z = illustrations.PARABOLA_Z
    gap = np.diag([4, 0, 1])
    assert np.allclose(z @ z.conj().T, gap)
