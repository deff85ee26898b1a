import pytest

from spectral_perturb import verify


def test_identities_pass():
    res = verify.run_suite("identities", trials=30, seed=1)
    assert res.passed
    assert [r.name for r in res.results] == list(verify.IDENTITIES)
    assert all(r.worst < 0 for r in res.results)


def test_bounds_pass():
    assert verify.run_suite("bounds", trials=20, seed=2).passed


@pytest.mark.parametrize("name", list(verify.SUITES["all"]))
def test_every_property_can_fail(name):
    res = verify.run_suite("all", trials=5, seed=3, corrupt=(name,))
    failed = [r.name for r in res.results if not r.passed]
    assert failed == [name]
    first = next(r for r in res.results if r.name == name).first_failure
    assert first["seed"] == 3 and 0 <= first["trial"] < 5


def test_failure_is_replayable():
    res = verify.run_suite("all", trials=3, seed=9, corrupt=("weyl",))
    lines = res.lines()
    assert any("first failure: seed=9" in line for line in lines)
    assert lines[-1].startswith("FAIL suite=all seed=9")


def test_same_seed_same_output():
    a = verify.run_suite("all", trials=4, seed=5).lines()
    b = verify.run_suite("all", trials=4, seed=5).lines()
    assert a == b


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("nope")
