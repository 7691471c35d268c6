"""Smoke test for the Python bindings. Run after
`pip install --no-build-isolation ./crates/python`."""

import json

import cantor_forge_py as cf


def test_bindings():
    assert cf.unrank(0).is_empty()
    q = cf.q_index()
    assert cf.unrank(q) == cf.Clopen([("", 0)])
    for n in range(2000):
        assert cf.unrank(n).index() == n

    phi = cf.Clopen([("10", 0), ("11", 0)])
    assert phi == cf.Clopen([("1", 0)])
    assert phi.contains([0], 0) and not phi.contains([], 0)
    assert phi.sym_diff(phi).is_empty()

    block = cf.Clopen([("01", 1), ("10", 0)])
    assert block.block() == 1 and block.in_block(1)
    assert cf.Clopen([("0", 0)]).block() == 0
    assert cf.Clopen([("0", 1)]).block() is None

    evens = json.dumps({"kind": "periodic", "prefix": "", "period": "10"})
    assert cf.Clopen([("01", 0)]).in_d(evens)
    assert not cf.Clopen([("1", 0)]).in_d(evens)

    assert cf.unpair(cf.pair(3, 5)) == (3, 5)
    assert cf.ideal_member("fin", json.dumps({"kind": "finite", "ones": [1, 2]})) is True
    assert cf.ideal_member("fin", evens) is False

    assert "gamma" in cf.lemma_ids()
    run = cf.run_lemma("gamma", seed=42)
    assert cf.outcome(run) == "verified"
    assert cf.replay(run)
    assert run == cf.run_lemma("gamma", seed=42)
    assert cf.check_finite(3) == "verified"
    print("python smoke test: ok")


if __name__ == "__main__":
    test_bindings()
