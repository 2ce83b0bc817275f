"""Smoke test for the pygoid extension module.

Build and install it first, e.g. ``maturin build --release`` in crates/python
and ``pip install`` the resulting wheel.
"""

import json
from pathlib import Path

import pygoid

ROOT = Path(__file__).resolve().parent.parent


def main():
    names = pygoid.catalog_names()
    assert "add_nstar" in names and "rect_pair" in names

    add = pygoid.build("add_nstar")
    assert add.act("3", "4") == "7"
    assert add.q_contains("5", "-4")
    assert not add.q_contains("5", "-5")
    assert add.transfer("5", "-4") == "1"
    assert add.transfer("5", "-5") is None
    assert add.is_etale() == "true"

    mult = pygoid.build("mult_nstar")
    assert mult.transfer("6", "1/2") == "3"
    assert mult.transfer("6", "1/4") is None

    rot = pygoid.parse_spec((ROOT / "specs" / "rot5.spec").read_text())
    assert rot.is_etale() == "true"
    assert rot.is_free() == "true"
    assert sorted(rot.orbit("2")) == ["0", "1", "2", "3", "4"]
    assert rot.arrow_count(2) == 25
    assert pygoid.parse_spec(rot.export_spec()).export_spec() == rot.export_spec()

    try:
        pygoid.parse_spec("[group]\nfamily = int\n")
    except pygoid.GoidError as e:
        assert "[semigroup]" in str(e)
    else:
        raise AssertionError("expected a parse error")

    rep = pygoid.run_battery("rot_finite(5)", 2)
    assert rep.status == "pass" and rep.exit_code == 0, rep.to_text()
    assert all(status == "pass" for _, status, _ in rep.records)
    assert json.loads(rep.to_json())["inputs_digest"] == rep.inputs_digest

    out, code = pygoid.cli(["verify-oe", "--name", "add_n", "--name-b", "mult_n"])
    assert code == 1 and "status: fail" in out

    print("pygoid smoke test passed:", rep)


if __name__ == "__main__":
    main()
