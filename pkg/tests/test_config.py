import pytest

from padic_cherednik.config import ConfigError, load_config, parse_config
from padic_cherednik.scalars import Scalar
from padic_cherednik.tdo import NotClosed


def test_defaults():
    cfg = parse_config("")
    assert cfg["prime"] == 5 and cfg["group.family"] == "cyclic"
    assert cfg.field_spec().p == 5
    assert len(cfg.group()) == 2


def test_per_class_parameters():
    cfg = parse_config("group.family = cyclic\ngroup.m = 4\ncyclotomic_order = 4\nparams.c.1 = 1/3\nparams.c.3 = zeta")
    alg = cfg.algebra()
    assert alg.classes == [[0], [1], [2]]
    assert [alg.params.c(i) for i in range(3)] == [Scalar(1) / 3, Scalar(0), Scalar.zeta(4)]


def test_comments_and_whitespace():
    cfg = parse_config("# header\n\n  group.rank = 3   # trailing\ngroup.family=symmetric\n")
    assert cfg["group.rank"] == 3
    assert cfg.summary() == {"group.family": "symmetric", "group.rank": 3}


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("group.family = foo", "bad.cfg:1: key group.family: unknown family 'foo'"),
        ("prime = 5\nprime = 7", "bad.cfg:2: duplicate key 'prime'"),
        ("colour = red", "bad.cfg:1: unknown key 'colour'"),
        ("prime = five", "bad.cfg:1: key prime: expected an integer"),
        ("seed = -4", "must be non-negative"),
        ("just words", "expected 'key = value'"),
        ("group.family = symmetric\ngroup.rank = 3\nparams.c.2 = 1", "bad.cfg:3: key params.c.2"),
        ("params.c = 1/0", "key params.c: cannot parse scalar"),
        ("params.t = 0", "t must be nonzero"),
        ("prime = 6", "key prime"),
        ("group.family = symmetric\ngroup.rank = 2\nparams.omega.1.1 = x_1", "key params.omega.1.1"),
    ],
)
def test_errors_name_line_and_key(text, fragment):
    cfg = None
    with pytest.raises(ConfigError) as info:
        cfg = parse_config(text, "bad.cfg")
        cfg.field_spec()
        cfg.algebra()
    assert fragment in str(info.value)


def test_non_closed_omega_is_not_wrapped():
    cfg = parse_config("group.family = symmetric\ngroup.rank = 3\nparams.omega.1.2 = x_3")
    with pytest.raises(NotClosed):
        cfg.algebra()


def test_non_invariant_omega_reported_on_key():
    cfg = parse_config("group.family = symmetric\ngroup.rank = 2\nparams.omega.1.2 = 1")
    with pytest.raises(ConfigError, match="params.omega"):
        cfg.algebra()


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("group.family = hyperoctahedral\ngroup.rank = 2\nparams.c.2 = 1/4\n")
    cfg = load_config(path)
    assert len(cfg.group()) == 8
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")
