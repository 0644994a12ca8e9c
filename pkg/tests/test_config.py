import json

import pytest

from sparsedom.config import (CHECK_DEFAULTS, DEFAULTS, ConfigError, load_config, merge_config,
                              validate_config)


def test_empty_config_is_valid():
    validate_config({})
    cfg = merge_config({})
    assert cfg["grid"] == DEFAULTS["grid"] and cfg["checks"] is None


@pytest.mark.parametrize("doc", [
    {"bogus": 1},
    {"grid": {"n": 1, "depth": 8, "extra": 0}},
    {"grid": {"n": 3}},
    {"checks": {"fs": {"eps": [0.5], "nope": True}}},
    {"checks": {"cf": {"p": [-1.0]}}},
    {"weights": [{"kind": "power", "a": 0.5, "what": 1}]},
    {"f": {"center": 0.5}},
    {"seed": -1},
])
def test_unknown_or_bad_keys_rejected(doc):
    with pytest.raises(ConfigError):
        validate_config(doc)


def test_merge_overlays_one_level():
    cfg = merge_config({"grid": {"depth": 8}, "quad": {"r": 1.6}})
    assert cfg["grid"] == {"n": 1, "depth": 8}
    assert cfg["quad"]["r"] == 1.6 and cfg["quad"]["m"] == 1
    # defaults are not mutated
    assert "r" not in DEFAULTS["quad"]


def test_checks_fill_per_check_defaults():
    cfg = merge_config({"checks": {"fs": {"eps": [0.5]}, "sharp": {}}})
    assert set(cfg["checks"]) == {"fs", "sharp"}
    assert cfg["checks"]["fs"]["eps"] == [0.5]
    assert cfg["checks"]["fs"]["m"] == CHECK_DEFAULTS["fs"]["m"]


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"grid": {"depth": 8}}))
    assert load_config(p) == {"grid": {"depth": 8}}
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
