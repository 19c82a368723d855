import pytest

from config import ALL_SETTINGS, default_threads, get_all_settings, get_cap, get_settings, is_known_setting, reload_settings
from errors import ConfigError


def test_defaults_come_from_tables():
    assert get_cap("max_len") == 12
    assert get_cap("max_len_refined") == 10
    assert get_cap("uni_terms") == 200
    assert get_cap("bi_terms") == 60
    assert get_cap("ci_max_len") == 8
    assert get_cap("max_arrangements") == 10**6
    assert get_settings().log_level == "WARNING"


def test_every_entry_is_described():
    for name, entry in get_all_settings().items():
        assert set(entry) == {"value", "description"}, name
        assert is_known_setting(name)
    assert not is_known_setting("max_socks")


def test_environment_override(monkeypatch):
    monkeypatch.setenv("SOCKSORT_SPLIT_PREFIX", "3")
    assert reload_settings().split_prefix == 3
    assert get_cap("split_prefix") == 3


def test_invalid_override_raises(monkeypatch):
    monkeypatch.setenv("SOCKSORT_PRECISION", "4")
    with pytest.raises(ConfigError):
        reload_settings()


def test_unknown_setting():
    with pytest.raises(ConfigError, match="Unknown setting"):
        get_cap("nope")


def test_threads_positive():
    assert default_threads() >= 1
    assert len(ALL_SETTINGS) == 10
