import pytest

from etsched.config import LOG_LEVEL_ENV, PHI_CAP_ENV, Config
from etsched.errors import BadSpec


def test_missing_file_is_created_with_defaults(tmp_path):
    path = tmp_path / "config.ini"
    cfg = Config(str(path))
    assert path.exists()
    assert cfg.default_alpha() == 3
    assert cfg.get_limits() == {
        "phi_cap": 2000000,
        "oracle_preemptive_max_jobs": 12,
        "oracle_nonpreemptive_max_jobs": 6,
        "knapsack_max_items": 20,
    }
    assert cfg.get_generator_defaults()["budget"] == "1"


def test_file_values_and_switching(tmp_path):
    custom = tmp_path / "custom.ini"
    custom.write_text("[MODEL]\ndefault_alpha = 2\n\n[LIMITS]\nknapsack_max_items = 8\n")
    cfg = Config(str(tmp_path / "config.ini"))
    cfg.use_file(str(custom))
    assert cfg.default_alpha() == 2
    assert cfg.get_limits()["knapsack_max_items"] == 8
    # sections absent from the file fall back to built-in values
    assert cfg.get_server_config() == {"host": "0.0.0.0", "port": 8000, "reload": False}


def test_environment_overrides(tmp_path, monkeypatch):
    cfg = Config(str(tmp_path / "config.ini"))
    monkeypatch.setenv(PHI_CAP_ENV, "500")
    monkeypatch.setenv(LOG_LEVEL_ENV, "DEBUG")
    assert cfg.phi_cap() == 500
    assert cfg.get_logging_config()["log_level"] == "DEBUG"


def test_malformed_phi_cap_override(tmp_path, monkeypatch):
    cfg = Config(str(tmp_path / "config.ini"))
    monkeypatch.setenv(PHI_CAP_ENV, "lots")
    with pytest.raises(BadSpec, match=PHI_CAP_ENV):
        cfg.phi_cap()
    with pytest.raises(BadSpec):
        cfg.get_limits()
