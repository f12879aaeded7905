import pytest

from app.config import config
from app.utils.error_handlers import ConfigurationError, setup_logging, validate_environment


def test_defaults():
    assert config.derivative_bound == 32
    assert config.epsilon_atoms == 8
    assert config.output_format == "text"
    assert config.default_nu == "w"
    assert not config.log_to_file


def test_environment_and_overrides(monkeypatch):
    monkeypatch.setenv("DERIVATIVE_BOUND", "12")
    assert config.derivative_bound == 12
    config.override("DERIVATIVE_BOUND", 5)
    config.override("EPSILON_ATOMS", None)
    assert config.derivative_bound == 5
    assert config.epsilon_atoms == 8
    config.reset_overrides()
    assert config.derivative_bound == 12


@pytest.mark.parametrize(
    "name,value",
    [("DERIVATIVE_BOUND", "0"), ("SUITE_WORKERS", "-1"), ("OUTPUT_FORMAT", "yaml"), ("LOG_LEVEL", "LOUD")],
)
def test_validation(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigurationError) as exc_info:
        validate_environment()
    assert exc_info.value.error_code == "CONFIGURATION_ERROR"


def test_non_integer(monkeypatch):
    monkeypatch.setenv("EPSILON_ATOMS", "many")
    with pytest.raises(ConfigurationError, match="must be an integer"):
        config.epsilon_atoms


def test_file_logging(monkeypatch, tmp_path):
    monkeypatch.setenv("LOG_TO_FILE", "true")
    monkeypatch.setenv("LOG_DIR", str(tmp_path / "logs"))
    setup_logging("debug")
    assert (tmp_path / "logs").is_dir()
    monkeypatch.delenv("LOG_TO_FILE")
    setup_logging()
