import logging
import os

import pytest

import config
from elastic_clust import create_toolkit
from elastic_clust.errors import ElasticClustError
from elastic_clust.logging_setup import ColorfulFormatter, configure_logging
from version import __version__


def own_handlers():
    return [h for h in logging.getLogger().handlers if getattr(h, "_elastic_clust", False)]


class TestCreateToolkit:
    def test_testing_environment_from_env_var(self):
        toolkit = create_toolkit()
        assert toolkit.env == "testing"
        assert toolkit["TESTING"] is True
        assert toolkit["LOG_LEVEL"] == "WARNING"
        assert toolkit["RESULTS_DIR"] == "/tmp/elastic_clust_results"
        assert toolkit.get("ALPHA") == 0.05

    def test_explicit_environment(self):
        toolkit = create_toolkit("production")
        assert toolkit.env == "production"
        assert toolkit["TESTING"] is False

    def test_development_logs_debug(self):
        assert config.DevelopmentConfig.DEBUG is True
        assert config.DevelopmentConfig.LOG_LEVEL == "DEBUG"

    def test_log_level_override(self):
        toolkit = create_toolkit(log_level="error")
        assert toolkit["LOG_LEVEL"] == "ERROR"
        assert logging.getLogger().level == logging.ERROR

    def test_version_filled_in(self):
        assert create_toolkit()["APP_VERSION"] in (__version__, config.Config.APP_VERSION)

    def test_unknown_environment(self):
        with pytest.raises(ElasticClustError):
            create_toolkit("staging")

    def test_defaults(self):
        if "ELASTIC_CLUST_BASE_SEED" not in os.environ:
            assert config.Config.BASE_SEED == 1
        assert config.Config.TUNING_WINDOWS == [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        assert config.Config.EXACT_WILCOXON_MAX_N == 25


class TestConfigureLogging:
    def test_handlers_added_once(self):
        configure_logging("INFO")
        configure_logging("DEBUG")
        assert len(own_handlers()) == 1
        assert logging.getLogger().level == logging.DEBUG

    def test_file_handler(self, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        configure_logging("INFO", str(log_file))
        logging.getLogger("elastic_clust.test").info("hello from the test")
        for handler in own_handlers():
            handler.flush()
        text = log_file.read_text()
        assert "INFO - hello from the test" in text
        # no colour escape codes in files
        assert "\x1b[" not in text
        for handler in own_handlers():
            handler.close()

    def test_console_formatter_colours_levels(self, monkeypatch):
        monkeypatch.delenv("NO_COLOR", raising=False)
        record = logging.LogRecord("x", logging.ERROR, __file__, 1, "boom", None, None)
        assert "\x1b[" in ColorfulFormatter().format(record)
