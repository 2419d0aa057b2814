"""
Class-based elastic_clust configuration.

This module defines configuration classes for the toolkit. These classes
provide settings for different environments (production, development and
testing) and include logging, output locations, seeding and the statistical
settings used by the experiment harness.

Classes:
    Config:
        Base configuration class with default settings.
    ProductionConfig(Config):
        Configuration for batch experiment runs.
    DevelopmentConfig(Config):
        Configuration for local development (debug logging).
    TestConfig(Config):
        Configuration for the test suite.
"""

import os

from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


class Config:
    """
    Base configuration class for elastic_clust.

    This class contains default settings that are shared across all environments.
    Environment-specific configurations inherit from this class and override
    specific attributes.
    """

    # Application-wide settings
    DEBUG = False
    TESTING = False
    APP_VERSION = os.environ.get("ELASTIC_CLUST_VERSION") or None

    # Logging
    LOG_LEVEL = os.getenv("ELASTIC_CLUST_LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("ELASTIC_CLUST_LOG_FILE") or None

    # Results and analysis settings
    RESULTS_DIR = os.getenv(
        "ELASTIC_CLUST_RESULTS_DIR",
        os.path.join(os.path.dirname(os.path.abspath(__file__)), "results"),
    )

    # resample r runs with BASE_SEED + r
    BASE_SEED = int(os.getenv("ELASTIC_CLUST_BASE_SEED", "1"))
    THREADS = int(os.getenv("ELASTIC_CLUST_THREADS", "1"))

    # Runtimes are logged always, written to results files only when enabled
    RECORD_TIMING = _env_bool("ELASTIC_CLUST_RECORD_TIMING", False)

    # Rank comparison settings
    ALPHA = 0.05
    EXACT_WILCOXON_MAX_N = 25

    # Davies-Bouldin window tuning: ten windows on even intervals in [0, 1)
    TUNING_WINDOWS = [round(0.1 * i, 1) for i in range(10)]


class ProductionConfig(Config):
    """
    Configuration for batch experiment runs.

    This class inherits from the base `Config` class and keeps its defaults.
    """

    LOG_LEVEL = os.getenv("ELASTIC_CLUST_LOG_LEVEL", "INFO")


class DevelopmentConfig(Config):
    """
    Configuration for the development environment.

    This class inherits from the base `Config` class and overrides settings
    specific to the development environment.
    """

    DEBUG = True
    LOG_LEVEL = "DEBUG"
    LOG_FILE = os.getenv(
        "ELASTIC_CLUST_LOG_FILE",
        os.path.join(os.path.dirname(os.path.abspath(__file__)), "logs", "elastic_clust_dev.log"),
    )


class TestConfig(Config):
    """
    Configuration for the testing environment.

    This class inherits from the base `Config` class and overrides settings
    specific to the testing environment.
    """

    TESTING = True
    LOG_LEVEL = "WARNING"
    LOG_FILE = None
    RESULTS_DIR = "/tmp/elastic_clust_results"
    RECORD_TIMING = False


CONFIGS = {
    "production": ProductionConfig,
    "development": DevelopmentConfig,
    "testing": TestConfig,
}
